from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Optional

from common.app_config import config
from common.app_logger import logger


class SweepRunner:
    """
    Fans independent runs out over worker processes. Results come back in
    submission order, so a sweep's output never depends on the worker count.
    """

    def __init__(self, workers: Optional[int] = None):
        self.workers = workers or config.SWEEP_WORKERS

    def run(self, job: Callable, arguments: list) -> list:
        """Call `job(*args)` for each tuple in `arguments`; `job` must be a module-level function."""
        if self.workers <= 1 or len(arguments) <= 1:
            logger.debug(f"Running {len(arguments)} sweep jobs inline")
            return [job(*args) for args in arguments]

        logger.info(f"Running {len(arguments)} sweep jobs on {self.workers} workers")
        with ProcessPoolExecutor(max_workers=self.workers) as pool:
            futures = [pool.submit(job, *args) for args in arguments]
            return [future.result() for future in futures]
