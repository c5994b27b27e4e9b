"""
Unit tests for common/tasks/sweep.py
"""
from unittest.mock import MagicMock, patch

from common.tasks.sweep import SweepRunner


def _square(value, offset=0):
    return value * value + offset


class TestSweepRunner:
    """Tests for SweepRunner."""

    @patch('common.tasks.sweep.config')
    def test_default_workers_from_config(self, mock_config):
        """Test that the worker count falls back to SWEEP_WORKERS."""
        mock_config.SWEEP_WORKERS = 3

        assert SweepRunner().workers == 3

    @patch('common.tasks.sweep.ProcessPoolExecutor')
    def test_single_worker_runs_inline(self, mock_executor):
        """Test that one worker never starts a process pool."""
        results = SweepRunner(workers=1).run(_square, [(2,), (3, 1)])

        assert results == [4, 10]
        mock_executor.assert_not_called()

    @patch('common.tasks.sweep.ProcessPoolExecutor')
    def test_single_job_runs_inline(self, mock_executor):
        """Test that a lone job is not worth a pool."""
        assert SweepRunner(workers=4).run(_square, [(5,)]) == [25]
        mock_executor.assert_not_called()

    @patch('common.tasks.sweep.ProcessPoolExecutor')
    def test_pool_results_keep_submission_order(self, mock_executor):
        """Test that results come back in submission order whatever the completion order."""
        pool = mock_executor.return_value.__enter__.return_value
        futures = [MagicMock(), MagicMock(), MagicMock()]
        for future, value in zip(futures, (9, 4, 1)):
            future.result.return_value = value
        pool.submit.side_effect = futures

        results = SweepRunner(workers=2).run(_square, [(3,), (2,), (1,)])

        assert results == [9, 4, 1]
        mock_executor.assert_called_once_with(max_workers=2)
        assert [c.args for c in pool.submit.call_args_list] == [(_square, 3), (_square, 2), (_square, 1)]

    def test_pool_matches_inline(self):
        """Test that a real pool and inline execution agree."""
        arguments = [(n,) for n in range(6)]

        assert SweepRunner(workers=2).run(_square, arguments) == SweepRunner(workers=1).run(_square, arguments)
