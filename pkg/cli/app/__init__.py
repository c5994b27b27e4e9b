import argparse
import logging

from common.app_logger import logger, set_console_level
from common.helpers.exceptions import ConfigError, ElectionError, PhaseError, SimulationError
from common.utils.version import get_project_name, get_service_version

from app.helpers.output import EXIT_FAILURE, EXIT_IO, EXIT_OK, EXIT_USAGE, print_failure


class CliApp:
    """argparse front end with per-exception handlers mapped to exit statuses."""

    def __init__(self):
        self.parser = argparse.ArgumentParser(
            prog='insomnia-sim',
            description=f"{get_project_name()}: hierarchical insomnia detection simulator",
        )
        self.parser.add_argument('--version', action='version',
                                 version=f"{get_project_name()} {get_service_version()}")
        self.parser.add_argument('-v', '--verbose', action='store_true', help="log at DEBUG level")
        self.subparsers = self.parser.add_subparsers(dest='command', required=True)
        self._error_handlers = {}

    def command(self, name: str, help_text: str):
        return self.subparsers.add_parser(name, help=help_text)

    def errorhandler(self, exc_type):
        def register(handler):
            self._error_handlers[exc_type] = handler
            return handler
        return register

    def _handle(self, exception) -> int:
        for exc_type in type(exception).__mro__:
            handler = self._error_handlers.get(exc_type)
            if handler is not None:
                return handler(exception)
        raise exception

    def run(self, argv=None) -> int:
        try:
            args = self.parser.parse_args(argv)
        except SystemExit as exit_:
            return EXIT_OK if exit_.code in (0, None) else EXIT_USAGE

        set_console_level(logging.DEBUG if args.verbose else logging.WARNING)
        try:
            return args.handler(args)
        except Exception as exception:
            return self._handle(exception)


def create_app() -> CliApp:
    app = CliApp()

    from app.commands import initialize_commands
    initialize_commands(app)

    @app.errorhandler(ConfigError)
    def handle_config_error(exception):
        print_failure(f"invalid scenario:\n{exception}")
        return EXIT_FAILURE

    @app.errorhandler(ElectionError)
    @app.errorhandler(PhaseError)
    @app.errorhandler(SimulationError)
    def handle_simulation_error(exception):
        print_failure(str(exception))
        logger.error(f"Simulation failed: {exception}")
        return EXIT_FAILURE

    @app.errorhandler(OSError)
    def handle_io_error(exception):
        print_failure(f"cannot write outputs: {exception}")
        return EXIT_IO

    return app
