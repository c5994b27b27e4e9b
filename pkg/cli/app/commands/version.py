from common.utils.version import main as version_main

from app.helpers.output import EXIT_OK


def version_command(args) -> int:
    version_main()
    return EXIT_OK


def register(app):
    parser = app.command('version', "print the simulator version")
    parser.set_defaults(handler=version_command)
