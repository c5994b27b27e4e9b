from common.services.scenario import write_reference

from app.helpers.output import EXIT_OK, print_status


def reference_command(args) -> int:
    print_status(f"wrote {write_reference(args.path)}")
    return EXIT_OK


def register(app):
    parser = app.command('reference', "write the scenario defaults reference")
    parser.add_argument('path', help="destination JSON file")
    parser.set_defaults(handler=reference_command)
