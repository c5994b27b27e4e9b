import os

from common.services.experiment import ExperimentService

from app.helpers.output import EXIT_OK, print_status


def preset_command(args) -> int:
    manifest = ExperimentService().run_preset(args.name, args.out, seed=args.seed, horizon=args.horizon)
    for series in sorted(manifest['series']):
        print_status(f"wrote {os.path.join(args.out, series)}")
    return EXIT_OK


def register(app):
    parser = app.command('preset', "run a reproducible experiment preset")
    parser.add_argument('name', choices=ExperimentService.preset_names())
    parser.add_argument('--out', required=True, help="output directory")
    parser.add_argument('--seed', type=int, default=None, help="seed shared by every arm")
    parser.add_argument('--horizon', type=int, default=None, help="epochs per arm")
    parser.set_defaults(handler=preset_command)
