from common.services.experiment import run_scenario
from common.services.scenario import load_config

from app.helpers.output import EXIT_OK, print_status, run_status


def run_command(args) -> int:
    scenario = load_config(args.config, seed=args.seed)
    result = run_scenario(scenario, args.out)
    print_status(run_status(result, args.out))
    return EXIT_OK


def register(app):
    parser = app.command('run', "simulate one scenario file")
    parser.add_argument('config', help="scenario file (.toml or .json)")
    parser.add_argument('--out', required=True, help="output directory")
    parser.add_argument('--seed', type=int, default=None, help="override the scenario seed")
    parser.set_defaults(handler=run_command)
