from common.services.scenario import load_config

from app.helpers.output import EXIT_OK, print_status


def validate_command(args) -> int:
    scenario = load_config(args.config, seed=args.seed)
    print_status(
        f"ok: seed={scenario.seed} mode={scenario.mode.value} ids={scenario.ids_mode.value} "
        f"nodes={scenario.field.node_count} attackers={len(scenario.attackers)}"
    )
    return EXIT_OK


def register(app):
    parser = app.command('validate', "check a scenario file without running it")
    parser.add_argument('config')
    parser.add_argument('--seed', type=int, default=None)
    parser.set_defaults(handler=validate_command)
