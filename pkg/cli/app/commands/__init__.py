from app.commands.run import register as register_run
from app.commands.preset import register as register_preset
from app.commands.validate import register as register_validate
from app.commands.reference import register as register_reference
from app.commands.version import register as register_version


def initialize_commands(app):
    register_run(app)
    register_preset(app)
    register_validate(app)
    register_reference(app)
    register_version(app)
