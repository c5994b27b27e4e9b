import sys

from common.app_logger import set_rollbar_exception_catch

from app import create_app


def main(argv=None) -> int:
    set_rollbar_exception_catch()
    app = create_app()
    return app.run(argv)


if __name__ == '__main__':
    sys.exit(main())
