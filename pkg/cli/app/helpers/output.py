import sys

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_IO = 3


def print_status(message: str):
    print(message, file=sys.stdout)


def print_failure(message: str):
    print(f"error: {message}", file=sys.stderr)


def run_status(result, out_dir: str) -> str:
    summary = result.summary
    return (
        f"wrote {out_dir}: {len(result.metrics)} frames, alive={summary['alive']}, "
        f"quarantined={len(summary['quarantined'])}, accuracy={summary['accuracy']:.3f}"
    )
