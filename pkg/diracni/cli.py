"""Console entry point; routes `dirac-ni <command>` to the management commands."""
import os
import sys

COMMANDS = ("verify", "spectrum", "basis", "bridge")


def main(argv=None):
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "diracni.settings")
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Are you sure it's installed and "
            "available on your PYTHONPATH environment variable? Did you "
            "forget to activate a virtual environment?"
        ) from exc
    argv = list(sys.argv if argv is None else argv)
    if len(argv) < 2 or argv[1] not in COMMANDS:
        sys.stderr.write(f"usage: dirac-ni <{'|'.join(COMMANDS)}> [options]\n")
        sys.exit(2)
    execute_from_command_line(["dirac-ni", *argv[1:]])


if __name__ == "__main__":
    main()
