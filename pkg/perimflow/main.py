"""
User entry point.

Runs the verify command line with a friendly message for unexpected
failures, e.g.

python -m perimflow.main sweep --shape ellipsoid:a=2,b=1,c=1 --out phi.csv

Installed packages get the same commands as `verify`.
"""

import sys
import textwrap

from perimflow.cli.commands import cli


def start(args=None):
    "Run the CLI; unexpected exceptions print a summary and exit 1."
    try:
        cli.main(args=args, prog_name="verify")
    except Exception as e:  # pylint: disable=broad-exception-caught
        dashes = "-" * 50
        failmsg = f"""
        {dashes}
        Error during verification:
        Type: {type(e)}
        {e}

        Please check your settings and try again.
        Rerun with --verbose for the debug log.
        Additionally, help is available with --help.
        {dashes}
        """

        print(textwrap.dedent(failmsg), file=sys.stderr)
        sys.exit(1)


if __name__ == "__main__":
    start()
