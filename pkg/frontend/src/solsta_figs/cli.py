"""`render_figs <run-dir> <out-dir>`: render every panel for a scenario
output directory. Exit codes: 0 success, 2 bad/missing input."""

from __future__ import annotations

import argparse
import sys

from .render import render, specs_for_run
from .spec import RenderError


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render_figs",
        description="Render figures from scenario CSV artifacts.")
    parser.add_argument("run_dir", help="scenario output directory")
    parser.add_argument("out_dir", help="directory for the rendered images")
    args = parser.parse_args(argv)

    try:
        specs = specs_for_run(args.run_dir, args.out_dir)
        for spec in specs:
            path = render(spec)
            print(path)
    except RenderError as exc:
        print(f"render error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
