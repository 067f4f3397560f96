"""CLI: render figures from a JSON spec file.

Usage: plots --spec spec.json

The spec file holds one figure object, a list of them, or an object with
a "figures" list; each renders to <output>.png and <output>.svg.
"""

from __future__ import annotations

import argparse
import sys

from .figures import FigureError, load_specs, render_figures


def run_cli(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plots",
        description="Render figures from annihilate sweep CSVs",
    )
    parser.add_argument("--spec", required=True, help="figure spec JSON")
    args = parser.parse_args(argv)
    try:
        specs = load_specs(args.spec)
        for spec in specs:
            for path in render_figures(spec):
                print(f"wrote {path}")
    except (FigureError, FileNotFoundError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
