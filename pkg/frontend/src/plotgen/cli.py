"""plotgen command line: render a preset figure from a directory of CSVs."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .data import PlotDataError
from .figures import PRESETS, render


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="plotgen",
        description="Render figure presets from recspec CSV artifacts.",
    )
    parser.add_argument("--preset", choices=sorted(PRESETS), required=True)
    parser.add_argument("--data-dir", type=Path, required=True, help="directory holding the preset's CSV files")
    parser.add_argument("--out", type=Path, required=True, help="output image (.png or .svg)")
    args = parser.parse_args(argv)

    try:
        out = render(PRESETS[args.preset], args.data_dir, args.out)
    except PlotDataError as exc:
        sys.stderr.write(f"plotgen: {exc}\n")
        return 1
    sys.stdout.write(f"{out}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
