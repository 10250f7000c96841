"""Write vertex CSVs and manifests for every reproducible figure into one directory."""

import argparse
from pathlib import Path

from srr.cli import reproduce

FIGURES = ("fig1", "fig3", "fig10-slice", "fig12")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="out/figures")
    args = ap.parse_args()
    for fig in FIGURES:
        files = reproduce(fig, Path(args.outdir))
        print(f"{fig}: {', '.join(files)}")


if __name__ == "__main__":
    main()
