"""Run the whole analysis on a synthetic planted market (or on real prices).

Writes every CSV the figures are drawn from into one directory per stage:
``synth/``, ``pipeline/``, ``overlap/`` and ``rolling/``.

    python scripts/reproduce_figures.py --out figures
    python scripts/reproduce_figures.py --input prices.csv --sector-map sectors.csv --out figures
"""

import argparse
import json
import sys
from pathlib import Path

from rmtcorr.cli import run


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="figures")
    ap.add_argument("--input", help="closing prices; omit to generate the planted market")
    ap.add_argument("--sector-map")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--ns", default="auto")
    ap.add_argument("--overlap-window", type=int, default=1250)
    args = ap.parse_args()

    out = Path(args.out)
    data = ["--seed", str(args.seed)]
    if args.input:
        data += ["--input", args.input]
        if args.sector_map:
            data += ["--sector-map", args.sector_map]
    else:
        if run(["synth", "--out", str(out / "synth"), "--seed", str(args.seed)]):
            return 1
        data += ["--input", str(out / "synth" / "prices.csv")]

    steps = {
        "pipeline": ["pipeline", "--ns", args.ns],
        "overlap": ["temporal", "overlap", "--T", str(args.overlap_window), "--tau", "125", "--k", "10"],
        "rolling": ["temporal", "rolling", "--T", "125", "--dt", "21", "--top", "50"],
    }
    for name, argv in steps.items():
        rc = run([*argv, *data, "--out", str(out / name)])
        if rc:
            print(f"{name} failed with exit code {rc}", file=sys.stderr)
            return rc
        results = json.loads((out / name / "manifest.json").read_text())["results"]
        print(f"[{name}]")
        for key, value in sorted(results.items()):
            print(f"  {key}: {value}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
