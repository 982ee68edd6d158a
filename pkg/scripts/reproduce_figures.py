"""Run every ``repro`` target into one output directory and list the exit codes."""

from __future__ import annotations

import argparse
from pathlib import Path

from resonator_modes import cli


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--plot", action="store_true")
    ap.add_argument("targets", nargs="*", default=sorted(cli.REPRO))
    args = ap.parse_args()
    for name in args.targets:
        argv = ["repro", name, "--out", str(args.out / name)] + (["--plot"] if args.plot else [])
        print(f"{name}: exit {cli.main(argv)}")


if __name__ == "__main__":
    main()
