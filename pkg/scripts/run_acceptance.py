"""Write every acceptance report and its manifest into one directory."""

import argparse
from pathlib import Path

from lampsep import experiments


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("results/acceptance"))
    ap.add_argument("--only", nargs="*", choices=list(experiments.CRITERIA))
    args = ap.parse_args()
    for name in args.only or experiments.CRITERIA:
        rpath, _, report, secs = experiments.write(name, args.out)
        print(f"{'PASS' if report['pass'] else 'FAIL'}  {name:<16} {secs:7.2f}s  {rpath}")


if __name__ == "__main__":
    main()
