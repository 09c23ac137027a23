"""Compare the injectivity gap across archimedean and p-adic parameters.

The half bound holds in every ultrametric case, but in the archimedean case
it needs |a| >= 3.  This prints the minimal ratio per parameter set.
"""

import argparse
from dataclasses import dataclass

from lampsep.regmaps import AffineEmbeddingParams, gap_survey


@dataclass(frozen=True)
class GapCase:
    valuation: str
    a: str
    b: str = "1"


CASES = [GapCase("arch", "2"), GapCase("arch", "5/2"), GapCase("arch", "3"),
         GapCase("3adic", "1/3"), GapCase("2adic", "1/2"), GapCase("2adic", "3/2")]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lo", type=int, default=-3)
    ap.add_argument("--hi", type=int, default=3)
    args = ap.parse_args()
    print(f"{'params':<22} {'pairs':>7} {'min ratio':>12} {'half fails':>10} {'equal norms':>11}")
    for c in CASES:
        s = gap_survey(AffineEmbeddingParams.parse(c.valuation, c.a, c.b), args.lo, args.hi)
        ratio = "-" if s.min_ratio is None else str(s.min_ratio)
        print(f"{c.valuation + ' a=' + c.a:<22} {s.pairs:>7} {ratio:>12} "
              f"{s.half_bound_failures:>10} {s.norm_equal_count:>11}")


if __name__ == "__main__":
    main()
