"""Tabulate separation-profile witnesses for a lamplighter group."""

import argparse
from dataclasses import dataclass, field
from pathlib import Path

from lampsep.separation import profile_csv, sep_profile_table


@dataclass
class ProfileConfig:
    m: int = 2
    sizes: list[int] = field(default_factory=lambda: [1, 2, 4, 8, 16, 24, 50, 100, 200, 400, 800])
    samples: int = 5
    seed: int = 0
    exact_cap: int = 16


def main() -> None:
    cfg = ProfileConfig()
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=int, default=cfg.m)
    ap.add_argument("--samples", type=int, default=cfg.samples)
    ap.add_argument("--seed", type=int, default=cfg.seed)
    ap.add_argument("--out", type=Path, default=Path("results/profile.csv"))
    args = ap.parse_args()
    cfg = ProfileConfig(m=args.m, samples=args.samples, seed=args.seed)

    rows = sep_profile_table("lamplighter", {"m": cfg.m}, cfg.sizes, cfg.samples, cfg.seed,
                             exact_cap=cfg.exact_cap)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(profile_csv(rows))
    print(f"{'v':>5} {'lower':>6} {'upper':>6}  source")
    for r in rows:
        print(f"{r.v:>5} {r.lower_witness:>6} {r.upper_witness:>6}  {r.kind}")


if __name__ == "__main__":
    main()
