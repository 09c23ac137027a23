"""Command-line experiment runner.

Every invocation writes its report(s) plus a ``<command>.manifest.json`` into
``--out``.  Report bodies are deterministic; the wall-clock timestamp lives only
in the manifest, and ``lampsep replay MANIFEST`` regenerates the reports.

Exit codes: 0 success, 2 precondition/usage, 3 cap exceeded,
4 certificate validation failure.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import logging
import sys
from pathlib import Path

from lampsep import __version__
from lampsep.cayley import (
    CapExceeded,
    Graph,
    ball,
    induced_subgraph,
    sample_connected_subgraph,
)
from lampsep.groups import GROUP_KINDS
from lampsep.regmaps import build_map, verify_map
from lampsep.separation import (
    InvalidSeparator,
    TnDescriptor,
    congestion_lower_bound,
    congestion_stats,
    cut_exact,
    cut_heuristic_upper,
    lamplighter_separator,
    minimum_cutsets,
    path_masks,
    profile_csv,
    sep_profile_table,
    tn_graph,
    verify_crossing,
)

log = logging.getLogger("lampsep")

MANIFEST_SCHEMA = "lampsep.manifest/1"
EXIT_USAGE, EXIT_CAP, EXIT_INVALID = 2, 3, 4


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _group_params(args) -> dict:
    if args.group == "lamplighter":
        return {"m": args.m}
    if args.group == "mpq":
        return {"p": args.p, "q": args.q}
    if args.group == "affine":
        return {"valuation": args.val, "a": args.a, "b": args.b}
    if args.group == "symshift":
        return {"sigma": _parse_cycles(args.sigma)}
    return {}


def _parse_cycles(text: str) -> list[list[int]]:
    """``"0 1;3 4 5"`` -> [[0, 1], [3, 4, 5]]."""
    return [[int(t) for t in cyc.split()] for cyc in text.split(";") if cyc.strip()]


def _write_graph(g: Graph, fmt: str, out: Path, stem: str) -> list[Path]:
    if fmt == "dot":
        path = out / f"{stem}.dot"
        path.write_text(g.to_dot())
    elif fmt == "edgelist":
        path = out / f"{stem}.edgelist"
        path.write_text(g.to_edgelist())
    else:
        path = out / f"{stem}.json"
        path.write_text(dump_json(g.to_json()))
    return [path]


def _read_graph(path: str) -> Graph:
    text = Path(path).read_text()
    if path.endswith(".json"):
        return Graph.from_json(text)
    return Graph.from_edgelist(text)


# --------------------------------------------------------------------------
# Subcommands; each returns the list of files it wrote
# --------------------------------------------------------------------------


def cmd_ball(args, out: Path) -> list[Path]:
    g = ball(args.group, args.radius, max_vertices=args.max_vertices, **_group_params(args))
    files = _write_graph(g, args.format, out, "ball")
    if args.sample:
        sub = sample_connected_subgraph(g, args.sample, args.seed)
        files += _write_graph(induced_subgraph(g, sub), "json", out, "sample")
    return files


def cmd_tn(args, out: Path) -> list[Path]:
    g = tn_graph(TnDescriptor(args.n, args.m), max_vertices=args.max_vertices)
    return _write_graph(g, args.format, out, "tn")


def _input_graph(args) -> Graph:
    if args.input:
        return _read_graph(args.input)
    if args.tn is not None:
        return tn_graph(TnDescriptor(args.tn, args.m), max_vertices=args.max_vertices)
    raise ValueError("give --input FILE or --tn N")


def cmd_cut(args, out: Path) -> list[Path]:
    g = _input_graph(args)
    if args.heuristic:
        cert = cut_heuristic_upper(g, effort=args.effort, seed=args.seed)
    else:
        cert = cut_exact(g, cap=args.exact_cap)
    path = out / "cut.json"
    path.write_text(dump_json(cert.to_json(g)))
    return [path]


def cmd_separator(args, out: Path) -> list[Path]:
    if args.input or args.tn is not None:
        g = _input_graph(args)
        subset = None
    else:
        g = ball("lamplighter", args.radius, max_vertices=args.max_vertices, m=args.m)
        subset = sample_connected_subgraph(g, args.size, args.seed)
    cert = lamplighter_separator(g, subset)
    path = out / "separator.json"
    path.write_text(dump_json(cert.to_json(g)))
    return [path]


def cmd_paths(args, out: Path) -> list[Path]:
    desc = TnDescriptor(args.n, args.m)
    stats = congestion_stats(desc, jobs=args.jobs, max_pairs=args.max_pairs)
    lower = congestion_lower_bound(desc, stats)
    path = out / "paths.json"
    path.write_text(dump_json({"stats": stats.to_json(), "lower_bound": lower.to_json()}))
    return [path]


def cmd_crossing(args, out: Path) -> list[Path]:
    desc = TnDescriptor(args.n, args.m)
    g = tn_graph(desc, max_vertices=args.max_vertices)
    if args.all_minimum:
        cutsets = minimum_cutsets(g, cap=args.exact_cap)
    elif args.cutset is not None:
        cutsets = [[int(t) for t in args.cutset.split(",") if t.strip()]]
    elif args.cut_file:
        cutsets = [json.loads(Path(args.cut_file).read_text())["cutset"]]
    else:
        raise ValueError("give --cutset, --cut-file or --all-minimum")
    masks = path_masks(desc)
    rows = []
    for W in cutsets:
        frac = verify_crossing(desc, W, g, masks)
        rows.append({"cutset": W, "fraction": f"{frac.numerator}/{frac.denominator}",
                     "at_least_half": 2 * frac >= 1})
    path = out / "crossing.json"
    path.write_text(dump_json({"n": args.n, "m": args.m, "results": rows}))
    return [path]


def cmd_verify_map(args, out: Path) -> list[Path]:
    kw = {"p": args.p, "q": args.q, "a": args.a, "b": args.b, "valuation": args.val,
          "sigma": _parse_cycles(args.sigma), "N": args.N}
    report = verify_map(build_map(args.map, **kw), args.radius)
    path = out / "verify_map.json"
    path.write_text(dump_json(report.to_json()))
    return [path]


def cmd_profile(args, out: Path) -> list[Path]:
    params = {"m": args.m} if args.group == "lamplighter" else _group_params(args)
    sizes = [int(t) for t in args.sizes.split(",")]
    rows = sep_profile_table(args.group, params, sizes, samples=args.samples, seed=args.seed,
                             exact_cap=args.exact_cap, max_vertices=args.max_vertices)
    path = out / "profile.csv"
    path.write_text(profile_csv(rows))
    return [path]


COMMANDS = {
    "ball": cmd_ball,
    "tn": cmd_tn,
    "cut": cmd_cut,
    "separator": cmd_separator,
    "paths": cmd_paths,
    "crossing": cmd_crossing,
    "verify-map": cmd_verify_map,
    "profile": cmd_profile,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--max-vertices", type=int, default=5_000_000)
    common.add_argument("--out", default=".")

    group_opts = argparse.ArgumentParser(add_help=False)
    group_opts.add_argument("--m", type=int, default=2, help="lamp modulus")
    group_opts.add_argument("--p", type=int, default=2)
    group_opts.add_argument("--q", type=int, default=1)
    group_opts.add_argument("--a", default="2")
    group_opts.add_argument("--b", default="1")
    group_opts.add_argument("--val", default="arch", help="arch, <p>adic or tadic<p>")
    group_opts.add_argument("--sigma", default="0 1", help='cycles, e.g. "0 1;3 4"')

    parser = argparse.ArgumentParser(prog="lampsep", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ball", parents=[common, group_opts], help="Cayley ball export")
    p.add_argument("group", choices=GROUP_KINDS)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--format", choices=["dot", "edgelist", "json"], default="json")
    p.add_argument("--sample", type=int, default=0, help="also write a connected sample of this size")

    p = sub.add_parser("tn", parents=[common], help="the graph T_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--format", choices=["dot", "edgelist", "json"], default="json")

    helps = {"cut": "exact or heuristic minimum balanced cutset",
             "separator": "fiber-based separator for a lamplighter subgraph"}
    for name in ("cut", "separator"):
        p = sub.add_parser(name, parents=[common], help=helps[name])
        p.add_argument("--input", help="graph as .json (labelled) or edge list")
        p.add_argument("--tn", type=int, help="use T_n instead of --input")
        p.add_argument("--m", type=int, default=2)
        if name == "cut":
            mode = p.add_mutually_exclusive_group()
            mode.add_argument("--exact", action="store_true", default=True)
            mode.add_argument("--heuristic", action="store_true")
            p.add_argument("--effort", type=int, default=8)
            p.add_argument("--exact-cap", type=int, default=30)
        else:
            p.add_argument("--radius", type=int, default=8)
            p.add_argument("--size", type=int, default=50)

    p = sub.add_parser("paths", parents=[common], help="canonical path congestion on T_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--max-pairs", type=int, default=10**6)

    p = sub.add_parser("crossing", parents=[common], help="crossing fraction of a T_n separator")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--cutset", help="comma separated vertex indices")
    p.add_argument("--cut-file", help="a cut.json certificate")
    p.add_argument("--all-minimum", action="store_true", help="every minimum cutset of T_n")
    p.add_argument("--exact-cap", type=int, default=30)

    p = sub.add_parser("verify-map", parents=[common, group_opts], help="check a map from Z_2 wr Z")
    p.add_argument("map", choices=["affine", "mpq", "wreath_inclusion", "symshift", "identity", "constant"])
    p.add_argument("--N", type=int, default=2, help="shift power for symshift")
    p.add_argument("--radius", type=int, default=6)

    p = sub.add_parser("profile", parents=[common, group_opts], help="Sep(v) witness table (CSV)")
    p.add_argument("--group", choices=GROUP_KINDS, default="lamplighter")
    p.add_argument("--sizes", default="1,8,24,50,100")
    p.add_argument("--samples", type=int, default=5)
    p.add_argument("--exact-cap", type=int, default=16)

    p = sub.add_parser("replay", help="re-run the command recorded in a manifest")
    p.add_argument("manifest")
    p.add_argument("--out", default=None, help="defaults to the manifest's directory")
    return parser


def _run(argv: list[str]) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "replay":
        manifest = json.loads(Path(args.manifest).read_text())
        out = args.out or str(Path(args.manifest).parent)
        return _run(manifest["argv"] + ["--out", out])

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    files = COMMANDS[args.command](args, out)
    recorded = _strip_out(argv)
    manifest = {
        "schema": MANIFEST_SCHEMA,
        "tool_version": __version__,
        "subcommand": args.command,
        "argv": recorded,
        "params": {k: v for k, v in sorted(vars(args).items()) if k not in ("out", "command")},
        "outputs": [p.name for p in files],
        "created": _dt.datetime.now(_dt.timezone.utc).isoformat(),
    }
    (out / f"{args.command}.manifest.json").write_text(dump_json(manifest))
    for p in files:
        print(p)
    return 0


def _strip_out(argv: list[str]) -> list[str]:
    kept, skip = [], False
    for tok in argv:
        if skip:
            skip = False
        elif tok == "--out":
            skip = True
        elif not tok.startswith("--out="):
            kept.append(tok)
    return kept


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        return _run(argv)
    except InvalidSeparator as exc:
        log.error("certificate validation failed: %s", exc)
        return EXIT_INVALID
    except CapExceeded as exc:
        log.error("cap exceeded: %s", exc)
        return EXIT_CAP
    except (ValueError, KeyError, FileNotFoundError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
