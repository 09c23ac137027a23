"""Balanced vertex separators for lamplighter subgraphs.

Conventions:

* a cutset C of a vertex set F (|F| = v) is *valid* when every connected
  component of F \\ C has at most v/2 vertices, compared as ``2 * size <= v``;
* ``log`` is log base 2.  A bound ``c <= k v / log2(v)`` is decided exactly as
  ``v**c <= 2**(k v)``, so no real arithmetic is involved;
* T_n is the set of (lamp configuration on [-n, n], position in [-n, n]),
  vertices numbered ``config * (2n + 1) + (pos + n)`` where ``config`` reads the
  lamps at -n, ..., n as base-m digits, least significant first.
"""

from __future__ import annotations

import csv
import io
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from lampsep.cayley import (
    CapExceeded,
    Graph,
    ball,
    connected_components,
    induced_subgraph,
    named_rng,
    sample_connected_subgraph,
)
from lampsep.groups import LamplighterElement

CERT_SCHEMA = "lampsep.cut_certificate/1"
STATS_SCHEMA = "lampsep.path_family_stats/1"
EXACT_CUT_CAP = 30
PROFILE_CSV_HEADER = ["v", "lower_witness", "upper_witness", "kind"]


class InvalidSeparator(ValueError):
    """A vertex set offered as a separator does not separate."""


def le_k_v_over_log2(c: int, k: int, v: int) -> bool:
    """Exact test of ``c <= k * v / log2(v)`` for v >= 2."""
    if v < 2:
        raise ValueError("v / log2(v) needs v >= 2")
    return c <= 0 or v**c <= 2 ** (k * v)


@dataclass
class BoundNote:
    name: str
    value: str  # exact "num/den" when rational, otherwise a 6-digit decimal
    satisfied: bool


@dataclass
class CutCertificate:
    cutset: list[int]
    largest_component: int
    v: int
    valid: bool
    kind: str
    bounds: list[BoundNote] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.cutset)

    def to_json(self, graph: Graph | None = None) -> dict:
        out = {"schema": CERT_SCHEMA, **asdict(self), "size": self.size}
        if graph is not None:
            out["cutset_labels"] = [graph.labels[v] for v in self.cutset]
        return out


def largest_component_after(graph: Graph, cutset: Iterable[int]) -> int:
    return max((len(c) for c in connected_components(graph, cutset)), default=0)


def certify(graph: Graph, cutset: Iterable[int], kind: str, **details) -> CutCertificate:
    cut = sorted(set(cutset))
    largest = largest_component_after(graph, cut)
    return CutCertificate(cut, largest, graph.n, 2 * largest <= graph.n, kind, details=details)


def require_valid(cert: CutCertificate) -> CutCertificate:
    if not cert.valid:
        raise InvalidSeparator(
            f"component of size {cert.largest_component} exceeds {cert.v}/2 after removing {cert.size} vertices")
    return cert


# --------------------------------------------------------------------------
# Exact and heuristic Cut
# --------------------------------------------------------------------------


class _Bitgraph:
    def __init__(self, graph: Graph):
        self.n = graph.n
        self.full = (1 << self.n) - 1
        self.nb = [sum(1 << w for w in nb) for nb in graph.adj]

    def valid(self, cut_mask: int) -> bool:
        rem = self.full & ~cut_mask
        n = self.n
        while rem:
            low = rem & -rem
            comp = frontier = low
            while frontier:
                b = frontier & -frontier
                frontier ^= b
                new = self.nb[b.bit_length() - 1] & rem & ~comp
                comp |= new
                frontier |= new
            if 2 * comp.bit_count() > n:
                return False
            rem &= ~comp
        return True


def _check_cap(graph: Graph, cap: int) -> None:
    if graph.n < 1:
        raise ValueError("Cut needs at least one vertex")
    if graph.n > cap:
        raise CapExceeded(f"exact Cut refused for {graph.n} > {cap} vertices; use heuristic bounds")


def cut_exact(graph: Graph, cap: int = EXACT_CUT_CAP) -> CutCertificate:
    """Minimum valid cutset by increasing size; first one in lexicographic order."""
    _check_cap(graph, cap)
    bits = _Bitgraph(graph)
    for k in range(graph.n + 1):
        for combo in combinations(range(graph.n), k):
            if bits.valid(sum(1 << v for v in combo)):
                return require_valid(certify(graph, combo, "exact", cut=k))
    raise AssertionError("removing every vertex always separates")


def minimum_cutsets(graph: Graph, cap: int = EXACT_CUT_CAP) -> list[list[int]]:
    """Every valid cutset of minimum size, in lexicographic order."""
    _check_cap(graph, cap)
    bits = _Bitgraph(graph)
    for k in range(graph.n + 1):
        found = [list(c) for c in combinations(range(graph.n), k)
                 if bits.valid(sum(1 << v for v in c))]
        if found:
            return found
    raise AssertionError("removing every vertex always separates")


def _bfs_order(graph: Graph, start: int, alive: set[int]) -> list[list[int]]:
    layers, seen = [[start]], {start}
    while True:
        nxt = sorted({w for u in layers[-1] for w in graph.adj[u] if w in alive and w not in seen})
        if not nxt:
            return layers
        seen.update(nxt)
        layers.append(nxt)


def cut_heuristic_upper(graph: Graph, effort: int = 8, seed: int = 0) -> CutCertificate:
    """A valid, not necessarily minimal, cutset.

    Repeatedly splits the largest component at the BFS layer (from a random
    root) that best balances it, then greedily returns cut vertices to the
    graph while the cut stays valid.  ``effort`` independent restarts; the
    smallest result wins.
    """
    n = graph.n
    rng = named_rng(seed, "cut_heuristic_upper")
    best: list[int] | None = None
    for _ in range(max(1, effort)):
        cut: set[int] = set()
        while True:
            comps = connected_components(graph, cut)
            big = max(comps, key=len, default=[])
            if 2 * len(big) <= n:
                break
            alive = set(big)
            layers = _bfs_order(graph, rng.choice(big), alive)
            if len(layers) == 1:
                cut.add(big[0])
                continue
            inner, choice, score = 0, None, None
            for k, layer in enumerate(layers[1:], start=1):
                inner += len(layers[k - 1])
                outer = len(big) - inner - len(layer)
                s = (max(inner, outer), len(layer))
                if score is None or s < score:
                    choice, score = layer, s
            cut.update(choice)
        order = sorted(cut)
        rng.shuffle(order)
        for v in order:
            cut.discard(v)
            if 2 * largest_component_after(graph, cut) > n:
                cut.add(v)
        if best is None or len(cut) < len(best):
            best = sorted(cut)
    return require_valid(certify(graph, best, "heuristic", effort=effort, seed=seed))


# --------------------------------------------------------------------------
# Constructive separator for subgraphs of Z_m wr Z
# --------------------------------------------------------------------------


def lamp_positions(graph: Graph) -> list[int]:
    return [LamplighterElement.parse(lab).pos for lab in graph.labels]


def lamp_modulus(graph: Graph) -> int:
    return LamplighterElement.parse(graph.labels[0]).m if graph.labels else 2


@dataclass
class IntervalCheck:
    v: int
    r: int
    m: int
    holds: bool


def interval_inequality(graph: Graph) -> IntervalCheck:
    """For connected F: v <= r * m**r with r the number of occupied positions."""
    r = len(set(lamp_positions(graph)))
    m = lamp_modulus(graph)
    return IntervalCheck(graph.n, r, m, graph.n <= r * m**r)


def _dec(x: float) -> str:
    return f"{x:.6f}"


def lamplighter_separator(graph: Graph, subset: Sequence[int] | None = None) -> CutCertificate:
    """Cut F along at most two position fibers.

    i_G is the smallest balancing position; i' (resp. i'') the nearest position
    at or below (resp. above) i_G whose fiber has at most 4v/log2(v) vertices.
    The returned cutset indexes ``graph`` (not the induced subgraph).
    """
    verts = sorted(subset) if subset is not None else list(range(graph.n))
    F = induced_subgraph(graph, verts) if subset is not None else graph
    v = F.n
    if v < 2:
        raise ValueError("the constructive separator needs v >= 2")
    if len(connected_components(F)) != 1:
        raise ValueError("F must induce a connected subgraph")
    pos = lamp_positions(F)
    fiber = Counter(pos)
    lo, hi = min(fiber), max(fiber)

    below = 0
    i_g = None
    for i in range(lo, hi + 1):
        above = v - below - fiber[i]
        if 2 * below <= v and 2 * above <= v:
            i_g = i
            break
        below += fiber[i]
    assert i_g is not None, "a balancing position always exists"

    i1 = i_g
    while not le_k_v_over_log2(fiber[i1], 4, v):
        i1 -= 1
    i2 = i_g
    while not le_k_v_over_log2(fiber[i2], 4, v):
        i2 += 1

    local_cut = [k for k, p in enumerate(pos) if p in (i1, i2)]
    cert = certify(F, local_cut, "constructive", i_G=i_g, i_low=i1, i_high=i2,
                   interval=[lo, hi])
    cert.cutset = [verts[k] for k in cert.cutset]
    r = hi - lo + 1
    m = lamp_modulus(F)
    cert.bounds = [
        BoundNote("8v/log2(v)", _dec(8 * v / math.log2(v)), le_k_v_over_log2(cert.size, 8, v)),
        BoundNote("fiber(i_low)<=4v/log2(v)", _dec(4 * v / math.log2(v)), le_k_v_over_log2(fiber[i1], 4, v)),
        BoundNote("fiber(i_high)<=4v/log2(v)", _dec(4 * v / math.log2(v)), le_k_v_over_log2(fiber[i2], 4, v)),
        BoundNote("v<=r*m^r", str(r * m**r), v <= r * m**r),
    ]
    return require_valid(cert)


# --------------------------------------------------------------------------
# T_n and the canonical path family
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class TnDescriptor:
    n: int
    m: int = 2

    def __post_init__(self):
        if self.n < 0 or self.m < 2:
            raise ValueError("need n >= 0 and m >= 2")

    @property
    def width(self) -> int:
        return 2 * self.n + 1

    @property
    def configs(self) -> int:
        return self.m**self.width

    @property
    def size(self) -> int:
        return self.width * self.configs

    def index(self, config: int, pos: int) -> int:
        return config * self.width + (pos + self.n)

    def split(self, idx: int) -> tuple[int, int]:
        config, k = divmod(idx, self.width)
        return config, k - self.n

    def digit(self, config: int, pos: int) -> int:
        return (config // self.m ** (pos + self.n)) % self.m

    def with_digit(self, config: int, pos: int, value: int) -> int:
        place = self.m ** (pos + self.n)
        return config + (value - self.digit(config, pos)) * place

    def element(self, idx: int) -> LamplighterElement:
        config, pos = self.split(idx)
        lamps = tuple((j, self.digit(config, j)) for j in range(-self.n, self.n + 1))
        return LamplighterElement(lamps, pos, self.m)

    def locate(self, x: LamplighterElement) -> int:
        if x.m != self.m:
            raise ValueError("lamp modulus differs from T_n")
        if not -self.n <= x.pos <= self.n or any(not -self.n <= j <= self.n for j in x.support):
            raise ValueError(f"{x.encode()} is not in T_{self.n}")
        config = sum(c * self.m ** (j + self.n) for j, c in x.lamps)
        return self.index(config, x.pos)


def tn_graph(desc: TnDescriptor, max_vertices: int = 5_000_000) -> Graph:
    if desc.size > max_vertices:
        raise CapExceeded(f"T_{desc.n} has {desc.size} > {max_vertices} vertices")
    edges = []
    for idx in range(desc.size):
        config, pos = desc.split(idx)
        if pos < desc.n:
            edges.append((idx, idx + 1))
        up = desc.with_digit(config, pos, (desc.digit(config, pos) + 1) % desc.m)
        edges.append((idx, desc.index(up, pos)))
    labels = [desc.element(k).encode() for k in range(desc.size)]
    return Graph.from_edges(labels, edges, {"group": "lamplighter", "params": {"m": desc.m},
                                            "tn": {"n": desc.n, "m": desc.m}})


def _path_indices(desc: TnDescriptor, x: int, y: int) -> list[int]:
    n, m = desc.n, desc.m
    f, i = desc.split(x)
    g, j = desc.split(y)
    path = [desc.index(f, p) for p in range(i, -n - 1, -1)]
    h = f
    for k in range(-n, n + 1):
        gap = (desc.digit(g, k) - desc.digit(h, k)) % m
        step, count = (1, gap) if 2 * gap <= m else (-1, m - gap)
        for _ in range(count):
            h = desc.with_digit(h, k, (desc.digit(h, k) + step) % m)
            path.append(desc.index(h, k))
        if k < n:
            path.append(desc.index(h, k + 1))
    path.extend(desc.index(g, p) for p in range(n - 1, j - 1, -1))
    return path


def canonical_path(x: LamplighterElement, y: LamplighterElement, desc: TnDescriptor) -> list[LamplighterElement]:
    """Walk x -> (f, -n) -> sweep right fixing lamps -> (g, n) -> y."""
    return [desc.element(k) for k in _path_indices(desc, desc.locate(x), desc.locate(y))]


@dataclass
class PathFamilyStats:
    n: int
    m: int
    vertices: int
    total_paths: int
    max_congestion: int
    congestion_bound: str
    within_bound: bool
    max_path_edges: int
    max_path_vertices: int
    busiest_vertex: str

    def to_json(self) -> dict:
        return {"schema": STATS_SCHEMA, **asdict(self)}


def congestion_bound(desc: TnDescriptor) -> Fraction:
    return Fraction(3 * desc.size**2, desc.configs)


def _congestion_chunk(args) -> tuple[list[int], int]:
    n, m, xs = args
    desc = TnDescriptor(n, m)
    counts = [0] * desc.size
    longest = 0
    for x in xs:
        for y in range(desc.size):
            path = _path_indices(desc, x, y)
            longest = max(longest, len(path) - 1)
            for z in set(path):
                counts[z] += 1
    return counts, longest


def congestion_stats(desc: TnDescriptor, jobs: int = 1, max_pairs: int = 10**6) -> PathFamilyStats:
    """Enumerate all |T_n|^2 canonical paths; a vertex counts once per path."""
    pairs = desc.size**2
    if pairs > max_pairs:
        raise CapExceeded(f"{pairs} paths exceed the enumeration cap {max_pairs}")
    xs = list(range(desc.size))
    if jobs > 1:
        chunks = [(desc.n, desc.m, xs[k::jobs]) for k in range(jobs)]
        with ProcessPoolExecutor(jobs) as pool:
            parts = list(pool.map(_congestion_chunk, chunks))
    else:
        parts = [_congestion_chunk((desc.n, desc.m, xs))]
    counts = [sum(col) for col in zip(*(p[0] for p in parts))]
    longest = max(p[1] for p in parts)
    top = max(counts)
    bound = congestion_bound(desc)
    return PathFamilyStats(desc.n, desc.m, desc.size, pairs, top,
                           f"{bound.numerator}/{bound.denominator}", top <= bound,
                           longest, longest + 1, desc.element(counts.index(top)).encode())


@dataclass
class CongestionLowerBound:
    n: int
    m: int
    formula_bound: Fraction  # m^(2n+1) / 6
    measured_bound: Fraction  # |T_n|^2 / (2 * max congestion)
    certified_cut: int  # ceiling of the larger bound
    formula_bound_dominates_log_form: bool  # m^(2n+1)/6 >= |T_n| / (6 log2 |T_n|)

    def to_json(self) -> dict:
        fr = lambda x: f"{x.numerator}/{x.denominator}"
        return {"n": self.n, "m": self.m, "formula_bound": fr(self.formula_bound),
                "measured_bound": fr(self.measured_bound), "certified_cut": self.certified_cut,
                "formula_bound_dominates_log_form": self.formula_bound_dominates_log_form}


def congestion_lower_bound(desc: TnDescriptor, stats: PathFamilyStats | None = None) -> CongestionLowerBound:
    """Lower bounds on Cut(T_n) from the path family.

    At least half of all paths meet any valid separator and no vertex carries
    more than ``max_congestion`` paths.
    """
    stats = stats or congestion_stats(desc)
    formula = Fraction(desc.configs, 6)
    measured = Fraction(desc.size**2, 2 * stats.max_congestion)
    best = max(formula, measured)
    size = desc.size
    # configs * log2(size) >= size  <=>  size**configs >= 2**size
    dominates = size < 2 or size**desc.configs >= 2**size
    return CongestionLowerBound(desc.n, desc.m, formula, measured, math.ceil(best), dominates)


def path_masks(desc: TnDescriptor) -> list[int]:
    """Bitmask of the vertex set of P(x, y), indexed by x * |T_n| + y."""
    N = desc.size
    out = []
    for x in range(N):
        for y in range(N):
            mask = 0
            for z in _path_indices(desc, x, y):
                mask |= 1 << z
            out.append(mask)
    return out


def verify_crossing(desc: TnDescriptor, W: Iterable[int], graph: Graph | None = None,
                    masks: list[int] | None = None) -> Fraction:
    """Exact fraction of ordered pairs whose canonical path meets W."""
    graph = graph or tn_graph(desc)
    W = sorted(set(W))
    require_valid(certify(graph, W, "given"))
    masks = masks if masks is not None else path_masks(desc)
    wmask = sum(1 << w for w in W)
    hits = sum(1 for mask in masks if mask & wmask)
    return Fraction(hits, len(masks))


# --------------------------------------------------------------------------
# Separation profile table
# --------------------------------------------------------------------------


@dataclass
class ProfileRow:
    v: int
    lower_witness: int
    upper_witness: int
    kind: str


def _ball_with_at_least(kind: str, params: dict, v: int, max_vertices: int) -> Graph:
    r = 0
    while True:
        g = ball(kind, r, max_vertices=max_vertices, **params)
        if g.n >= v:
            return g
        r += 1


def sep_profile_table(kind: str = "lamplighter", params: dict | None = None,
                      sizes: Sequence[int] = (1, 8, 24, 50, 100), samples: int = 5,
                      seed: int = 0, exact_cap: int = 16, tn_max: int = 2,
                      max_vertices: int = 5_000_000) -> list[ProfileRow]:
    """Finite-sample witnesses for Sep(v).

    lower_witness: largest certified Cut lower bound over sampled connected F
    with |F| = v (exact Cut when |F| <= exact_cap) and over T_n copies with
    |T_n| <= v (congestion bound); kept non-decreasing in v.
    upper_witness: largest separator actually produced for the sampled F
    (constructive for lamplighter groups, heuristic otherwise).
    """
    params = dict(params or {})
    lamp = kind == "lamplighter"
    m = int(params.get("m", 2))
    tn_bounds = {}
    if lamp:
        for n in range(tn_max + 1):
            desc = TnDescriptor(n, m)
            if desc.size**2 <= 10**6:
                tn_bounds[n] = congestion_lower_bound(desc).certified_cut
    rows, running = [], 0
    for v in sorted(sizes):
        if v == 1:
            running = max(running, 1)
            rows.append(ProfileRow(1, running, 1, "trivial"))
            continue
        g = _ball_with_at_least(kind, params, v, max_vertices)
        graphs = []
        for k in range(samples):
            sub = sample_connected_subgraph(g, v, seed * 1_000_003 + 7919 * k + v)
            graphs.append(induced_subgraph(g, sub))
        lower, source = 1, "trivial"
        for n, b in tn_bounds.items():
            desc = TnDescriptor(n, m)
            if desc.size <= v and b > lower:
                lower, source = b, "congestion"
            if desc.size == v:
                graphs.append(tn_graph(desc))
        upper = 0
        for F in graphs:
            if v <= exact_cap:
                c = cut_exact(F).size
                if c >= lower:
                    lower, source = c, "exact"
            if lamp:
                upper = max(upper, lamplighter_separator(F).size)
            else:
                upper = max(upper, cut_heuristic_upper(F, seed=seed).size)
        if lower >= running:
            running, label = lower, source
        else:
            label = "monotone"
        rows.append(ProfileRow(v, running, upper, label))
    return rows


def profile_csv(rows: Sequence[ProfileRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(PROFILE_CSV_HEADER)
    for r in rows:
        w.writerow([r.v, r.lower_witness, r.upper_witness, r.kind])
    return buf.getvalue()
