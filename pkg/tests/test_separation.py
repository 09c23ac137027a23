import math
from fractions import Fraction
from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lampsep.cayley import CapExceeded, Graph, ball, induced_subgraph, sample_connected_subgraph
from lampsep.groups import LamplighterElement
from lampsep.separation import (
    InvalidSeparator,
    TnDescriptor,
    canonical_path,
    certify,
    congestion_lower_bound,
    congestion_stats,
    cut_exact,
    cut_heuristic_upper,
    interval_inequality,
    lamplighter_separator,
    le_k_v_over_log2,
    minimum_cutsets,
    profile_csv,
    sep_profile_table,
    tn_graph,
    verify_crossing,
)
from lampsep.separation import _path_indices

L = LamplighterElement


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def oracle_cut(g: Graph) -> int:
    """Brute force over subsets with networkx components."""
    h = to_nx(g)
    for k in range(g.n + 1):
        for c in combinations(range(g.n), k):
            rest = h.subgraph(set(range(g.n)) - set(c))
            if all(2 * len(comp) <= g.n for comp in nx.connected_components(rest)):
                return k
    raise AssertionError


def path_graph(k):
    return Graph.from_edges([str(i) for i in range(k)], [(i, i + 1) for i in range(k - 1)])


def complete_graph(k):
    return Graph.from_edges([str(i) for i in range(k)], list(combinations(range(k), 2)))


@pytest.fixture(scope="module")
def t1():
    return tn_graph(TnDescriptor(1))


@pytest.fixture(scope="module")
def t1_stats():
    return congestion_stats(TnDescriptor(1))


# ---- exact bound arithmetic ----------------------------------------------

@given(st.integers(0, 400), st.integers(1, 8), st.integers(2, 400))
def test_le_k_v_over_log2_matches_floats_away_from_ties(c, k, v):
    bound = k * v / math.log2(v)
    if abs(c - bound) > 1e-6:
        assert le_k_v_over_log2(c, k, v) == (c <= bound)


def test_le_k_v_over_log2_exact_at_powers_of_two():
    assert le_k_v_over_log2(16, 4, 16) and not le_k_v_over_log2(17, 4, 16)
    with pytest.raises(ValueError):
        le_k_v_over_log2(1, 1, 1)


# ---- Cut -----------------------------------------------------------------

def test_cut_exact_examples():
    single = Graph.from_edges(["x"], [])
    assert cut_exact(single).cutset == [0]
    p3 = cut_exact(path_graph(3))
    assert p3.cutset == [1] and p3.valid
    assert cut_exact(complete_graph(4)).size == 2


def test_cut_exact_refuses_large_graphs():
    with pytest.raises(CapExceeded):
        cut_exact(path_graph(31))
    with pytest.raises(ValueError):
        cut_exact(Graph([], []))


graphs = st.integers(1, 11).flatmap(lambda n: st.tuples(
    st.just(n), st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=3 * n)))


def _build(spec):
    n, pairs = spec
    return Graph.from_edges([str(i) for i in range(n)], sorted({tuple(sorted(p)) for p in pairs if p[0] != p[1]}))


@settings(max_examples=120)
@given(graphs)
def test_cut_exact_agrees_with_networkx_oracle(spec):
    g = _build(spec)
    assert cut_exact(g).size == oracle_cut(g)


@settings(max_examples=120)
@given(graphs, st.integers(0, 100))
def test_heuristic_is_valid_and_not_below_exact(spec, seed):
    g = _build(spec)
    h = cut_heuristic_upper(g, seed=seed)
    assert h.valid and certify(g, h.cutset, "check").valid
    assert h.size >= cut_exact(g).size


def test_heuristic_examples():
    split = Graph.from_edges(list("abcd"), [(0, 1), (2, 3)])
    assert cut_heuristic_upper(split).cutset == []
    k4 = cut_heuristic_upper(complete_graph(4))
    assert k4.valid and k4.size <= 3


def test_cut_t1(t1):
    assert cut_exact(t1).size == 4
    assert len(minimum_cutsets(t1)) == 394


# ---- constructive separator -----------------------------------------------

def test_separator_on_t1(t1):
    cert = lamplighter_separator(t1)
    assert cert.valid and all(b.satisfied for b in cert.bounds)
    assert cert.size <= 8 * 24 / math.log2(24)


def test_separator_on_ball6():
    g = ball("lamplighter", 6)
    cert = lamplighter_separator(g)
    assert cert.valid and le_k_v_over_log2(cert.size, 8, g.n)
    assert cert.to_json(g)["cutset_labels"][0].startswith("lamps:")


def test_separator_on_an_edge():
    g = ball("lamplighter", 1)
    e, w = g.index_of()["lamps:{};pos:0"], g.index_of()["lamps:{};pos:1"]
    cert = lamplighter_separator(g, [e, w])
    assert cert.valid and cert.details["i_G"] == 0
    assert len({L.parse(g.labels[k]).pos for k in cert.cutset}) == 1


def test_separator_rejects_bad_input():
    g = ball("lamplighter", 3)
    idx = g.index_of()
    with pytest.raises(ValueError):
        lamplighter_separator(g, [idx["lamps:{};pos:2"], idx["lamps:{};pos:-2"]])
    with pytest.raises(ValueError):
        lamplighter_separator(g, [0])
    with pytest.raises(InvalidSeparator):
        verify_crossing(TnDescriptor(0), [])


BALL7 = ball("lamplighter", 7)


@settings(max_examples=60)
@given(st.integers(2, BALL7.n), st.integers(0, 10**6))
def test_separator_valid_and_within_bound_on_random_subgraphs(v, seed):
    sub = sample_connected_subgraph(BALL7, v, seed)
    cert = lamplighter_separator(BALL7, sub)
    assert cert.valid and cert.v == v
    assert le_k_v_over_log2(cert.size, 8, v)
    assert set(cert.cutset) <= set(sub)
    chk = interval_inequality(induced_subgraph(BALL7, sub))
    assert chk.holds and chk.v <= chk.r * 2**chk.r


# ---- T_n and canonical paths -----------------------------------------------

@pytest.mark.parametrize("n, size, edges", [(0, 2, 1), (1, 24, 16 + 12), (2, 160, 128 + 80)])
def test_tn_sizes(n, size, edges):
    g = tn_graph(TnDescriptor(n))
    assert (g.n, g.num_edges) == (size, edges)
    g.check()


def test_tn_descriptor_round_trip():
    desc = TnDescriptor(2, 3)
    for k in range(0, desc.size, 7):
        assert desc.locate(desc.element(k)) == k
    with pytest.raises(ValueError):
        TnDescriptor(1).locate(L.from_support([2]))


def test_canonical_path_example():
    desc = TnDescriptor(1)
    x, y = L.identity() * L((), 1), L.from_support([0], 0)
    got = [(z.support, z.pos) for z in canonical_path(x, y, desc)]
    assert got == [((), 1), ((), 0), ((), -1), ((), 0), ((0,), 0), ((0,), 1), ((0,), 0)]


def test_canonical_path_with_equal_endpoints():
    desc = TnDescriptor(1)
    x = L.from_support([-1, 1], 0)
    path = canonical_path(x, x, desc)
    assert path[0] == path[-1] == x
    assert {z.pos for z in path} == {-1, 0, 1}


@pytest.mark.parametrize("n, m", [(2, 2), (1, 3)])
def test_every_canonical_path_is_a_short_walk(n, m):
    desc = TnDescriptor(n, m)
    adj = [set(a) for a in tn_graph(desc).adj]
    limit = 8 * n + 2 if m == 2 else None
    for x in range(desc.size):
        for y in range(desc.size):
            p = _path_indices(desc, x, y)
            assert p[0] == x and p[-1] == y
            assert all(b in adj[a] for a, b in zip(p, p[1:]))
            if limit:
                assert len(p) <= limit


# ---- congestion --------------------------------------------------------------

@pytest.mark.parametrize("n, bound", [(0, 6), (1, 216), (2, 2400)])
def test_congestion_within_bound(n, bound):
    st_ = congestion_stats(TnDescriptor(n))
    assert st_.congestion_bound == f"{bound}/1"
    assert st_.within_bound and st_.max_congestion <= bound
    assert st_.total_paths == TnDescriptor(n).size ** 2


def test_congestion_measured_values(t1_stats):
    assert t1_stats.max_congestion == 156
    assert t1_stats.max_path_edges == 9


def test_congestion_parallel_matches_serial(t1_stats):
    assert congestion_stats(TnDescriptor(1), jobs=2) == t1_stats


def test_congestion_cap():
    with pytest.raises(CapExceeded):
        congestion_stats(TnDescriptor(2), max_pairs=1000)


def test_congestion_lower_bounds(t1_stats):
    lb1 = congestion_lower_bound(TnDescriptor(1), t1_stats)
    assert lb1.formula_bound == Fraction(4, 3) and lb1.measured_bound >= lb1.formula_bound
    assert lb1.certified_cut == 2
    lb2 = congestion_lower_bound(TnDescriptor(2))
    assert lb2.formula_bound == Fraction(16, 3) and math.ceil(lb2.formula_bound) == 6
    assert lb2.certified_cut >= 6


def test_sandwich_on_t1(t1, t1_stats):
    lower = congestion_lower_bound(TnDescriptor(1), t1_stats).certified_cut
    exact = cut_exact(t1).size
    upper = lamplighter_separator(t1).size
    assert lower <= exact <= upper


# ---- crossing ------------------------------------------------------------------

def test_crossing_examples(t1):
    desc = TnDescriptor(1)
    assert verify_crossing(desc, range(desc.size), t1) == 1
    assert verify_crossing(desc, cut_exact(t1).cutset, t1) >= Fraction(1, 2)


# ---- profile -------------------------------------------------------------------

def test_profile_table():
    rows = sep_profile_table(sizes=[1, 8, 24, 40], samples=3, seed=1)
    assert rows[0].v == 1 and rows[0].lower_witness == 1
    assert next(r for r in rows if r.v == 24).lower_witness >= 2
    lows = [r.lower_witness for r in rows]
    assert lows == sorted(lows)
    assert all(r.lower_witness <= r.upper_witness or r.v == 1 for r in rows)
    assert profile_csv(rows).splitlines()[0] == "v,lower_witness,upper_witness,kind"


def test_profile_is_deterministic():
    a = sep_profile_table(sizes=[10, 30], samples=2, seed=5)
    assert a == sep_profile_table(sizes=[10, 30], samples=2, seed=5)
