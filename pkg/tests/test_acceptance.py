"""Acceptance criteria 1-10, each printing one PASS/FAIL line."""

from fractions import Fraction

import pytest

from lampsep import experiments
from lampsep.separation import le_k_v_over_log2

REPORTS: dict[str, tuple] = {}


@pytest.fixture(scope="module")
def reports(tmp_path_factory):
    out = tmp_path_factory.mktemp("acceptance")

    def get(name):
        if name not in REPORTS:
            REPORTS[name] = experiments.write(name, out)
        return REPORTS[name]

    return get


def test_1_congestion_certificate(reports, record_criterion):
    _, _, rep, secs = reports("1_congestion")
    bounds = {1: 216, 2: 2400}
    cases = {c["n"]: c for c in rep["cases"]}
    ok = (set(cases) == {1, 2} and secs < 60
          and all(cases[n]["max_congestion"] <= b and cases[n]["congestion_bound"] == f"{b}/1"
                  for n, b in bounds.items())
          and all(c["total_paths"] == c["vertices"] ** 2 for c in cases.values()))
    record_criterion("1 congestion certificate", ok,
                     f"max {cases[1]['max_congestion']}<=216, {cases[2]['max_congestion']}<=2400, {secs:.1f}s")
    assert ok


def test_2_lower_bound_sandwich(reports, record_criterion):
    _, _, rep, secs = reports("2_sandwich")
    lower = rep["lower"]["certified_cut"]
    ok = (Fraction(rep["lower"]["formula_bound"]) == Fraction(4, 3) and lower >= 2
          and rep["upper_valid"] and lower <= rep["exact_cut"] <= rep["upper"] and secs < 120)
    record_criterion("2 lower-bound sandwich on T_1", ok,
                     f"{lower} <= {rep['exact_cut']} <= {rep['upper']}, {secs:.1f}s")
    assert ok


def test_3_constructive_separator(reports, record_criterion):
    _, _, rep, _ = reports("3_separator")
    rows = rep["samples"]
    sizes = [r["v"] for r in rows]
    good = [r for r in rows
            if r["valid"] and 2 * r["largest_component"] <= r["v"] and le_k_v_over_log2(r["cut"], 8, r["v"])]
    ok = len(rows) == 100 and min(sizes) == 50 and max(sizes) == 2000 and len(good) == 100
    record_criterion("3 constructive separator", ok, f"{len(good)}/100 valid within 8v/log2 v")
    assert ok


def test_4_crossing_fraction(reports, record_criterion):
    _, _, sandwich, _ = reports("2_sandwich")
    _, _, rep, _ = reports("4_crossing")
    ok = (rep["cutsets"] == len(sandwich["minimum_cutsets"]) > 0
          and all(2 * Fraction(f) >= 1 for f in rep["fractions"]))
    record_criterion("4 crossing fraction >= 1/2", ok,
                     f"{rep['cutsets']} minimum cutsets, min fraction {rep['min_fraction']}")
    assert ok


def test_5_mpq_maps(reports, record_criterion):
    _, _, rep, _ = reports("5_mpq")
    pqs = {(r["p"], r["q"]) for r in rep["maps"]}
    ok = pqs == {(2, 1), (3, 2)} and all(
        r["elements"] == 155 and r["max_fiber"] == 1 and r["K"] == 1 and r["lipschitz_failures"] == 0
        for r in rep["maps"])
    record_criterion("5 phi_mpq injective with K=1", ok, "(2,1) and (3,2) on 155 elements")
    assert ok


def test_6_affine_embedding(reports, record_criterion):
    _, _, rep, _ = reports("6_affine")
    ok = len(rep["maps"]) == 2 and all(
        r["injective"] and r["K"] == 1 and r["closed_form_equals_product"] and r["conjugates_commute"]
        for r in rep["maps"])
    record_criterion("6 affine embedding", ok, "arch a=2 and 3-adic a=1/3, J=10")
    assert ok


def test_7_injectivity_gap(reports, record_criterion):
    _, _, rep, _ = reports("7_gap")
    s = rep["surveys"]
    pairs = 2**7 * (2**7 - 1)
    ok = (all(x["pairs"] == pairs and x["all_nonzero"] for x in s.values())
          and s["padic"]["norm_equal_count"] == pairs
          and 2 * Fraction(s["arch_a3"]["min_ratio"]) >= 1
          and s["arch_a3"]["half_bound_failures"] == 0)
    record_criterion("7 injectivity gap", ok,
                     f"{pairs} pairs each; arch a=3 min {s['arch_a3']['min_ratio']}; "
                     f"arch a=2 min {s['arch_a2']['min_ratio']} (reported)")
    assert ok


def test_8_word_metric_oracle(reports, record_criterion):
    _, _, rep, _ = reports("8_word_metric")
    ok = rep["elements"] == 490 and not rep["mismatches"]
    record_criterion("8 word metric equals BFS on ball(8)", ok, f"{rep['elements']} elements")
    assert ok


def test_9_interval_inequality(reports, record_criterion):
    _, _, rep, _ = reports("9_interval")
    _, _, sep, _ = reports("3_separator")
    rows = rep["samples"]
    ok = ([r["v"] for r in rows] == [r["v"] for r in sep["samples"]]
          and all(r["v"] <= r["r"] * 2 ** r["r"] for r in rows))
    record_criterion("9 v <= r 2^r on criterion-3 samples", ok, f"{len(rows)} samples")
    assert ok


def test_10_determinism(reports, record_criterion):
    mismatched = []
    for name in experiments.CRITERIA:
        rpath, mpath, _, _ = reports(name)
        if experiments.replay(mpath) != rpath.read_text():
            mismatched.append(name)
    ok = not mismatched
    record_criterion("10 manifest replay is byte-identical", ok,
                     "9/9 reports" if ok else f"differs: {', '.join(mismatched)}")
    assert ok
