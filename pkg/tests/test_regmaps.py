from fractions import Fraction
from itertools import product

import pytest

from lampsep.exact_numbers import LaurentPoly, ValuedScalar, Valuation
from lampsep.groups import AffineElement, LamplighterElement, MpqElement, SymShiftElement, WreathZZElement
from lampsep.regmaps import (
    AffineEmbeddingParams,
    RegularMap,
    affine_map,
    build_map,
    constant_map,
    domain_ball,
    gap_data,
    gap_survey,
    identity_map,
    injectivity_gap,
    mpq_map,
    phi_affine,
    phi_affine_product,
    phi_mpq,
    phi_symshift,
    phi_wreath_inclusion,
    symshift_map,
    verify_edge_lipschitz,
    verify_injectivity,
    verify_map,
    wreath_inclusion_map,
)

L = LamplighterElement
ARCH2 = AffineEmbeddingParams.parse("arch", "2", "1")
PADIC3 = AffineEmbeddingParams.parse("3adic", "1/3", "1")
TADIC2 = AffineEmbeddingParams(
    ValuedScalar(LaurentPoly.monomial(2, 1, -1), Valuation.tadic(2)),
    ValuedScalar(LaurentPoly.constant(2, 1), Valuation.tadic(2)),
)
SIGMA = SymShiftElement.from_cycles([(0, 1)])


@pytest.fixture(scope="module")
def ball4():
    return domain_ball(4)


@pytest.fixture(scope="module")
def ball6():
    return domain_ball(6)


def aff(b, a, val="arch"):
    v = Valuation.parse(val)
    return AffineElement(ValuedScalar.of(b, v), ValuedScalar.of(a, v))


# ---- parameters ---------------------------------------------------------

@pytest.mark.parametrize("val, a, b", [("3adic", "3", "1"), ("arch", "3/2", "1"), ("arch", "2", "0")])
def test_affine_params_rejected(val, a, b):
    with pytest.raises(ValueError):
        AffineEmbeddingParams.parse(val, a, b)


# ---- map constructors ---------------------------------------------------

def test_phi_affine_examples():
    assert phi_affine(L.identity(), ARCH2) == aff(0, 1)
    assert phi_affine(L.from_support([0, 1], 3), ARCH2) == aff(3, 8)
    assert phi_affine(L.from_support([-1], 0), PADIC3) == aff(3, 1, "3adic")


@pytest.mark.parametrize("params", [ARCH2, PADIC3, TADIC2], ids=["arch", "3adic", "tadic"])
def test_closed_form_equals_word_product(params, ball6):
    for x in ball6:
        assert phi_affine(x, params) == phi_affine_product(x, params)


def test_phi_mpq_examples():
    assert phi_mpq(L.identity(), 2, 1) == MpqElement(0, 0, 2, 1)
    assert phi_mpq(L.from_support([0], 0), 2, 1) == MpqElement(1, 0, 2, 1)
    assert phi_mpq(L.from_support([0, 2], 1), 2, 1) == MpqElement(5, 1, 2, 1)
    with pytest.raises(ValueError):
        phi_mpq(L.identity(), 2, 4)


@pytest.mark.parametrize("p, q, val", [(2, 1, "arch"), (3, 1, "arch"), (3, 2, "2adic"), (2, 3, "3adic")])
def test_phi_mpq_factors_through_affine(p, q, val, ball4):
    prm = AffineEmbeddingParams.parse(val, f"{p}/{q}", "1")
    for x in ball4:
        img = phi_mpq(x, p, q)
        aff_img = phi_affine(x, prm)
        assert aff_img.b.value == img.x
        assert aff_img.a.value == Fraction(p, q) ** img.i


def test_phi_mpq_multiplicative_exactly_on_disjoint_supports(ball4):
    """The Z_2 -> Z lift is additive only when no lamp is switched twice."""
    for x, y in product(ball4, repeat=2):
        disjoint = not set(x.support) & {j + x.pos for j in y.support}
        same = phi_mpq(x * y, 2, 1) == phi_mpq(x, 2, 1) * phi_mpq(y, 2, 1)
        assert same == disjoint
    s = L.switch()
    assert phi_mpq(s * s, 2, 1) == MpqElement(0, 0, 2, 1)
    assert phi_mpq(s, 2, 1) * phi_mpq(s, 2, 1) == MpqElement(2, 0, 2, 1)


def test_phi_wreath_inclusion_examples(ball4):
    assert phi_wreath_inclusion(L.identity()) == WreathZZElement.identity()
    assert phi_wreath_inclusion(L.from_support([5], -1)) == WreathZZElement(((5, 1),), -1)
    assert len({phi_wreath_inclusion(x) for x in ball4}) == len(ball4)


def test_phi_symshift_examples():
    assert phi_symshift(L.identity(), SIGMA, 2) == SymShiftElement.identity()
    one = phi_symshift(L.from_support([0], 1), SIGMA, 2)
    assert one == SIGMA * SymShiftElement((), 2)
    assert [one(x) for x in (-2, -1, 0)] == [1, 0, 2]
    got = phi_symshift(L.from_support([0, 1], 3), SIGMA, 2)
    assert got == SymShiftElement.from_cycles([(0, 1), (2, 3)]) * SymShiftElement((), 6)
    with pytest.raises(ValueError):
        phi_symshift(L.identity(), SIGMA, 1)
    with pytest.raises(ValueError):
        phi_symshift(L.identity(), SymShiftElement.identity(), 2)


@pytest.mark.parametrize("cycles, N", [([(0, 1)], 2), ([(0, 2, 1)], 3), ([(-1, 3)], 6)])
def test_symshift_conjugate_supports_disjoint(cycles, N):
    sigma = SymShiftElement.from_cycles(cycles)
    supports = []
    for j in range(-5, 6):
        conj = SymShiftElement((), j * N) * sigma * SymShiftElement((), -j * N)
        supports.append(set(conj.moved))
    for k, a in enumerate(supports):
        for b in supports[k + 1:]:
            assert not a & b


# ---- verification -------------------------------------------------------

@pytest.mark.parametrize("phi", [mpq_map(2, 1), affine_map(ARCH2), identity_map(),
                                 affine_map(PADIC3), affine_map(TADIC2), wreath_inclusion_map(),
                                 symshift_map(SIGMA, 2)],
                         ids=lambda m: m.map_id)
def test_edge_lipschitz_passes(phi):
    frag = verify_edge_lipschitz(phi, 5)
    assert frag.passed and frag.K == 1 and frag.failure_count == 0
    assert frag.edges_checked == 3 * 84


def test_switch_step_uses_d_or_its_inverse_as_the_lamp_dictates(ball4):
    d = ARCH2.d
    for x in ball4:
        lit = dict(x.lamps).get(x.pos, 0)
        t = d if not lit else d.inverse()
        assert phi_affine(x * L.switch(), ARCH2) == phi_affine(x, ARCH2) * t
        assert phi_affine(x * L.walk(), ARCH2) == phi_affine(x, ARCH2) * ARCH2.delta


def test_edge_lipschitz_detects_a_wrong_step_image():
    base = mpq_map(2, 1)
    b = MpqElement.gen_b(2, 1)
    broken = RegularMap("broken", {}, base.evaluate, {**base.step_images, "w": [b * b]})
    frag = verify_edge_lipschitz(broken, 3)
    assert not frag.passed and frag.K is None
    assert frag.failure_count == 22 and len(frag.failures) == 10


def test_verify_injectivity_examples():
    rep = verify_injectivity(affine_map(ARCH2), 6)
    assert rep.injective and rep.max_fiber == 1 and rep.elements == 155
    const = verify_injectivity(constant_map(), 2)
    assert const.max_fiber == 10 and not const.injective
    assert const.first_collision == ["lamps:{};pos:0", "lamps:{0:1};pos:0"]
    assert verify_injectivity(symshift_map(SIGMA, 2), 5).injective


def test_verify_map_report_json():
    rep = verify_map(build_map("mpq", p=2, q=1), 6).to_json()
    assert rep["schema"] == "lampsep.regular_map_report/1"
    assert (rep["K"], rep["C"], rep["fibers"]["injective"]) == (1, 1, True)
    assert rep["params"] == {"p": 2, "q": 1}


# ---- the injectivity gap --------------------------------------------------

def test_gap_single_term_case():
    assert injectivity_gap(L.from_support([0]), L.identity(), ARCH2)
    assert gap_data(L.from_support([0]), L.identity(), ARCH2).j_max == 0


def test_gap_fails_for_a_equal_two_archimedean():
    data = gap_data(L.from_support([2]), L.from_support([0, 1]), ARCH2)
    assert data.j_max == 2
    assert data.delta.value == 1 and data.reference.value == 4
    assert data.ratio == Fraction(1, 4)
    assert not injectivity_gap(L.from_support([2]), L.from_support([0, 1]), ARCH2)


def test_gap_ultrametric_equality():
    for xs, ys in [([0], []), ([2], [0, 1]), ([-3, 1], [1, 2]), ([-1], [-2, -3])]:
        data = gap_data(L.from_support(xs), L.from_support(ys), PADIC3)
        assert data.holds_half and data.norms_equal


def test_gap_rejects_bad_pairs():
    with pytest.raises(ValueError):
        gap_data(L.from_support([1]), L.from_support([1]), ARCH2)
    with pytest.raises(ValueError):
        gap_data(L.from_support([1], 0), L.from_support([2], 1), ARCH2)


def test_gap_survey_small_window():
    s = gap_survey(AffineEmbeddingParams.parse("arch", "3", "1"), -1, 1)
    assert s.pairs == 8 * 7 and s.all_nonzero and s.half_bound_failures == 0
    assert 2 * s.min_ratio >= 1
    t = gap_survey(TADIC2, -2, 2)
    assert t.all_nonzero and t.norm_equal_count == t.pairs
