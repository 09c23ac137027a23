"""Explicit maps out of the lamplighter group and their exact verification.

A map is checked on a finite ball of Z_2 wr Z in two ways:

* edge-Lipschitz: for every ball element x and generator g, phi(x g) must equal
  phi(x) t for one of the allowed generator images t.  With those images in the
  target generating set this certifies Lipschitz constant 1 without any
  word-metric computation in the target.
* fibers: images are bucketed by canonical encoding; max fiber 1 is injectivity.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable

from lampsep.cayley import ball, ball_elements
from lampsep.exact_numbers import (
    ValuedScalar,
    Valuation,
    has_norm_at_least_two,
    norm_at_least_half,
    norm_compare,
    EQ,
)
from lampsep.groups import (
    AffineElement,
    LamplighterElement,
    MpqElement,
    SymShiftElement,
    WreathZZElement,
    check_mpq_parameters,
    make_group,
)

REPORT_SCHEMA = "lampsep.regular_map_report/1"


@dataclass(frozen=True)
class AffineEmbeddingParams:
    """Scalars a, b with b != 0 and |a| >= 2; delta = (0, a) and d = (b, 1)."""

    a: ValuedScalar
    b: ValuedScalar

    def __post_init__(self):
        if self.a.valuation != self.b.valuation:
            raise ValueError("a and b must share a valuation")
        if self.b.is_zero():
            raise ValueError("b must be nonzero")
        if self.a.is_zero() or not has_norm_at_least_two(self.a):
            raise ValueError(f"need |a| >= 2 in {self.valuation.encode()}, got a = {self.a.encode()}")

    @classmethod
    def parse(cls, valuation: str | Valuation, a: str, b: str) -> "AffineEmbeddingParams":
        val = Valuation.parse(valuation) if isinstance(valuation, str) else valuation
        return cls(ValuedScalar.parse(str(a), val), ValuedScalar.parse(str(b), val))

    @property
    def valuation(self) -> Valuation:
        return self.a.valuation

    @property
    def delta(self) -> AffineElement:
        return AffineElement.dilation(self.a)

    @property
    def d(self) -> AffineElement:
        return AffineElement.translation(self.b)

    def describe(self) -> dict:
        return {"valuation": self.valuation.encode(), "a": self.a.encode(), "b": self.b.encode()}


def _lift(lam: LamplighterElement) -> list[tuple[int, int]]:
    if lam.m != 2:
        raise ValueError("maps are defined on Z_2 wr Z")
    return list(lam.lamps)


def phi_affine(lam: LamplighterElement, params: AffineEmbeddingParams) -> AffineElement:
    """Closed form (sum_j l_j b a^j, a^pos)."""
    total = params.b.zero()
    for j, c in _lift(lam):
        total = total + ValuedScalar.of(c, params.valuation) * params.b * params.a**j
    return AffineElement(total, params.a**lam.pos)


def phi_affine_product(lam: LamplighterElement, params: AffineEmbeddingParams) -> AffineElement:
    """The same map as the literal product prod_j delta^j d^{l_j} delta^-j * delta^pos."""
    delta, d = params.delta, params.d
    out = AffineElement.identity(params.valuation)
    for j, c in _lift(lam):
        out = out * (delta**j) * (d**c) * (delta ** (-j))
    return out * delta**lam.pos


def phi_mpq(lam: LamplighterElement, p: int, q: int) -> MpqElement:
    check_mpq_parameters(p, q)
    r = Fraction(p, q)
    return MpqElement(sum((c * r**j for j, c in _lift(lam)), Fraction(0)), lam.pos, p, q)


def phi_wreath_inclusion(lam: LamplighterElement) -> WreathZZElement:
    return WreathZZElement(tuple(_lift(lam)), lam.pos)


def check_symshift_parameters(sigma: SymShiftElement, N: int) -> None:
    if sigma.shift != 0 or not sigma.perm:
        raise ValueError("sigma must be a nontrivial finitary permutation")
    moved = sigma.moved
    if N < max(moved) - min(moved) + 1:
        raise ValueError(f"N = {N} too small: shifted supports of sigma would overlap")


def phi_symshift(lam: LamplighterElement, sigma: SymShiftElement, N: int) -> SymShiftElement:
    check_symshift_parameters(sigma, N)
    out = SymShiftElement.identity()
    for j, c in _lift(lam):
        conj = SymShiftElement((), j * N) * sigma * SymShiftElement((), -j * N)
        for _ in range(c):
            out = out * conj
    return out * SymShiftElement((), N * lam.pos)


# --------------------------------------------------------------------------
# Maps as verifiable objects
# --------------------------------------------------------------------------


@dataclass
class RegularMap:
    """A map from Z_2 wr Z together with the allowed image of each generator step.

    ``step_images[g]`` lists the target elements t such that phi(x g) = phi(x) t
    is acceptable for the domain generator named g.
    """

    map_id: str
    params: dict
    evaluate: Callable[[LamplighterElement], object]
    step_images: dict[str, list]


def affine_map(params: AffineEmbeddingParams) -> RegularMap:
    d, delta = params.d, params.delta
    return RegularMap("affine", params.describe(), lambda x: phi_affine(x, params),
                      {"s": [d, d.inverse()], "w": [delta], "W": [delta.inverse()]})


def mpq_map(p: int, q: int) -> RegularMap:
    check_mpq_parameters(p, q)
    a, b = MpqElement.gen_a(p, q), MpqElement.gen_b(p, q)
    return RegularMap("mpq", {"p": p, "q": q}, lambda x: phi_mpq(x, p, q),
                      {"s": [a, a.inverse()], "w": [b], "W": [b.inverse()]})


def wreath_inclusion_map() -> RegularMap:
    s, w = WreathZZElement(((0, 1),), 0), WreathZZElement((), 1)
    return RegularMap("wreath_inclusion", {}, phi_wreath_inclusion,
                      {"s": [s, s.inverse()], "w": [w], "W": [w.inverse()]})


def symshift_map(sigma: SymShiftElement, N: int) -> RegularMap:
    check_symshift_parameters(sigma, N)
    t = SymShiftElement((), N)
    return RegularMap("symshift", {"sigma": sigma.encode(), "N": N},
                      lambda x: phi_symshift(x, sigma, N),
                      {"s": [sigma, sigma.inverse()], "w": [t], "W": [t.inverse()]})


def identity_map() -> RegularMap:
    spec = make_group("lamplighter", m=2)
    return RegularMap("identity", {}, lambda x: x,
                      {name: [g] for name, g in spec.generators})


def constant_map() -> RegularMap:
    e = LamplighterElement.identity()
    return RegularMap("constant", {}, lambda x: e, {"s": [e], "w": [e], "W": [e]})


def build_map(map_id: str, **kw) -> RegularMap:
    if map_id == "affine":
        return affine_map(AffineEmbeddingParams.parse(kw.get("valuation", "arch"), kw["a"], kw["b"]))
    if map_id == "mpq":
        return mpq_map(int(kw["p"]), int(kw["q"]))
    if map_id == "wreath_inclusion":
        return wreath_inclusion_map()
    if map_id == "symshift":
        sigma = kw.get("sigma") or [(0, 1)]
        if not isinstance(sigma, SymShiftElement):
            sigma = SymShiftElement.from_cycles(sigma)
        return symshift_map(sigma, int(kw.get("N", 2)))
    if map_id == "identity":
        return identity_map()
    if map_id == "constant":
        return constant_map()
    raise ValueError(f"unknown map {map_id!r}")


# --------------------------------------------------------------------------
# Verification
# --------------------------------------------------------------------------


def domain_ball(radius: int) -> list[LamplighterElement]:
    return ball_elements(ball("lamplighter", radius, m=2), "lamplighter", m=2)


@dataclass
class LipschitzFragment:
    edges_checked: int
    passed: bool
    K: int | None
    failure_count: int = 0
    failures: list[dict] = field(default_factory=list)  # first 10 witnesses


@dataclass
class FiberFragment:
    elements: int
    distinct_images: int
    max_fiber: int
    injective: bool
    first_collision: list[str] | None = None


def verify_edge_lipschitz(phi: RegularMap, radius: int, elements=None) -> LipschitzFragment:
    if radius < 1:
        raise ValueError("radius must be at least 1")
    elements = elements if elements is not None else domain_ball(radius)
    gens = dict(make_group("lamplighter", m=2).generators)
    checked, n_fail, failures = 0, 0, []
    for x in elements:
        fx = phi.evaluate(x)
        for name in ("s", "w", "W"):
            checked += 1
            fy = phi.evaluate(x * gens[name])
            if not any(fx * t == fy for t in phi.step_images[name]):
                n_fail += 1
                if len(failures) < 10:
                    failures.append({"element": x.encode(), "generator": name})
    passed = n_fail == 0
    return LipschitzFragment(checked, passed, 1 if passed else None, n_fail, failures)


def verify_injectivity(phi: RegularMap, radius: int, elements=None) -> FiberFragment:
    if radius < 1:
        raise ValueError("radius must be at least 1")
    elements = elements if elements is not None else domain_ball(radius)
    fibers: dict[str, list[str]] = defaultdict(list)
    first = None
    for x in elements:
        key = phi.evaluate(x).encode()
        fibers[key].append(x.encode())
        if first is None and len(fibers[key]) == 2:
            first = list(fibers[key])
    max_fiber = max(len(v) for v in fibers.values())
    return FiberFragment(len(elements), len(fibers), max_fiber, max_fiber == 1, first)


@dataclass
class RegularMapReport:
    map_id: str
    params: dict
    radius: int
    domain_generators: list[str]
    lipschitz: LipschitzFragment
    fibers: FiberFragment
    K: int | None
    C: int

    def to_json(self) -> dict:
        out = {"schema": REPORT_SCHEMA}
        out.update(asdict(self))
        return out


def verify_map(phi: RegularMap, radius: int) -> RegularMapReport:
    elements = domain_ball(radius)
    lip = verify_edge_lipschitz(phi, radius, elements)
    fib = verify_injectivity(phi, radius, elements)
    return RegularMapReport(phi.map_id, phi.params, radius, ["s", "w", "W"],
                            lip, fib, lip.K, fib.max_fiber)


# --------------------------------------------------------------------------
# The injectivity gap
# --------------------------------------------------------------------------


@dataclass
class GapData:
    j_max: int
    delta: ValuedScalar
    reference: ValuedScalar
    holds_half: bool
    norms_equal: bool
    ratio: Fraction | None  # |delta| / |reference|, archimedean only


def gap_data(lam: LamplighterElement, lam2: LamplighterElement,
             params: AffineEmbeddingParams) -> GapData:
    if lam.pos != lam2.pos:
        raise ValueError("positions differ")
    if lam == lam2:
        raise ValueError("elements coincide")
    f, g = lam.config, lam2.config
    j_max = max(j for j in set(f) | set(g) if f.get(j, 0) != g.get(j, 0))
    zero = params.b.zero()
    delta = phi_affine(lam, params).act(zero) - phi_affine(lam2, params).act(zero)
    ref = params.b * params.a**j_max
    ratio = None
    if params.valuation.kind == "arch":
        ratio = abs(delta.value) / abs(ref.value)
    return GapData(j_max, delta, ref, norm_at_least_half(delta, ref),
                   norm_compare(delta, ref) == EQ, ratio)


def injectivity_gap(lam: LamplighterElement, lam2: LamplighterElement,
                    params: AffineEmbeddingParams) -> bool:
    """Exact verdict of |Delta| >= |b a^j_max| / 2 for two same-position elements."""
    return gap_data(lam, lam2, params).holds_half


@dataclass
class GapSurvey:
    params: dict
    window: tuple[int, int]
    pairs: int
    all_nonzero: bool
    half_bound_failures: int
    norm_equal_count: int
    min_ratio: Fraction | None
    min_ratio_witness: list[str] | None

    def to_json(self) -> dict:
        d = asdict(self)
        d["window"] = list(self.window)
        d["min_ratio"] = None if self.min_ratio is None else f"{self.min_ratio.numerator}/{self.min_ratio.denominator}"
        return d


def gap_survey(params: AffineEmbeddingParams, lo: int = -3, hi: int = 3) -> GapSurvey:
    """All ordered pairs of distinct configurations supported in [lo, hi], position 0."""
    window = range(lo, hi + 1)
    configs = [LamplighterElement.from_support([j for j, bit in zip(window, bits) if bit])
               for bits in product((0, 1), repeat=len(window))]
    zero = params.b.zero()
    translation = [phi_affine(x, params).act(zero) for x in configs]
    pairs = failures = equal = 0
    nonzero = True
    min_ratio, witness = None, None
    for u, x in enumerate(configs):
        fx = x.config
        for v, y in enumerate(configs):
            if u == v:
                continue
            pairs += 1
            fy = y.config
            j_max = max(j for j in set(fx) | set(fy) if fx.get(j, 0) != fy.get(j, 0))
            delta = translation[u] - translation[v]
            ref = params.b * params.a**j_max
            nonzero &= not delta.is_zero()
            failures += not norm_at_least_half(delta, ref)
            equal += norm_compare(delta, ref) == EQ
            if params.valuation.kind == "arch":
                r = abs(delta.value) / abs(ref.value)
                if min_ratio is None or r < min_ratio:
                    min_ratio, witness = r, [x.encode(), y.encode()]
    return GapSurvey(params.describe(), (lo, hi), pairs, nonzero, failures, equal,
                     min_ratio, witness)
