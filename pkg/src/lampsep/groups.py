"""Element arithmetic for the concrete groups the maps and separators use.

All semidirect products use right multiplication so that right-multiplying
by a generator reproduces the usual "move/switch" actions:

* ``(f, i) * s = (f + delta_i, i)`` and ``(f, i) * w = (f, i + 1)`` in Z_m wr Z;
* ``(x, i) * a = (x + (p/q)**i, i)`` and ``(x, i) * b = (x, i + 1)`` in M_{p,q}.

Every element has a canonical text encoding (``encode``/``parse``) used as a
set key, a graph vertex label and in reports.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from lampsep.exact_numbers import ValuedScalar, Valuation, ValuationMismatch


def _parse_int_map(body: str) -> dict[int, int]:
    out: dict[int, int] = {}
    body = body.strip()
    if not body:
        return out
    for item in body.split(","):
        k, v = item.split(":")
        out[int(k)] = int(v)
    return out


def _fmt_int_map(items: Iterable[tuple[int, int]]) -> str:
    return "{" + ",".join(f"{k}:{v}" for k, v in items) + "}"


# --------------------------------------------------------------------------
# Z_m wr Z
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class LamplighterElement:
    """Lamp configuration (sorted ``(position, residue)`` pairs, residues nonzero) and position."""

    lamps: tuple[tuple[int, int], ...] = ()
    pos: int = 0
    m: int = 2

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("lamp modulus must be at least 2")
        clean: dict[int, int] = {}
        for j, c in self.lamps:
            clean[j] = (clean.get(j, 0) + c) % self.m
        object.__setattr__(
            self, "lamps", tuple(sorted((j, c) for j, c in clean.items() if c))
        )

    @classmethod
    def identity(cls, m: int = 2) -> "LamplighterElement":
        return cls((), 0, m)

    @classmethod
    def switch(cls, m: int = 2) -> "LamplighterElement":
        return cls(((0, 1),), 0, m)

    @classmethod
    def walk(cls, m: int = 2) -> "LamplighterElement":
        return cls((), 1, m)

    @classmethod
    def from_support(cls, support: Iterable[int], pos: int = 0) -> "LamplighterElement":
        return cls(tuple((j, 1) for j in support), pos, 2)

    @property
    def config(self) -> dict[int, int]:
        return dict(self.lamps)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(j for j, _ in self.lamps)

    def __mul__(self, other: "LamplighterElement") -> "LamplighterElement":
        if self.m != other.m:
            raise ValueError(f"lamp moduli differ: {self.m} vs {other.m}")
        shifted = tuple((j + self.pos, c) for j, c in other.lamps)
        return LamplighterElement(self.lamps + shifted, self.pos + other.pos, self.m)

    def inverse(self) -> "LamplighterElement":
        return LamplighterElement(
            tuple((j - self.pos, -c) for j, c in self.lamps), -self.pos, self.m
        )

    def encode(self) -> str:
        body = f"lamps:{_fmt_int_map(self.lamps)};pos:{self.pos}"
        return body if self.m == 2 else f"m:{self.m};{body}"

    @classmethod
    def parse(cls, text: str) -> "LamplighterElement":
        m = re.fullmatch(r"(?:m:(\d+);)?lamps:\{([^}]*)\};pos:(-?\d+)", text.strip())
        if not m:
            raise ValueError(f"bad lamplighter encoding {text!r}")
        mod = int(m.group(1)) if m.group(1) else 2
        return cls(tuple(_parse_int_map(m.group(2)).items()), int(m.group(3)), mod)


def lamp_multiply(x: LamplighterElement, y: LamplighterElement) -> LamplighterElement:
    return x * y


def lamp_word_length(x: LamplighterElement) -> int:
    """Word length with respect to {s, s^-1, w, w^-1}.

    Each lamp costs min(c, m - c) switches; the lamplighter walks from 0 over
    the whole support and stops at ``pos``, going left first or right first.
    """
    switches = sum(min(c, x.m - c) for _, c in x.lamps)
    pts = list(x.support) + [0, x.pos]
    lo, hi = min(pts), max(pts)
    walk = min((0 - lo) + (hi - lo) + (hi - x.pos), (hi - 0) + (hi - lo) + (x.pos - lo))
    return switches + walk


# --------------------------------------------------------------------------
# Z wr Z
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class WreathZZElement:
    entries: tuple[tuple[int, int], ...] = ()
    pos: int = 0

    def __post_init__(self):
        clean: dict[int, int] = {}
        for j, c in self.entries:
            clean[j] = clean.get(j, 0) + c
        object.__setattr__(
            self, "entries", tuple(sorted((j, c) for j, c in clean.items() if c))
        )

    @classmethod
    def identity(cls) -> "WreathZZElement":
        return cls()

    def __mul__(self, other: "WreathZZElement") -> "WreathZZElement":
        shifted = tuple((j + self.pos, c) for j, c in other.entries)
        return WreathZZElement(self.entries + shifted, self.pos + other.pos)

    def inverse(self) -> "WreathZZElement":
        return WreathZZElement(tuple((j - self.pos, -c) for j, c in self.entries), -self.pos)

    def encode(self) -> str:
        return f"entries:{_fmt_int_map(self.entries)};pos:{self.pos}"

    @classmethod
    def parse(cls, text: str) -> "WreathZZElement":
        m = re.fullmatch(r"entries:\{([^}]*)\};pos:(-?\d+)", text.strip())
        if not m:
            raise ValueError(f"bad Z wr Z encoding {text!r}")
        return cls(tuple(_parse_int_map(m.group(1)).items()), int(m.group(2)))


# --------------------------------------------------------------------------
# M_{p,q} = Z[1/pq] x| Z
# --------------------------------------------------------------------------


def check_mpq_parameters(p: int, q: int) -> None:
    if q == 0 or p == 0 or math.gcd(p, q) != 1 or p * q in (1, -1):
        raise ValueError(f"need coprime p, q with pq != +-1, got p={p}, q={q}")


def _in_z_inv_pq(x: Fraction, p: int, q: int) -> bool:
    den = x.denominator
    for g in (abs(p), abs(q)):
        if g <= 1:
            continue
        while True:
            d = math.gcd(den, g)
            if d == 1:
                break
            den //= d
    return den == 1


@dataclass(frozen=True)
class MpqElement:
    """Pair (x, i) with x in Z[1/pq]; the integer ``i`` acts by (p/q)**i."""

    x: Fraction
    i: int
    p: int
    q: int

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        check_mpq_parameters(self.p, self.q)
        if not _in_z_inv_pq(self.x, self.p, self.q):
            raise ValueError(f"{self.x} is not in Z[1/{self.p * self.q}]")

    @classmethod
    def identity(cls, p: int, q: int) -> "MpqElement":
        return cls(Fraction(0), 0, p, q)

    @classmethod
    def gen_a(cls, p: int, q: int) -> "MpqElement":
        return cls(Fraction(1), 0, p, q)

    @classmethod
    def gen_b(cls, p: int, q: int) -> "MpqElement":
        return cls(Fraction(0), 1, p, q)

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.p, self.q)

    def __mul__(self, other: "MpqElement") -> "MpqElement":
        if (self.p, self.q) != (other.p, other.q):
            raise ValueError("M_{p,q} parameters differ")
        return MpqElement(self.x + self.ratio**self.i * other.x, self.i + other.i, self.p, self.q)

    def inverse(self) -> "MpqElement":
        return MpqElement(-(self.ratio ** (-self.i)) * self.x, -self.i, self.p, self.q)

    def encode(self) -> str:
        return f"x:{self.x.numerator}/{self.x.denominator};i:{self.i}"

    @classmethod
    def parse(cls, text: str, p: int, q: int) -> "MpqElement":
        m = re.fullmatch(r"x:(-?\d+(?:/\d+)?);i:(-?\d+)", text.strip())
        if not m:
            raise ValueError(f"bad M_pq encoding {text!r}")
        return cls(Fraction(m.group(1)), int(m.group(2)), p, q)


def mpq_multiply(g: MpqElement, h: MpqElement) -> MpqElement:
    return g * h


# --------------------------------------------------------------------------
# Affine group k x| k^*
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class AffineElement:
    """The map x -> a*x + b; products compose maps, ``g * h = g o h``."""

    b: ValuedScalar
    a: ValuedScalar

    def __post_init__(self):
        if self.a.valuation != self.b.valuation:
            raise ValuationMismatch("b and a must share a valuation")
        if self.a.is_zero():
            raise ValueError("affine multiplier must be invertible")

    @classmethod
    def identity(cls, valuation: Valuation) -> "AffineElement":
        return cls(ValuedScalar.of(0, valuation), ValuedScalar.of(1, valuation))

    @classmethod
    def translation(cls, b: ValuedScalar) -> "AffineElement":
        return cls(b, b.one())

    @classmethod
    def dilation(cls, a: ValuedScalar) -> "AffineElement":
        return cls(a.zero(), a)

    @property
    def valuation(self) -> Valuation:
        return self.a.valuation

    def __mul__(self, other: "AffineElement") -> "AffineElement":
        return AffineElement(self.b + self.a * other.b, self.a * other.a)

    def inverse(self) -> "AffineElement":
        inv = self.a.inverse()
        return AffineElement(-(self.b * inv), inv)

    def __pow__(self, j: int) -> "AffineElement":
        base = self if j >= 0 else self.inverse()
        result = AffineElement.identity(self.valuation)
        for _ in range(abs(j)):
            result = result * base
        return result

    def act(self, x: ValuedScalar) -> ValuedScalar:
        return self.a * x + self.b

    def encode(self) -> str:
        return f"b:{self.b.encode()};a:{self.a.encode()}"

    @classmethod
    def parse(cls, text: str, valuation: Valuation) -> "AffineElement":
        m = re.fullmatch(r"b:(.*);a:(.*)", text.strip())
        if not m:
            raise ValueError(f"bad affine encoding {text!r}")
        return cls(ValuedScalar.parse(m.group(1), valuation), ValuedScalar.parse(m.group(2), valuation))


def affine_multiply(g: AffineElement, h: AffineElement) -> AffineElement:
    return g * h


def affine_act(g: AffineElement, x: ValuedScalar) -> ValuedScalar:
    return g.act(x)


def conjugates_commute_check(d: AffineElement, delta: AffineElement, J: int) -> bool:
    """Do the conjugates delta^j d delta^-j, |j| <= J, pairwise commute?"""
    if not (d.a == d.a.one() and not d.b.is_zero()):
        raise ValueError("d must be a nontrivial translation (b, 1)")
    if not (delta.b.is_zero() and delta.a != delta.a.one()):
        raise ValueError("delta must be a dilation (0, a) with a != 1")
    conj = [delta**j * d * delta ** (-j) for j in range(-J, J + 1)]
    return all(g * h == h * g for g in conj for h in conj)


# --------------------------------------------------------------------------
# Sym_fin(Z) x| Z
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SymShiftElement:
    """The bijection x -> perm(x) + shift of Z; products compose, ``g * h = g o h``.

    ``perm`` lists ``(x, perm(x))`` for the moved points only.
    """

    perm: tuple[tuple[int, int], ...] = ()
    shift: int = 0

    def __post_init__(self):
        moved = {x: y for x, y in self.perm if x != y}
        if sorted(moved) != sorted(moved.values()):
            raise ValueError("perm is not a bijection on its support")
        object.__setattr__(self, "perm", tuple(sorted(moved.items())))

    @classmethod
    def identity(cls) -> "SymShiftElement":
        return cls()

    @classmethod
    def from_cycles(cls, cycles: Iterable[Iterable[int]]) -> "SymShiftElement":
        mapping: dict[int, int] = {}
        for cyc in cycles:
            cyc = list(cyc)
            for k, x in enumerate(cyc):
                if x in mapping:
                    raise ValueError("cycles must be disjoint")
                mapping[x] = cyc[(k + 1) % len(cyc)]
        return cls(tuple(mapping.items()), 0)

    @property
    def moved(self) -> tuple[int, ...]:
        return tuple(x for x, _ in self.perm)

    def permute(self, x: int) -> int:
        return dict(self.perm).get(x, x)

    def __call__(self, x: int) -> int:
        return self.permute(x) + self.shift

    def __mul__(self, other: "SymShiftElement") -> "SymShiftElement":
        # g(h(x)) = p1(p2(x) + t2) + t1 = rho(p2(x)) + t1 + t2 with rho(y) = p1(y + t2) - t2
        p1 = dict(self.perm)
        p2 = dict(other.perm)
        t2 = other.shift
        pts = set(p2) | {x - t2 for x in p1}
        out = []
        for x in pts:
            y = p2.get(x, x) + t2
            out.append((x, p1.get(y, y) - t2))
        return SymShiftElement(tuple(out), self.shift + other.shift)

    def inverse(self) -> "SymShiftElement":
        # inverse bijection y -> perm^-1(y - t); normal form perm'(y) = perm^-1(y - t) + t
        t = self.shift
        return SymShiftElement(tuple((y + t, x + t) for x, y in self.perm), -t)

    def encode(self) -> str:
        return f"perm:{_fmt_int_map(self.perm)};shift:{self.shift}"

    @classmethod
    def parse(cls, text: str) -> "SymShiftElement":
        m = re.fullmatch(r"perm:\{([^}]*)\};shift:(-?\d+)", text.strip())
        if not m:
            raise ValueError(f"bad Sym_fin x| Z encoding {text!r}")
        return cls(tuple(_parse_int_map(m.group(1)).items()), int(m.group(2)))


def symshift_multiply(g: SymShiftElement, h: SymShiftElement) -> SymShiftElement:
    return g * h


# --------------------------------------------------------------------------
# Generating sets
# --------------------------------------------------------------------------


@dataclass
class GroupSpec:
    """A concrete group with its fixed symmetric generating set."""

    kind: str
    params: dict
    identity: object
    generators: list[tuple[str, object]] = field(default_factory=list)
    parse: Callable[[str], object] | None = None

    def generator(self, name: str):
        return dict(self.generators)[name]


GROUP_KINDS = ("lamplighter", "wreath_zz", "mpq", "affine", "symshift")


def make_group(kind: str, **params) -> GroupSpec:
    """Build a :class:`GroupSpec`.

    Generator names: lower case is the generator, upper case its inverse
    (omitted when the two coincide, e.g. ``s`` in Z_2 wr Z).
    """
    if kind == "lamplighter":
        m = int(params.get("m", 2))
        s, w = LamplighterElement.switch(m), LamplighterElement.walk(m)
        gens = [("s", s)]
        if m > 2:
            gens.append(("S", s.inverse()))
        gens += [("w", w), ("W", w.inverse())]
        return GroupSpec(kind, {"m": m}, LamplighterElement.identity(m), gens,
                         LamplighterElement.parse)
    if kind == "wreath_zz":
        s, w = WreathZZElement(((0, 1),), 0), WreathZZElement((), 1)
        gens = [("s", s), ("S", s.inverse()), ("w", w), ("W", w.inverse())]
        return GroupSpec(kind, {}, WreathZZElement.identity(), gens, WreathZZElement.parse)
    if kind == "mpq":
        p, q = int(params["p"]), int(params["q"])
        check_mpq_parameters(p, q)
        a, b = MpqElement.gen_a(p, q), MpqElement.gen_b(p, q)
        gens = [("a", a), ("A", a.inverse()), ("b", b), ("B", b.inverse())]
        return GroupSpec(kind, {"p": p, "q": q}, MpqElement.identity(p, q), gens,
                         lambda t: MpqElement.parse(t, p, q))
    if kind == "affine":
        val = params["valuation"]
        if isinstance(val, str):
            val = Valuation.parse(val)
        a = params["a"] if isinstance(params["a"], ValuedScalar) else ValuedScalar.parse(str(params["a"]), val)
        b = params["b"] if isinstance(params["b"], ValuedScalar) else ValuedScalar.parse(str(params["b"]), val)
        d, delta = AffineElement.translation(b), AffineElement.dilation(a)
        gens = [("d", d), ("D", d.inverse()), ("g", delta), ("G", delta.inverse())]
        return GroupSpec(kind, {"valuation": val.encode(), "a": a.encode(), "b": b.encode()},
                         AffineElement.identity(val), gens,
                         lambda t: AffineElement.parse(t, val))
    if kind == "symshift":
        sigma = params.get("sigma")
        if sigma is None:
            sigma = SymShiftElement.from_cycles([(0, 1)])
        elif not isinstance(sigma, SymShiftElement):
            sigma = SymShiftElement.from_cycles(sigma)
        shift = SymShiftElement((), 1)
        gens = [("x", sigma)]
        if sigma.inverse() != sigma:
            gens.append(("X", sigma.inverse()))
        gens += [("t", shift), ("T", shift.inverse())]
        return GroupSpec(kind, {"sigma": sigma.encode()}, SymShiftElement.identity(), gens,
                         SymShiftElement.parse)
    raise ValueError(f"unknown group kind {kind!r}; expected one of {GROUP_KINDS}")
