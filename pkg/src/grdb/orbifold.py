"""Orbifold Riemann--Roch contributions of isolated cyclic quotient points.

A point ``1/r(b1,b2,b3)`` is recorded with its weights relative to the
polarising divisor ``A`` (with ``K_X = kA``).  Its contribution to the Hilbert
series of a threefold is ``C(t) / ((1-t)^3 (1-t^r))`` where ``C`` inverts
``B = prod (1-t^b)/(1-t)`` modulo ``A_r = (1-t^r)/(1-t)`` and is supported on
the window ``[floor((k+4)/2) + 1, floor((k+4)/2) + r - 1]``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .series import CycloRational, IntPoly, reduce_mod_A

DIM = 3


@dataclass(frozen=True, order=True)
class QuotientSingularity:
    """The isolated cyclic quotient point ``1/r(weights)``.

    Weights are reduced into ``[1, r-1]`` and sorted; only permutations are
    quotiented out, because the contribution depends on the weights relative
    to the polarisation (``1/3(1,1,1)`` and ``1/3(2,2,2)`` are isomorphic germs
    with opposite contributions).
    """

    r: int
    weights: tuple[int, int, int]

    def __post_init__(self):
        if self.r < 2:
            raise ValueError("index must be at least 2")
        w = tuple(sorted(int(b) % self.r for b in self.weights))
        if len(w) != DIM:
            raise ValueError("expected three weights")
        if any(gcd(b, self.r) != 1 for b in w):
            raise ValueError(f"1/{self.r}{w} is not an isolated point")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "_hash", hash((self.r, w)))

    def __hash__(self) -> int:
        return self._hash

    @classmethod
    def parse(cls, text: str) -> "QuotientSingularity":
        m = re.fullmatch(r"\s*1/(\d+)\s*\(\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\)\s*", text)
        if not m:
            raise ValueError(f"cannot parse singularity {text!r}")
        r, a, b, c = map(int, m.groups())
        return cls(r, (a, b, c))

    def __str__(self) -> str:
        return f"1/{self.r}({self.weights[0]},{self.weights[1]},{self.weights[2]})"

    @property
    def weight_sum(self) -> int:
        return sum(self.weights)

    def polarisation_index(self) -> int:
        """The residue ``k mod r`` compatible with ``K_X = kA`` at this point."""
        return (-self.weight_sum) % self.r

    def is_gorenstein(self) -> bool:
        return self.weight_sum % self.r == 0

    def is_terminal(self) -> bool:
        """Terminal lemma: two weights are opposite mod r (the third is a unit)."""
        a, b, c = self.weights
        r = self.r
        return (a + b) % r == 0 or (a + c) % r == 0 or (b + c) % r == 0

    def is_canonical(self) -> bool:
        """Reid--Tai: every nontrivial group element has age at least one."""
        r = self.r
        return all(sum((j * b) % r for b in self.weights) >= r for j in range(1, r))

    def isomorphism_class(self) -> "QuotientSingularity":
        """Minimal triple under permutations and multiplication by units."""
        r = self.r
        best = None
        for u in range(1, r):
            if gcd(u, r) != 1:
                continue
            w = tuple(sorted((u * b) % r for b in self.weights))
            if best is None or w < best:
                best = w
        return QuotientSingularity(r, best)


@dataclass(frozen=True)
class OrbContribution:
    singularity: QuotientSingularity
    k: int
    inverse_numerator: IntPoly

    @property
    def series(self) -> CycloRational:
        return CycloRational(self.inverse_numerator, (1,) * DIM + (self.singularity.r,))

    @property
    def window(self) -> tuple[int, int]:
        return support_window(self.singularity.r, self.k)


def support_window(r: int, k: int) -> tuple[int, int]:
    lo = (k + DIM + 1) // 2 + 1
    return lo, lo + r - 2


def b_poly(r: int, weights) -> IntPoly:
    """``prod (1 - t^b)/(1 - t)`` with each ``b`` taken mod ``r``."""
    out = IntPoly.one()
    for b in weights:
        out = out * IntPoly.a_poly(b % r)
    return out


def _unit_inverse_factor(r: int, b: int) -> IntPoly:
    # (1 + t^b + ... + t^(b(b'-1))) * (1-t^b)/(1-t) = (1-t^(bb'))/(1-t) = 1 mod A_r
    bi = pow(b, -1, r)
    return IntPoly.from_terms({(b * j) % r: 1 for j in range(bi)})


@lru_cache(maxsize=None)
def _porb_numerator(r: int, weights: tuple[int, ...], k: int) -> IntPoly:
    inv = IntPoly.one()
    for b in weights:
        inv = reduce_mod_A(inv * _unit_inverse_factor(r, b), r, (0, r - 2))
    return reduce_mod_A(inv, r, support_window(r, k))


def porb_generic(s: QuotientSingularity, k: int) -> OrbContribution:
    """Contribution of ``s`` to the Hilbert series of a threefold with ``K = kA``."""
    if k < -1:
        raise ValueError("polarisation index must be at least -1")
    C = _porb_numerator(s.r, s.weights, k)
    assert (C * b_poly(s.r, s.weights) - IntPoly.one()).is_zero() or \
        IntPoly.a_poly(s.r).divides(C * b_poly(s.r, s.weights) - IntPoly.one())
    return OrbContribution(s, k, C)


def porb(s: QuotientSingularity, k: int) -> CycloRational:
    return porb_generic(s, k).series


def canonical_m(r: int, a: int) -> tuple[int, int]:
    """``(m, a')`` with ``0 < m <= r/2`` and ``a' m = -1 mod r``, ``a'`` in ``{a, r-a}``."""
    if r < 2 or gcd(a, r) != 1:
        raise ValueError(f"a={a} is not a unit mod r={r}")
    for aa in (a % r, (-a) % r):
        m = (-pow(aa, -1, r)) % r
        if 0 < m <= r // 2:
            return m, aa
    raise AssertionError("unreachable")


def inverse_numerator_closed(r: int, a: int) -> IntPoly:
    """Inverse numerator of ``1/r(r-1, a, r-a)`` at ``k = 1`` by the min formula."""
    m, _ = canonical_m(r, a)
    terms = {}
    for i in range(r - 1):
        ia = (-i * m) % r or r
        terms[i + 3] = -min(m, abs(m - ia))
    return IntPoly.from_terms(terms)


def _terminal_a(s: QuotientSingularity) -> int:
    """``a`` such that ``s = 1/r(r-1, a, r-a)``."""
    r = s.r
    w = list(s.weights)
    if r - 1 not in w:
        raise ValueError(f"{s} is not of the form 1/r(r-1,a,r-a)")
    w.remove(r - 1)
    if (w[0] + w[1]) % r:
        raise ValueError(f"{s} is not of the form 1/r(r-1,a,r-a)")
    return w[0]


def plurigenus_contribution(s: QuotientSingularity, m: int) -> Fraction:
    """``c_m(P) = sum_{i<m} ib(r-ib)/(2r)`` with ``ab = 1 mod r`` (bars reduce mod r)."""
    if m < 1:
        raise ValueError("m must be positive")
    a = _terminal_a(s)
    r = s.r
    b = pow(a, -1, r)
    total = Fraction(0)
    for i in range(1, m):
        ib = (i * b) % r
        total += Fraction(ib * (r - ib), 2 * r)
    return total


def terminal_types(r: int, k: int) -> list[QuotientSingularity]:
    """Terminal points ``1/r(a, -a, -k)`` of index ``r`` compatible with ``K = kA``."""
    if gcd(k, r) != 1:
        return []
    out = {QuotientSingularity(r, (a, r - a, -k)) for a in range(1, r // 2 + 1) if gcd(a, r) == 1}
    return sorted(out)


def canonical_types(r: int, k: int) -> list[QuotientSingularity]:
    """Isolated canonical points of index ``r`` whose weights sum to ``-k`` mod ``r``."""
    units = [b for b in range(1, r) if gcd(b, r) == 1]
    out = []
    for i, a in enumerate(units):
        for j in range(i, len(units)):
            b = units[j]
            c = (-k - a - b) % r
            if c < b or gcd(c, r) != 1:
                continue
            s = QuotientSingularity(r, (a, b, c))
            if s.is_canonical():
                out.append(s)
    return sorted(set(out))


SINGULARITY_CLASSES = ("terminal", "canonical-isolated")


@lru_cache(maxsize=None)
def _types(r: int, k: int, cls: str) -> tuple[QuotientSingularity, ...]:
    if cls == "terminal":
        return tuple(terminal_types(r, k))
    if cls == "canonical-isolated":
        return tuple(canonical_types(r, k))
    raise ValueError(f"unknown singularity class {cls!r}")


def singularity_types(r: int, k: int, cls: str) -> list[QuotientSingularity]:
    return list(_types(r, k, cls))

