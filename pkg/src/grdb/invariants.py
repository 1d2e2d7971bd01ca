"""Numerical invariants of a candidate: chi(O), A^3, K^3, K.c2 and plurigenera."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .orbifold import DIM, QuotientSingularity, plurigenus_contribution
from .series import CycloRational, expand


class InvariantError(ArithmeticError):
    """Two independent computations of the same invariant disagree."""


def _points(basket) -> list[QuotientSingularity]:
    if hasattr(basket, "points"):
        return basket.points
    return list(basket)


@dataclass(frozen=True)
class InvariantSet:
    chi: int
    A3: Fraction
    K3: Fraction
    Kc2: Fraction
    plurigenera: tuple[int, ...] = field(default=())

    def as_dict(self) -> dict:
        return {"chi": self.chi, "A3": fraction_str(self.A3), "K3": fraction_str(self.K3),
                "Kc2": fraction_str(self.Kc2), "plurigenera": list(self.plurigenera)}


def fraction_str(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_fraction(text: str) -> Fraction:
    return Fraction(str(text).strip())


def chi_O(P: CycloRational, k: int) -> int:
    """``1 - h^0(K_X)`` for ``k >= 1``; 0 for Calabi-Yau; 1 for Fano."""
    if k < -1:
        raise ValueError("polarisation index must be at least -1")
    if k == 0:
        return 0
    if k < 0:
        return 1
    return 1 - expand(P, k)[k]


def degree_A3(P: CycloRational) -> Fraction:
    """``lim (1-t)^4 P(t)`` at ``t = 1``."""
    if P.pole_order_at_one() != DIM + 1:
        raise ValueError("Hilbert series does not have a pole of order 4 at t = 1")
    return P.leading_at_one(DIM + 1)


def Kc2(basket: Iterable[QuotientSingularity], chi: int) -> Fraction:
    """Barlow-Kawamata: ``sum (r^2 - 1)/r - 24 chi``."""
    total = Fraction(0)
    for s in _points(basket):
        total += Fraction(s.r * s.r - 1, s.r)
    return total - 24 * chi


def plurigenus_sum(basket, m: int) -> Fraction:
    return sum((plurigenus_contribution(s, m) for s in _points(basket)), Fraction(0))


def K3_from_plurigenus(P: CycloRational, basket, k: int = 1) -> Fraction:
    """Solve the ``m = 2`` plurigenus formula for ``K^3``."""
    if k != 1:
        raise ValueError("the plurigenus formula is used with K = A only")
    chi = chi_O(P, 1)
    P2 = expand(P, 2)[2]
    return 2 * (P2 + 3 * chi - plurigenus_sum(basket, 2))


def plurigenera(chi: int, K3, basket, m_max: int) -> list[int]:
    """``P_1..P_m_max`` from Riemann-Roch; raises if any value is not an integer."""
    K3 = Fraction(K3)
    pts = _points(basket)
    out = []
    for m in range(1, m_max + 1):
        if m == 1:
            val = Fraction(1 - chi)
        else:
            val = (1 - 2 * m) * chi + Fraction(m * (m - 1) * (2 * m - 1), 12) * K3 + plurigenus_sum(pts, m)
        if val.denominator != 1 or val < 0:
            raise InvariantError(f"P_{m} = {val} is not a nonnegative integer")
        out.append(int(val))
    return out


def compute_invariants(P: CycloRational, basket, k: int, m_max: int = 12) -> InvariantSet:
    """All invariants, with every available cross-check enforced."""
    chi = chi_O(P, k)
    A3 = degree_A3(P)
    K3 = Fraction(k) ** 3 * A3
    pts = _points(basket)
    kc2 = Kc2(pts, chi)
    plur: tuple[int, ...] = ()
    if k == 1 and all(s.is_terminal() for s in pts):
        K3p = K3_from_plurigenus(P, pts, 1)
        if K3p != K3:
            raise InvariantError(f"K^3 from plurigenera {K3p} != degree {K3}")
        plur = tuple(plurigenera(chi, K3, pts, m_max))
        series = expand(P, m_max).coefficients
        if list(plur) != list(series[1:]):
            raise InvariantError("plurigenera disagree with the Hilbert series")
    return InvariantSet(chi, A3, K3, kc2, plur)
