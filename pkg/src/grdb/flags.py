"""Heuristic realisability checks on a candidate ``X ⊂ P(W)``.

Every check looks at the coordinate strata ``Π_g``, where only the variables
whose weight is divisible by ``g`` are nonzero.  Equations are written as sums
of monomials in the key variables of the format.  A key variable of weight
``χ`` restricts to a nonzero form on ``Π_g`` iff ``χ`` lies in the semigroup
of the stratum weights, and an equation survives iff one of its monomials does.
The dimension of ``X ∩ Π_g`` is read from the pole of the Hilbert series at the
primitive ``g``-th roots of unity, capped by the number of surviving equations.

None of this proves quasismoothness.  It catches the failures that are
visible from degrees alone.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

from .formats import FormatInstance
from .series import root_order

FLAG_NAMES = ("well_formed", "variable_usage", "tangent_monomial", "index_capacity")


def semigroup_members(gens: Iterable[int], upto: int) -> list[bool]:
    """``member[n]`` for ``0 <= n <= upto``: is ``n`` a nonnegative combination of ``gens``?"""
    member = [False] * (upto + 1)
    if upto >= 0:
        member[0] = True
    for g in sorted(set(gens)):
        if g <= 0:
            continue
        for n in range(g, upto + 1):
            if member[n - g]:
                member[n] = True
    return member


def in_semigroup(n: int, gens: Sequence[int]) -> bool:
    return n >= 0 and semigroup_members(gens, n)[n]


@dataclass(frozen=True)
class Stratum:
    """``Π_g`` for ``g`` the gcd of the weights it keeps."""

    g: int
    indices: tuple[int, ...]
    weights: tuple[int, ...]
    surviving: tuple[int, ...]  # equations not vanishing identically on the stratum
    cut: int  # how many independent conditions the surviving equations impose

    @property
    def dim(self) -> int:
        """Expected dimension of ``X ∩ Π_g`` (negative when empty)."""
        return len(self.indices) - 1 - self.cut


def strata(f: FormatInstance, W: Sequence[int]) -> list[Stratum]:
    """One stratum per distinct index set ``{i : h | a_i}``, ``h > 1``."""
    eqs = f.equation_monomials
    top = max((sum(m) for e in eqs for m in e), default=0)
    seen: dict[tuple[int, ...], int] = {}
    for h in sorted({d for a in W for d in range(2, a + 1) if a % d == 0}):
        S = tuple(i for i, a in enumerate(W) if a % h == 0)
        if S not in seen:
            g = 0
            for i in S:
                g = gcd(g, W[i])
            seen[S] = g
    out = []
    for S, g in seen.items():
        sub = tuple(W[i] for i in S)
        member = semigroup_members(sub, top)
        surviving = tuple(j for j, e in enumerate(eqs) if any(all(member[c] for c in m) for m in e))
        cut = min(f.codim, len(surviving), root_order(f.numerator, g))
        out.append(Stratum(g, S, sub, surviving, cut))
    return out


def well_formed(f: FormatInstance, W: Sequence[int], dim: int = 3) -> bool:
    """``P(W)`` has coprime weights and ``X`` meets its singular strata in codimension >= 2."""
    g = 0
    for a in W:
        g = gcd(g, a)
    if g != 1:
        return False
    return all(s.dim <= dim - 2 for s in strata(f, W))


def variable_usage(f: FormatInstance, W: Sequence[int]) -> bool:
    """Every variable can appear in some key variable of the format."""
    chis = [c for c in f.key_weights if c > 0]
    member = semigroup_members(W, max(chis, default=0))
    return all(any(c >= a and member[c - a] for c in chis) for a in W)


def _matching(rows: list[set[int]]) -> int:
    """Size of a maximum matching between rows and the columns they list."""
    owner: dict[int, int] = {}

    def grow(i: int, seen: set[int]) -> bool:
        for c in sorted(rows[i]):
            if c in seen:
                continue
            seen.add(c)
            if c not in owner or grow(owner[c], seen):
                owner[c] = i
                return True
        return False

    return sum(grow(i, set()) for i in range(len(rows)))


def _tangent_variables(eq, W: Sequence[int], S: Stratum, member: list[bool]) -> set[int]:
    """Variables ``x_e`` off the stratum that appear linearly in ``eq`` there."""
    out = set()
    off = [e for e in range(len(W)) if e not in S.indices]
    for mono in eq:
        for pos, c in enumerate(mono):
            rest = mono[:pos] + mono[pos + 1:]
            if not all(member[x] for x in rest):
                continue
            for e in off:
                if c >= W[e] and member[c - W[e]]:
                    out.add(e)
    return out


def tangent_monomial_failures(f: FormatInstance, W: Sequence[int]) -> list[tuple[int, ...]]:
    """Strata (as weight tuples) at which the Jacobian cannot have full rank.

    Where ``X`` meets a stratum, the equations vanishing on it must supply
    ``codim - cut`` monomials ``x_e * m`` with ``m`` on the stratum and the
    ``x_e`` pairwise distinct.
    """
    eqs = f.equation_monomials
    top = max((sum(m) for e in eqs for m in e), default=0)
    bad = []
    for S in strata(f, W):
        need = f.codim - S.cut
        if S.dim < 0 or need <= 0:
            continue
        member = semigroup_members(S.weights, top)
        rows = [_tangent_variables(e, W, S, member) for j, e in enumerate(eqs) if j not in S.surviving]
        if _matching(rows) < need:
            bad.append(S.weights)
    return bad


def tangent_monomial(f: FormatInstance, W: Sequence[int]) -> bool:
    return not tangent_monomial_failures(f, W)


def _line_points(eq, a: int, b: int, g: int, member: list[bool]) -> int:
    """Upper bound for the points of index ``g`` that ``eq`` cuts on ``P(a, b)``."""
    d = sum(eq[0])
    n = sum(1 for i in range(d // a + 1) if (d - a * i) % b == 0)
    count = max(n - 1, 0)  # both coordinates nonzero
    for v in (a, b):
        # a vertex of weight g lies on X unless some monomial is a pure power there
        if v == g and not any(all(c % v == 0 for c in m) for m in eq if all(member[c] for c in m)):
            count += 1
    return count


def index_capacity(f: FormatInstance, W: Sequence[int]) -> dict[int, int | None]:
    """Most points of each index that ``X`` can carry; ``None`` where the count gives no bound.

    A point of index exactly ``g`` lies on the stratum whose weight gcd is
    ``g``, so indices absent from the result have capacity zero.
    """
    eqs = f.equation_monomials
    top = max((sum(m) for e in eqs for m in e), default=0)
    caps: dict[int, int | None] = {}
    for S in strata(f, W):
        if S.dim < 0:
            caps[S.g] = 0
        elif len(S.indices) == 1:
            caps[S.g] = 1
        elif len(S.indices) == 2 and S.dim == 0:
            member = semigroup_members(S.weights, top)
            a, b = S.weights
            caps[S.g] = min(_line_points(eqs[j], a, b, S.g, member) for j in S.surviving)
        else:
            caps[S.g] = None
    return caps


def index_capacity_ok(f: FormatInstance, W: Sequence[int], points) -> bool:
    caps = index_capacity(f, W)
    counts: dict[int, int] = {}
    for s in points:
        counts[s.r] = counts.get(s.r, 0) + 1
    for r, n in counts.items():
        cap = caps.get(r, 0)
        if cap is not None and n > cap:
            return False
    return True


def realisability_flags(f: FormatInstance, W: Sequence[int], baskets, dim: int = 3) -> dict[str, bool]:
    """All four flags.  Index capacity passes if some listed basket fits."""
    baskets = list(baskets)
    fits = any(index_capacity_ok(f, W, list(getattr(b, "points", b))) for b in baskets) if baskets else True
    return {
        "well_formed": well_formed(f, W, dim),
        "variable_usage": variable_usage(f, W),
        "tangent_monomial": tangent_monomial(f, W),
        "index_capacity": fits,
    }
