"""Residues of Hilbert series at roots of unity, computed in a prime field.

An isolated point of index ``r`` contributes a simple pole at every
primitive ``d``-th root of unity with ``d | r`` and nothing elsewhere (away
from ``t = 1``).  Matching residues therefore splits basket matching into
one small linear system per ``d``.  For each ``d`` we work modulo a prime
``p = 1 mod d`` in which the roots of unity exist; the systems only depend on
``(d, k, class)`` so their eliminations are cached.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, prod
from operator import mul
from typing import Sequence

import gmpy2

from .orbifold import QuotientSingularity, porb_generic

_FLOOR = 1 << 62


@lru_cache(maxsize=None)
def field_prime(d: int) -> int:
    """The least prime ``p > 2^62`` with ``p = 1 mod d``."""
    p = (_FLOOR // d + 1) * d + 1
    while not gmpy2.is_prime(p):
        p += d
    return p


def _prime_factors(n: int) -> list[int]:
    out, q = [], 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


@lru_cache(maxsize=None)
def primitive_roots(d: int) -> tuple[int, ...]:
    """All primitive ``d``-th roots of unity mod ``field_prime(d)``."""
    p = field_prime(d)
    qs = _prime_factors(d)
    g = 2
    while True:
        z = pow(g, (p - 1) // d, p)
        if all(pow(z, d // q, p) != 1 for q in qs):
            break
        g += 1
    return tuple(pow(z, j, p) for j in range(1, d + 1) if gcd(j, d) == 1)


def _taylor(coeffs: Sequence[int], z: int, order: int, p: int) -> list[int]:
    """Coefficients of ``(t - z)^i``, ``i <= order``, of the polynomial mod p."""
    cur = [c % p for c in coeffs]
    out = []
    for _ in range(order + 1):
        if not cur:
            out.append(0)
            continue
        acc = 0
        quot = [0] * (len(cur) - 1)
        for i in range(len(cur) - 1, -1, -1):
            acc = (acc * z + cur[i]) % p
            if i:
                quot[i - 1] = acc
        out.append(acc)
        cur = quot
    return out


def root_order_mod(coeffs: Sequence[int], d: int) -> int:
    """Multiplicity of one primitive ``d``-th root as a root of the polynomial, mod ``field_prime(d)``.

    Never below the multiplicity over the integers, and equal to it unless
    ``p`` divides a resultant; callers only use it where over-counting is harmless.
    """
    if not any(coeffs):
        return 0
    p = field_prime(d)
    z = primitive_roots(d)[0]
    cur = [c % p for c in coeffs]
    out = 0
    while len(cur) > 1:
        acc = 0
        quot = [0] * (len(cur) - 1)
        for i in range(len(cur) - 1, -1, -1):
            acc = (acc * z + cur[i]) % p
            if i:
                quot[i - 1] = acc
        if acc:
            break
        out += 1
        cur = quot
    return out


class MultiplePole(ValueError):
    pass


def residue(numerator: Sequence[int], denominator: Sequence[int], d: int, z: int) -> int:
    """``lim (t - z) N(t)/prod(1 - t^e)`` mod ``field_prime(d)``, ``z`` a primitive d-th root.

    Raises ``MultiplePole`` if the pole at ``z`` is not simple.
    """
    p = field_prime(d)
    s = sum(1 for e in denominator if e % d == 0)
    if s == 0:
        return 0
    tay = _taylor(numerator, z, s - 1, p)
    if any(tay[:-1]):
        raise MultiplePole(f"pole of order > 1 at a primitive {d}-th root of unity")
    den = 1
    for e in denominator:
        if e % d == 0:
            den = den * (-e * pow(z, e - 1, p)) % p
        else:
            den = den * (1 - pow(z, e, p)) % p
    return tay[-1] * pow(den, -1, p) % p


@lru_cache(maxsize=1 << 16)
def _taylor_at_roots(numerator: tuple[int, ...], d: int, order: int) -> tuple[tuple[int, ...], ...]:
    p = field_prime(d)
    return tuple(tuple(_taylor(numerator, z, order, p)) for z in primitive_roots(d))


_FACTORS: dict[int, list[list[int]]] = {}


def _factor_table(d: int, top: int) -> list[list[int]]:
    """``table[j][e]``: the factor ``1 - t^e`` at the j-th root, differentiated when it vanishes."""
    table = _FACTORS.get(d)
    if table is not None and len(table[0]) > top:
        return table
    p = field_prime(d)
    size = max(top + 1, 2 * len(table[0]) if table else 128)
    table = []
    for z in primitive_roots(d):
        row = [0] * size
        zp = 1  # z^(e-1)
        for e in range(1, size):
            row[e] = (-e * zp) % p if e % d == 0 else (1 - zp * z) % p
            zp = zp * z % p
        table.append(row)
    _FACTORS[d] = table
    return table


def residues(numerator: Sequence[int], denominator: Sequence[int], d: int) -> list[int]:
    """``residue`` at every primitive d-th root, in ``primitive_roots`` order."""
    s = sum(1 for e in denominator if e % d == 0)
    if s == 0:
        return [0] * len(primitive_roots(d))
    return _residues(_taylor_at_roots(tuple(numerator), d, s - 1), denominator, d)


class ResidueEvaluator:
    """``residues`` for one fixed numerator and many denominators with entries ``<= top``.

    With ``symmetry = (eps, c)``, meaning ``f(1/t) = eps t^c f(t)`` for every
    denominator passed in, only half the roots are evaluated: the residue at
    ``1/z`` is ``-eps z^(c-2)`` times the residue at ``z``.
    """

    def __init__(self, numerator: Sequence[int], top: int, symmetry: tuple[int, int] | None = None):
        self.coeffs = tuple(numerator)
        self.top = top
        self.symmetry = symmetry
        self._plans: dict[tuple[int, int], tuple | None] = {}

    def residues(self, denominator: Sequence[int], d: int, s: int) -> list[int]:
        """As ``residues``, given ``s >= 1``, the number of ``e`` divisible by ``d``."""
        plan = self._plans.get((d, s), False)
        if plan is False:
            plan = self._plans[d, s] = self._plan(d, s)
        if plan is None:
            raise MultiplePole(f"pole of order > 1 at a primitive {d}-th root of unity")
        p, rows, tops, half, mirrored, factor = plan
        dens = [prod(map(row.__getitem__, denominator)) % p for row in rows]
        if len(dens) == 1:
            vals = [tops[0] * pow(dens[0], -1, p) % p]
        else:
            prefix = [1]
            for den in dens:
                prefix.append(prefix[-1] * den % p)
            inv = pow(prefix[-1], -1, p)
            vals = [0] * len(dens)
            for j in range(len(dens) - 1, -1, -1):
                vals[j] = tops[j] * inv * prefix[j] % p
                inv = inv * dens[j] % p
        if half is None:
            return vals
        out = vals + vals
        for j, q, v, c in zip(half, mirrored, vals, factor):
            out[j] = v
            out[q] = v * c % p
        return out

    def _plan(self, d: int, s: int) -> tuple | None:
        try:
            tops = _leading(_taylor_at_roots(self.coeffs, d, s - 1), d)
        except MultiplePole:
            return None
        p = field_prime(d)
        table = _factor_table(d, self.top)
        if self.symmetry is None or d <= 2:
            return p, list(table), tops, None, None, None
        eps, c = self.symmetry
        roots = primitive_roots(d)
        where = {z: j for j, z in enumerate(roots)}
        half, mirrored, factor = [], [], []
        for j, z in enumerate(roots):
            q = where[pow(z, -1, p)]
            if j < q:
                half.append(j)
                mirrored.append(q)
                factor.append(-eps * pow(z, c - 2, p) % p)
        return p, [table[j] for j in half], [tops[j] for j in half], half, mirrored, factor


def _leading(tays, d: int) -> tuple[int, ...]:
    """Simple-pole numerators from the Taylor data; raises on a higher order pole."""
    for tay in tays:
        if any(tay[:-1]):
            raise MultiplePole(f"pole of order > 1 at a primitive {d}-th root of unity")
    return tuple(tay[-1] for tay in tays)


def _residues(tays, denominator: Sequence[int], d: int) -> list[int]:
    return _divide(_leading(tays, d), denominator, d)


def _divide(tops: Sequence[int], denominator: Sequence[int], d: int) -> list[int]:
    p = field_prime(d)
    table = _factor_table(d, max(denominator))
    if len(tops) == 1:
        return [tops[0] * pow(prod(map(table[0].__getitem__, denominator)) % p, -1, p) % p]
    dens = [prod(map(row.__getitem__, denominator)) % p for row in table]
    # one inversion for all roots: prefix products, then unwind
    prefix = [1]
    for den in dens:
        prefix.append(prefix[-1] * den % p)
    inv = pow(prefix[-1], -1, p)
    out = [0] * len(dens)
    for j in range(len(dens) - 1, -1, -1):
        out[j] = tops[j] * inv * prefix[j] % p
        inv = inv * dens[j] % p
    return out


@lru_cache(maxsize=None)
def porb_residues(s: QuotientSingularity, k: int, d: int) -> tuple[int, ...]:
    """Residues of the contribution of ``s`` at the primitive d-th roots (``d | r``)."""
    C = porb_generic(s, k).inverse_numerator.coeffs
    den = (1, 1, 1, s.r)
    return tuple(residue(C, den, d, z) for z in primitive_roots(d))


@dataclass(frozen=True)
class LocalSystem:
    """Row-reduced residue matrix of the index-``d`` types, with the row operations."""

    d: int
    types: tuple[QuotientSingularity, ...]
    pivots: tuple[int, ...]
    free: tuple[int, ...]
    reduced: tuple[tuple[int, ...], ...]  # rank rows of the RREF
    transform: tuple[tuple[int, ...], ...]  # all row operations (phi(d) x phi(d))

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def apply(self, rhs: Sequence[int], limit: int | None = None) -> list[int] | None:
        """Transformed right-hand side, or ``None`` if inconsistent.

        With ``limit`` and no free columns the transformed values are the
        multiplicities themselves, and any of them above ``limit`` also gives
        ``None`` (checked row by row, so a typical rejection is one product).
        """
        p = field_prime(self.d)
        for row in self.transform[self.rank:]:
            if sum(map(mul, row, rhs)) % p:
                return None
        cap = limit if limit is not None and not self.free else p
        out = []
        for row in self.transform[: self.rank]:
            v = sum(map(mul, row, rhs)) % p
            if v > cap:
                return None
            out.append(v)
        return out

    def pivot_values(self, trhs: Sequence[int], free_values: Sequence[int]) -> list[int]:
        p = field_prime(self.d)
        out = []
        for i, row in enumerate(self.reduced):
            v = trhs[i]
            for q, f in zip(self.free, free_values):
                v -= row[q] * f
            out.append(v % p)
        return out


@lru_cache(maxsize=None)
def local_system(d: int, k: int, types: tuple[QuotientSingularity, ...]) -> LocalSystem:
    p = field_prime(d)
    n_rows = len(primitive_roots(d))
    n = len(types)
    cols = [porb_residues(s, k, d) for s in types]
    rows = [[cols[q][i] for q in range(n)] + [int(i == j) for j in range(n_rows)] for i in range(n_rows)]
    pivots: list[int] = []
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, n_rows) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(n_rows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    free = tuple(q for q in range(n) if q not in pivots)
    reduced = tuple(tuple(row[:n]) for row in rows[:r])
    transform = tuple(tuple(row[n:]) for row in rows)
    return LocalSystem(d, types, tuple(pivots), free, reduced, transform)
