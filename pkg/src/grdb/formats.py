"""Gorenstein formats: complete intersections, Gr(2,5), OGr(5,10) and products.

Half-integral grading vectors ``w`` are carried doubled (``w2 = 2w``) so all
arithmetic stays in the integers.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Sequence

from .series import IntPoly, is_gorenstein_symmetric, product_one_minus

FAMILIES = ("ci", "gr25", "gr25xh", "ogr510")


class FormatError(ValueError):
    pass


@dataclass(frozen=True)
class FormatInstance:
    family: str
    codim: int
    key_weights: tuple[int, ...]
    equation_degrees: tuple[int, ...]
    numerator: IntPoly
    adjunction: int
    params: dict = field(default_factory=dict, compare=False, hash=False)
    # each equation as a sum of monomials in key variables, a monomial being
    # the tuple of its factors' weights; empty means one key variable per equation
    equations: tuple = field(default=(), compare=False, hash=False)

    @property
    def equation_monomials(self) -> tuple[tuple[tuple[int, ...], ...], ...]:
        if self.equations:
            return self.equations
        return tuple(((d,),) for d in self.equation_degrees)

    @property
    def chi_max(self) -> int:
        return max(self.key_weights)

    def check(self) -> None:
        N = self.numerator
        if N[0] != 1 or N.degree != self.adjunction or N[self.adjunction] != (-1) ** self.codim:
            raise FormatError(f"malformed numerator {N}")
        if not is_gorenstein_symmetric(N, self.adjunction, self.codim):
            raise FormatError(f"numerator {N} is not Gorenstein symmetric")


def _half(x2: int) -> str:
    return str(x2 // 2) if x2 % 2 == 0 else f"{x2}/2"


def format_w(w2: Sequence[int]) -> str:
    """Render a doubled grading vector the way the tables print it."""
    if all(x % 2 == 0 for x in w2):
        return "(" + ", ".join(str(x // 2) for x in w2) + ")"
    return "1/2(" + ", ".join(str(x) for x in w2) + ")"


def parse_w(text: str) -> tuple[int, ...]:
    """Parse ``"0,1,1,1,1"`` or ``"1/2,3/2,..."`` or ``"1/2(1,1,3,3,3)"`` into doubled ints."""
    text = text.strip()
    if text.startswith("1/2(") and text.endswith(")"):
        return tuple(int(x) for x in text[4:-1].split(","))
    text = text.strip("()")
    out = []
    for part in text.split(","):
        q = Fraction(part.strip())
        if q.denominator not in (1, 2):
            raise FormatError(f"weight {part!r} is not a half-integer")
        out.append(int(2 * q))
    return tuple(out)


def ci_format(degrees: Sequence[int]) -> FormatInstance:
    degrees = tuple(sorted(int(d) for d in degrees))
    if not degrees:
        raise FormatError("a complete intersection needs at least one equation")
    if min(degrees) < 2:
        raise FormatError("equations of degree < 2 are not allowed")
    f = FormatInstance("ci", len(degrees), degrees, degrees, product_one_minus(degrees),
                       sum(degrees), {"degrees": list(degrees)})
    return f


def _check_w2(w2: Sequence[int], n: int = 5) -> tuple[int, ...]:
    w2 = tuple(int(x) for x in w2)
    if len(w2) != n:
        raise FormatError(f"expected {n} weights")
    if len({x % 2 for x in w2}) != 1:
        raise FormatError("weights must be all integers or all half-odd-integers")
    if list(w2) != sorted(w2):
        raise FormatError("weights must be sorted ascending")
    return w2


def gr25_key_weights(w2: Sequence[int]) -> tuple[int, ...]:
    """Pluecker degrees ``w_i + w_j`` in row order 12,13,14,15,23,24,25,34,35,45."""
    return tuple((w2[i] + w2[j]) // 2 for i, j in combinations(range(5), 2))


def _pfaffian_monomials(w2: Sequence[int]) -> tuple:
    """The five 4x4 Pfaffians of the generic skew 5x5 matrix, as weight monomials."""
    def m(i, j):
        return (w2[i] + w2[j]) // 2

    eqs = []
    for i in range(5):
        a, b, c, d = (j for j in range(5) if j != i)
        eqs.append(((m(a, b), m(c, d)), (m(a, c), m(b, d)), (m(a, d), m(b, c))))
    return tuple(eqs)


def gr25_format(w2: Sequence[int], positive: bool = True) -> FormatInstance:
    """Gr(2,5) format with grading ``w = w2/2``.

    ``positive`` enforces strictly positive key weights (needed for threefolds).
    """
    w2 = _check_w2(w2)
    chi = gr25_key_weights(w2)
    if positive and min(chi) <= 0:
        raise FormatError("key weights must be positive")
    s2 = sum(w2)
    k = s2  # 2 * sum(w)
    # d_j = sum(w) - w_(6-j)
    degs = tuple(sorted((s2 - x) // 2 for x in w2))
    terms: dict[int, int] = {0: 1}
    for d in degs:
        terms[d] = terms.get(d, 0) - 1
        terms[k - d] = terms.get(k - d, 0) + 1
    terms[k] = terms.get(k, 0) - 1
    f = FormatInstance("gr25", 3, chi, degs, IntPoly.from_terms(terms), k, {"w2": list(w2)},
                       _pfaffian_monomials(w2))
    f.check()
    return f


def ogr510_weights(u: int, w2: Sequence[int]) -> tuple[int, tuple[int, ...], tuple[int, ...]]:
    """``(wt x, (wt x_i), (wt x_ij))`` for the OGr(5,10) grading ``(u, w)``."""
    s2 = sum(w2)
    xi = tuple(u + (s2 - x) // 2 for x in w2)
    xij = tuple((w2[i] + w2[j]) // 2 + u for i, j in combinations(range(5), 2))
    return u, xi, xij


def _spinor_monomials(u: int, w2: Sequence[int]) -> tuple:
    """``x x_i = Pf_i(x_jk)`` and ``sum_j x_ij x_j = 0``, as weight monomials."""
    x, xi, xij = ogr510_weights(u, w2)
    pair = {p: xij[n] for n, p in enumerate(combinations(range(5), 2))}

    def m(i, j):
        return pair[(min(i, j), max(i, j))]

    eqs = []
    for i in range(5):
        a, b, c, d = (j for j in range(5) if j != i)
        eqs.append(((x, xi[i]), (m(a, b), m(c, d)), (m(a, c), m(b, d)), (m(a, d), m(b, c))))
        eqs.append(tuple((m(i, j), xi[j]) for j in range(5) if j != i))
    return tuple(eqs)


def ogr510_format(u: int, w2: Sequence[int]) -> FormatInstance:
    """OGr(5,10) format.  First syzygies sit in degrees ``k/2 - wt(x_v)``."""
    w2 = _check_w2(w2)
    if u < 1:
        raise FormatError("u must be positive")
    if w2[0] + w2[1] < 0:
        raise FormatError("need w_i + w_j >= 0 so that u is the smallest weight")
    x, xi, xij = ogr510_weights(u, w2)
    variables = (x,) + xi + xij
    s2 = sum(w2)
    k = 2 * s2 + 8 * u  # 4|w| + 8u
    eqs = tuple(sorted([2 * u + (s2 - x2) // 2 for x2 in w2] + [2 * u + (s2 + x2) // 2 for x2 in w2]))
    terms: dict[int, int] = {0: 1, k: -1}

    def add(e: int, c: int):
        terms[e] = terms.get(e, 0) + c

    for e in eqs:
        add(e, -1)
        add(k - e, 1)
    for v in variables:
        g = k // 2 - v
        add(g, 1)
        add(k - g, -1)
    f = FormatInstance("ogr510", 5, variables, eqs, IntPoly.from_terms(terms), k,
                       {"u": u, "w2": list(w2)}, _spinor_monomials(u, w2))
    f.check()
    return f


def product_format(f: FormatInstance, degrees: Sequence[int]) -> FormatInstance:
    """Cut ``f`` by extra hypersurfaces of the given degrees."""
    degrees = tuple(sorted(int(d) for d in degrees))
    if not degrees:
        return f
    g = ci_format(degrees)
    family = f.family
    if f.family == "gr25":
        family = "gr25xh"
    params = dict(f.params)
    params["degrees"] = list(params.get("degrees", [])) + list(degrees) if f.family == "ci" else list(degrees)
    if f.family == "ci":
        return ci_format(f.equation_degrees + degrees)
    return FormatInstance(family, f.codim + g.codim, f.key_weights + g.key_weights,
                          tuple(sorted(f.equation_degrees + degrees)), f.numerator * g.numerator,
                          f.adjunction + g.adjunction, params,
                          f.equation_monomials + g.equation_monomials)


def _partitions(total: int, parts: int, lo: int, hi: int | None = None) -> Iterator[tuple[int, ...]]:
    """Nondecreasing tuples of ``parts`` integers in ``[lo, hi]`` summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts * lo > total:
        return
    top = total // parts if hi is None else min(hi, total // parts)
    start = lo if hi is None else max(lo, total - (parts - 1) * hi)
    for first in range(start, top + 1):
        for rest in _partitions(total - first, parts - 1, first, hi):
            yield (first,) + rest


def _sorted_same_parity(total: int, min_pair: int) -> Iterator[tuple[int, ...]]:
    """Sorted 5-tuples of one parity with sum ``total`` and ``x1 + x2 >= min_pair``."""
    for a2 in range((min_pair + 1) // 2 if min_pair > 0 else 0, max(total, 0) // 3 + 2):
        for a1 in range(min_pair - a2, a2 + 1):
            if (a1 - a2) % 2:
                continue
            rest = total - a1 - a2 - 3 * a2
            if rest < 0 or rest % 2:
                continue
            for ys in _partitions(rest // 2, 3, 0):
                yield (a1, a2) + tuple(a2 + 2 * y for y in ys)


def enumerate_gradings(family: str, k: int, dim: int = 3, codim: int | None = None,
                       hypersurfaces: int = 1) -> list[FormatInstance]:
    """All normalised formats of ``family`` with adjunction number ``k``."""
    out: list[FormatInstance] = []
    if k < 1:
        return out
    if family == "ci":
        if codim is None:
            raise FormatError("complete intersections need a codimension")
        for degs in _partitions(k, codim, 2):
            out.append(ci_format(degs))
    elif family == "gr25":
        # key weights are kept strictly positive (w1 + w2 > 0)
        for w2 in _sorted_same_parity(k, 2):
            out.append(gr25_format(w2))
        out.sort(key=lambda f: tuple(f.params["w2"]))
    elif family == "gr25xh":
        for kg in range(1, k - 2 * hypersurfaces + 1):
            for g in enumerate_gradings("gr25", kg, dim):
                for degs in _partitions(k - kg, hypersurfaces, 2):
                    out.append(product_format(g, degs))
    elif family == "ogr510":
        for u in range(1, k // 8 + 1):
            rest = k - 8 * u
            if rest % 2:
                continue
            for w2 in _sorted_same_parity(rest // 2, 0):
                out.append(ogr510_format(u, w2))
        out.sort(key=lambda f: (f.params["u"], tuple(f.params["w2"])))
    else:
        raise FormatError(f"unknown family {family!r}")
    return out
