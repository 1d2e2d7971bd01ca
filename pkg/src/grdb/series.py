"""Exact integer polynomials, cyclotomic-denominator rational functions and
truncated power series.

Everything here is integral and immutable.  A rational function is stored as
a numerator over a multiset of exponents ``e``, each standing for a factor
``(1 - t^e)``; the denominator is never multiplied out.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence


def _trim(coeffs: Iterable[int]) -> tuple[int, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class IntPoly:
    """Dense integer polynomial; ``coeffs[i]`` is the coefficient of ``t^i``."""

    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(int(c) for c in self.coeffs))

    @classmethod
    def from_terms(cls, terms: Mapping[int, int]) -> "IntPoly":
        if not terms:
            return cls()
        if min(terms) < 0:
            raise ValueError("negative exponent")
        c = [0] * (max(terms) + 1)
        for e, v in terms.items():
            c[e] += v
        return cls(tuple(c))

    @classmethod
    def monomial(cls, e: int, c: int = 1) -> "IntPoly":
        return cls.from_terms({e: c})

    @classmethod
    def one(cls) -> "IntPoly":
        return cls((1,))

    @classmethod
    def one_minus_t(cls, e: int) -> "IntPoly":
        """The binomial ``1 - t^e``."""
        if e < 1:
            raise ValueError("exponent must be positive")
        return cls.from_terms({0: 1, e: -1})

    @classmethod
    def a_poly(cls, r: int) -> "IntPoly":
        """``A_r = (1 - t^r)/(1 - t) = 1 + t + ... + t^(r-1)``."""
        return cls((1,) * r)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def terms(self) -> dict[int, int]:
        return {i: c for i, c in enumerate(self.coeffs) if c}

    def low_degree(self) -> int:
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return -1

    def __add__(self, other: "IntPoly") -> "IntPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPoly(tuple(out))

    def __neg__(self) -> "IntPoly":
        return IntPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        return self + (-other)

    def __mul__(self, other) -> "IntPoly":
        if isinstance(other, int):
            return IntPoly(tuple(other * c for c in self.coeffs))
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return IntPoly()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return IntPoly(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "IntPoly":
        out = IntPoly.one()
        for _ in range(n):
            out = out * self
        return out

    def shift(self, e: int) -> "IntPoly":
        """Multiply by ``t^e`` (``e`` may be negative if no terms fall below 0)."""
        if e >= 0:
            return IntPoly((0,) * e + self.coeffs)
        if any(self.coeffs[:-e]):
            raise ValueError("shift would produce negative exponents")
        return IntPoly(self.coeffs[-e:])

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def reciprocal(self, k: int) -> "IntPoly":
        """``t^k * p(1/t)``; requires ``k >= degree``."""
        if k < self.degree:
            raise ValueError("k below degree")
        return IntPoly(tuple(reversed(self.coeffs + (0,) * (k - self.degree)))) if self.coeffs else IntPoly()

    def divmod(self, other: "IntPoly") -> tuple["IntPoly", "IntPoly"]:
        """Division by a polynomial with leading coefficient +-1."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        lead = other.coeffs[-1]
        if lead not in (1, -1):
            raise ValueError("divisor must be monic up to sign")
        rem = list(self.coeffs)
        dd = other.degree
        if len(rem) <= dd:
            return IntPoly(), self
        q = [0] * (len(rem) - dd)
        for i in range(len(rem) - 1, dd - 1, -1):
            c = rem[i] * lead
            if c:
                q[i - dd] = c
                for j, b in enumerate(other.coeffs):
                    rem[i - dd + j] -= c * b
        return IntPoly(tuple(q)), IntPoly(tuple(rem))

    def divides(self, other: "IntPoly") -> bool:
        """True iff ``self`` divides ``other`` exactly."""
        return other.divmod(self)[1].is_zero()

    def __str__(self) -> str:
        return format_poly(self)


def format_poly(p: IntPoly, var: str = "t") -> str:
    if p.is_zero():
        return "0"
    parts = []
    for e, c in p.terms().items():
        mag = abs(c)
        body = var if e == 1 else f"{var}^{e}" if e else ""
        if not body:
            s = str(mag)
        elif mag == 1:
            s = body
        else:
            s = f"{mag}{body}"
        parts.append(("-" if c < 0 else "+", s))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, s in parts[1:]:
        out += f"{sign}{s}"
    return out


def product_one_minus(exponents: Iterable[int]) -> IntPoly:
    """``prod (1 - t^e)`` over the given exponents."""
    c = [1]
    for e in exponents:
        nxt = c + [0] * e
        for i, v in enumerate(c):
            nxt[i + e] -= v
        c = nxt
    return IntPoly(tuple(c))


@dataclass(frozen=True)
class SeriesPrefix:
    """Coefficients of a power series in degrees ``0..order``."""

    coefficients: tuple[int, ...]

    @property
    def truncation_order(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, i: int) -> int:
        return self.coefficients[i]

    def __len__(self) -> int:
        return len(self.coefficients)


@dataclass(frozen=True)
class CycloRational:
    """``numerator / prod(1 - t^e for e in denominator)``."""

    numerator: IntPoly
    denominator: tuple[int, ...] = ()

    def __post_init__(self):
        den = tuple(sorted(int(e) for e in self.denominator))
        if den and den[0] < 1:
            raise ValueError("denominator exponents must be positive")
        object.__setattr__(self, "denominator", den)

    @classmethod
    def zero(cls) -> "CycloRational":
        return cls(IntPoly())

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def _over(self, den: Counter) -> IntPoly:
        extra = Counter(den)
        extra.subtract(Counter(self.denominator))
        return self.numerator * product_one_minus(extra.elements())

    def _join(self, other: "CycloRational") -> Counter:
        a, b = Counter(self.denominator), Counter(other.denominator)
        return a | b

    def __add__(self, other: "CycloRational") -> "CycloRational":
        den = self._join(other)
        return CycloRational(self._over(den) + other._over(den), tuple(den.elements()))

    def __neg__(self) -> "CycloRational":
        return CycloRational(-self.numerator, self.denominator)

    def __sub__(self, other: "CycloRational") -> "CycloRational":
        return self + (-other)

    def scale(self, n: int) -> "CycloRational":
        return CycloRational(self.numerator * n, self.denominator)

    def __mul__(self, other) -> "CycloRational":
        if isinstance(other, int):
            return self.scale(other)
        return CycloRational(self.numerator * other.numerator,
                             self.denominator + other.denominator)

    __rmul__ = __mul__

    def expand(self, order: int) -> SeriesPrefix:
        return expand(self, order)

    def __eq__(self, other) -> bool:  # value equality, not representation
        if not isinstance(other, CycloRational):
            return NotImplemented
        return rational_equal(self, other)

    def __hash__(self):
        return hash(self.expand(24).coefficients)

    def pole_order_at_one(self) -> int:
        """Order of the pole at ``t = 1`` (negative for a zero there)."""
        if self.is_zero():
            raise ValueError("zero function")
        num = self.numerator
        mult = 0
        x = IntPoly.one_minus_t(1)
        while True:
            q, rem = num.divmod(x)
            if not rem.is_zero():
                break
            num, mult = q, mult + 1
        return len(self.denominator) - mult

    def leading_at_one(self, order: int) -> Fraction:
        """``lim_{t -> 1} (1 - t)^order * f(t)`` as an exact rational."""
        num = self.numerator
        x = IntPoly.one_minus_t(1)
        n = len(self.denominator)
        # (1-t)^order f = num * (1-t)^(order-n) / prod A_e
        need = n - order
        if need < 0:
            return Fraction(0)
        for _ in range(need):
            num, rem = num.divmod(x)
            if not rem.is_zero():
                raise ValueError(f"pole order exceeds {order}")
        den = 1
        for e in self.denominator:
            den *= e
        return Fraction(num(1), den)

    def __str__(self) -> str:
        if not self.denominator:
            return format_poly(self.numerator)
        counts = Counter(self.denominator)
        den = "".join(f"(1-t^{e})" + (f"^{m}" if m > 1 else "") if e > 1 else
                      "(1-t)" + (f"^{m}" if m > 1 else "") for e, m in sorted(counts.items()))
        return f"({format_poly(self.numerator)})/{den}"


def expand(f: CycloRational, order: int) -> SeriesPrefix:
    """Taylor coefficients of ``f`` in degrees ``0..order``."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    c = list(f.numerator.coeffs[: order + 1])
    c.extend([0] * (order + 1 - len(c)))
    for e in f.denominator:
        for i in range(e, order + 1):
            c[i] += c[i - e]
    return SeriesPrefix(tuple(c))


def rational_equal(f: CycloRational, g: CycloRational) -> bool:
    """Exact equality of the represented rational functions."""
    if f.denominator == g.denominator:
        return f.numerator == g.numerator
    return f.numerator * product_one_minus(g.denominator) == g.numerator * product_one_minus(f.denominator)


def reduce_mod_A(p: IntPoly, r: int, window: Sequence[int]) -> IntPoly:
    """The unique polynomial supported on ``window`` congruent to ``p`` mod ``A_r``.

    ``window = (lo, hi)`` must span ``r - 1`` consecutive exponents.  Exponents
    are folded with ``t^r = 1``; the constant vector ``A_r`` is then subtracted
    to clear the one residue class the window misses.
    """
    lo, hi = window
    if r < 2 or hi - lo != r - 2 or lo < 0:
        raise ValueError(f"bad window {window} for r={r}")
    folded = [0] * r
    for e, c in enumerate(p.coeffs):
        folded[e % r] += c
    missing = folded[(lo - 1) % r]
    terms = {e: folded[e % r] - missing for e in range(lo, hi + 1)}
    return IntPoly.from_terms(terms)


def congruent_mod_A(p: IntPoly, q: IntPoly, r: int) -> bool:
    return (p - q).is_zero() or IntPoly.a_poly(r).divides(p - q)


def is_gorenstein_symmetric(N: IntPoly, k: int, c: int) -> bool:
    """``t^k N(1/t) == (-1)^c N(t)``."""
    if N.degree > k:
        return False
    return N.reciprocal(k) == N * (-1) ** c


@lru_cache(maxsize=None)
def cyclotomic(d: int) -> IntPoly:
    """The cyclotomic polynomial Phi_d."""
    p = IntPoly.from_terms({0: -1, d: 1})
    for e in range(1, d):
        if d % e == 0:
            p, rem = p.divmod(cyclotomic(e))
            assert rem.is_zero()
    return p


@lru_cache(maxsize=65536)
def root_order(N: IntPoly, d: int) -> int:
    """Multiplicity of the primitive ``d``-th roots of unity as roots of ``N``."""
    phi = cyclotomic(d)
    out = 0
    while not N.is_zero():
        q, rem = N.divmod(phi)
        if not rem.is_zero():
            break
        N, out = q, out + 1
    return out
