"""The candidate search: ambient weights, Hilbert series, initial term and
basket matching.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import gcd
from typing import Iterator, Sequence

from . import polar
from .formats import FAMILIES, FormatInstance, _partitions
from .orbifold import DIM, SINGULARITY_CLASSES, QuotientSingularity, porb, singularity_types
from .series import CycloRational, IntPoly, cyclotomic, expand, rational_equal, root_order

log = logging.getLogger(__name__)


@dataclass
class SearchConfig:
    family: str = "gr25"
    dim: int = 3
    k: int = 1
    max_adjunction: int = 40
    min_adjunction: int = 1
    codim: int | None = None  # complete intersections only
    ci_degrees: tuple[int, ...] | None = None  # search this one complete intersection
    hypersurfaces: int = 1  # gr25xh only
    sing_class: str = "terminal"
    basket_cap: int = 12
    kernel_cap: int = 12
    min_weight: int = 1
    jobs: int = 1

    def __post_init__(self):
        if self.dim != DIM:
            raise ValueError("only threefolds are supported")
        if self.k < -1:
            raise ValueError("polarisation index must be at least -1")
        if self.ci_degrees is not None:
            if self.family != "ci":
                raise ValueError("fixed degrees only apply to complete intersections")
            self.ci_degrees = tuple(sorted(self.ci_degrees))
            if self.codim is None:
                self.codim = len(self.ci_degrees)
            if self.codim != len(self.ci_degrees):
                raise ValueError("codim does not match the number of fixed degrees")
        if self.family == "ci" and not self.codim:
            raise ValueError("--codim is required for complete intersections")
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.sing_class not in SINGULARITY_CLASSES:
            raise ValueError(f"unknown singularity class {self.sing_class!r}")
        if self.jobs < 1:
            raise ValueError("need at least one job")
        if self.min_weight < 1:
            raise ValueError("ambient weights are positive")


@dataclass(frozen=True)
class Basket:
    entries: tuple[tuple[QuotientSingularity, int], ...] = ()

    @classmethod
    def from_counts(cls, counts: dict) -> "Basket":
        return cls(tuple(sorted((s, m) for s, m in counts.items() if m)))

    @classmethod
    def parse(cls, text: str) -> "Basket":
        """Parse ``"1/2(1,1,1), 2*1/3(1,2,2)"`` (``x`` also accepted for ``*``)."""
        counts: dict = {}
        text = text.strip()
        if not text or text in ("[]", "-"):
            return cls()
        depth, cur, parts = 0, "", []
        for ch in text:
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            if ch in ",;" and depth == 0:
                parts.append(cur)
                cur = ""
            else:
                cur += ch
        parts.append(cur)
        for p in parts:
            p = p.strip().replace("x", "*")
            mult = 1
            if "*" in p:
                m, p = p.split("*", 1)
                mult = int(m)
            s = QuotientSingularity.parse(p)
            counts[s] = counts.get(s, 0) + mult
        return cls.from_counts(counts)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return sum(m for _, m in self.entries)

    @property
    def points(self) -> list[QuotientSingularity]:
        return [s for s, m in self.entries for _ in range(m)]

    def strings(self) -> list[str]:
        return [f"{m}*{s}" for s, m in self.entries]

    def __str__(self) -> str:
        return ", ".join(self.strings()) if self.entries else "{}"


@dataclass
class CandidateRecord:
    format: FormatInstance
    k: int
    ambient_weights: tuple[int, ...]
    hilbert_series: CycloRational
    initial_series: CycloRational
    residual: CycloRational
    baskets: list[Basket] = field(default_factory=list)
    kernels: list[Basket] = field(default_factory=list)
    invariants: list = field(default_factory=list)
    flags: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return DIM

    def passes(self) -> bool:
        return all(self.flags.values())


def subset_gcds(W: Sequence[int]) -> set[int]:
    gs: set[int] = set()
    for a in set(W):
        gs |= {gcd(g, a) for g in gs}
        gs.add(a)
    return gs


def enumerate_ambient_weights(f: FormatInstance, dim: int, k: int, min_weight: int = 1,
                              max_weight: int | None = None) -> Iterator[tuple[int, ...]]:
    """Sorted weight sequences of length ``dim + codim + 1`` summing to ``k_V - k``."""
    n = dim + f.codim + 1
    top = f.chi_max if max_weight is None else min(max_weight, f.chi_max)
    for W in _partitions(f.adjunction - k, n, min_weight, top):
        g = 0
        for a in W:
            g = gcd(g, a)
        if g == 1:
            yield W


def hilbert_series(f: FormatInstance, W: Sequence[int]) -> CycloRational:
    if not W or min(W) < 1:
        raise ValueError("ambient weights must be positive")
    return CycloRational(f.numerator, tuple(W))


def initial_numerator(prefix: Sequence[int], k: int) -> IntPoly:
    """Palindromic numerator of degree ``k + 4`` matching ``prefix`` over ``(1-t)^4``."""
    h = (k + DIM + 1) // 2
    c = list(prefix[: h + 1])
    # multiply by (1-t)^4, truncated at degree h
    for _ in range(DIM + 1):
        c = [c[0]] + [c[i] - c[i - 1] for i in range(1, len(c))]
    deg = k + DIM + 1
    coeffs = [0] * (deg + 1)
    for i in range(h + 1):
        coeffs[i] = c[i]
        coeffs[deg - i] = c[i]
    return IntPoly(tuple(coeffs))


def initial_series(P: CycloRational, k: int) -> CycloRational:
    h = (k + DIM + 1) // 2
    return CycloRational(initial_numerator(expand(P, h).coefficients, k), (1,) * (DIM + 1))


@lru_cache(maxsize=None)
def _candidates(indices: tuple[int, ...], sing_class: str, k: int) -> tuple[QuotientSingularity, ...]:
    out: set[QuotientSingularity] = set()
    for r in indices:
        if r > 1:
            out.update(singularity_types(r, k, sing_class))
    return tuple(sorted(out))


def candidate_singularities(W: Sequence[int], sing_class: str, k: int) -> list[QuotientSingularity]:
    """Sorted, deduplicated types of every index that is a gcd of a subset of ``W``."""
    return list(_candidates(tuple(sorted(subset_gcds(W))), sing_class, k))


@dataclass(frozen=True, eq=False)
class CandidateSet:
    """Candidates for one set of indices, with the groupings the matcher needs (hashed by identity)."""

    types: tuple[QuotientSingularity, ...]
    groups: tuple  # (types by index, sorted indices)
    free: bool  # some local system has free directions


@lru_cache(maxsize=None)
def _candidate_set(indices: tuple[int, ...], sing_class: str, k: int) -> CandidateSet:
    types = _candidates(indices, sing_class, k)
    return CandidateSet(types, _index_groups(types), _has_free_directions(types, k))


def candidate_set(W: Sequence[int], sing_class: str, k: int) -> CandidateSet:
    return _candidate_set(tuple(sorted(subset_gcds(W))), sing_class, k)


# ---------------------------------------------------------------- prefilter

@lru_cache(maxsize=None)
def _divisors(n: int) -> tuple[int, ...]:
    return tuple(d for d in range(2, n + 1) if n % d == 0)


@lru_cache(maxsize=4096)
def _root_orders(N: IntPoly, top: int) -> tuple[int, ...]:
    # an over-count here only weakens the pruning; residues re-check every pole
    return tuple(polar.root_order_mod(N.coeffs, d) if d >= 2 else 0 for d in range(top + 1))


def has_multiple_poles(N: IntPoly, W: Sequence[int]) -> bool:
    """True if ``N / prod(1 - t^a)`` has a pole of order >= 2 away from ``t = 1``.

    Isolated quotient points only contribute simple poles there, so such a
    series can never be matched by any basket.
    """
    orders = _root_orders(N, max(W))
    count: dict[int, int] = {}
    for a in W:
        for d in _divisors(a):
            c = count.get(d, 0) + 1
            if c - orders[d] >= 2:
                return True
            count[d] = c
    return False


def admissible_ambient_weights(f: FormatInstance, dim: int, k: int, min_weight: int = 1,
                               max_weight: int | None = None) -> Iterator[tuple[int, ...]]:
    """``enumerate_ambient_weights`` minus every ``W`` rejected by ``has_multiple_poles``.

    The pole test is monotone in ``W``, so partial sequences are pruned as
    they are built rather than filtered afterwards.
    """
    n = dim + f.codim + 1
    top = f.chi_max if max_weight is None else min(max_weight, f.chi_max)
    total = f.adjunction - k
    if n * min_weight > total or top < min_weight:
        return
    orders = _root_orders(f.numerator, top)
    # d may divide at most orders[d] + 1 of the weights
    allowed = [o + 1 for o in orders]
    count = [0] * (top + 1)
    W: list[int] = []
    divisors = [_divisors(x) for x in range(top + 1)]

    def fits(x: int) -> bool:
        for d in divisors[x]:
            if count[d] >= allowed[d]:
                return False
        return True

    out: list[tuple[int, ...]] = []

    # plain recursion into a list: nested generators cost a frame switch per level per yield
    def rec(remaining: int, parts: int, lo: int, g: int) -> None:
        if parts == 1:
            if lo <= remaining <= top and gcd(g, remaining) == 1 and fits(remaining):
                out.append(tuple(W) + (remaining,))
            return
        if parts == 2:
            # the last weight is forced; test it without recursing
            prefix = tuple(W)
            for x in range(max(lo, remaining - top), min(top, remaining // 2) + 1):
                y = remaining - x
                if gcd(gcd(g, x), y) != 1 or not fits(x):
                    continue
                for d in divisors[y]:
                    if count[d] + (x % d == 0) >= allowed[d]:
                        break
                else:
                    out.append(prefix + (x, y))
            return
        hi = min(top, remaining // parts)
        for x in range(max(lo, remaining - (parts - 1) * top), hi + 1):
            if not fits(x):
                continue
            divs = divisors[x]
            for d in divs:
                count[d] += 1
            W.append(x)
            rec(remaining - x, parts - 1, x, gcd(g, x))
            W.pop()
            for d in divs:
                count[d] -= 1

    rec(total, n, min_weight, 0)
    yield from out


# ---------------------------------------------------------------- matching

# multiplicities lifted from the prime field above this are rejected outright
_LIFT_LIMIT = 10 ** 6


def basket_series(basket: Basket, k: int) -> CycloRational:
    total = CycloRational.zero()
    for s, m in basket:
        total = total + porb(s, k).scale(m)
    return total


def _compositions(n_vars: int, budget: int) -> Iterator[tuple[int, ...]]:
    """Nonnegative ``n_vars``-tuples with sum at most ``budget``, smallest sum first."""
    if n_vars == 0:
        yield ()
        return
    for total in range(budget + 1):
        for bars in combinations(range(total + n_vars - 1), n_vars - 1):
            prev, out = -1, []
            for b in bars + (total + n_vars - 1,):
                out.append(b - prev - 1)
                prev = b
            yield tuple(out)


def sign_bound(R: CycloRational, cands: Sequence[QuotientSingularity], k: int) -> int | None:
    """Bound on total multiplicity from a degree where every contribution has one strict sign.

    Returns -1 when that degree already rules out every basket.
    """
    if not cands:
        return None
    order = (k + DIM + 1) // 2 + max(s.r for s in cands) + 1
    cols = [expand(porb(s, k), order).coefficients for s in cands]
    target = expand(R, order).coefficients
    best = None
    for i in range(order + 1):
        vals = [c[i] for c in cols]
        if all(v > 0 for v in vals) or all(v < 0 for v in vals):
            if target[i] * vals[0] < 0:
                return -1
            b = abs(target[i]) // min(abs(v) for v in vals)
            best = b if best is None else min(best, b)
    return best


@lru_cache(maxsize=4096)
def _index_groups(cands: tuple[QuotientSingularity, ...]) -> tuple[dict, tuple[int, ...]]:
    by_index: dict[int, tuple[QuotientSingularity, ...]] = {}
    for s in cands:
        by_index[s.r] = by_index.get(s.r, ()) + (s,)
    return by_index, tuple(sorted(by_index))


@lru_cache(maxsize=65536)
def _closed_orders(ds: tuple[int, ...], indices: tuple[int, ...]) -> tuple[int, ...]:
    """Pole orders ``d`` whose equations involve index-``d`` points only.

    No other candidate index is a multiple of such a ``d``, so its residues
    can be matched on their own.  The largest order always qualifies.
    """
    return tuple(d for d in ds if not any(r != d and r % d == 0 for r in indices))


# per-order [screens run, rejections]; only steers the screening order
_SCREEN_STATS: dict[int, list[int]] = {}


_RANK: dict[int, float] = {}
_ORDER_CACHE: dict[tuple[int, ...], list[int]] = {}
_RANK_EVERY = 2048
_since_rank = 0


def _screen_cost(d: int) -> float:
    """Expected work per rejection: residues cost about phi(d), scaled by the observed pass rate."""
    tried, failed = _SCREEN_STATS.setdefault(d, [0, 0])
    return (len(polar.primitive_roots(d)) + 2) * (tried + 2) / (failed + 1)


def _screen_rank(d: int) -> float:
    """``_screen_cost`` as of the last refresh, which happens every ``_RANK_EVERY`` lookups."""
    global _since_rank
    _since_rank += 1
    if _since_rank >= _RANK_EVERY:
        _since_rank = 0
        _RANK.clear()
        _ORDER_CACHE.clear()
    r = _RANK.get(d)
    if r is None:
        r = _RANK[d] = _screen_cost(d)
    return r


def _screen(num, denominator, d: int, by_index: dict, k: int) -> bool:
    """Necessary condition: the residues at order ``d`` are matched by small multiplicities."""
    try:
        rhs = polar.residues(num, denominator, d)
    except polar.MultiplePole:
        return False
    types = by_index.get(d, ())
    if not types:
        return not any(rhs)
    return polar.local_system(d, k, types).apply(rhs, _LIFT_LIMIT) is not None


class VertexScreen:
    """Fast necessary condition on ``W`` for one format, checked before any candidate bookkeeping.

    A weight ``a`` that divides no other weight is a closed pole order whose
    only candidates are the index-``a`` types, so its residues must be
    matched by those types alone.
    """

    def __init__(self, numerator: IntPoly, k: int, sing_class: str, top: int, total: int | None = None,
                 length: int | None = None):
        """Every ``W`` has entries ``<= top``; a shared ``total`` and ``length`` let the Gorenstein symmetry halve the work."""
        self.k, self.sing_class = k, sing_class
        c = numerator.coeffs
        sym = None
        if total is not None and length is not None and c:
            eta = 1 if c == c[::-1] else -1 if c == tuple(-x for x in reversed(c)) else 0
            if eta:
                sym = (eta * (-1) ** length, total - (len(c) - 1))
        self.evaluator = polar.ResidueEvaluator(c, top, sym)
        self._systems: dict = {}

    def __call__(self, W: Sequence[int]) -> bool:
        # W is sorted, so only later weights can be proper multiples
        orders = []
        prev = 1
        for i, a in enumerate(W):
            if a == prev:
                continue
            prev = a
            for b in W[i + 1:]:
                if b % a == 0 and b != a:
                    break
            else:
                orders.append(a)
        if len(orders) > 1:
            key = tuple(orders)
            ranked = _ORDER_CACHE.get(key)
            if ranked is None:
                ranked = _ORDER_CACHE[key] = sorted(orders, key=_screen_rank)
            orders = ranked
        for a in orders:
            stats = _SCREEN_STATS.setdefault(a, [0, 0])
            stats[0] += 1
            if not self._passes(W, a):
                stats[1] += 1
                return False
        return True

    def _passes(self, W: Sequence[int], a: int) -> bool:
        try:
            rhs = self.evaluator.residues(W, a, W.count(a))
        except polar.MultiplePole:
            return False
        system = self._systems.get(a, False)
        if system is False:
            types = _types_of_index(a, self.k, self.sing_class)
            system = self._systems[a] = polar.local_system(a, self.k, types) if types else None
        if system is None:
            return not any(rhs)
        return system.apply(rhs, _LIFT_LIMIT) is not None


@lru_cache(maxsize=None)
def _types_of_index(r: int, k: int, sing_class: str) -> tuple[QuotientSingularity, ...]:
    return tuple(sorted(singularity_types(r, k, sing_class)))


@lru_cache(maxsize=65536)
def _pole_orders(denominator: tuple[int, ...], indices: tuple[int, ...]) -> tuple[int, ...]:
    ds = set()
    for e in set(denominator) | set(indices):
        ds.update(_divisors(e))
    return tuple(sorted(ds, reverse=True))


def _residue_solutions(R: CycloRational, cands: tuple[QuotientSingularity, ...], k: int,
                       free_bound: int, groups: tuple | None = None) -> Iterator[dict]:
    """Multiplicity vectors whose contributions match the residues of ``R`` everywhere off ``t = 1``.

    Any series differing from the residual by a polynomial over ``(1-t)^4``
    has the same residues, so ``R`` may be passed as ``P_X`` itself.  Free
    directions of each local system are enumerated up to ``free_bound``; the
    caller still has to verify candidates exactly.
    """
    by_index, indices = groups if groups is not None else _index_groups(cands)
    ds = _pole_orders(R.denominator, indices)
    num = R.numerator.coeffs
    for d in sorted(_closed_orders(ds, indices), key=_screen_rank):
        stats = _SCREEN_STATS.setdefault(d, [0, 0])
        stats[0] += 1
        if not _screen(num, R.denominator, d, by_index, k):
            stats[1] += 1
            return

    def rec(i: int, assigned: dict) -> Iterator[dict]:
        if i == len(ds):
            yield dict(assigned)
            return
        d = ds[i]
        p = polar.field_prime(d)
        try:
            rhs = polar.residues(num, R.denominator, d)
        except polar.MultiplePole:
            return
        for s, m in assigned.items():
            if m and s.r % d == 0:
                for j, v in enumerate(polar.porb_residues(s, k, d)):
                    rhs[j] = (rhs[j] - m * v) % p
        types = by_index.get(d, ())
        if not types:
            if not any(rhs):
                yield from rec(i + 1, assigned)
            return
        system = polar.local_system(d, k, types)
        trhs = system.apply(rhs, _LIFT_LIMIT)
        if trhs is None:
            return
        for fv in _compositions(len(system.free), free_bound if system.free else 0):
            pv = system.pivot_values(trhs, fv)
            if any(v > _LIFT_LIMIT for v in pv):
                continue
            for q, v in zip(system.pivots, pv):
                assigned[types[q]] = v
            for q, v in zip(system.free, fv):
                assigned[types[q]] = v
            yield from rec(i + 1, assigned)
        for s in types:
            assigned.pop(s, None)

    yield from rec(0, {})


@lru_cache(maxsize=4096)
def _has_free_directions(cands: tuple[QuotientSingularity, ...], k: int) -> bool:
    rs = sorted({s.r for s in cands})
    return any(polar.local_system(r, k, tuple(s for s in cands if s.r == r)).free for r in rs)


@lru_cache(maxsize=4096)
def _kernels(cands: tuple[QuotientSingularity, ...], k: int, cap: int) -> tuple[tuple[int, ...], ...]:
    if not cands or not _has_free_directions(cands, k):
        return ()
    zero = CycloRational(IntPoly(), tuple(sorted({s.r for s in cands})))
    sols = []
    for x in _residue_solutions(zero, cands, k, cap):
        vec = tuple(x.get(s, 0) for s in cands)
        if any(vec) and sum(vec) <= cap:
            sols.append(vec)
    sols.sort(key=lambda v: (sum(v), v))
    minimal: list[tuple[int, ...]] = []
    for vec in sols:
        if any(all(a <= b for a, b in zip(m, vec)) for m in minimal):
            continue
        if basket_series(Basket.from_counts(dict(zip(cands, vec))), k).is_zero():
            minimal.append(vec)
    return tuple(minimal)


def find_kernels(candidates: Sequence[QuotientSingularity], k: int, cap: int = 12) -> list[Basket]:
    """Minimal nonzero multisets (total <= cap) whose contributions cancel exactly."""
    cands = tuple(sorted(set(candidates)))
    return [Basket.from_counts(dict(zip(cands, v))) for v in _kernels(cands, k, cap)]


def match_baskets(R: CycloRational, candidates: Sequence[QuotientSingularity], k: int,
                  basket_cap: int = 12, kernel_cap: int = 12,
                  poles: CycloRational | None = None) -> tuple[list[Basket], list[Basket]]:
    """All baskets whose contributions sum to ``R`` exactly, and the kernels.

    Baskets that contain a kernel are left out; they are the listed ones plus
    kernel multiples.  ``basket_cap`` bounds the free directions only when no
    sign argument gives a bound.  ``poles`` is any series with the same poles
    as ``R`` off ``t = 1`` and a shorter numerator (normally ``P_X``).
    """
    cands = tuple(sorted(set(candidates)))
    lo = (k + DIM + 1) // 2
    if any(expand(R, lo).coefficients):
        return [], []
    kvecs = list(_kernels(cands, k, kernel_cap))
    kernels = [Basket.from_counts(dict(zip(cands, v))) for v in kvecs]
    if R.is_zero():
        return [Basket()], kernels
    free_bound = 0
    if _has_free_directions(cands, k):
        bound = sign_bound(R, cands, k)
        if bound is not None and bound < 0:
            return [], kernels
        free_bound = basket_cap if bound is None else bound
    found = set()
    for x in _residue_solutions(R if poles is None else poles, cands, k, free_bound):
        vec = tuple(x.get(s, 0) for s in cands)
        if vec in found or any(all(a >= b for a, b in zip(vec, kv)) for kv in kvecs):
            continue
        if rational_equal(basket_series(Basket.from_counts(dict(zip(cands, vec))), k), R):
            found.add(vec)
    baskets = [Basket.from_counts(dict(zip(cands, v))) for v in sorted(found, key=lambda v: (sum(v), v))]
    return baskets, kernels
