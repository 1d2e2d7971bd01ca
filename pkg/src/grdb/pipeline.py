"""Search orchestration: gradings by adjunction, per-format work, records and report."""
from __future__ import annotations

import logging
import time
from dataclasses import asdict, dataclass, field
from multiprocessing import get_context

from .flags import FLAG_NAMES, realisability_flags
from .formats import FormatInstance, ci_format, enumerate_gradings
from .invariants import compute_invariants
from .search import (CandidateRecord, CandidateSet, SearchConfig, VertexScreen, _residue_solutions,
                     admissible_ambient_weights, candidate_set, hilbert_series, initial_series, match_baskets)

log = logging.getLogger(__name__)


def adjunction_step(family: str) -> int:
    """OGr(5,10) adjunction numbers are even and indexed by half their value."""
    return 2 if family == "ogr510" else 1


def gradings(config: SearchConfig, index: int) -> list[FormatInstance]:
    """Formats searched at position ``index`` of the adjunction sweep."""
    kv = index * adjunction_step(config.family)
    if config.ci_degrees is not None:
        return [ci_format(config.ci_degrees)] if sum(config.ci_degrees) == kv else []
    return enumerate_gradings(config.family, kv, config.dim, config.codim, config.hypersurfaces)


def _residues_possible(P, cands: CandidateSet, k: int) -> bool:
    """Cheap necessary condition: some multiplicities match every residue of ``P``."""
    if cands.free:
        return True
    return next(_residue_solutions(P, cands.types, k, 0, cands.groups), None) is not None


def search_format(f: FormatInstance, config: SearchConfig) -> list[CandidateRecord]:
    """Every record for one format: all admissible ``W`` with at least one basket."""
    out = []
    screen = VertexScreen(f.numerator, config.k, config.sing_class, f.chi_max, f.adjunction - config.k,
                          config.dim + f.codim + 1)
    for W in admissible_ambient_weights(f, config.dim, config.k, config.min_weight):
        if not screen(W):
            continue
        P = hilbert_series(f, W)
        cands = candidate_set(W, config.sing_class, config.k)
        if not _residues_possible(P, cands, config.k):
            continue
        ini = initial_series(P, config.k)
        R = P - ini
        baskets, kernels = match_baskets(R, cands.types, config.k, config.basket_cap, config.kernel_cap, poles=P)
        if not baskets:
            continue
        rec = CandidateRecord(f, config.k, W, P, ini, R, baskets, kernels)
        rec.invariants = [compute_invariants(P, b, config.k) for b in baskets]
        rec.flags = realisability_flags(f, W, baskets, config.dim)
        out.append(rec)
    return out


def record_key(rec: CandidateRecord) -> tuple:
    f = rec.format
    return (f.adjunction, f.family, f.equation_degrees, f.key_weights, rec.ambient_weights)


@dataclass
class RunReport:
    config: dict
    records: int = 0
    all_flags_pass: int = 0
    flag_failures: dict = field(default_factory=lambda: {name: 0 for name in FLAG_NAMES})
    k_last: int | None = None
    k_max: int = 0
    wall_time: float = 0.0

    def add(self, rec: CandidateRecord, index: int) -> None:
        self.records += 1
        if rec.passes():
            self.all_flags_pass += 1
        for name, ok in rec.flags.items():
            if not ok:
                self.flag_failures[name] += 1
        self.k_last = index if self.k_last is None else max(self.k_last, index)

    def as_dict(self) -> dict:
        return asdict(self)


def _task(args) -> list[CandidateRecord]:
    f, config = args
    return search_format(f, config)


def run_search(config: SearchConfig) -> tuple[list[CandidateRecord], RunReport]:
    """All records up to ``max_adjunction``, canonically ordered, plus the report.

    The order is independent of ``config.jobs``: work is split by format and
    the results are sorted before they are returned.
    """
    t0 = time.perf_counter()
    report = RunReport(asdict(config), k_max=config.max_adjunction)
    step = adjunction_step(config.family)
    tasks = []
    for index in range(max(config.min_adjunction, 1), config.max_adjunction + 1):
        tasks.extend((f, config) for f in gradings(config, index))
    if config.jobs > 1 and len(tasks) > 1:
        with get_context("fork").Pool(config.jobs) as pool:
            chunks = pool.map(_task, tasks, chunksize=1)
    else:
        chunks = [_task(t) for t in tasks]
    records = sorted((r for chunk in chunks for r in chunk), key=record_key)
    for rec in records:
        report.add(rec, rec.format.adjunction // step)
    report.wall_time = round(time.perf_counter() - t0, 3)
    log.info("%d records, %d pass all flags, %.1fs", report.records, report.all_flags_pass, report.wall_time)
    return records, report

