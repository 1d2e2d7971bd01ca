"""Embedded reference tables and the comparison of search output against them."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from .formats import ogr510_weights
from .search import Basket

TABLES = {
    "table1": ("table1.json", "00d203e4fd3b9d6669fb872718ea17ef8e67a24d8ef57471c0d3487aba156d9e"),
    "table2": ("table2.json", "fd459ce1addc2e4d961674b9ea13e43a9e16f3d891e49482e221be6c391178d0"),
    "table3-counts": ("table3.json", "c1eba98318730e1b9ad24f413c19ac450b329c4456425dd494b4d6bd2940e461"),
}


class ChecksumError(RuntimeError):
    pass


@dataclass(frozen=True)
class ReferenceTable:
    identifier: str
    rows: tuple
    meta: dict = field(default_factory=dict, compare=False)


def load_table(identifier: str) -> ReferenceTable:
    if identifier not in TABLES:
        raise KeyError(f"unknown table {identifier!r}; expected one of {sorted(TABLES)}")
    name, digest = TABLES[identifier]
    raw = resources.files("grdb.data").joinpath(name).read_bytes()
    if hashlib.sha256(raw).hexdigest() != digest:
        raise ChecksumError(f"{name} does not match its recorded checksum")
    data = json.loads(raw)
    meta = {k: v for k, v in data.items() if k != "rows"}
    return ReferenceTable(data["id"], tuple(data["rows"]), meta)


def _basket_key(strings) -> tuple:
    return tuple(Basket.parse(", ".join(strings)).strings())


def _row_key(family: str, row: dict) -> tuple:
    grading = (row.get("u"), tuple(row["w2"]))
    return (family, tuple(sorted(row["ambient_weights"])), tuple(sorted(row["equation_degrees"])), grading)


def _record_key(rec: dict) -> tuple:
    p = rec["params"]
    return (rec["family"], tuple(rec["ambient_weights"]), tuple(rec["equation_degrees"]),
            (p.get("u"), tuple(p.get("w2", ()))))


@dataclass
class DiffReport:
    table: str
    expected: int = 0
    matched: int = 0
    diffs: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.diffs

    def lines(self) -> list[str]:
        head = f"{self.table}: {self.matched}/{self.expected} match, {len(self.diffs)} diffs"
        return [head] + [f"  {d}" for d in self.diffs]


def _expected_key_weights(family: str, row: dict) -> list[int]:
    if family == "ogr510":
        x, xi, xij = ogr510_weights(row["u"], row["w2"])
        if [x] + list(xi) != [row["x"]] + list(row["xi"]):
            raise ValueError(f"table row {row['ambient_weights']} disagrees with its own grading")
        return [x] + list(xi) + list(xij)
    return list(row["key_weights"])


def _compare_row(family: str, row: dict, rec: dict) -> list[str]:
    out = []
    name = f"P{tuple(row['ambient_weights'])}"
    keys = [_basket_key(b) for b in rec["baskets"]]
    want = _basket_key(row["basket"])
    i = keys.index(want) if want in keys else 0
    if want not in keys:
        out.append(f"{name}: basket {row['basket']} not among {rec['baskets']}")
    if Fraction(rec["K3"]) != Fraction(row["K3"]):
        out.append(f"{name}: K3 {rec['K3']} != {row['K3']}")
    if int(rec["chi"]) != int(row["chi"]):
        out.append(f"{name}: chi {rec['chi']} != {row['chi']}")
    if Fraction(rec["Kc2"][i]) != Fraction(row["Kc2"]):
        out.append(f"{name}: Kc2 {rec['Kc2'][i]} != {row['Kc2']}")
    if list(rec["params"].get("key_weights", [])) != _expected_key_weights(family, row):
        out.append(f"{name}: key weights {rec['params'].get('key_weights')} differ")
    if not all(rec["flags"].values()):
        out.append(f"{name}: failing flags {[k for k, v in rec['flags'].items() if not v]}")
    return out


def verify_rows(records: list[dict], table: ReferenceTable) -> DiffReport:
    family = table.meta["family"]
    report = DiffReport(table.identifier, len(table.rows))
    by_key: dict = {}
    for rec in records:
        if rec["family"] == family:
            by_key.setdefault(_record_key(rec), []).append(rec)
    used = set()
    for row in table.rows:
        key = _row_key(family, row)
        recs = by_key.get(key)
        if not recs:
            report.diffs.append(f"missing row P{tuple(row['ambient_weights'])} grading {key[3]}")
            continue
        used.add(key)
        d = _compare_row(family, row, recs[0])
        if d:
            report.diffs.extend(d)
        else:
            report.matched += 1
    for key, recs in sorted(by_key.items(), key=lambda kv: repr(kv[0])):
        if key not in used:
            report.diffs.extend(f"extra record P{key[1]} grading {key[3]}" for _ in recs)
    return report


def _adjunction_index(rec: dict) -> int:
    return rec["adjunction"] // 2 if rec["family"] == "ogr510" else rec["adjunction"]


def verify_counts(records: list[dict], table: ReferenceTable) -> DiffReport:
    """Compare record counts per (k, codim, format) with the rows present in ``records``."""
    groups: dict = {}
    for rec in records:
        groups.setdefault((rec["dim"], rec["k"], rec["codim"], rec["family"]), []).append(rec)
    report = DiffReport(table.identifier)
    for row in table.rows:
        key = (row["dim"], row["k"], row["codim"], row["format"])
        if key not in groups:
            continue
        report.expected += 1
        recs = groups[key]
        raw = len(recs)
        good = sum(1 for r in recs if all(r["flags"].values()))
        k_last = max(_adjunction_index(r) for r in recs)
        diffs = []
        if row["raw"] is not None and raw != row["raw"]:
            diffs.append(f"{key}: {raw} records, expected {row['raw']}")
        if good != row["results"]:
            diffs.append(f"{key}: {good} pass all flags, expected {row['results']}")
        if row["k_last"] is not None and k_last != row["k_last"]:
            diffs.append(f"{key}: k_last {k_last}, expected {row['k_last']}")
        if diffs:
            report.diffs.extend(diffs)
        else:
            report.matched += 1
    return report


def verify_tables(records: list[dict], table_id: str) -> DiffReport:
    table = load_table(table_id)
    if table_id == "table3-counts":
        return verify_counts(records, table)
    return verify_rows(records, table)
