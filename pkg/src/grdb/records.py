"""Serialised form of search records: JSON Lines and a flat CSV."""
from __future__ import annotations

import csv
import io
import json
from typing import Iterable, TextIO

from .flags import FLAG_NAMES
from .formats import FormatInstance, format_w
from .invariants import fraction_str
from .search import CandidateRecord

FIELDS = ("family", "params", "codim", "dim", "k", "adjunction", "ambient_weights", "equation_degrees",
          "numerator", "baskets", "chi", "K3", "Kc2", "A3", "flags", "kernels")


def format_params(f: FormatInstance) -> dict:
    """Grading parameters, with the key-variable weights the grading induces."""
    out: dict = {}
    if "u" in f.params:
        out["u"] = f.params["u"]
    if "w2" in f.params:
        out["w"] = format_w(f.params["w2"])
        out["w2"] = list(f.params["w2"])
    if "degrees" in f.params:
        out["degrees"] = list(f.params["degrees"])
    out["key_weights"] = list(f.key_weights)
    return out


def record_to_dict(rec: CandidateRecord) -> dict:
    f = rec.format
    first = rec.invariants[0]
    return {
        "family": f.family,
        "params": format_params(f),
        "codim": f.codim,
        "dim": rec.dim,
        "k": rec.k,
        "adjunction": f.adjunction,
        "ambient_weights": sorted(rec.ambient_weights),
        "equation_degrees": list(f.equation_degrees),
        "numerator": list(f.numerator.coeffs),
        "baskets": [b.strings() for b in rec.baskets],
        "chi": first.chi,
        "K3": fraction_str(first.K3),
        "Kc2": [fraction_str(inv.Kc2) for inv in rec.invariants],
        "A3": fraction_str(first.A3),
        "flags": {name: bool(rec.flags.get(name, True)) for name in FLAG_NAMES},
        "kernels": [b.strings() for b in rec.kernels],
    }


def dumps_jsonl(rows: Iterable[dict]) -> str:
    return "".join(json.dumps(r, separators=(",", ":")) + "\n" for r in rows)


def write_jsonl(rows: Iterable[dict], fh: TextIO) -> None:
    fh.write(dumps_jsonl(rows))


def read_jsonl(fh: TextIO) -> list[dict]:
    out = []
    for n, line in enumerate(fh, 1):
        line = line.strip()
        if not line:
            continue
        row = json.loads(line)
        missing = [k for k in FIELDS if k != "kernels" and k not in row]
        if missing:
            raise ValueError(f"line {n}: missing fields {missing}")
        out.append(row)
    return out


CSV_COLUMNS = ("family", "params", "codim", "dim", "k", "adjunction", "ambient_weights", "equation_degrees",
               "numerator", "basket", "chi", "K3", "Kc2", "A3") + FLAG_NAMES


def dumps_csv(rows: Iterable[dict]) -> str:
    """One line per (record, basket)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        for basket, kc2 in zip(r["baskets"], r["Kc2"]):
            w.writerow([r["family"], json.dumps(r["params"], separators=(",", ":")), r["codim"], r["dim"], r["k"],
                        r["adjunction"], " ".join(map(str, r["ambient_weights"])),
                        " ".join(map(str, r["equation_degrees"])), " ".join(map(str, r["numerator"])),
                        "; ".join(basket), r["chi"], r["K3"], kc2, r["A3"]]
                       + [int(r["flags"][name]) for name in FLAG_NAMES])
    return buf.getvalue()
