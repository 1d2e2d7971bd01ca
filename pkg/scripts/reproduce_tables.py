"""Re-run the searches behind the embedded reference tables and diff the output.

    python scripts/reproduce_tables.py                 # table1 and table2
    python scripts/reproduce_tables.py --counts        # also the complete classifications
    python scripts/reproduce_tables.py --out results/  # keep the JSONL files
"""
import argparse
import json
import sys
from pathlib import Path

from grdb.pipeline import run_search
from grdb.records import dumps_jsonl, record_to_dict
from grdb.reference import verify_tables
from grdb.search import SearchConfig

RUNS = {
    "table1": [SearchConfig(family="gr25", k=1, max_adjunction=40)],
    "table2": [SearchConfig(family="ogr510", k=1, max_adjunction=40)],
    "table3-counts": [
        SearchConfig(family="ci", codim=1, k=-1, max_adjunction=90),
        SearchConfig(family="ci", codim=1, k=1, max_adjunction=85),
        SearchConfig(family="gr25", k=-1, max_adjunction=70),
    ],
}


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--counts", action="store_true", help="also run the complete classifications")
    ap.add_argument("--out", type=Path)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    tables = ["table1", "table2"] + (["table3-counts"] if args.counts else [])
    ok = True
    for table in tables:
        rows = []
        for config in RUNS[table]:
            config.jobs = args.jobs
            records, report = run_search(config)
            print(json.dumps({k: report.as_dict()[k] for k in ("records", "all_flags_pass", "k_last", "wall_time")}),
                  file=sys.stderr)
            rows.extend(record_to_dict(r) for r in records)
        if args.out:
            args.out.mkdir(parents=True, exist_ok=True)
            (args.out / f"{table}.jsonl").write_text(dumps_jsonl(rows))
        diff = verify_tables(rows, table)
        print("\n".join(diff.lines()))
        ok &= diff.ok
    return 0 if ok else 2


if __name__ == "__main__":
    sys.exit(main())
