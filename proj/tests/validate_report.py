#!/usr/bin/env python3
"""Validate MetricsReport JSON files against the schema and check the
report identities (energy and cache accounting)."""
import json
import sys

import jsonschema

EPC = 7.5e-9


def check(path, schema):
    with open(path) as f:
        report = json.load(f)
    jsonschema.validate(report, schema)
    if report["energy_joules"] != report["cycles"] * EPC:
        raise ValueError(f"{path}: energy {report['energy_joules']} != cycles * {EPC}")
    c = report["cache"]
    if c["l1_misses"] != c["l2_hits"] + c["l2_misses"]:
        raise ValueError(f"{path}: every L1 miss must go to L2")
    if c["l2_misses"] != c["wm_hits"] + c["wm_misses"]:
        raise ValueError(f"{path}: every L2 miss must go to working memory")
    if c["wm_misses"] != c["heap_accesses"]:
        raise ValueError(f"{path}: every working-memory miss must go to the heap")


def main():
    if len(sys.argv) < 3:
        print("usage: validate_report.py SCHEMA REPORT...", file=sys.stderr)
        return 2
    with open(sys.argv[1]) as f:
        schema = json.load(f)
    for path in sys.argv[2:]:
        check(path, schema)
        print(f"ok {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
