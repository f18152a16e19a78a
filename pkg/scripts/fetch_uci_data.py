#!/usr/bin/env python3
"""Fetch the UCI tables that are not redistributed with the package.

Run this once on a machine with network access:

    python scripts/fetch_uci_data.py [--dest src/protoselect/data]

It downloads glass and ecoli from the UCI Machine Learning Repository and
converts them to the package CSV layout (numeric features, label last,
header row). Identifier columns that are not features (glass's row id,
ecoli's sequence name) are dropped; feature counts then match the published
attribute counts minus the class column.
"""

import argparse
import csv
import sys
import urllib.request
from pathlib import Path

UCI = "https://archive.ics.uci.edu/ml/machine-learning-databases"

GLASS_COLUMNS = ["ri", "na", "mg", "al", "si", "k", "ca", "ba", "fe"]
ECOLI_COLUMNS = ["mcg", "gvh", "lip", "chg", "aac", "alm1", "alm2"]


def fetch(url):
    print(f"fetching {url}")
    with urllib.request.urlopen(url, timeout=60) as r:
        return r.read().decode("utf-8")


def write_glass(dest: Path):
    raw = fetch(f"{UCI}/glass/glass.data")
    rows = [line.split(",") for line in raw.strip().splitlines() if line.strip()]
    with open(dest / "glass.csv", "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(GLASS_COLUMNS + ["type"])
        for row in rows:
            w.writerow(row[1:10] + [row[10]])  # drop the leading row id
    print(f"wrote {dest / 'glass.csv'} ({len(rows)} rows)")


def write_ecoli(dest: Path):
    raw = fetch(f"{UCI}/ecoli/ecoli.data")
    rows = [line.split() for line in raw.strip().splitlines() if line.strip()]
    with open(dest / "ecoli.csv", "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(ECOLI_COLUMNS + ["site"])
        for row in rows:
            w.writerow(row[1:8] + [row[8]])  # drop the sequence-name column
    print(f"wrote {dest / 'ecoli.csv'} ({len(rows)} rows)")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument(
        "--dest",
        default=Path(__file__).parent.parent / "src" / "protoselect" / "data",
        type=Path,
    )
    args = ap.parse_args()
    args.dest.mkdir(parents=True, exist_ok=True)
    write_glass(args.dest)
    write_ecoli(args.dest)
    print("done; rerun the test suite to exercise the full acceptance matrix")


if __name__ == "__main__":
    sys.exit(main())
