"""Build tests/fixtures/darfur.csv from the sensemakr Darfur data.

Village fixed effects are expanded into drop-first indicator columns
village_001 .. village_485, numbered by sorted village name.

usage: python prepare_darfur.py <darfur.csv> <out.csv>
"""
import sys

import pandas as pd

KEEP = [
    "peacefactor",
    "directlyharmed",
    "female",
    "age",
    "farmer_dar",
    "herder_dar",
    "pastvoted",
    "hhsize_darfur",
]


def main(src, dst):
    raw = pd.read_csv(src)
    villages = sorted(raw["village"].unique())
    out = raw[KEEP].copy()
    dummies = {
        f"village_{i:03d}": (raw["village"] == v).astype(int)
        for i, v in enumerate(villages)
        if i > 0
    }
    out = pd.concat([out, pd.DataFrame(dummies)], axis=1)
    out.to_csv(dst, index=False)


if __name__ == "__main__":
    main(*sys.argv[1:])
