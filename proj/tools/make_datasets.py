#!/usr/bin/env python3
"""Regenerates the bundled synthetic CSV datasets (deterministic)."""
import csv
import random
import sys
from pathlib import Path


def separable2(rng, rows=200):
    # label is the stump x >= 5
    out = [["x:num", "y:num", "label"]]
    for _ in range(rows):
        x = round(rng.uniform(0, 10), 2)
        y = round(rng.uniform(0, 10), 2)
        out.append([x, y, "pos" if x >= 5 else "neg"])
    return out


def synthetic8(rng, rows=400):
    # yes iff (f1 + f2 > 10 and f7 != c) or f3 > 7
    header = [f"f{i}:num" for i in range(1, 7)] + ["f7:cat", "f8:cat", "label"]
    out = [header]
    for _ in range(rows):
        nums = [round(rng.uniform(0, 10), 2) for _ in range(6)]
        f7 = rng.choice("abc")
        f8 = rng.choice("pq")
        yes = (nums[0] + nums[1] > 10 and f7 != "c") or nums[2] > 7
        out.append(nums + [f7, f8, "yes" if yes else "no"])
    return out


def main():
    target = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data" / "datasets"
    target.mkdir(parents=True, exist_ok=True)
    for name, make, seed in (("separable2.csv", separable2, 7), ("synthetic8.csv", synthetic8, 8)):
        with open(target / name, "w", newline="") as f:
            csv.writer(f, lineterminator="\n").writerows(make(random.Random(seed)))


if __name__ == "__main__":
    main()
