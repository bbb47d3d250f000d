#!/usr/bin/env python3
"""Brute-force census oracle for the committed golden files.

Iterates the Syracuse map by repeated halving and ranks each tuple by
sorting. Shares no code with the Rust implementation.

    python3 generate.py   # rewrites census_n{N}_M{M}.json in this directory
"""
import json
import os


def syracuse(m):
    x = 3 * m + 1
    while x % 2 == 0:
        x //= 2
    return x


def census(max_m, n):
    counts = {}
    repeated = 0
    for m in range(1, max_m + 1, 2):
        t = [m]
        while len(t) < n:
            t.append(syracuse(t[-1]))
        if len(set(t)) < n:
            repeated += 1
            continue
        ordered = sorted(t)
        key = ",".join(str(ordered.index(v) + 1) for v in t)
        counts[key] = counts.get(key, 0) + 1
    return {
        "n": n,
        "M": max_m,
        "denominator": (max_m + 1) // 2,
        "repeated": repeated,
        "counts": dict(sorted(counts.items())),
    }


if __name__ == "__main__":
    here = os.path.dirname(os.path.abspath(__file__))
    for max_m in (100, 1000, 10000):
        for n in (2, 3, 4):
            path = os.path.join(here, f"census_n{n}_M{max_m}.json")
            with open(path, "w") as f:
                f.write(json.dumps(census(max_m, n), indent=2) + "\n")
