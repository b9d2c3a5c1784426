#!/usr/bin/env python3
"""How much time does value matching add to integration?

A seeded six-table universe of shared entities is integrated twice per
size: once directly (regular) and once through the full fuzzy pipeline
(match, rewrite, integrate) with the cached n-gram embedder. The two
series track each other closely because the assignment step costs far
less than the integration itself.

Sizes here are kept small so the demo finishes in about a minute; pass
larger sizes on the command line (e.g. ``05_scaling_benchmark.py 5000
10000``) for a fuller curve.
"""

import sys
from pathlib import Path

from fuzzyfd import bench_scaling
from fuzzyfd.evaluation import write_bench_csv, write_bench_json, write_bench_series

sizes = [int(s) for s in sys.argv[1:]] or [600, 1200, 2400]

print(f"timing regular vs fuzzy integration at sizes {sizes} (3 repeats each)...")
report = bench_scaling(sizes, repeats=3, overlap=1.0, corruption=0.0, seed=7)

print(f"\n{'tuples':>8}  {'regular':>9}  {'fuzzy':>9}  {'matcher':>9}  {'overhead':>8}")
for p in report.points:
    overhead = p.fuzzy_seconds / p.regular_seconds
    print(f"{p.size:>8}  {p.regular_seconds:>8.2f}s  {p.fuzzy_seconds:>8.2f}s  "
          f"{p.matcher_seconds:>8.2f}s  {overhead:>7.2f}x")

out_dir = Path(__file__).parent / "bench_out"
out_dir.mkdir(exist_ok=True)
write_bench_csv(report, out_dir / "bench.csv")
write_bench_series(report, out_dir / "bench_series.csv")
write_bench_json(report, out_dir / "bench.json")
print(f"\nseries written to {out_dir}/ (bench.csv, bench_series.csv, bench.json)")
