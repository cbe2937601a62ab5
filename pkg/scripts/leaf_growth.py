"""Leaf counts of treeified predicate chains over growing classes of cyclic rings.

Over K_M = {Z_1..Z_M} the chain of "at least k elements" tests is total, yet
the tree that serves K_M keeps growing with M. Over a single fixed structure
the tree stops changing once the chain passes its size.

    python scripts/leaf_growth.py --max-m 10 --csv growth.csv
"""
from __future__ import annotations

import argparse
import csv
import sys
import time
from dataclasses import dataclass

from progtree.corpus import distinct_family
from progtree.executor import check_totality_class
from progtree.oracle import ClassOracle
from progtree.scheme import format_scheme
from progtree.structures import RING, cyclic_family, gf
from progtree.treeify import counterexample_scheme, satisfiable_complete_paths, treeify


@dataclass
class GrowthConfig:
    max_m: int = 8
    fixed_prime: int = 3
    csv_path: str | None = None


def growth_rows(cfg: GrowthConfig):
    for M in range(1, cfg.max_m + 1):
        K = [cyclic_family(i) for i in range(1, M + 1)]
        chain = counterexample_scheme(distinct_family(1), M, 1, RING)
        t0 = time.perf_counter()
        report = treeify(chain, ClassOracle(K, 1))
        elapsed = time.perf_counter() - t0
        brute = len(satisfiable_complete_paths(chain, K, 2 * M + 2))
        yield {
            "M": M,
            "total": bool(check_totality_class(chain, K)),
            "leaves": report.leaves,
            "satisfiable_paths": brute,
            "completions": report.completions,
            "tree_nodes": len(report.result),
            "seconds": round(elapsed, 4),
        }


def fixed_structure_trees(cfg: GrowthConfig):
    U = gf(cfg.fixed_prime)
    seen = {}
    for k in range(1, cfg.max_m + 1):
        T = treeify(counterexample_scheme(distinct_family(1), k, 1, RING), ClassOracle([U], 1),
                    name="tree").result
        seen.setdefault(format_scheme(T), []).append(k)
    return U.name, list(seen.values())


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--max-m", type=int, default=GrowthConfig.max_m)
    p.add_argument("--fixed-prime", type=int, default=GrowthConfig.fixed_prime)
    p.add_argument("--csv", dest="csv_path")
    cfg = GrowthConfig(**vars(p.parse_args(argv)))

    rows = list(growth_rows(cfg))
    cols = list(rows[0])
    print("\t".join(cols))
    for r in rows:
        print("\t".join(str(r[c]) for c in cols))
    strictly = all(a["leaves"] < b["leaves"] for a, b in zip(rows, rows[1:]))
    print(f"leaf count strictly increasing: {strictly}")

    name, groups = fixed_structure_trees(cfg)
    print(f"over {name} alone, prefix lengths sharing one tree: {groups}")

    if cfg.csv_path:
        with open(cfg.csv_path, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=cols)
            w.writeheader()
            w.writerows(rows)
    return 0 if strictly else 1


if __name__ == "__main__":
    sys.exit(main())
