"""Treeify every total scheme of a random corpus and check the trees.

For each generated scheme that is total over the class, build the pruned
tree, then confirm strong equivalence and equal implemented functions.
Prints one line per scheme and a summary.

    python scripts/forward_direction.py --seed 7 --count 200 --primes 2 3 5
"""
from __future__ import annotations

import argparse
import random
import statistics
import sys
from dataclasses import dataclass, field

from progtree.corpus import random_scheme
from progtree.equivalence import strongly_equivalent
from progtree.executor import check_totality_class, implemented_function
from progtree.oracle import ClassOracle
from progtree.scheme import classify
from progtree.structures import gf
from progtree.treeify import treeify


@dataclass
class ForwardConfig:
    seed: int = 0
    count: int = 100
    max_nodes: int = 8
    primes: list[int] = field(default_factory=lambda: [2, 3])
    verbose: bool = False


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--max-nodes", type=int, default=8, help="size bound for generated schemes")
    p.add_argument("--primes", type=int, nargs="+", default=[2, 3])
    p.add_argument("--verbose", action="store_true")
    cfg = ForwardConfig(**vars(p.parse_args(argv)))

    K = [gf(q) for q in cfg.primes]
    rng = random.Random(cfg.seed)
    sizes, failures, skipped = [], [], 0
    for i in range(cfg.count):
        S = random_scheme(rng, max_nodes=cfg.max_nodes, name=f"r{cfg.seed}_{i}")
        if not check_totality_class(S, K):
            skipped += 1
            continue
        report = treeify(S, ClassOracle(K, S.n))
        T = report.result
        ok = (report.ok and classify(T).is_finite_tree and bool(strongly_equivalent(S, T, K))
              and all(implemented_function(S, U) == implemented_function(T, U) for U in K))
        if not ok:
            failures.append(S.name)
        sizes.append((len(S), len(T) if T else 0))
        if cfg.verbose:
            print(f"{S.name}\tnodes {len(S)} -> {len(T) if T else '-'}\t"
                  f"completions {report.completions}\t{'ok' if ok else 'FAILED'}")

    print(f"class: {', '.join(U.name for U in K)}")
    print(f"generated {cfg.count}, total {len(sizes)}, not total {skipped}")
    if sizes:
        growth = [t / s for s, t in sizes]
        print(f"tree size / scheme size: median {statistics.median(growth):.2f}, max {max(growth):.2f}")
    print(f"failures: {failures or 'none'}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
