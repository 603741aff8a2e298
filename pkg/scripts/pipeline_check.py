"""Run the avoiding-word reset construction on random strongly connected
synchronizing automata and compare lengths with the certified bounds."""

import argparse
import collections
import time

from resetwords.compression import classic_bound
from resetwords.generators import STRONGLY_CONNECTED, SYNCHRONIZING, GeneratorSpec, random_automaton
from resetwords.pipeline import pipeline_reset


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-min", type=int, default=9)
    ap.add_argument("--n-max", type=int, default=60)
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--seed", type=int, default=10_000)
    args = ap.parse_args()

    span = args.n_max - args.n_min + 1
    branches = collections.Counter()
    worst_ratio = 0.0
    bad = 0
    start = time.perf_counter()
    for i in range(args.samples):
        n = args.n_min + i % span
        spec = GeneratorSpec("random", n, 2, args.seed + i,
                             {SYNCHRONIZING, STRONGLY_CONNECTED}, method="core")
        cert = pipeline_reset(random_automaton(spec))
        branches[cert.branch.value] += 1
        bad += not cert.within_bound
        worst_ratio = max(worst_ratio, cert.length / float(classic_bound(n)))
    print(f"samples: {args.samples} in {time.perf_counter() - start:.1f}s")
    print(f"branches: {dict(branches)}")
    print(f"over certified bound: {bad}")
    print(f"largest length / ((n^3-n)/6): {worst_ratio:.4f}")


if __name__ == "__main__":
    main()
