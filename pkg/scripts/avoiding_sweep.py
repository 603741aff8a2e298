"""Sweep random strongly connected synchronizing automata and report, per n,
the longest shortest word avoiding a single state next to 2n-2."""

import argparse
import collections

from resetwords.experiments import avoiding_rows, write_rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-min", type=int, default=4)
    ap.add_argument("--n-max", type=int, default=9)
    ap.add_argument("--samples", type=int, default=100)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", default="avoiding.csv")
    args = ap.parse_args()

    n_range = range(args.n_min, args.n_max + 1)
    rows = []

    def make(done):
        for row in avoiding_rows(n_range, args.samples, args.seed, include_cerny=True,
                                 workers=args.jobs, done=done):
            rows.append(row)
            yield row

    write_rows(make, args.out)
    worst = collections.defaultdict(int)
    skipped = collections.Counter()
    exceed = []
    for family, n, _, seed, _, _, value, bound, flag in rows:
        if flag == "skipped":
            skipped[n] += 1
            continue
        worst[(family, n)] = max(worst[(family, n)], value)
        if flag == "false":
            exceed.append((family, n, seed, value))

    print(f"{'n':>3} {'2n-2':>5} {'random max':>10} {'cerny':>6} {'skipped':>8}")
    for n in n_range:
        print(f"{n:>3} {2 * n - 2:>5} {worst[('random', n)]:>10} "
              f"{worst[('cerny', n)]:>6} {skipped[n]:>8}")
    if exceed:
        print("EXCEEDS 2n-2:", exceed)
    print(f"rows written to {args.out}")


if __name__ == "__main__":
    main()
