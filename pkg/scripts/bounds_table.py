"""Print the reset threshold bounds for a few n and locate the n from which
the cubic bound with leading coefficient 85059/511104 beats (n^3-n)/6 - 1."""

import argparse

from resetwords.pipeline import bound_report, first_improving_n


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="*", default=[9, 10, 44, 100, 723, 724, 1000, 10000])
    ap.add_argument("--scan", type=int, default=2000)
    args = ap.parse_args()

    print(f"{'n':>6} {'k':>4} {'(n^3-n)/6':>16} {'new':>20} {'parametrized':>18}")
    for n in args.n:
        r = bound_report(n)
        par = float(r.parametrized[r.k_choice]) if r.k_choice else float("nan")
        print(f"{n:>6} {r.k_choice:>4} {float(r.classic_bound):>16.1f} "
              f"{float(r.new_bound):>20.3f} {par:>18.1f}")
    print(f"first improving n up to {args.scan}: {first_improving_n(args.scan)}")


if __name__ == "__main__":
    main()
