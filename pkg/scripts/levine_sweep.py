"""Check that eta'_n : T_n -> D'_n is an isomorphism over a grid of (n, m), with timings.

    python scripts/levine_sweep.py --max-order 5 --max-labels 3
"""
import argparse
import time

from wtcalc import homs
from wtcalc.exactalg import ResourceLimitError


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--max-order", type=int, default=4)
    p.add_argument("--max-labels", type=int, default=3)
    p.add_argument("--limit-rows", type=int, default=200_000)
    args = p.parse_args()

    bad = 0
    for m in range(1, args.max_labels + 1):
        for n in range(args.max_order + 1):
            t0 = time.perf_counter()
            try:
                rep = homs.verify_levine(n, m, args.limit_rows)
            except ResourceLimitError as exc:
                print(f"n={n} m={m}: skipped ({exc})")
                continue
            dt = time.perf_counter() - t0
            bad += not rep.is_isomorphism
            print(f"n={n} m={m}: iso={rep.is_isomorphism} kernel={rep.kernel} cokernel={rep.cokernel} ({dt:.2f}s)")
    raise SystemExit(1 if bad else 0)


if __name__ == "__main__":
    main()
