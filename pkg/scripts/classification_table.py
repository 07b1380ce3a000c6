"""Print the computed tree groups and predicted W_n, W^oo_n for a range of cells.

    python scripts/classification_table.py --max-order 4 --labels 1 2
"""
import argparse
import json

from wtcalc import homs


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--max-order", type=int, default=4)
    p.add_argument("--labels", type=int, nargs="+", default=[1, 2])
    p.add_argument("--json", action="store_true")
    args = p.parse_args()

    rows = []
    for m in args.labels:
        for n in range(args.max_order + 1):
            rows.append(homs.classify(n, m))
    if args.json:
        print(json.dumps([c.to_dict() for c in rows], indent=1, sort_keys=True))
        return
    head = ("n", "m", "T", "T~", "T^oo", "D", "D'", "ker eta", "W", "W^oo")
    print(" | ".join(head))
    for c in rows:
        g = c.groups
        cells = [c.order, c.labels, g["T"], g["T_tilde"], g["T_inf"], g["D"], g["D_prime"], c.eta.kernel,
                 f"{c.predicted_w} ({c.status_w[0]})", f"{c.predicted_w_inf} ({c.status_w_inf[0]})"]
        print(" | ".join(str(x) for x in cells))


if __name__ == "__main__":
    main()
