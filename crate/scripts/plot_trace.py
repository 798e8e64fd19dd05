#!/usr/bin/env python3
"""Plot a sequence trace written by `mmdweak run`.

usage: plot_trace.py out/flaw_counterexample.csv [-o trace.png]

Works on the sequence presets (columns n, mmd, f_*, ball_*, total_mass).
Lines starting with '#' are skipped. Exact zeros are drawn at 1e-17, below
double-precision resolution.
"""

import argparse
import csv

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

FLOOR = 1e-17


def read_trace(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(line for line in fh if not line.startswith("#")))
    if not rows or "mmd" not in rows[0]:
        raise SystemExit(f"{path}: not a sequence trace")
    return rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("csv")
    ap.add_argument("-o", "--output", default=None)
    args = ap.parse_args()

    rows = read_trace(args.csv)
    n = [int(r["n"]) for r in rows]
    cols = list(rows[0].keys())
    fig, (top, bottom) = plt.subplots(2, 1, figsize=(7, 7), sharex=True)

    top.semilogy(n, [max(float(r["mmd"]), FLOOR) for r in rows], "k-", lw=2, label="mmd")
    for c in cols:
        if c.startswith("f_"):
            vals = [float(r[c]) for r in rows]
            if any(v > 0 for v in vals):
                top.semilogy(n, [max(v, FLOOR) for v in vals], lw=1, alpha=0.7, label=c)
    top.set_ylabel("distance to target")
    top.legend(fontsize=7, ncol=3)

    for c in cols:
        if c.startswith("ball_"):
            bottom.plot(n, [float(r[c]) for r in rows], label=f"mass in {c}")
    bottom.plot(n, [float(r["total_mass"]) for r in rows], "k--", label="total mass")
    bottom.set_xlabel("n")
    bottom.set_ylabel("mass")
    bottom.legend(fontsize=7)

    fig.tight_layout()
    out = args.output or args.csv.rsplit(".", 1)[0] + ".png"
    fig.savefig(out, dpi=120)
    print(out)


if __name__ == "__main__":
    main()
