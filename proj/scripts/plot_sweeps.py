#!/usr/bin/env python3
"""Plot the sweep CSVs written by `hh2 sweep-kappa`, `sweep-r` and `sweep-size`.

Usage: plot_sweeps.py RUN_DIR [--out DIR]
Missing CSVs are skipped.
"""
import argparse
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def kappa_plot(df, out):
    approx = df[df.backend == "approx"].dropna(subset=["h2_ratio"])
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.semilogy(approx.kappa, approx.h2_ratio - 1.0, "o-")
    ax.set_xlabel("kappa")
    ax.set_ylabel("J(kappa) / J(exact) - 1")
    fig.tight_layout()
    fig.savefig(out / "kappa_sweep.png", dpi=150)


def r_plot(df, out):
    df = df.dropna(subset=["ratio"])
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(df.r, df.ratio, "o-")
    ax.set_xlabel("clusters r")
    ax.set_ylabel("J2* / J1*")
    fig.tight_layout()
    fig.savefig(out / "r_sweep.png", dpi=150)


def size_plot(df, out):
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for col, label in (("time_exact_s", "exact"), ("time_approx_s", "approx")):
        d = df.dropna(subset=[col])
        ax.loglog(d.n, d[col], "o-", label=label)
    ax.set_xlabel("n")
    ax.set_ylabel("solve time [s]")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out / "size_sweep.png", dpi=150)


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("run_dir", type=Path)
    p.add_argument("--out", type=Path, default=None)
    args = p.parse_args()
    out = args.out or args.run_dir
    out.mkdir(parents=True, exist_ok=True)
    for name, fn in (("kappa_sweep.csv", kappa_plot), ("r_sweep.csv", r_plot), ("size_sweep.csv", size_plot)):
        path = args.run_dir / name
        if path.exists():
            fn(pd.read_csv(path), out)
            print(f"wrote {out / name.replace('.csv', '.png')}")


if __name__ == "__main__":
    main()
