"""Plot theta, M and the control from `seqtrack simulate --policy threshold --dump paths.csv`.

    python scripts/plot_paths.py run/paths.csv -o paths.png
"""
import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("paths_csv")
    ap.add_argument("--path", type=int, default=0)
    ap.add_argument("-o", "--output", default="paths.png")
    args = ap.parse_args()

    d = pd.read_csv(args.paths_csv)
    d = d[d.path_id == args.path]
    fig, ax = plt.subplots(figsize=(8, 3))
    ax.step(d.t, d.theta, where="post", label="theta", lw=1)
    ax.plot(d.t, d.m, label="M", lw=0.8)
    if "a" in d:
        ax.step(d.t, 0.9 * d.a, where="post", label="A (scaled)", lw=1, ls="--")
    ax.set_xlabel("t")
    ax.legend(loc="upper right")
    fig.tight_layout()
    fig.savefig(args.output, dpi=120)


if __name__ == "__main__":
    main()
