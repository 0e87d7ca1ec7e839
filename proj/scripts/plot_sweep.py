"""Plot a threshold sweep written by `seqtrack sweep --dump sweep.csv`.

    python scripts/plot_sweep.py run/sweep.csv -o sweep.png
"""
import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("sweep_csv")
    ap.add_argument("-o", "--output", default="sweep.png")
    args = ap.parse_args()

    s = pd.read_csv(args.sweep_csv).sort_values("B")
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.errorbar(s.B, s["mean"], yerr=1.96 * s.stderr, fmt="o-", capsize=3)
    ax.set_xlabel("threshold B")
    ax.set_ylabel("discounted cost")
    fig.tight_layout()
    fig.savefig(args.output, dpi=120)


if __name__ == "__main__":
    main()
