"""Plot V*(x, +1), V*(x, -1) and phi from the CSV dumps of `seqtrack solve`.

    seqtrack --out run solve --dump-phi phi.csv --dump-value value.csv
    python scripts/plot_value.py run/value.csv run/phi.csv -o value.png
"""
import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("value_csv")
    ap.add_argument("phi_csv", nargs="?")
    ap.add_argument("-o", "--output", default="value.png")
    args = ap.parse_args()

    v = pd.read_csv(args.value_csv)
    ncols = 2 if args.phi_csv else 1
    fig, axes = plt.subplots(1, ncols, figsize=(5 * ncols, 4), squeeze=False)
    ax = axes[0][0]
    ax.plot(v.x, v.v_plus, label="V*(x, +1)")
    ax.plot(v.x, v.v_minus, label="V*(x, -1)", ls="--")
    ax.plot(v.x, v.v_star, label="min", lw=0.8, color="k")
    ax.set_xlabel("x")
    ax.legend()
    if args.phi_csv:
        phi = pd.read_csv(args.phi_csv)
        ax = axes[0][1]
        ax.semilogy(phi.x, phi.phi)
        ax.set_xlabel("x")
        ax.set_ylabel("phi")
    fig.tight_layout()
    fig.savefig(args.output, dpi=120)


if __name__ == "__main__":
    main()
