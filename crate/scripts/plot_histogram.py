# Copyright 2026 The geodesic-gate Authors
# SPDX-License-Identifier: Apache-2.0
"""Example plot of step-count histograms from `geogate batch --runs-csv`.

Documentation only; needs pandas and matplotlib.

    python scripts/plot_histogram.py geodesic_runs.csv gd_runs.csv -o steps.png
"""
import argparse

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("runs", nargs="+", help="per-run CSV files")
    parser.add_argument("-o", "--output", default="steps.png")
    parser.add_argument("--per-decade", type=int, default=4)
    args = parser.parse_args()

    frames = [pd.read_csv(path) for path in args.runs]
    converged = pd.concat(frames).query("converged")
    top = max(converged["steps"].max(), 1)
    edges = np.concatenate(
        [[0], 10 ** (np.arange(1, args.per_decade * np.log10(top) + 2) / args.per_decade)]
    )
    fig, ax = plt.subplots(figsize=(6, 4))
    for frame in frames:
        ok = frame[frame["converged"]]
        rate = len(ok) / len(frame)
        label = f"{frame['method'].iloc[0]} ({rate:.0%} converged)"
        ax.hist(ok["steps"], bins=edges, alpha=0.6, label=label)
    ax.set_xscale("symlog", linthresh=1)
    ax.set_xlabel("steps to infidelity < epsilon")
    ax.set_ylabel("runs")
    ax.legend()
    fig.tight_layout()
    fig.savefig(args.output, dpi=150)


if __name__ == "__main__":
    main()
