"""Plot the datasets written by run_figures.py (needs matplotlib)."""

import argparse
import csv
import json
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

LABELS = {"E": r"$\Delta\tilde E$", "L": r"$\Delta\tilde{\mathcal{L}}$", "I": r"$\Delta\tilde{\mathcal{I}}$"}


def read_rows(path):
    with open(path) as fh:
        return list(csv.DictReader(line for line in fh if not line.startswith("#")))


def curves(rows, key):
    out = defaultdict(list)
    for r in rows:
        out[(r["quantity"],) + tuple(float(r[k]) for k in key)].append((float(r["T"]), float(r["scaled_response"])))
    return out


def plot_sweep(path, target):
    data = curves(read_rows(path), ("h0",))
    fig, axes = plt.subplots(1, 3, figsize=(12, 3.5), sharex=True)
    for ax, q in zip(axes, "ELI"):
        for (qq, h0), pts in sorted(data.items()):
            if qq == q:
                T, v = zip(*pts)
                ax.plot(T, v, label=f"h0={h0:g}")
        ax.set_xlabel(r"$k_BT/J$")
        ax.set_ylabel(LABELS[q])
    axes[0].legend(frameon=False)
    fig.tight_layout()
    fig.savefig(target, dpi=150)


def plot_quench_length(path, target):
    data = curves(read_rows(path), ("h0", "h1"))
    fig, ax = plt.subplots(figsize=(4.5, 3.5))
    for (_, h0, h1), pts in sorted(data.items()):
        T, v = zip(*pts)
        ax.plot(T, v, label=f"{h0:g} -> {h1:g}")
    ax.set_xlabel(r"$k_BT/J$")
    ax.set_ylabel(LABELS["E"])
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(target, dpi=150)


def plot_qcr(directory, target):
    fig, ax = plt.subplots(figsize=(4.5, 3.5))
    for q in "ELI":
        rows = [r for r in read_rows(Path(directory) / f"qcr_{q}.csv") if r["tstar"]]
        ax.plot([float(r["h0"]) for r in rows], [float(r["tstar"]) for r in rows], "o-", ms=3, label=q)
    fit = json.loads((Path(directory) / "qcr_fit.json").read_text())
    ax.set_title(fit["mode"])
    ax.set_xlabel(r"$h_0/J$")
    ax.set_ylabel(r"$k_BT^*/J$")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(target, dpi=150)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--data", default="data")
    args = ap.parse_args()
    d = Path(args.data)
    if (d / "fig2_sweep.csv").exists():
        plot_sweep(d / "fig2_sweep.csv", d / "fig2.png")
    if (d / "fig2_inset.csv").exists():
        plot_sweep(d / "fig2_inset.csv", d / "fig2_inset.png")
    if (d / "fig3_quench_length.csv").exists():
        plot_quench_length(d / "fig3_quench_length.csv", d / "fig3.png")
    for mode in ("ising", "multicritical"):
        if (d / f"qcr_{mode}").is_dir():
            plot_qcr(d / f"qcr_{mode}", d / f"fig4_{mode}.png")


if __name__ == "__main__":
    main()
