"""Figure rendering for experiment series.

Output is SVG with a fixed hash salt and no date stamp, so reruns are
byte-identical.
"""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "svg.hashsalt": "scdas",
    "svg.fonttype": "path",
    "font.family": "DejaVu Sans",
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
}

MARKERS = {"opt": "o", "ldhd": "s", "dast": "^", "gcma": "v", "approx": "D"}
LABELS = {"opt": "OPT", "ldhd": "LDHD", "dast": "DAST", "gcma": "G-CMA", "approx": "Approx"}
XLABELS = {
    "density_nodes": "number of nodes N",
    "density_area": "side of square area (m)",
    "ratio": "transmission ratio k",
}


def size(width_in=4.5):
    golden = (5 ** 0.5 - 1) / 2
    return width_in, width_in * golden


def plot_experiment(name: str, by_alg: dict, path: Path, kind: str | None = None) -> Path:
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=size())
        for alg in sorted(by_alg):
            pts = by_alg[alg]
            ax.errorbar([r.param for r in pts], [r.mean for r in pts], yerr=[r.std for r in pts],
                        marker=MARKERS.get(alg, "."), ms=4, lw=1, capsize=2,
                        label=LABELS.get(alg, alg))
        ax.set_xlabel(XLABELS.get(kind, "parameter"))
        ax.set_ylabel("backbone size")
        ax.set_title(name)
        ax.legend(frameon=False)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
    return Path(path)
