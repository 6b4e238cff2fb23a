"""Figure for the finite-field sweep: one cell per (q, n)."""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402


def sweep_heatmap(records, path, title="Unitary gradings of F_(q^n) | F_q"):
    """Grid of q against n.  Color marks whether a grading exists, the
    label is |U'/K^x|; cells outside the swept domain stay blank."""
    qs = sorted({r.q for r in records})
    ns = sorted({r.n for r in records})
    grid = np.full((len(qs), len(ns)), np.nan)
    fig, ax = plt.subplots(figsize=(1.0 + 0.7 * len(ns), 1.0 + 0.4 * len(qs)))
    for r in records:
        i, j = qs.index(r.q), ns.index(r.n)
        grid[i, j] = 1.0 if r.grading_exists else 0.0
        ax.text(j, i, str(r.uprime_index), ha="center", va="center", fontsize=7)
    cmap = ListedColormap(["#d9d9d9", "#7fbf7f"])
    cmap.set_bad("white")
    ax.imshow(np.ma.masked_invalid(grid), cmap=cmap, vmin=0, vmax=1, aspect="auto")
    ax.set_xticks(range(len(ns)), [str(n) for n in ns])
    ax.set_yticks(range(len(qs)), [str(q) for q in qs])
    ax.set_xlabel("n")
    ax.set_ylabel("q")
    ax.set_title(title, fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
