"""Summary figure for a verify run: pass fraction and wall time per suite."""
from __future__ import annotations


def plot_summary(results, path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    names = [r.config.suite for r in results]
    frac = [r.passes / len(r.reports) for r in results]
    secs = [r.elapsed_ms / 1000 for r in results]
    colors = ["tab:green" if r.ok else "tab:red" for r in results]
    ys = range(len(names))

    fig, (ax1, ax2) = plt.subplots(1, 2, sharey=True, figsize=(9, 0.28 * len(names) + 1.5))
    ax1.barh(ys, frac, color=colors)
    ax1.set_xlim(0, 1)
    ax1.set_xlabel("pass fraction")
    ax1.set_yticks(list(ys))
    ax1.set_yticklabels(names, fontsize=7)
    ax1.invert_yaxis()
    ax2.barh(ys, secs, color="tab:gray")
    ax2.set_xlabel("elapsed (s)")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
