"""Figure output for comparison runs.

Kept separate so matplotlib is only imported when a figure is actually
requested; the delimited output never depends on it.
"""

from __future__ import annotations


def save_ratio_figure(xs, counts, mains, label: str, path: str) -> None:
    """Plot count/main-term ratio against x on a log axis and save to path."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    ratios = [c / m for c, m in zip(counts, mains)]
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    ax.plot(xs, ratios, marker="o", color="#1f5fa8", label=label)
    ax.axhline(1.0, color="#888888", linewidth=0.8, linestyle="--")
    ax.set_xscale("log")
    ax.set_xlabel("x")
    ax.set_ylabel("count / main term")
    ax.set_title(f"{label}: empirical count against asymptotic main term")
    ax.grid(True, which="both", alpha=0.25)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
