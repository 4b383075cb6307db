"""PNG charts for reports: Hilbert functions and fuzz chapter counts."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .modstruct import CHAPTERS  # noqa: E402

__all__ = ["plot_hilbert_function", "plot_chapter_distribution", "series_coefficients"]


def series_coefficients(degrees, upto: int) -> list[int]:
    """Coefficients of 1 / prod(1 - t^e) up to t^upto."""
    coeffs = [1] + [0] * upto
    for e in degrees:
        for i in range(e, upto + 1):
            coeffs[i] += coeffs[i - e]
    return coeffs


def plot_hilbert_function(report, path, dims=None, degrees=None, title=None) -> Path:
    """Invariant dimensions per degree, with the polynomial-ring series overlaid.

    ``report`` may be an AnalysisReport carrying oracle data, or None when
    ``dims`` is given directly.
    """
    if dims is None:
        hil = report.verdicts["hilbert_palindrome"]["hilbert"]
        dims = hil["dims"]
    if degrees is None and report is not None and report.presentation:
        degrees = report.presentation.get("degrees")
    fig, ax = plt.subplots(figsize=(6, 3.5))
    xs = list(range(len(dims)))
    ax.bar(xs, dims, color="#4c72b0", label="dim S(V)^G_d")
    if degrees:
        ref = series_coefficients(degrees, len(dims) - 1)
        ax.plot(xs, ref, "o-", color="#dd8452", ms=3,
                label="S(V)^T(G): 1/prod(1-t^e), e = " + ",".join(map(str, degrees)))
    ax.set_xlabel("degree d")
    ax.set_ylabel("dimension")
    if title is None and report is not None and report.chapter:
        title = f"Hilbert function, chapter {report.chapter}, |G| = {report.order}"
    ax.set_title(title or "Hilbert function")
    ax.legend(fontsize=7)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path


def plot_chapter_distribution(summary, path) -> Path:
    counts = summary.chapters if hasattr(summary, "chapters") else dict(summary)
    labels = [c for c in CHAPTERS if c in counts] + sorted(k for k in counts if k not in CHAPTERS)
    fig, ax = plt.subplots(figsize=(5, 3))
    ax.bar(labels, [counts[k] for k in labels], color="#55a868")
    ax.set_xlabel("chapter")
    ax.set_ylabel("instances")
    ax.set_title("fuzz instances per chapter")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path
