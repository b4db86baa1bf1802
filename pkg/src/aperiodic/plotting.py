"""Report figures rendered with matplotlib to deterministic SVG files."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

_RC = {"svg.hashsalt": "aperiodic", "svg.fonttype": "path", "path.simplify": False}
_META = {"Date": None, "Creator": None}


def _save(fig, path) -> None:
    fig.savefig(path, format="svg", metadata=_META)
    plt.close(fig)


def spectrum_figure(rows, path, title: str = "", report=None) -> None:
    """Orientation count against supertile diameter (log x axis)."""
    import numpy as np

    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(5.5, 4))
        d = [r.diameter for r in rows]
        c = [r.orientation_count for r in rows]
        ax.plot(d, c, "o-", color="#4f86c6", label="orientations")
        if report is not None and report.fit_kind != "degenerate":
            xs = np.geomspace(min(d[1:] or d), max(d), 50)
            a, b = report.log_params
            ax.plot(xs, a + b * np.log(xs), "--", color="#6fb36a", label="log fit")
            k, g = report.power_params
            ax.plot(xs, k * xs ** g, ":", color="#c65f4f", label="power fit")
        ax.set_xscale("log")
        ax.set_xlabel("supertile diameter")
        ax.set_ylabel("distinct orientations")
        ax.set_title(title)
        ax.legend()
        fig.tight_layout()
        _save(fig, path)


def group_figure(rows, path, title: str = "") -> None:
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(5.5, 4))
        ax.plot([r.word_length for r in rows], [r.distinct_elements for r in rows], "s-", color="#a37ac7")
        ax.set_yscale("log")
        ax.set_xlabel("word length")
        ax.set_ylabel("ball size")
        ax.set_title(title)
        fig.tight_layout()
        _save(fig, path)
