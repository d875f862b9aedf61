from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("Agg")

from matplotlib.figure import Figure  # noqa: E402

from gaps.render import save_svg  # noqa: E402


def favard_svg(thetas: np.ndarray, lengths: np.ndarray, favard: float, path: str | Path,
               timestamp: bool = False) -> Path:
    """Plot of theta -> H^1(pi_theta E) with the Favard length as a horizontal line."""
    fig = Figure(figsize=(7, 4))
    ax = fig.add_subplot()
    ax.plot(thetas, lengths, linewidth=0.8, color="black")
    ax.axhline(favard, color="tab:red", linewidth=0.8, linestyle="--", label=f"Fav = {favard:.6g}")
    ax.set_xlim(0.0, 1.0)
    ax.set_ylim(bottom=0.0)
    ax.set_xlabel("theta (turns)")
    ax.set_ylabel("projection length")
    ax.legend(loc="upper right")
    return save_svg(fig, path, timestamp)
