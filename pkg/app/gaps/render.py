from pathlib import Path

import matplotlib

matplotlib.use("Agg")

from matplotlib.figure import Figure  # noqa: E402
from matplotlib.patches import Rectangle  # noqa: E402

from gaps.models import GapVerdict, LeftistTrace  # noqa: E402
from lattice.models import DyadicCube  # noqa: E402
from measures.models import DiscreteMeasure  # noqa: E402

# Fixed salt of the SVG element ids.
SVG_HASH_SALT = "favlab"


def svg_metadata(timestamp: bool) -> dict:
    return {} if timestamp else {"Date": None}


def save_svg(fig: Figure, path: str | Path, timestamp: bool = False) -> Path:
    """Write a figure as SVG; without a timestamp the output is byte-reproducible."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with matplotlib.rc_context({"svg.hashsalt": SVG_HASH_SALT}):
        fig.savefig(path, format="svg", metadata=svg_metadata(timestamp))
    return path


def gap_svg(trace: LeftistTrace, verdict: GapVerdict, mu: DiscreteMeasure, Q: DyadicCube, R: DyadicCube,
            A: float, path: str | Path, timestamp: bool = False) -> Path:
    """
    PURPOSE: Debug render of one gap-lemma case in the reflected frame
    DESCRIPTION: Draws the sample near the gray rectangle, its strips, the leftmost points, the
    rectangles B and A of the chosen strip and the witness pair.
    RETURNS: Path - The written SVG
    """
    points = trace.reflect(mu.points)
    x, y = trace.x, trace.y
    bounds = trace.strip_bounds
    width = y[0] - x[0]
    fig = Figure(figsize=(6, 6))
    ax = fig.add_subplot()
    margin = max(width, bounds[-1, 1] - bounds[0, 0])
    near = (abs(points[:, 0] - (x[0] + y[0]) / 2) <= margin) & (abs(points[:, 1] - y[1]) <= margin)
    ax.scatter(points[near, 0], points[near, 1], s=1, color="black")
    for lo, hi in bounds.tolist():
        ax.add_patch(Rectangle((x[0], lo), width, hi - lo, facecolor="none", edgecolor="0.7", linewidth=0.3))
    leftmost = [z for z in trace.leftmost if z is not None]
    if leftmost:
        ax.scatter([z[0] for z in leftmost], [z[1] for z in leftmost], s=4, color="tab:blue")
    z = trace.z
    if z is not None:
        i = trace.index + trace.N
        lo, hi = bounds[max(i - 1, 0), 0], bounds[min(i + 1, len(bounds) - 1), 1]
        ax.add_patch(Rectangle((x[0], lo), z[0] - x[0], hi - lo, facecolor="tab:green", alpha=0.2, label="B"))
        half = 2 * A * R.tall
        ax.add_patch(Rectangle((z[0] - Q.side / A, z[1] - half), Q.side / A, 2 * half, facecolor="tab:red",
                               alpha=0.2, label="A"))
    ax.scatter([x[0], y[0]], [x[1], y[1]], s=12, color="tab:orange", zorder=3)
    ax.set_xlim(x[0] - 0.1 * margin, y[0] + 0.1 * margin)
    ax.set_ylim(bounds[0, 0] - 0.1 * margin, x[1] + 0.1 * margin)
    ax.set_title(f"root {verdict.root} cube {verdict.cube}: {verdict.status.value}")
    return save_svg(fig, path, timestamp)
