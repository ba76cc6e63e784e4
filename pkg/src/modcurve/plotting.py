"""Figures: the tiling of the upper half plane by translates of F."""

from __future__ import annotations

import io
from collections import deque
from typing import IO, Optional, Union

import matplotlib

matplotlib.use("Agg")

import matplotlib as mpl  # noqa: E402
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.patches import Polygon  # noqa: E402

from .errors import InvalidArgumentError  # noqa: E402
from .sl2z import GENERATORS, IDENTITY, Matrix  # noqa: E402

TILE_PREFIX = "tile-"


def set_style(width: float = 8.0) -> None:
    """rcParams used by every figure in this package."""
    mpl.rcParams["font.family"] = "serif"
    mpl.rcParams["font.size"] = width * 1.5
    mpl.rcParams["axes.linewidth"] = 0.8
    mpl.rcParams["svg.fonttype"] = "none"
    mpl.rcParams["svg.hashsalt"] = "modcurve"


def tiling_elements(depth: int) -> list[tuple[Matrix, int]]:
    """Distinct elements of PSL2(Z) given by words of length <= depth, with their word length.

    Matrices are identified with their negatives through ``Matrix.normalized``;
    the order is breadth-first and deterministic.
    """
    if depth < 0:
        raise InvalidArgumentError("depth must be nonnegative")
    start = IDENTITY.normalized()
    seen = {start: 0}
    order = [(start, 0)]
    queue = deque([start])
    names = sorted(GENERATORS)
    while queue:
        g = queue.popleft()
        length = seen[g]
        if length == depth:
            continue
        for name in names:
            h = (g @ GENERATORS[name]).normalized()
            if h not in seen:
                seen[h] = length + 1
                order.append((h, length + 1))
                queue.append(h)
    return order


def domain_boundary(ymax: float = 2.0, samples: int = 48) -> np.ndarray:
    """Closed boundary of F truncated at Im = ymax, counter-clockwise."""
    arc = np.exp(1j * np.linspace(np.pi / 3, 2 * np.pi / 3, samples))
    left = -0.5 + 1j * np.linspace(arc[-1].imag, ymax, samples)
    top = np.linspace(-0.5, 0.5, samples) + 1j * ymax
    right = 0.5 + 1j * np.linspace(ymax, arc[0].imag, samples)
    return np.concatenate([arc, left[1:], top[1:], right[1:-1]])


def _moebius(g: Matrix, z: np.ndarray) -> np.ndarray:
    return (g.a * z + g.b) / (g.c * z + g.d)


def plot_tiling(depth: int, ymax: float = 2.0, ax=None):
    """Draw gamma(F) for every gamma in ``tiling_elements(depth)``; returns (fig, ax, count)."""
    set_style()
    if ax is None:
        fig, ax = plt.subplots(figsize=(8, 4))
    else:
        fig = ax.figure
    boundary = domain_boundary(ymax)
    elements = tiling_elements(depth)
    cmap = plt.get_cmap("viridis")
    for k, (g, length) in enumerate(elements):
        pts = _moebius(g, boundary)
        shade = cmap(length / max(depth, 1))
        patch = Polygon(
            np.column_stack([pts.real, pts.imag]),
            closed=True,
            facecolor=shade,
            edgecolor="black",
            linewidth=0.3,
            alpha=0.6,
        )
        patch.set_gid(f"{TILE_PREFIX}{k}")
        ax.add_patch(patch)
    ax.set_xlim(-2.0, 2.0)
    ax.set_ylim(0.0, ymax)
    ax.set_aspect("equal")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title(f"translates of F, words of length <= {depth}")
    return fig, ax, len(elements)


def render_tiling_svg(
    depth: int, out: Optional[Union[str, IO]] = None, ymax: float = 2.0
) -> tuple[str, int]:
    """Render the tiling as SVG 1.1; returns (svg text, number of tiles)."""
    fig, _, count = plot_tiling(depth, ymax)
    buf = io.StringIO()
    fig.savefig(buf, format="svg", metadata={"Date": None})
    plt.close(fig)
    svg = buf.getvalue()
    if out is not None:
        if isinstance(out, str):
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(svg)
        else:
            out.write(svg)
    return svg, count


def save_tiling(depth: int, path: str, ymax: float = 2.0) -> str:
    """Write the tiling in the format implied by the file extension."""
    if path.endswith(".svg"):
        render_tiling_svg(depth, path, ymax)
        return path
    fig, _, _ = plot_tiling(depth, ymax)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def save_j_axis(path: str, y0: float = 1.0, y1: float = 3.0, samples: int = 200) -> str:
    """log10 |j(iy) - 744| against y, next to the leading term 2 pi y / ln 10."""
    from .analytic import j_invariant

    set_style()
    ys = np.linspace(y0, y1, samples)
    vals = np.array([abs(j_invariant(1j * y) - 744) for y in ys])
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(ys, np.log10(vals), label="log10 |j(iy) - 744|")
    ax.plot(ys, 2 * np.pi * ys / np.log(10), "--", label="log10 |1/q|")
    ax.set_xlabel("y")
    ax.legend()
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path
