from pathlib import Path
from typing import Optional

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from dagster import get_dagster_logger  # noqa: E402

from domain.geometry import DiskRealization, from_origin, hyperbolic_midpoint, to_origin  # noqa: E402
from domain.models import GeodesicSegment, ProcessingResult  # noqa: E402
from domain.tiling import label_edges  # noqa: E402

ARC_SAMPLES = 24


def geodesic_points(a: complex, b: complex, samples: int = ARC_SAMPLES) -> np.ndarray:
    """Points along the disk geodesic from a to b"""
    w = to_origin(a, b)
    r = abs(w)
    t = np.linspace(0.0, 1.0, samples)
    return from_origin(a, np.tanh(t * np.arctanh(r)) * (w / r))


def write_svg(
    r: DiskRealization,
    path: str,
    segment: Optional[GeodesicSegment] = None,
    labels: bool = True,
) -> ProcessingResult:
    """
    Draw the realized tiles, their edge labels (even q) and an optional segment

    Args:
        r: Disk realization to draw
        path: Output SVG file
        segment: Geodesic segment drawn on top of the tiling
        labels: Write the edge labels at edge midpoints

    Returns:
        ProcessingResult with the number of drawn edges
    """
    logger = get_dagster_logger()
    g = r.graph
    try:
        fig, ax = plt.subplots(figsize=(8, 8))
        ax.add_patch(plt.Circle((0, 0), 1.0, fill=False, color="k", linewidth=1.0))
        drawn = set()
        for t in r.tiles:
            w = r.corners[t]
            for s, e in enumerate(g.tile_slots[t]):
                if e is None or e in drawn:
                    continue
                drawn.add(e)
                pts = geodesic_points(w[s - 1], w[s])
                ax.plot(pts.real, pts.imag, color="0.3", linewidth=0.6)
        if labels and g.params.q_even:
            labeling = label_edges(g)
            for e in sorted(drawn):
                a, b = (r.vertex_pos[v] for v in g.edge_ends[e])
                m = hyperbolic_midpoint(a, b)
                size = max(2.0, 9.0 * (1 - abs(m) ** 2))
                ax.text(m.real, m.imag, str(labeling.label[e]), fontsize=size,
                        ha="center", va="center", color="tab:blue")
        if segment is not None:
            pts = geodesic_points(segment.start, segment.end)
            ax.plot(pts.real, pts.imag, color="tab:red", linewidth=1.4)
        ax.set_xlim(-1.02, 1.02)
        ax.set_ylim(-1.02, 1.02)
        ax.set_aspect("equal")
        ax.axis("off")
        out = Path(path)
        out.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(out, format="svg", bbox_inches="tight", metadata={"Date": None})
        plt.close(fig)
        logger.info(f"write_svg: {len(drawn)} edges -> {out}")
        return ProcessingResult(
            success=True,
            message=f"Drawing saved to {out}",
            record_count=len(drawn)
        )
    except Exception as e:
        plt.close("all")
        logger.error(f"write_svg: failed {e}")
        return ProcessingResult(
            success=False,
            message="Failed to write SVG",
            errors=[f"Error: {str(e)}"]
        )
