"""Deterministic SVG diagrams of the disk geometry.

The picture shows the unit circle, the product's zeros and critical
points, the branch locus, the cut polyline joining the branch-locus
points, the working circle with its base point, and the monodromy loops.
Every element carries a class attribute so the output can be restyled.

The cut polyline follows the classical ordering convention: branch-locus
points are sorted lexicographically by (real part, imaginary part), the
polyline starts at the boundary point directly above the first point
(same real part, positive imaginary part on the unit circle), and then
visits the sorted points in order.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

from .monodromy import BranchLocus, Loop
from .nthroot import AnnulusFrame
from .products import FiniteBlaschkeProduct

__all__ = ["cut_polyline", "render_disk"]

_STYLE = """
    .unit-circle { fill: none; stroke: #263238; stroke-width: 0.012; }
    .working-circle { fill: none; stroke: #2e7d32; stroke-width: 0.006;
                      stroke-dasharray: 0.04 0.03; }
    .zero { fill: #1565c0; stroke: none; }
    .critical-point { fill: #e65100; stroke: none; }
    .branch-point { fill: none; stroke: #c2185b; stroke-width: 0.008; }
    .cut-polyline { fill: none; stroke: #c2185b; stroke-width: 0.006;
                    stroke-dasharray: 0.025 0.02; }
    .monodromy-loop { fill: none; stroke: #546e7a; stroke-width: 0.005; }
    .base-point { fill: #2e7d32; stroke: none; }
"""


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def _xy(z: complex) -> tuple[str, str]:
    # SVG's y axis points down; the disk is drawn with y up.
    return _fmt(z.real), _fmt(-z.imag)


def _circle(z: complex, r: float, cls: str, title: str | None = None) -> str:
    x, y = _xy(z)
    body = f'<circle class="{cls}" cx="{x}" cy="{y}" r="{_fmt(r)}"'
    if title is None:
        return body + "/>"
    return body + f"><title>{title}</title></circle>"


def _polyline(points: Iterable[complex], cls: str) -> str:
    coords = " ".join(",".join(_xy(z)) for z in points)
    return f'<polyline class="{cls}" points="{coords}"/>'


def cut_polyline(locus_points: Sequence[complex]) -> tuple[complex, ...]:
    """Vertices of the cut polyline through the branch-locus points.

    Points are visited in lexicographic (real, imaginary) order, starting
    from the unit-circle point directly above the first one.
    """
    if not locus_points:
        return ()
    ordered = sorted(locus_points, key=lambda z: (z.real, z.imag))
    x0 = ordered[0].real
    anchor = complex(x0, math.sqrt(max(0.0, 1.0 - x0 * x0)))
    return (anchor, *ordered)


def _grouped(points: Sequence[complex], tol: float = 1e-7):
    groups: list[tuple[complex, int]] = []
    for z in points:
        for i, (center, count) in enumerate(groups):
            if abs(z - center) <= tol:
                groups[i] = (center, count + 1)
                break
        else:
            groups.append((complex(z), 1))
    return groups


def render_disk(
    product: FiniteBlaschkeProduct,
    *,
    critical: Sequence[complex] = (),
    locus: BranchLocus | None = None,
    frame: AnnulusFrame | None = None,
    loops: Sequence[Loop] = (),
) -> str:
    """Render the disk diagram as a standalone SVG document string."""
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" viewBox="-1.15 -1.15 2.3 2.3" '
        'width="640" height="640">',
        f"<style>{_STYLE}</style>",
        '<circle class="unit-circle" cx="0" cy="0" r="1"/>',
    ]
    if frame is not None:
        lines.append(
            f'<circle class="working-circle" cx="0" cy="0" '
            f'r="{_fmt(frame.radius)}"/>'
        )
    for loop in loops:
        # The full-circle loop would just retrace the working circle.
        if loop.target_index is not None:
            lines.append(_polyline(loop.vertices, "monodromy-loop"))
    if locus is not None and locus.points:
        gamma = cut_polyline([lp.point for lp in locus.points])
        lines.append(_polyline(gamma, "cut-polyline"))
        for lp in locus.points:
            lines.append(
                _circle(
                    lp.point,
                    0.016,
                    "branch-point",
                    f"branch locus ({lp.kind}, multiplicity {lp.multiplicity})",
                )
            )
    for center, count in _grouped(critical):
        title = "critical point" + (f" (x{count})" if count > 1 else "")
        lines.append(_circle(center, 0.012, "critical-point", title))
    for center, count in _grouped(product.zeros):
        title = "zero" + (f" (x{count})" if count > 1 else "")
        lines.append(_circle(center, 0.014, "zero", title))
    if frame is not None:
        lines.append(_circle(frame.base, 0.014, "base-point", "base point"))
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
