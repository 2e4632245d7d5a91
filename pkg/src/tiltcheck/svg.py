"""SVG rendering of a wall diagram: chamber cells in two fills plus the
wall conic as a polyline through exactly computed points."""

from __future__ import annotations

import math
from fractions import Fraction
from xml.sax.saxutils import escape

_FILL = {1: "#9ecae1", -1: "#fdae6b", 0: "#d9d9d9"}


def conic_points(conic, alpha_max: Fraction, beta_min: Fraction, beta_max: Fraction, samples: int = 400):
    """Points (beta, alpha) of the wall with 0 < alpha <= alpha_max, grouped into branches.

    alpha^2 is solved exactly for each sampled rational beta; only the final
    square root is taken in floating point for drawing.
    """
    branches, current = [], []
    if conic.degenerate or conic.c_alpha2 == 0:
        return branches
    for k in range(samples + 1):
        beta = beta_min + (beta_max - beta_min) * Fraction(k, samples)
        rest = conic.c_beta2 * beta * beta + conic.c_beta * beta + conic.c_const
        a2 = -rest / conic.c_alpha2
        if 0 < a2 <= alpha_max * alpha_max:
            current.append((beta, math.sqrt(a2)))
        elif current:
            branches.append(current)
            current = []
    if current:
        branches.append(current)
    return branches


def wall_svg(diagram, size: int = 400) -> str:
    alphas, betas = diagram.alphas, diagram.betas
    na, nb = len(alphas), len(betas)
    margin = 30
    cw, chh = size / nb, size / na
    g = diagram.grid
    b0, b1 = Fraction(g.beta_min), Fraction(g.beta_max)
    amax = Fraction(g.alpha_max)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size + 2 * margin}" '
        f'height="{size + 2 * margin}" viewBox="0 0 {size + 2 * margin} {size + 2 * margin}">',
        f"<title>{escape('sign of nu(E) - nu(F)')}</title>",
    ]
    for i in range(na):
        y = margin + size - (i + 1) * chh
        for j in range(nb):
            x = margin + j * cw
            out.append(
                f'<rect x="{x:.3f}" y="{y:.3f}" width="{cw:.3f}" height="{chh:.3f}" '
                f'fill="{_FILL[diagram.signs[i][j]]}"/>'
            )
    span = float(b1 - b0) or 1.0
    for branch in conic_points(diagram.conic, amax, b0, b1):
        pts = " ".join(
            f"{margin + float(beta - b0) / span * size:.3f},{margin + size - a / float(amax) * size:.3f}"
            for beta, a in branch
        )
        out.append(f'<polyline points="{pts}" fill="none" stroke="black" stroke-width="1.5"/>')
    out.append(
        f'<rect x="{margin}" y="{margin}" width="{size}" height="{size}" fill="none" stroke="black"/>'
    )
    out.append(f'<text x="{margin}" y="{margin - 8}" font-size="12">alpha up to {amax}</text>')
    out.append(
        f'<text x="{margin}" y="{size + 2 * margin - 8}" font-size="12">beta from {b0} to {b1}'
        f'{" (degenerate wall)" if diagram.degenerate else ""}</text>'
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"
