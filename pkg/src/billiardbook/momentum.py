"""Momentum map, its image, the bifurcation diagram, and fiber classification.

The map sends a phase state to (h, f) = (H, F). Its image is the convex region
h >= (f^2 + k)/2; the critical values form the boundary parabola plus the
isolated point (0, 0), over which sits the n-pinched singular fiber.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .model import BookTable, MomentumValue, PhaseState, ValidationError

#: classification tolerance in (h, f) space
SIGMA_TOL = 1e-9


class FiberTag(enum.Enum):
    OUTSIDE_IMAGE = "outside-image"
    ATOM_A_CIRCLE = "atom-A-circle"
    REGULAR_TORUS = "regular-torus"
    PINCHED_TORUS = "pinched-torus"
    FOCUS_FOCUS_POINT = "focus-focus-point"


@dataclass(frozen=True)
class FiberClass:
    """Classification of one momentum-map fiber.

    For the singular fiber over (0, 0) the pinch count equals the sheet count
    and the fiber carries the rank-0 equilibria; it is homotopy equivalent to
    a bouquet of that many 2-spheres. Only this combinatorial data is
    reported; no mesh of the fiber is built.
    """

    tag: FiberTag
    pinches: int | None = None
    contains_focus_focus: bool = False


def momentum_map(state: PhaseState, k: float) -> MomentumValue:
    """Evaluate (H, F) on a phase state."""
    h = 0.5 * state.speed2 + 0.5 * k * state.r2
    f = state.x * state.vy - state.y * state.vx
    return MomentumValue(h, f)


def gradients(state: PhaseState, k: float) -> tuple[np.ndarray, np.ndarray]:
    """The covectors dH and dF at a state, in (x, y, vx, vy) components."""
    dh = np.array([k * state.x, k * state.y, state.vx, state.vy])
    df = np.array([state.vy, -state.vx, -state.y, state.x])
    return dh, df


def in_image(h: float, f: float, k: float) -> bool:
    """Whether (h, f) lies in the image of the momentum map."""
    if not k < 0:
        raise ValidationError("k must be negative")
    return h >= (f * f + k) / 2.0


def inner_radius(h: float, f: float, k: float) -> float:
    """Inner radius r0 of the annulus of possible motion.

    r0 = sqrt((-h + sqrt(h^2 - k f^2)) / (-k)); zero exactly when h >= 0 and
    f = 0 (motion along a diameter through the center).
    """
    if not in_image(h, f, k):
        raise ValidationError(f"({h}, {f}) is outside the momentum-map image")
    root = math.sqrt(h * h - k * f * f)
    if h > 0.0:
        # avoid cancellation of -h + root for small f
        rho0 = f * f / (root + h)
    else:
        rho0 = (-h + root) / (-k)
    return math.sqrt(max(rho0, 0.0))


def annulus(h: float, f: float, k: float) -> tuple[float, float]:
    """Region of possible motion on each sheet, as radii (r0, 1)."""
    return inner_radius(h, f, k), 1.0


def classify_fiber(table: BookTable, h: float, f: float, tol: float = SIGMA_TOL) -> FiberClass:
    """Classify the fiber over (h, f); values within tol of Sigma are singular."""
    k = table.k
    d = h - (f * f + k) / 2.0
    if d < -tol:
        return FiberClass(FiberTag.OUTSIDE_IMAGE)
    if max(abs(h), abs(f)) <= tol:
        return FiberClass(
            FiberTag.PINCHED_TORUS,
            pinches=table.sheets,
            contains_focus_focus=True,
        )
    if abs(d) <= tol:
        return FiberClass(FiberTag.ATOM_A_CIRCLE)
    return FiberClass(FiberTag.REGULAR_TORUS)


@dataclass(frozen=True)
class BifurcationDiagram:
    """Sampled critical values: the parabola h = (f^2+k)/2 plus the point (0,0)."""

    k: float
    f: np.ndarray
    h: np.ndarray
    isolated_point: tuple[float, float] = (0.0, 0.0)

    @property
    def vertex(self) -> tuple[float, float]:
        """Parabola vertex in (h, f): the minimum of the boundary parabola."""
        return (self.k / 2.0, 0.0)


def bifurcation_diagram(
    k: float, f_min: float = -1.5, f_max: float = 1.5, resolution: int = 201
) -> BifurcationDiagram:
    """Sample the bifurcation diagram over an f-range."""
    if not k < 0:
        raise ValidationError("k must be negative")
    if resolution < 2:
        raise ValidationError("resolution must be >= 2")
    f = np.linspace(f_min, f_max, resolution)
    h = (f * f + k) / 2.0
    return BifurcationDiagram(k=k, f=f, h=h)


def critical_point_residual(
    k: float,
    grid: int = 9,
    v_max: float = 2.0,
    sigma_margin: float = 0.05,
) -> float:
    """Brute-force check that the equilibrium is the only interior critical point.

    Returns the minimum of ||dH ^ dF|| over a phase grid restricted to the disk
    interior and to states whose momentum value keeps a margin from Sigma (the
    parabola and the origin). A strictly positive return is evidence, not
    proof, that no further critical points exist.
    """
    if not k < 0:
        raise ValidationError("k must be negative")
    s = np.linspace(-1.0, 1.0, grid)
    v = np.linspace(-v_max, v_max, grid)
    x, y, vx, vy = np.meshgrid(s, s, v, v, indexing="ij")
    r2 = x * x + y * y
    h = 0.5 * (vx * vx + vy * vy) + 0.5 * k * r2
    f = x * vy - y * vx
    keep = (r2 < 1.0) & (np.abs(h - (f * f + k) / 2.0) > sigma_margin)
    keep &= np.maximum(np.abs(h), np.abs(f)) > sigma_margin
    # 2x2 minors of the Jacobian [dH; dF]
    dh = (k * x, k * y, vx, vy)
    df = (vy, -vx, -y, x)
    wedge2 = np.zeros_like(x)
    for i in range(4):
        for j in range(i + 1, 4):
            m = dh[i] * df[j] - dh[j] * df[i]
            wedge2 += m * m
    return float(np.sqrt(wedge2[keep]).min())
