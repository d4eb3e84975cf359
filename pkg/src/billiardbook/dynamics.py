"""Exact piecewise-analytic trajectory propagation.

Between wall hits the motion solves ``x'' = -k x`` with ``k < 0``, so it is a
closed-form hyperbolic flow; the wall-hit time reduces to a quadratic in
``exp(2*omega*t)``. No ODE integrator is involved, which makes conservation of
energy and angular momentum a test oracle instead of an error source.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import BookTable, PhaseState, ValidationError

#: tolerance on |r^2 - 1| accepted by reflect()
BOUNDARY_TOL = 1e-9
#: |v . n| below this at a wall hit is treated as a tangential (grazing) hit
GRAZING_TOL = 1e-12


@dataclass(frozen=True)
class TrajectorySegment:
    """One smooth arc of the flow, from a start state to a wall hit (or stop).

    ``reflected`` marks segments that end on the boundary circle and are
    followed by a reflection; ``boundary_orbit`` marks the degenerate critical
    orbit that slides along the wall (one-dimensional region of motion).
    """

    start: PhaseState
    duration: float
    end: PhaseState
    reflected: bool
    boundary_orbit: bool = False


def flow_free(state: PhaseState, t: float, k: float) -> PhaseState:
    """Propagate the in-disk Hooke flow for time t (no wall check)."""
    if t < 0:
        raise ValidationError("propagation time must be nonnegative")
    if not k < 0:
        raise ValidationError("k must be negative")
    w = math.sqrt(-k)
    c = math.cosh(w * t)
    s = math.sinh(w * t)
    return PhaseState(
        state.sheet,
        state.x * c + state.vx / w * s,
        state.y * c + state.vy / w * s,
        state.x * w * s + state.vx * c,
        state.y * w * s + state.vy * c,
    )


def _radial_coefficients(state: PhaseState, w: float) -> tuple[float, float, float]:
    """Coefficients of r^2(t) - 1 = A cosh(2wt) + B sinh(2wt) + C."""
    r2 = state.r2
    v2w = state.speed2 / (w * w)
    a = 0.5 * (r2 + v2w)
    b = (state.x * state.vx + state.y * state.vy) / w
    c = 0.5 * (r2 - v2w) - 1.0
    return a, b, c


def time_to_boundary(state: PhaseState, k: float) -> float:
    """Smallest t > 0 with r(t) = 1 under the free flow.

    Substituting u = exp(2wt) turns r^2(t) = 1 into a quadratic in u; the
    relevant crossing is the larger root, polished by Newton steps on
    r^2(t) - 1 until the residual is below 1e-13.
    """
    if not k < 0:
        raise ValidationError("k must be negative")
    w = math.sqrt(-k)
    if state.r2 > 1.0 + 1e-9:
        raise ValidationError("state lies outside the closed unit disk")
    if state.r2 == 0.0 and state.speed2 == 0.0:
        raise ValidationError("state at rest at the origin is a fixed point")

    a, b, c = _radial_coefficients(state, w)
    # quadratic (A+B) u^2 + 2C u + (A-B) = 0
    qa = a + b
    qb = 2.0 * c
    qc = a - b
    if qa <= 0.0:
        # v = -w*r exactly: the inbound stable ray, asymptotic to the origin
        raise ValidationError(
            "state lies on the stable manifold of the equilibrium and never "
            "reaches the boundary"
        )
    disc = qb * qb - 4.0 * qa * qc
    if disc < 0.0:
        raise ValidationError("no boundary crossing found (internal error)")
    u = (-qb + math.sqrt(disc)) / (2.0 * qa)
    if u <= 1.0 + 1e-15:
        # boundary start moving outward or tangentially
        if state.r2 >= 1.0 - 1e-9:
            return 0.0
        raise ValidationError("no forward boundary crossing (internal error)")
    t = math.log(u) / (2.0 * w)

    for _ in range(3):
        ch = math.cosh(2.0 * w * t)
        sh = math.sinh(2.0 * w * t)
        g = a * ch + b * sh + c
        if abs(g) < 1e-13:
            break
        gp = 2.0 * w * (a * sh + b * ch)
        if gp == 0.0:
            break
        t -= g / gp
    return t


def reflect(table: BookTable, state: PhaseState) -> PhaseState:
    """Elastic reflection at the wall plus transition to the next sheet."""
    r2 = state.r2
    if abs(r2 - 1.0) >= BOUNDARY_TOL:
        raise ValidationError("reflect requires a state on the boundary circle")
    r = math.sqrt(r2)
    nx, ny = state.x / r, state.y / r
    vn = state.vx * nx + state.vy * ny
    if vn < -GRAZING_TOL:
        raise ValidationError("reflect requires a nonnegative outward velocity")
    return PhaseState(
        table.next_sheet(state.sheet),
        state.x,
        state.y,
        state.vx - 2.0 * vn * nx,
        state.vy - 2.0 * vn * ny,
    )


def _rotate(state: PhaseState, angle: float) -> PhaseState:
    c, s = math.cos(angle), math.sin(angle)
    return PhaseState(
        state.sheet,
        c * state.x - s * state.y,
        s * state.x + c * state.y,
        c * state.vx - s * state.vy,
        s * state.vx + c * state.vy,
    )


def _boundary_orbit_segment(state: PhaseState, duration: float) -> TrajectorySegment:
    # On r = 1 the angular speed equals f = x*vy - y*vx.
    f = state.x * state.vy - state.y * state.vx
    end = _rotate(state, f * duration)
    return TrajectorySegment(state, duration, end, reflected=False, boundary_orbit=True)


def segment_min_radius(segment: TrajectorySegment, k: float) -> float:
    """Exact minimum of r over a free-flow segment (closed form)."""
    if segment.boundary_orbit:
        return 1.0
    w = math.sqrt(-k)
    a, b, c = _radial_coefficients(segment.start, w)
    candidates = [segment.start.r2, segment.end.r2]
    if a > 0.0 and abs(b) < a:
        t_min = math.atanh(-b / a) / (2.0 * w)
        if 0.0 < t_min < segment.duration:
            ch = math.cosh(2.0 * w * t_min)
            sh = math.sinh(2.0 * w * t_min)
            candidates.append(a * ch + b * sh + c + 1.0)
    return math.sqrt(max(min(candidates), 0.0))


def sample_segment(segment: TrajectorySegment, k: float, count: int) -> list[PhaseState]:
    """States at count+1 equally spaced times along the segment (ends included)."""
    if segment.boundary_orbit:
        f = segment.start.x * segment.start.vy - segment.start.y * segment.start.vx
        return [
            _rotate(segment.start, f * segment.duration * i / count)
            for i in range(count + 1)
        ]
    return [
        flow_free(segment.start, segment.duration * i / count, k)
        for i in range(count + 1)
    ]


def simulate(
    table: BookTable,
    initial: PhaseState,
    max_reflections: int | None = None,
    max_time: float | None = None,
) -> list[TrajectorySegment]:
    """Propagate until a stop condition, alternating free flow and reflection.

    Each segment ends at the wall (reflected=True) except possibly the last,
    which is cut by max_time. The end of a reflected segment, passed through
    reflect(), is the start of the next segment.
    """
    if max_reflections is None and max_time is None:
        raise ValidationError("a stop condition (max_reflections or max_time) is required")
    if max_reflections is not None and max_reflections < 0:
        raise ValidationError("max_reflections must be nonnegative")
    if max_time is not None and max_time <= 0:
        raise ValidationError("max_time must be positive")

    k = table.k
    if initial.r2 > 1.0 + 1e-12:
        raise ValidationError("initial state must lie in the closed unit disk")
    if initial.r2 == 0.0 and initial.speed2 == 0.0:
        raise ValidationError(
            "the rest state at the origin is the focus-focus equilibrium; "
            "it is reported, not propagated"
        )

    segments: list[TrajectorySegment] = []
    state = initial

    # Critical orbit: on the wall with tangential velocity. One-dimensional
    # region of motion, propagated as pure rotation along the boundary.
    if abs(initial.r2 - 1.0) < BOUNDARY_TOL:
        r = initial.r
        vn = (initial.x * initial.vx + initial.y * initial.vy) / r
        if abs(vn) < GRAZING_TOL:
            if max_time is None:
                raise ValidationError(
                    "the boundary critical orbit never reflects; use max_time"
                )
            return [_boundary_orbit_segment(initial, max_time)]

    t_total = 0.0
    count = 0
    while max_reflections is None or count < max_reflections:
        t_hit = time_to_boundary(state, k)
        if max_time is not None and t_total + t_hit >= max_time:
            dt = max_time - t_total
            end = flow_free(state, dt, k)
            segments.append(TrajectorySegment(state, dt, end, reflected=False))
            return segments
        end = flow_free(state, t_hit, k)
        vn = end.x * end.vx + end.y * end.vy
        if abs(vn) < GRAZING_TOL:
            # grazing hit: clamp to the tangential critical orbit and flag it
            segments.append(TrajectorySegment(state, t_hit, end, reflected=False))
            t_total += t_hit
            if max_time is not None and max_time > t_total:
                segments.append(_boundary_orbit_segment(end, max_time - t_total))
            return segments
        segments.append(TrajectorySegment(state, t_hit, end, reflected=True))
        state = reflect(table, end)
        t_total += t_hit
        count += 1
    return segments
