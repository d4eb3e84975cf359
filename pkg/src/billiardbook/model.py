"""Domain types for circular billiard books with a repelling Hooke potential.

A billiard book here is a stack of ``n`` unit disks glued along their common
boundary circle; a ball hitting the wall reflects elastically and moves to the
next sheet of the cyclic gluing. The central potential ``k*(x^2+y^2)/2`` with
``k < 0`` repels the ball from the center.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class ValidationError(ValueError):
    """Input parameters or state violate a precondition."""


class ConvergenceError(RuntimeError):
    """A numerical procedure failed to reach its tolerance."""


@dataclass(frozen=True)
class BookTable:
    """An n-sheeted book of unit disks glued along the boundary circle.

    The gluing permutation is restricted to the single cycle (1 2 ... n);
    general permutations are rejected. The radius field is validated and kept
    for display, but every computation assumes the unit disk.
    """

    k: float
    sheets: int = 1
    radius: float = 1.0

    def __post_init__(self) -> None:
        if not self.k < 0:
            raise ValidationError("k must be negative (repelling potential)")
        if not isinstance(self.sheets, int) or self.sheets < 1:
            raise ValidationError("n must be >= 1")
        if not self.radius > 0:
            raise ValidationError("radius must be positive")

    @property
    def omega(self) -> float:
        """Hyperbolic frequency sqrt(-k) of the in-disk flow."""
        return math.sqrt(-self.k)

    @property
    def permutation(self) -> tuple[int, ...]:
        """Image of sheets 1..n under the cyclic gluing, 1-indexed."""
        return tuple(s % self.sheets + 1 for s in range(1, self.sheets + 1))

    def next_sheet(self, sheet: int) -> int:
        if not (isinstance(sheet, int) and 1 <= sheet <= self.sheets):
            raise ValidationError(
                f"sheet must be in 1..{self.sheets}, got {sheet!r}"
            )
        return sheet % self.sheets + 1


def validate_table(
    k: float,
    sheets: int = 1,
    radius: float = 1.0,
    permutation: tuple[int, ...] | None = None,
) -> BookTable:
    """Build a BookTable from raw parameters, rejecting out-of-range input.

    If an explicit permutation is supplied it must be the cycle (1 2 ... n).
    """
    table = BookTable(k=k, sheets=sheets, radius=radius)
    if permutation is not None and tuple(permutation) != table.permutation:
        raise ValidationError(
            "only the cyclic gluing permutation (1 2 ... n) is supported"
        )
    return table


@dataclass(frozen=True)
class PhaseState:
    """A point of phase space: sheet index plus position and velocity."""

    sheet: int
    x: float
    y: float
    vx: float
    vy: float

    @property
    def r2(self) -> float:
        return self.x * self.x + self.y * self.y

    @property
    def r(self) -> float:
        return math.hypot(self.x, self.y)

    @property
    def speed2(self) -> float:
        return self.vx * self.vx + self.vy * self.vy

    @property
    def phi(self) -> float:
        return math.atan2(self.y, self.x)

    def reversed(self) -> "PhaseState":
        """Same point with the velocity negated (time reversal)."""
        return PhaseState(self.sheet, self.x, self.y, -self.vx, -self.vy)


@dataclass(frozen=True)
class MomentumValue:
    """A value (h, f) of the energy H and the angular momentum F."""

    h: float
    f: float

    def as_tuple(self) -> tuple[float, float]:
        return (self.h, self.f)
