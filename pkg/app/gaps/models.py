import enum
from core.compat import StrEnum
from dataclasses import dataclass, field

import numpy as np

from core.models import Model
from core.types import FloatArray, Point


@dataclass(frozen=True)
class Gap:
    """Open interval (lo, hi) of the line."""
    lo: float
    hi: float

    @property
    def length(self) -> float:
        return self.hi - self.lo

    @property
    def center(self) -> float:
        return (self.lo + self.hi) / 2

    def contains(self, lo: float, hi: float) -> bool:
        return self.lo <= lo and hi <= self.hi

    def dilate(self, factor: float) -> tuple[float, float]:
        half = factor * self.length / 2
        return self.center - half, self.center + half


@dataclass(frozen=True, kw_only=True)
class GapSet(Model):
    """
    PURPOSE: Connected components of U(R) \\ pi_0(A R_R n E) for one root
    ATTRIBUTES:
        root: int - Root cube id
        span: tuple[float, float] - U(R) = pi_0(x_R) + [-A l(R)/2, A l(R)/2]
        gaps: tuple[Gap, ...] - Sorted, pairwise disjoint gaps
    """
    root: int
    span: tuple[float, float]
    gaps: tuple[Gap, ...]

    @property
    def total_length(self) -> float:
        return sum(gap.length for gap in self.gaps)

    def filtered(self, r: float, A: float) -> tuple[Gap, ...]:
        """K(R, r): gaps with length in [r / A, A r]."""
        return tuple(gap for gap in self.gaps if r / A <= gap.length <= A * r)

    def containing(self, lo: float, hi: float) -> Gap | None:
        return next((gap for gap in self.gaps if gap.contains(lo, hi)), None)


@dataclass(frozen=True, kw_only=True)
class EmptyConeReport:
    """Per-root verdict of the empty-cone condition and witness pairs (sample indices) of failures."""
    passed: dict[int, bool]
    witnesses: tuple[dict, ...] = ()

    @property
    def eligible(self) -> set[int]:
        return {root for root, ok in self.passed.items() if ok}


@dataclass(frozen=True, kw_only=True)
class BadCube:
    """Q in Bad(R) with x in Q and y in X(x, 3J \\ 0.5J, rho L(Q), L(Q)), both sample indices."""
    root: int
    cube: int
    x: int
    y: int


class SearchStatus(StrEnum):
    FOUND = "found"
    NOT_FOUND = "not_found"
    UNRESOLVED = "unresolved"


class VerdictStatus(StrEnum):
    PASS = "pass"
    FAIL = "fail"
    SKIPPED = "skipped"
    NOT_APPLICABLE = "not_applicable"


@dataclass(frozen=True, kw_only=True, eq=False)
class LeftistTrace(Model):
    """
    PURPOSE: Record of the leftist-rectangle search in the reflected frame
    DESCRIPTION: Coordinates are mapped by (u, v) -> (sx u, sy v) so that pi_0(x) < pi_0(y) and x
    lies above y. The gray rectangle G = [x_u, y_u] x [y_v - H/2, y_v + H/2], H = x_v - y_v, is cut
    into 2N + 1 closed strips G_i of height H / (2N + 1), with G_0 centred at y.
    ATTRIBUTES:
        x: Point - Witness x, reflected
        y: Point - Witness y, reflected
        sx: float - Horizontal reflection sign
        sy: float - Vertical reflection sign
        N: int - Strip half-count
        strip_bounds: FloatArray - (2N + 1, 2) vertical bounds of G_{-N} .. G_N
        leftmost: tuple[Point | None, ...] - z_i per strip, None for empty strips
        index: int | None - The leftist strip found
        status: SearchStatus - found, not_found or unresolved
    """
    x: Point
    y: Point
    sx: float
    sy: float
    N: int
    strip_bounds: FloatArray = field(repr=False)
    leftmost: tuple[Point | None, ...] = field(repr=False)
    index: int | None
    status: SearchStatus

    @property
    def strip_height(self) -> float:
        return float(self.strip_bounds[0, 1] - self.strip_bounds[0, 0])

    @property
    def z(self) -> Point | None:
        return None if self.index is None else self.leftmost[self.index + self.N]

    def reflect(self, points: FloatArray) -> FloatArray:
        return np.column_stack([self.sx * points[:, 0], self.sy * points[:, 1]])

    def unreflect_interval(self, lo: float, hi: float) -> tuple[float, float]:
        """Map a pi_0 interval of the reflected frame back to the original one."""
        return (lo, hi) if self.sx > 0 else (-hi, -lo)


@dataclass(frozen=True, kw_only=True)
class GapVerdict:
    """One gap-lemma verdict: hard checks, measured constants and the located gap."""
    root: int
    cube: int
    witness: tuple[int, int]
    status: VerdictStatus
    leftist_index: int | None = None
    gap: tuple[float, float] | None = None
    checks: dict[str, bool] = field(default_factory=dict)
    measured: dict[str, float] = field(default_factory=dict)
    reason: str | None = None

    def json(self) -> dict:
        return {"root": self.root, "cube": self.cube, "witness": list(self.witness), "status": self.status.value,
                "leftist_index": self.leftist_index, "gap": list(self.gap) if self.gap else None,
                "checks": self.checks, "measured": self.measured, "reason": self.reason}


@dataclass(frozen=True, kw_only=True)
class GraphExtraction:
    """Graph of a parallel-segment union over the line perpendicular to theta, with its measured constants."""
    theta: float
    segment_direction: float
    lip: float
    lip_bound: float
    density_constant: float
