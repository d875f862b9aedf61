import enum
from core.compat import StrEnum
from dataclasses import dataclass, field

from core.models import Model
from directions.models import DirectionSet
from gaps.models import BadCube, GapVerdict, LeftistTrace
from lattice.models import CubeLattice
from geometry.models import AngleInterval
from measures.models import DiscreteMeasure, PlanarSet


class CheckStatus(StrEnum):
    PASS = "pass"
    FAIL = "fail"
    SKIPPED = "skipped"


@dataclass(frozen=True, kw_only=True)
class CheckResult(Model):
    """
    PURPOSE: Outcome of one named checker on one input
    ATTRIBUTES:
        name: str - Dotted checker name, e.g. gaps.gap_lemma
        case: str - Corpus case or input label
        status: CheckStatus - pass, fail or skipped
        hard: bool - Whether a failure decides the exit status
        details: dict - Error record of failures, skip reasons
        measured: dict - Measured constants and ratios
    """
    name: str
    case: str
    status: CheckStatus
    hard: bool
    details: dict = field(default_factory=dict)
    measured: dict = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return self.hard and self.status is CheckStatus.FAIL


@dataclass(frozen=True, kw_only=True)
class CorpusParameters:
    """Desk-scale parameters of the gap-lemma corpus."""
    J: AngleInterval = AngleInterval(center=0.25, halfwidth=1 / 16)
    rho: float = 0.5
    depth: int = 4
    A: float = 10.0
    spacing: float = 1.5e-4
    M: float = 8.0
    C0: float = 2.0
    N: int = 64
    delta: float = 1e6
    G_depth: int = 12

    @property
    def aspect(self) -> float:
        return self.J.measure

    def G(self) -> DirectionSet:
        return DirectionSet.from_angle_interval(self.J, self.G_depth)


@dataclass(frozen=True, kw_only=True)
class CorpusCase:
    name: str
    planar_set: PlanarSet
    G: DirectionSet | None = None


@dataclass(frozen=True, kw_only=True)
class Mutation:
    """A scripted corruption and the checker it must flip."""
    name: str
    target: str
    description: str


@dataclass(kw_only=True, eq=False)
class GapCase:
    """One gap-lemma verdict with everything needed to re-evaluate or render it."""
    case: str
    bad: BadCube
    trace: LeftistTrace | None
    verdict: GapVerdict


@dataclass(kw_only=True, eq=False)
class CaseOutcome:
    case: str
    mu: DiscreteMeasure
    lattice: CubeLattice | None = None
    results: list[CheckResult] = field(default_factory=list)
    gap_cases: list[GapCase] = field(default_factory=list)


@dataclass(kw_only=True, eq=False)
class VerificationRun:
    results: list[CheckResult] = field(default_factory=list)
    gap_cases: list[GapCase] = field(default_factory=list)
    samples: dict[str, DiscreteMeasure] = field(default_factory=dict)
    lattices: dict[str, CubeLattice] = field(default_factory=dict)

    @property
    def first_failure(self) -> CheckResult | None:
        return next((result for result in self.results if result.failed), None)

    def extend(self, outcome: CaseOutcome):
        self.results.extend(outcome.results)
        self.gap_cases.extend(outcome.gap_cases)
        self.samples[outcome.case] = outcome.mu
        if outcome.lattice is not None:
            self.lattices[outcome.case] = outcome.lattice
