import logging
from fractions import Fraction
from typing import Iterator

import numpy as np

from core.errors import CheckFailure, PreconditionViolation
from core.settings import Settings
from directions.errors import DepthExhausted
from directions.models import DirectionSet, DyadicInterval, EnlargementTrace, IterationResult

logger = logging.getLogger(__name__)


def iteration_bound(epsilon: float, s: float) -> int:
    """
    PURPOSE: Closed-form bound on the number of enlargement steps
    DESCRIPTION: Smallest k with (s/4)(1 + eps)^k >= 1 - eps, evaluated in exact rational
    arithmetic; equals max(0, ceil(log((1 - eps) 4 / s) / log(1 + eps))).
    ARGUMENTS:
        epsilon: float - Growth parameter in (0, 1)
        s: float - Initial density parameter, positive
    RETURNS: int - The bound k0_max
    """
    eps = Fraction(epsilon)
    level = Fraction(s) / 4
    target = 1 - eps
    k = 0
    while level < target:
        level *= 1 + eps
        k += 1
    return k


def all_dyadic_intervals(J: DyadicInterval, depth: int) -> Iterator[DyadicInterval]:
    """Every dyadic interval inside J down to the given depth, coarse to fine."""
    for k in range(J.depth, depth + 1):
        shift = k - J.depth
        for index in range(J.index << shift, (J.index + 1) << shift):
            yield DyadicInterval(k, index)


class _Counts:
    """Prefix sums of a bitset, so H(I n G) is an O(1) integer lookup."""
    def __init__(self, G: DirectionSet):
        self.depth = G.depth
        self.prefix = np.concatenate([[0], np.cumsum(G.bits, dtype=np.int64)])

    def count(self, interval: DyadicInterval) -> int:
        cells = interval.cells(self.depth)
        return int(self.prefix[cells.stop] - self.prefix[cells.start])


class DirectionService:
    """
    PURPOSE: Dyadic direction-set constructions
    DESCRIPTION: Implements the enlargement G -> G* of a direction set inside a dyadic interval J,
    its iteration until G fills J up to a factor 1 - eps, and the maximal dyadic gaps of J \\ G.
    All measures are compared in exact rational arithmetic.
    ATTRIBUTES:
        settings: Settings - Supplies the default epsilon and bitset depth
    """
    def __init__(self, settings: Settings):
        self.settings = settings

    def maximal_gaps(self, J: DyadicInterval, G: DirectionSet) -> list[DyadicInterval]:
        """
        PURPOSE: Maximal dyadic intervals contained in J \\ G
        ARGUMENTS:
            J: DyadicInterval - Ambient interval
            G: DirectionSet - Direction set contained in J
        RETURNS: list[DyadicInterval] - Disjoint intervals sorted by start, union exactly J \\ G
        CONTRACTS:
            RAISES:
                - DepthExhausted - when J is finer than the bitset
                - PreconditionViolation - when G is not contained in J
        """
        self._require_inside(J, G)
        counts = _Counts(G)
        gaps = []
        stack = [J]
        while stack:
            interval = stack.pop()
            if counts.count(interval) == 0:
                gaps.append(interval)
            elif interval.depth < G.depth:
                stack.extend(reversed(interval.children()))
        return sorted(gaps, key=lambda interval: interval.start)

    def dense_family(self, J: DyadicInterval, G: DirectionSet, epsilon: float) -> list[DyadicInterval]:
        """
        PURPOSE: Maximal dyadic I inside J with H(I n G) >= (1 - eps) H(I)
        DESCRIPTION: Top-down search; intervals missing G entirely are pruned.
        RETURNS: list[DyadicInterval] - Disjoint intervals sorted by start
        """
        self._require_inside(J, G)
        eps = Fraction(epsilon)
        counts = _Counts(G)
        family = []
        stack = [J]
        while stack:
            interval = stack.pop()
            count = counts.count(interval)
            if count == 0:
                continue
            if count >= (1 - eps) * (2 ** (G.depth - interval.depth)):
                family.append(interval)
            elif interval.depth < G.depth:
                stack.extend(reversed(interval.children()))
        return sorted(family, key=lambda interval: interval.start)

    def enlarge(self, J: DyadicInterval, G: DirectionSet, epsilon: float | None = None) -> EnlargementTrace:
        """
        PURPOSE: One enlargement step G -> G*
        DESCRIPTION: I_family are the maximal dyadic I inside J with H(I n G) >= (1 - eps) H(I), found
        top-down. I_star are the maximal elements among their parents and G* is their union.
        ARGUMENTS:
            J: DyadicInterval - Ambient interval
            G: DirectionSet - Union of depth-D cells inside J
            epsilon: float | None - Density parameter; settings.epsilon when omitted
        RETURNS: EnlargementTrace - Every intermediate family of the construction
        CONTRACTS:
            PRECONDITION:
                - 0 < H(G) < (1 - eps) H(J)
                - G is contained in J
            POSTCONDITION:
                - G is contained in G*, and G* in J
                - H(G*) >= (1 + eps) H(G)
                - every maximal gap of J \\ G* is a maximal gap of J \\ G
            RAISES:
                - DepthExhausted - when J is finer than the bitset
                - PreconditionViolation - when the measure window or containment fails
                - CheckFailure - when a postcondition fails
        """
        eps = Fraction(self.settings.epsilon if epsilon is None else epsilon)
        if not 0 < eps < 1:
            raise PreconditionViolation("epsilon_range", f"epsilon {float(eps)} outside (0, 1)")
        self._require_inside(J, G)
        measure = G.measure
        if not 0 < measure < (1 - eps) * J.measure:
            raise PreconditionViolation(
                "measure_window",
                f"H(G) = {float(measure)} not in (0, (1 - eps) H(J)) = (0, {float((1 - eps) * J.measure)})",
            )

        family = self.dense_family(J, G, float(eps))
        parents = sorted({interval.parent for interval in family}, key=lambda interval: (interval.depth, interval.start))
        star: list[DyadicInterval] = []
        for candidate in parents:
            if not any(kept.contains(candidate) for kept in star):
                star.append(candidate)
        star.sort(key=lambda interval: interval.start)

        G_out = DirectionSet.from_intervals(star, G.depth)
        trace = EnlargementTrace(
            J=J,
            epsilon=float(eps),
            G_in=G,
            I_family=tuple(family),
            I_star=tuple(star),
            G_out=G_out,
            B_delta_in=tuple(self.maximal_gaps(J, G)),
            B_delta_out=tuple(self.maximal_gaps(J, G_out)),
        )
        self._check_enlargement(trace, eps)
        logger.debug("enlarged %s: H(G) %s -> %s", J, measure, G_out.measure)
        return trace

    def iterate_enlargement(self, J0: DyadicInterval, G0: DirectionSet, s: float,
                            epsilon: float | None = None) -> IterationResult:
        """
        PURPOSE: Apply enlarge until G fills J0 up to the factor 1 - eps
        ARGUMENTS:
            J0: DyadicInterval - Ambient interval
            G0: DirectionSet - Initial set inside J0
            s: float - Density parameter with H(G0) >= (s/4) H(J0)
            epsilon: float | None - Density parameter; settings.epsilon when omitted
        RETURNS: IterationResult - Traces, k0 and the closed-form bound
        CONTRACTS:
            RAISES:
                - PreconditionViolation - when H(G0) < (s/4) H(J0) or s <= 0
                - CheckFailure - when k0 would exceed the bound
        """
        eps = self.settings.epsilon if epsilon is None else epsilon
        if s <= 0:
            raise PreconditionViolation("s_positive", f"s = {s} must be positive")
        if G0.measure < Fraction(s) / 4 * J0.measure:
            raise PreconditionViolation("initial_measure", f"H(G0) = {float(G0.measure)} < (s/4) H(J0)")
        bound = iteration_bound(eps, s)
        target = (1 - Fraction(eps)) * J0.measure
        traces = []
        G = G0
        while G.measure < target:
            if len(traces) >= bound:
                raise CheckFailure("iteration_bound", f"k0 exceeds the bound {bound}", {"J0": J0.json(), "bound": bound})
            trace = self.enlarge(J0, G, eps)
            traces.append(trace)
            G = trace.G_out
        logger.info("iteration on %s finished after %d of at most %d steps", J0, len(traces), bound)
        return IterationResult(traces=tuple(traces), k0=len(traces), bound=bound, G_final=G)

    @staticmethod
    def _require_inside(J: DyadicInterval, G: DirectionSet):
        if J.depth > G.depth:
            raise DepthExhausted(J.depth, G.depth)
        if not G.is_subset(DirectionSet.from_intervals([J], G.depth)):
            raise PreconditionViolation("G_inside_J", f"direction set is not contained in {J}")

    @staticmethod
    def _check_enlargement(trace: EnlargementTrace, eps: Fraction):
        if not trace.G_in.is_subset(trace.G_out):
            raise CheckFailure("G_subset_G_star", "G is not contained in G*", {"J": trace.J.json()})
        if not trace.G_out.is_subset(DirectionSet.from_intervals([trace.J], trace.G_out.depth)):
            raise CheckFailure("G_star_inside_J", "G* leaves J", {"J": trace.J.json()})
        if trace.G_out.measure < (1 + eps) * trace.G_in.measure:
            raise CheckFailure("measure_growth", f"H(G*) = {trace.G_out.measure} < (1 + eps) H(G)",
                               {"J": trace.J.json()})
        if not set(trace.B_delta_out) <= set(trace.B_delta_in):
            raise CheckFailure("gap_inclusion", "a maximal gap of J \\ G* is not a maximal gap of J \\ G",
                               {"J": trace.J.json()})
