import logging
from typing import Any, Callable

from dishka import FromDishka

from core.errors import ApplicationError, CheckFailure
from core.exit_codes import resolve_exit_status
from core.settings import Settings
from directions.models import DirectionSet, DyadicInterval
from directions.services import DirectionService
from energy.models import TrialReport
from energy.checks import EnergyChecks
from energy.corona import CoronaService
from energy.services import EnergyService
from gaps.graphs import GraphService
from gaps.models import SearchStatus, VerdictStatus
from gaps.services import GapService
from geometry.models import AngleInterval
from lattice.services import LatticeService
from measures.models import DiscreteMeasure, PlanarSet
from measures.services import MeasureService
from verification.corpus import (
    BASE_GAP,
    BASE_HEIGHT,
    corollary_set,
    positive_corpus,
    stacked_set,
    thinned_directions,
    two_segment,
    with_atom,
    with_vertical_segment,
)
from verification.models import (
    CaseOutcome,
    CheckResult,
    CheckStatus,
    CorpusCase,
    CorpusParameters,
    GapCase,
    VerificationRun,
)

logger = logging.getLogger(__name__)

# Dyadic interval and bitset depth of the direction iteration check.
ITERATION_J0 = DyadicInterval(2, 1)
ITERATION_DEPTH = 12
COROLLARY_S = 0.5
COROLLARY_DEPTH = 10
REFINEMENT_BIN_WIDTHS = (4e-2, 2e-2, 1e-2)
POINT_IN_A_WEIGHT = 1e-9


class CaseRecorder:
    """Runs checkers for one case and turns their outcome into CheckResults."""
    def __init__(self, case: str, results: list[CheckResult]):
        self.case = case
        self.results = results

    def run(self, name: str, hard: bool, check: Callable[[], Any],
            measure: Callable[[Any], dict] = lambda value: {}) -> Any:
        """
        PURPOSE: Run one checker and record it
        DESCRIPTION: A raised ApplicationError is a failure of a hard check, whatever the kind of
        the checker; soft checkers pass whenever they return.
        RETURNS: Any - The checker's value, None when it raised
        """
        try:
            value = check()
        except ApplicationError as exc:
            status = resolve_exit_status(exc)
            details = {"error": status.json(str(exc)), "exit_code": status.exit_code}
            if getattr(exc, "context", None):
                details["context"] = exc.context
            logger.warning("%s failed on %s: %s", name, self.case, exc)
            self.results.append(CheckResult(name=name, case=self.case, status=CheckStatus.FAIL, hard=True,
                                            details=details))
            return None
        self.results.append(CheckResult(name=name, case=self.case, status=CheckStatus.PASS, hard=hard,
                                        measured=measure(value)))
        return value

    def add(self, name: str, status: CheckStatus, hard: bool, details: dict | None = None,
            measured: dict | None = None):
        self.results.append(CheckResult(name=name, case=self.case, status=status, hard=hard,
                                        details=details or {}, measured=measured or {}))


class VerificationService:
    """
    PURPOSE: Drives every checker over the configured set and the gap-lemma corpus
    DESCRIPTION: The configured set gets the direction iteration and the measured cone-energy
    and density refinement reports. Each corpus case runs the whole pipeline: lattice, rectangle
    mass bounds, energies, corona, stopping-time inequalities, filling gaps, empty cones,
    projection overlap and the gap lemma. The corollary case checks the graph extraction.
    """
    def __init__(self, settings: Settings, measures: FromDishka[MeasureService],
                 lattices: FromDishka[LatticeService], energies: FromDishka[EnergyService],
                 corona: FromDishka[CoronaService], checks: FromDishka[EnergyChecks],
                 gaps: FromDishka[GapService], graphs: FromDishka[GraphService],
                 directions: FromDishka[DirectionService]):
        self.settings = settings
        self.measures = measures
        self.lattices = lattices
        self.energies = energies
        self.corona = corona
        self.checks = checks
        self.gaps = gaps
        self.graphs = graphs
        self.directions = directions

    def check_configured_set(self, planar_set: PlanarSet, G: DirectionSet, case: str = "configured") -> CaseOutcome:
        mu = self.measures.sample(planar_set)
        outcome = CaseOutcome(case=case, mu=mu)
        recorder = CaseRecorder(case, outcome.results)
        spectrum = self.measures.direction_spectrum(mu, ITERATION_DEPTH)
        G0 = spectrum.complement().restrict(ITERATION_J0)
        if G0.is_empty():
            recorder.add("directions.iteration", CheckStatus.SKIPPED, True, {"reason": "no avoided direction in J0"})
        else:
            s = float(4 * G0.measure / ITERATION_J0.measure)
            recorder.run("directions.iteration", True,
                         lambda: self.directions.iterate_enlargement(ITERATION_J0, G0, s),
                         lambda result: {"k0": result.k0, "bound": result.bound, "s": s})
        recorder.run("measures.cone_energy_bound", False,
                     lambda: self.measures.check_cone_energy_bound(mu, G, self.settings.M),
                     lambda report: {"lhs": report.lhs, "rhs": report.rhs, "ratio": report.ratio})
        recorder.run("measures.density_refinement", False,
                     lambda: self.measures.density_refinement_curve(mu, 0.5, REFINEMENT_BIN_WIDTHS),
                     lambda curve: {f"sup@{width}": sup for width, sup in curve})
        return outcome

    def check_case(self, case: CorpusCase, params: CorpusParameters) -> CaseOutcome:
        """
        PURPOSE: Full pipeline of one corpus case
        RETURNS: CaseOutcome - Check results in pipeline order and every gap-lemma verdict
        """
        J, aspect = params.J, params.aspect
        G = params.G() if case.G is None else case.G
        mu = self.measures.sample(case.planar_set, params.spacing)
        outcome = CaseOutcome(case=case.name, mu=mu)
        recorder = CaseRecorder(case.name, outcome.results)
        logger.info("verifying %s (%d points)", case.name, len(mu))

        lattice = self.lattices.build_lattice(mu, aspect, params.depth, params.rho)
        outcome.lattice = lattice
        recorder.run("lattice.invariants", True, lambda: self.lattices.check_lattice_invariants(lattice, mu),
                     lambda inv: {"c_in": inv.c_in, "C_out": inv.C_out, "cubes": inv.cubes})
        recorder.run("measures.cube_mass_bounds", True,
                     lambda: self.lattices.cube_mass_bounds(lattice, mu, case.planar_set, params.M, params.C0),
                     lambda report: {"theta": report.theta, "max_upper": report.max_upper_constant,
                                     "min_lower": report.min_lower_constant})

        report = self.energies.compute_report(lattice, mu, G, J, params.A)
        recorder.run("energy.trivial_bound", True,
                     lambda: self.checks.trivial_bound_check(report, aspect, params.M, params.C0),
                     lambda worst: {"max_ratio": worst})
        recorder.run("energy.additivity", True, lambda: self.checks.additivity_check(report),
                     lambda worst: {"max_deviation": worst})

        corona = self.corona.build_corona(lattice, report, aspect, params.delta)
        recorder.run("corona.partition", True, lambda: self.corona.check_partition(corona, lattice))
        recorder.run("corona.tree_bounds", True, lambda: self.corona.check_tree_bounds(corona, report),
                     lambda bounds: {"max_upper_ratio": max(b.upper_ratio for b in bounds)})
        recorder.run("corona.packing", False, lambda: self.corona.check_packing(corona, report, mu, G),
                     lambda packing: {"sum_top": packing.sum_top, "bound": packing.bound, "ratio": packing.ratio})
        for name, ratio_of in (("corona.est3", lambda: self.checks.est3_ratio(report, mu, J)),
                               ("corona.est4", lambda: self.checks.est4_ratio(report)),
                               ("corona.energy_to_cubes",
                                lambda: self.checks.energy_to_cubes_ratio(report, mu, G, aspect))):
            recorder.run(name, False, ratio_of, lambda r: {"lhs": r.lhs, "rhs": r.rhs, "ratio": r.ratio})
        recorder.run("corona.tree_sizes", False, lambda: self.corona.tree_size_histogram(corona),
                     lambda histogram: {str(size): count for size, count in histogram.items()})

        recorder.run("energy.littlemeas", False, lambda: self.checks.check_littlemeas(mu, J, G, params.M),
                     lambda trial: {"max_ratio": trial.max_ratio, "trials": trial.trials})
        recorder.run("energy.filling_gaps", True, lambda: self._filling_gaps(mu, J, G),
                     lambda trial: {"max_ratio": trial.max_ratio, "trials": trial.trials})

        cones = self.gaps.check_empty_cones(corona, lattice, mu, J, params.A)
        recorder.add("gaps.empty_cones", CheckStatus.PASS if all(cones.passed.values()) else CheckStatus.FAIL, True,
                     {"witnesses": list(cones.witnesses)},
                     {"trees": len(cones.passed), "passing": len(cones.eligible)})
        eligible = cones.eligible
        recorder.run("energy.projection_overlap", True,
                     lambda: self.checks.check_projection_overlap(corona, lattice, eligible),
                     lambda overlap: {"max_overlap": overlap.max_overlap, "skipped": len(overlap.skipped)})
        recorder.run("energy.interval_count", False, lambda: self.checks.interval_count_check(corona, lattice),
                     lambda count: {"max_constant": count.max_constant, "windows": count.windows})

        verdicts = self.gaps.run_gap_lemma(corona, lattice, mu, J, eligible, params.A, params.N)
        outcome.gap_cases = [GapCase(case=case.name, bad=bad, trace=trace, verdict=verdict)
                             for bad, trace, verdict in verdicts]
        recorder.add("gaps.gap_lemma", *self._gap_lemma_status(outcome.gap_cases))
        return outcome

    @staticmethod
    def _gap_lemma_status(gap_cases: list[GapCase]) -> tuple[CheckStatus, bool, dict, dict]:
        """Fail on any failing verdict, or when no verdict passes at all."""
        counts: dict[str, int] = {}
        for gap_case in gap_cases:
            counts[gap_case.verdict.status.value] = counts.get(gap_case.verdict.status.value, 0) + 1
        failing = [gap_case.verdict.json() for gap_case in gap_cases if gap_case.verdict.status is VerdictStatus.FAIL]
        ratios = [gap_case.verdict.measured["B_width_ratio"] for gap_case in gap_cases
                  if "B_width_ratio" in gap_case.verdict.measured]
        measured: dict[str, Any] = {"verdicts": counts}
        if ratios:
            measured["B_width_ratio_min"] = min(ratios)
            measured["B_width_ratio_max"] = max(ratios)
        if failing:
            return CheckStatus.FAIL, True, {"failing": failing[:10]}, measured
        if not counts.get(VerdictStatus.PASS.value):
            return CheckStatus.FAIL, True, {"reason": "no bad cube was verified"}, measured
        return CheckStatus.PASS, True, {}, measured

    def _filling_gaps(self, mu: DiscreteMeasure, J: AngleInterval, G: DirectionSet) -> TrialReport:
        """Filling-gaps trials; a ball with no mass in the wide cone but mass in the narrow one fails."""
        trial = self.checks.check_filling_gaps(mu, J, G, epsilon=self.settings.epsilon)
        if trial.violations:
            raise CheckFailure("filling_gaps", f"{len(trial.violations)} balls with empty G-cones",
                               {"violations": list(trial.violations[:10])})
        return trial

    def check_corollary(self, planar_set: PlanarSet, G_T: DirectionSet | None = None,
                        case: str = "corollary") -> CaseOutcome:
        """Graph extraction with G_T the avoided directions of the sample unless given."""
        mu = self.measures.sample(planar_set)
        outcome = CaseOutcome(case=case, mu=mu)
        if G_T is None:
            G_T = self.measures.direction_spectrum(mu, COROLLARY_DEPTH).complement()
        CaseRecorder(case, outcome.results).run(
            "gaps.segments_corollary", True,
            lambda: self.graphs.extract_graph_parallel_segments(planar_set, G_T, COROLLARY_S),
            lambda graph: {"theta": graph.theta, "lip": graph.lip, "lip_bound": graph.lip_bound,
                           "density_constant": graph.density_constant})
        return outcome

    def run(self, planar_set: PlanarSet, J: AngleInterval, G: DirectionSet,
            params: CorpusParameters | None = None, cases: list[CorpusCase] | None = None) -> VerificationRun:
        """
        PURPOSE: Every checker on the configured set, the positive corpus and the corollary case
        ARGUMENTS:
            planar_set: PlanarSet - Configured set
            J: AngleInterval - Configured window (recorded; the corpus uses its own)
            G: DirectionSet - Configured good directions
            params: CorpusParameters | None - Corpus parameters; defaults when omitted
            cases: list[CorpusCase] | None - Corpus; positive_corpus() when omitted
        RETURNS: VerificationRun - Results in execution order
        """
        params = CorpusParameters() if params is None else params
        verification = VerificationRun()
        logger.info("verification: window J = %s, %d corpus cases", J.bounds(), len(cases or positive_corpus()))
        verification.extend(self.check_configured_set(planar_set, G))
        for case in positive_corpus() if cases is None else cases:
            verification.extend(self.check_case(case, params))
        verification.extend(self.check_corollary(corollary_set()))
        return verification

    def run_mutations(self, params: CorpusParameters | None = None) -> VerificationRun:
        """
        PURPOSE: Pipelines on the five scripted corruptions of the base corpus case
        DESCRIPTION: Each corrupted input is checked in full, so a run shows both the flipped
        checker and the untouched ones. Cases are named after their mutation.
        """
        params = CorpusParameters() if params is None else params
        verification = VerificationRun()
        base = CorpusCase(name="point_in_A", planar_set=two_segment(BASE_HEIGHT, BASE_GAP))
        verification.extend(self.mutate_point_in_A(self.check_case(base, params), params))
        verification.extend(self.check_case(
            CorpusCase(name="vertical_segment", planar_set=with_vertical_segment(base.planar_set)), params))
        verification.extend(self.check_case(
            CorpusCase(name="density_spike", planar_set=with_atom(base.planar_set)), params))
        verification.extend(self.check_case(
            CorpusCase(name="thin_G", planar_set=base.planar_set, G=thinned_directions(params)), params))
        verification.extend(self.check_corollary(stacked_set(), DirectionSet.full(COROLLARY_DEPTH),
                                                 case="stacked_segments"))
        return verification

    def mutate_point_in_A(self, outcome: CaseOutcome, params: CorpusParameters) -> CaseOutcome:
        """
        PURPOSE: Re-evaluate the first passing verdict on a sample with a point inside A
        DESCRIPTION: The point sits at half the width of A, at the height of z, and carries a
        negligible weight; the leftist trace and the gaps are kept from the clean sample. The
        gap-lemma result of the outcome is replaced by the re-evaluation.
        """
        passing = next((c for c in outcome.gap_cases if c.verdict.status is VerdictStatus.PASS), None)
        if passing is None or passing.trace is None or passing.trace.status is not SearchStatus.FOUND:
            return outcome
        trace, mu, lattice = passing.trace, outcome.mu, outcome.lattice
        Q, R = lattice.cube(passing.bad.cube), lattice.cube(passing.bad.root)
        z = trace.z
        point = [trace.sx * (z[0] - Q.side / (2 * params.A)), trace.sy * z[1]]
        corrupted = mu.with_points(point, [POINT_IN_A_WEIGHT])
        gap_set = self.gaps.find_gaps(R, lattice, mu, params.A)
        verdict = self.gaps.evaluate_verdict(trace, gap_set, corrupted, Q, R, passing.bad, params.A)
        mutated = GapCase(case=outcome.case, bad=passing.bad, trace=trace, verdict=verdict)
        results = [result for result in outcome.results if result.name != "gaps.gap_lemma"]
        status, hard, details, measured = self._gap_lemma_status([mutated])
        results.append(CheckResult(name="gaps.gap_lemma", case=outcome.case, status=status, hard=hard,
                                   details=details, measured=measured))
        return CaseOutcome(case=outcome.case, mu=corrupted, lattice=lattice, results=results, gap_cases=[mutated])
