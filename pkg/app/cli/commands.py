import logging
import math
from pathlib import Path

from dishka import Container

from cli.models import DirectionSource, RunConfig
from cli.plots import favard_svg
from core.errors import NotFoundError
from core.serializer import Serializer, csv_text, dumps_json
from core.types import DTO
from directions.models import DirectionSet
from directions.serializers import DirectionSetSerializer, DyadicGapsSerializer
from directions.services import DirectionService
from energy.checks import EnergyChecks
from energy.corona import CoronaService
from energy.models import CoronaTree
from energy.serializers import EnergyCsvSerializer
from energy.services import EnergyService
from generators.services import GeneratorService
from lattice.serializers import CubeLineSerializer
from lattice.services import LatticeService
from measures.models import DiscreteMeasure, PlanarSet
from measures.serializers import DiscreteMeasureSerializer, PlanarSetSerializer
from measures.services import MeasureService
from verification.bundle import write_bundle
from verification.models import CorpusParameters
from verification.services import VerificationService

logger = logging.getLogger(__name__)


def _write(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    logger.info("wrote %s", path)
    return path


def resolve_directions(config: RunConfig, mu: DiscreteMeasure, container: Container) -> DirectionSet:
    """
    PURPOSE: Good directions G of a run
    DESCRIPTION: interval takes the depth-G_DEPTH cells of J, spectrum the directions no pair of
    sample points spans, file reads a direction set line from G_PATH.
    CONTRACTS:
        RAISES:
            - NotFoundError - when G_SOURCE=file and the file is missing
            - DirectionSet.InvalidError - when the file is malformed
    """
    match config.G_SOURCE:
        case DirectionSource.INTERVAL:
            return DirectionSet.from_angle_interval(config.J, config.G_DEPTH)
        case DirectionSource.SPECTRUM:
            return container.get(MeasureService).direction_spectrum(mu, config.G_DEPTH).complement()
        case DirectionSource.FILE:
            if config.G_PATH is None or not Path(config.G_PATH).is_file():
                raise NotFoundError(f"direction set file {config.G_PATH}")
            return container.get(DirectionSetSerializer).deserialize(Path(config.G_PATH).read_text())


def load_set(path: str | Path, container: Container) -> PlanarSet:
    return container.get(GeneratorService).from_file(path)


def cmd_generate(config: RunConfig, container: Container) -> int:
    """Writes set.json and the sampled measure.csv of the configured generator."""
    planar_set = container.get(GeneratorService).build(config.generator_spec())
    mu = container.get(MeasureService).sample(planar_set)
    out = Path(config.OUT_DIR)
    _write(out / "set.json", container.get(PlanarSetSerializer).serialize(planar_set) + "\n")
    _write(out / "measure.csv", DiscreteMeasureSerializer(tuple(config.echo())).serialize(mu))
    return 0


def cmd_favard(config: RunConfig, container: Container, set_file: str, timestamp: bool = False) -> int:
    """
    PURPOSE: Favard length of a set file
    DESCRIPTION: Writes favard.csv with the projection length at every midpoint angle, favard.json
    with the quadrature value and favard.svg with the profile plot.
    """
    planar_set = load_set(set_file, container)
    measures = container.get(MeasureService)
    thetas, lengths = measures.favard_profile(planar_set, config.N_ANGLES)
    value = math.fsum(lengths.tolist()) / len(thetas)
    out = Path(config.OUT_DIR)
    echo = config.echo()
    _write(out / "favard.csv", csv_text(["theta", "length"], zip(thetas.tolist(), lengths.tolist()), echo))
    _write(out / "favard.json", dumps_json({"favard": value, "n_angles": len(thetas), "set": str(set_file),
                                            "parameters": echo}, indent=2) + "\n")
    favard_svg(thetas, lengths, value, out / "favard.svg", timestamp)
    print(f"favard={value!r}")
    return 0


def cmd_project(config: RunConfig, container: Container, set_file: str, theta: float) -> int:
    """Projection length and pushforward density histogram of a set file in one direction."""
    planar_set = load_set(set_file, container)
    measures = container.get(MeasureService)
    length = measures.projection_length(planar_set, theta)
    density = measures.pushforward_density(measures.sample(planar_set), theta, config.BIN_WIDTH)
    out = Path(config.OUT_DIR)
    echo = config.echo()
    rows = ((density.origin + i * density.bin_width, float(value)) for i, value in enumerate(density.bins))
    _write(out / "density.csv", csv_text(["bin_start", "density"], rows, echo))
    _write(out / "projection.json", dumps_json({
        "theta": theta, "projection_length": length, "sup_norm": density.sup_norm,
        "l2_norm_sq": density.l2_norm_sq, "degenerate": density.degenerate, "bin_width": density.bin_width,
        "parameters": echo}, indent=2) + "\n")
    print(f"projection_length={length!r} sup_norm={density.sup_norm!r}")
    return 0


def _energies(config: RunConfig, container: Container):
    if config.J.measure > config.aspect_cap:
        logger.warning("H(J) = %.6g exceeds the cap %.6g; the energy bounds are reported without it",
                       config.J.measure, config.aspect_cap)
    planar_set = container.get(GeneratorService).build(config.generator_spec())
    mu = container.get(MeasureService).sample(planar_set)
    G = resolve_directions(config, mu, container)
    lattice = container.get(LatticeService).build_lattice(mu, config.J.measure, config.LATTICE_DEPTH)
    report = container.get(EnergyService).compute_report(lattice, mu, G, config.J, config.a_effective)
    return mu, G, lattice, report


def cmd_energies(config: RunConfig, container: Container) -> int:
    """
    PURPOSE: Per-cube conical energies of the configured set
    DESCRIPTION: Writes lattice.jsonl and energies.csv, then asserts the trivial energy bound;
    the files are written before the assertion so a failure can be inspected.
    """
    mu, G, lattice, report = _energies(config, container)
    out = Path(config.OUT_DIR)
    echo = tuple(config.echo())
    cubes = container.get(CubeLineSerializer)
    _write(out / "lattice.jsonl", "".join(cubes.serialize(cube) + "\n" for cube in lattice.cubes))
    _write(out / "energies.csv", container.get(EnergyCsvSerializer).serialize(report, echo=echo))
    worst = container.get(EnergyChecks).trivial_bound_check(report, config.J.measure)
    logger.info("trivial energy bound holds with ratio %.6g", worst)
    return 0


def cmd_corona(config: RunConfig, container: Container) -> int:
    """Corona decomposition of the configured set: trees, BCE families and the asserted tree bounds."""
    mu, G, lattice, report = _energies(config, container)
    corona_service = container.get(CoronaService)
    corona = corona_service.build_corona(lattice, report, config.J.measure)
    out = Path(config.OUT_DIR)
    echo = config.echo()
    _write(out / "energies.csv", container.get(EnergyCsvSerializer).serialize(report, corona, tuple(echo)))
    trees = container.get(Serializer[CoronaTree, DTO]).flat.serialize(corona.trees)
    _write(out / "corona.json", dumps_json({"delta": corona.delta, "aspect": corona.aspect, "A": corona.A,
                                            "trees": trees, "tree_sizes": corona_service.tree_size_histogram(corona),
                                            "parameters": echo}, indent=2) + "\n")
    corona_service.check_partition(corona, lattice)
    corona_service.check_tree_bounds(corona, report)
    return 0


def cmd_iterate_directions(config: RunConfig, container: Container) -> int:
    """
    PURPOSE: Iterated enlargement of G inside the dyadic interval J0
    DESCRIPTION: G0 = G restricted to J0 with G taken from the configured source; s defaults to
    4 H(G0) / H(J0). Writes iteration.csv (one row per step), g_final.txt and the maximal dyadic
    gaps of J0 \\ G in gaps_before.json and gaps_after.json.
    """
    planar_set = container.get(GeneratorService).build(config.generator_spec())
    mu = container.get(MeasureService).sample(planar_set)
    J0 = config.J0
    G0 = resolve_directions(config, mu, container).restrict(J0)
    s = config.S if config.S is not None else float(4 * G0.measure / J0.measure)
    directions = container.get(DirectionService)
    result = directions.iterate_enlargement(J0, G0, s)
    out = Path(config.OUT_DIR)
    echo = config.echo()
    rows = [(step, float(trace.G_in.measure), float(trace.G_out.measure), len(trace.I_family), len(trace.I_star),
             len(trace.B_delta_in), len(trace.B_delta_out)) for step, trace in enumerate(result.traces)]
    _write(out / "iteration.csv", csv_text(["step", "H_G_in", "H_G_out", "I_family", "I_star", "gaps_in",
                                            "gaps_out"], rows, (*echo, f"s={s!r}", f"k0={result.k0}",
                                                                f"bound={result.bound}")))
    _write(out / "g_final.txt", container.get(DirectionSetSerializer).serialize(result.G_final) + "\n")
    gaps = container.get(DyadicGapsSerializer)
    _write(out / "gaps_before.json", gaps.serialize(directions.maximal_gaps(J0, G0)) + "\n")
    _write(out / "gaps_after.json", gaps.serialize(directions.maximal_gaps(J0, result.G_final)) + "\n")
    print(f"k0={result.k0} bound={result.bound}")
    return 0


def cmd_verify(config: RunConfig, container: Container, mutations: bool = False, timestamp: bool = False) -> int:
    """
    PURPOSE: Run the verification corpus and write the report bundle
    RETURNS: int - 0 when every hard check passes, 1 otherwise; the first failing check is
    logged and printed
    """
    service = container.get(VerificationService)
    params = CorpusParameters(A=config.A if config.A is not None else CorpusParameters.A,
                              N=config.N if config.N is not None else CorpusParameters.N)
    if mutations:
        run = service.run_mutations(params)
    else:
        planar_set = container.get(GeneratorService).build(config.generator_spec())
        mu = container.get(MeasureService).sample(planar_set)
        run = service.run(planar_set, config.J, resolve_directions(config, mu, container), params)
    write_bundle(run, config.OUT_DIR, config.echo(), params.A, timestamp)
    failure = run.first_failure
    if failure is None:
        logger.info("verification passed: %d checks", len(run.results))
        print("verify: pass")
        return 0
    logger.error("first failing check %s on %s", failure.name, failure.case)
    print(f"verify: fail {failure.name} ({failure.case})")
    return 1
