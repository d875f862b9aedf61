import logging
import math
from typing import Sequence

import numpy as np

from core.errors import PreconditionViolation
from core.parallel import ordered_map
from core.settings import Settings
from directions.models import DirectionSet
from geometry.models import AngleInterval, AnisoRect, Cone, unit
from geometry.operations import cone_mask, project_points, rect_mask
from measures.cones import ConeProfile
from measures.models import (
    ConeEnergyReport,
    DensityProfile,
    DiscreteMeasure,
    PlanarSet,
    QuadratureParams,
    exact_diameter,
)
from measures.quadrature import LogQuadrature

logger = logging.getLogger(__name__)


def union_length(lo: np.ndarray, hi: np.ndarray) -> float:
    """
    PURPOSE: Length of a union of closed intervals
    DESCRIPTION: Sweep in order of left endpoints with a running maximum of right endpoints;
    a new component starts where a left endpoint exceeds every earlier right endpoint.
    ARGUMENTS:
        lo: np.ndarray - Left endpoints
        hi: np.ndarray - Right endpoints, hi >= lo
    RETURNS: float - Total length of the union, compensated sum over components
    """
    if len(lo) == 0:
        return 0.0
    order = np.argsort(lo, kind="stable")
    lo, hi = lo[order], hi[order]
    reach = np.maximum.accumulate(hi)
    starts = np.concatenate([[True], lo[1:] > reach[:-1]])
    first = np.flatnonzero(starts)
    last = np.concatenate([first[1:] - 1, [len(lo) - 1]])
    return math.fsum((reach[last] - lo[first]).tolist())


class MeasureService:
    """
    PURPOSE: Projections, samples, densities and cone masses of planar sets
    DESCRIPTION: Projection lengths and Favard length are computed on the exact primitives;
    everything that integrates mass (densities, regularity, cones, spectra) runs on the
    deterministic sample. Loops over angles and apices go through ordered_map.
    ATTRIBUTES:
        settings: Settings - Sample spacing, bin width, quadrature density and thread count
    """
    def __init__(self, settings: Settings):
        self.settings = settings

    @property
    def quadrature(self) -> LogQuadrature:
        return LogQuadrature(QuadratureParams(nodes_per_decade=self.settings.QUAD_NODES_PER_DECADE))

    def projection_length(self, planar_set: PlanarSet, theta: float) -> float:
        """
        PURPOSE: H^1(pi_theta(E)) for a union of segments and boxes
        ARGUMENTS:
            planar_set: PlanarSet - The set E
            theta: float - Direction in turns
        RETURNS: float - Length of the union of the projected closed intervals
        """
        c, s = unit(theta)
        a, b, _ = planar_set.segment_array
        centers, sides, _ = planar_set.box_array
        pa = c * a[:, 0] + s * a[:, 1]
        pb = c * b[:, 0] + s * b[:, 1]
        pc = c * centers[:, 0] + s * centers[:, 1]
        half = sides / 2 * (abs(c) + abs(s))
        lo = np.concatenate([np.minimum(pa, pb), pc - half])
        hi = np.concatenate([np.maximum(pa, pb), pc + half])
        return union_length(lo, hi)

    def favard_profile(self, planar_set: PlanarSet, n_angles: int | None = None) -> tuple[np.ndarray, np.ndarray]:
        """Midpoint angles (k + 1/2)/n and the projection length at each of them."""
        n = self.settings.N_ANGLES if n_angles is None else n_angles
        if n < 16:
            raise PreconditionViolation("n_angles", f"n_angles = {n} must be at least 16")
        thetas = (np.arange(n) + 0.5) / n
        lengths = ordered_map(lambda theta: self.projection_length(planar_set, float(theta)), thetas,
                              self.settings.THREADS)
        return thetas, np.array(lengths)

    def favard(self, planar_set: PlanarSet, n_angles: int | None = None) -> float:
        """
        PURPOSE: Favard length Fav(E) = int_0^1 H^1(pi_theta(E)) dtheta
        DESCRIPTION: Midpoint rule with nodes (k + 1/2)/n; deterministic for fixed n.
        ARGUMENTS:
            planar_set: PlanarSet - The set E
            n_angles: int | None - Node count, at least 16; settings.N_ANGLES when omitted
        RETURNS: float - Quadrature value
        CONTRACTS:
            RAISES:
                - PreconditionViolation - when n_angles < 16
        """
        thetas, lengths = self.favard_profile(planar_set, n_angles)
        value = math.fsum(lengths.tolist()) / len(thetas)
        logger.info("favard length %.9g over %d angles", value, len(thetas))
        return value

    def sample(self, planar_set: PlanarSet, spacing: float | None = None) -> DiscreteMeasure:
        """
        PURPOSE: Deterministic point sample of a planar set
        DESCRIPTION: A segment of length L is cut into ceil(L / h) equal pieces (one piece when
        degenerate) and each piece midpoint carries an equal share of the segment mass. A box of side s
        is cut into a ceil(s / h) by ceil(s / h) grid of cells whose centres share the box mass
        equally. Primitives of zero mass contribute nothing.
        ARGUMENTS:
            planar_set: PlanarSet - The set to sample
            spacing: float | None - Resolution h; settings.SAMPLE_SPACING when omitted
        RETURNS: DiscreteMeasure - Sample whose total equals total_mass up to rounding
        """
        h = self.settings.SAMPLE_SPACING if spacing is None else spacing
        if not h > 0:
            raise PreconditionViolation("spacing", f"sample spacing {h} must be positive")
        points, weights = [], []
        a, b, masses = planar_set.segment_array
        for start, end, mass in zip(a, b, masses):
            if mass <= 0:
                continue
            pieces = max(1, math.ceil(float(np.hypot(*(end - start))) / h))
            t = (np.arange(pieces) + 0.5) / pieces
            points.append(start + t[:, None] * (end - start))
            weights.append(np.full(pieces, mass / pieces))
        centers, sides, masses = planar_set.box_array
        for center, side, mass in zip(centers, sides, masses):
            if mass <= 0:
                continue
            cells = max(1, math.ceil(float(side) / h))
            offsets = ((np.arange(cells) + 0.5) / cells - 0.5) * float(side)
            gx, gy = np.meshgrid(offsets, offsets, indexing="ij")
            points.append(center + np.column_stack([gx.ravel(), gy.ravel()]))
            weights.append(np.full(gx.size, mass / gx.size))
        mu = DiscreteMeasure(np.vstack(points), np.concatenate(weights), h)
        logger.debug("sampled %d points at spacing %g", len(mu), h)
        return mu

    def pushforward_density(self, mu: DiscreteMeasure, theta: float,
                            bin_width: float | None = None) -> DensityProfile:
        """
        PURPOSE: Histogram density of the pushforward pi_theta mu
        DESCRIPTION: Bins are anchored at an integer multiple of the bin width below the smallest
        projection. sup_norm is the largest bin value, a lower bound for the true L-infinity
        norm; the profile is flagged degenerate when one bin carries more than half of the mass.
        ARGUMENTS:
            mu: DiscreteMeasure - Sampled measure
            theta: float - Projection direction
            bin_width: float | None - Bin width; settings.BIN_WIDTH when omitted
        RETURNS: DensityProfile - Bins in mass per unit length
        """
        width = self.settings.BIN_WIDTH if bin_width is None else bin_width
        if not width > 0:
            raise PreconditionViolation("bin_width", f"bin width {width} must be positive")
        projected = project_points(mu.points, theta)
        origin = math.floor(projected.min() / width) * width
        index = np.floor((projected - origin) / width).astype(np.int64)
        masses = np.bincount(index, weights=mu.weights)
        bins = masses / width
        return DensityProfile(
            theta=theta,
            bin_width=width,
            origin=origin,
            bins=bins,
            sup_norm=float(bins.max()),
            l2_norm_sq=math.fsum((bins * bins * width).tolist()),
            degenerate=bool(masses.max() > 0.5 * mu.total),
        )

    def density_witness(self, mu: DiscreteMeasure, window: AngleInterval, M: float,
                        bin_width: float | None = None, candidates: int = 33) -> tuple[float, DensityProfile] | None:
        """
        PURPOSE: A direction theta in the window whose perpendicular pushforward is bounded by M
        DESCRIPTION: Candidates are spread evenly over the window and tried from the centre
        outward; the first non-degenerate profile of pi_{theta + 1/4} mu with sup <= M wins.
        RETURNS: tuple[float, DensityProfile] | None - The witness and its profile, or None
        """
        half = max(1, candidates // 2)
        order = [0] + [sign * k for k in range(1, half + 1) for sign in (1, -1)]
        for k in order:
            theta = window.center + window.halfwidth * k / half
            profile = self.pushforward_density(mu, theta + 0.25, bin_width)
            if not profile.degenerate and profile.sup_norm <= M:
                logger.debug("density witness theta=%.6g sup=%.6g", theta, profile.sup_norm)
                return theta, profile
        return None

    def density_refinement_curve(self, mu: DiscreteMeasure, theta: float,
                                 bin_widths: Sequence[float]) -> list[tuple[float, float]]:
        """(bin width, sup norm) pairs for successively finer histograms."""
        return [(width, self.pushforward_density(mu, theta, width).sup_norm) for width in bin_widths]

    def ad_constant(self, mu: DiscreteMeasure, planar_set: PlanarSet, n_centers: int = 64, n_radii: int = 24) -> float:
        """
        PURPOSE: Empirical Ahlfors-David regularity constant
        DESCRIPTION: Centres are evenly strided sample points, radii are log-spaced strictly
        inside (10 h, diam E). Returns the smallest C with r / C <= mu(B(x, r)) <= C r over all
        tested pairs, an upward-biased estimate of the true constant. Sets whose diameter does
        not exceed 10 h cannot be resolved and give inf.
        RETURNS: float - The estimate, possibly inf
        """
        floor = 10 * mu.spacing
        if planar_set.diameter <= floor:
            return math.inf
        radii = np.geomspace(floor, planar_set.diameter, n_radii + 2)[1:-1]
        centers = np.unique(np.linspace(0, len(mu) - 1, min(n_centers, len(mu))).round().astype(np.intp))

        def worst(i: int) -> float:
            distance = np.hypot(*(mu.points - mu.points[i]).T)
            order = np.argsort(distance, kind="stable")
            cumulative = np.cumsum(mu.weights[order])
            masses = cumulative[np.searchsorted(distance[order], radii, side="right") - 1]
            return float(np.max(np.maximum(masses / radii, radii / masses)))

        return max(ordered_map(worst, centers.tolist(), self.settings.THREADS))

    def cone_mass(self, mu: DiscreteMeasure, cone: Cone, exclude_apex_radius: float | None = None) -> float:
        """
        PURPOSE: mu(X(x, I, r_in, r_out)) with the apex neighbourhood removed
        ARGUMENTS:
            mu: DiscreteMeasure - Sampled measure
            cone: Cone - The cone
            exclude_apex_radius: float | None - Points within this distance of the apex are
                ignored; the sample spacing when omitted
        RETURNS: float - Sum of weights inside
        """
        exclude = mu.spacing if exclude_apex_radius is None else exclude_apex_radius
        if exclude < 0:
            raise PreconditionViolation("exclude_apex_radius", "exclusion radius must be nonnegative")
        distance = np.hypot(mu.points[:, 0] - cone.apex[0], mu.points[:, 1] - cone.apex[1])
        return mu.mass(cone_mask(cone, mu.points) & (distance > exclude))

    def direction_spectrum(self, mu: DiscreteMeasure, depth: int, chunk: int | None = None) -> DirectionSet:
        """
        PURPOSE: Dyadic cells of the directions spanned by pairs of sample points
        DESCRIPTION: For every pair x != y the direction of x - y and its antipode are marked,
        so the result is symmetric under theta -> theta + 1/2.
        ARGUMENTS:
            mu: DiscreteMeasure - Sampled measure
            depth: int - Bitset depth
            chunk: int | None - Rows per vectorised block; sized to the sample when omitted
        RETURNS: DirectionSet - Spanned cells; empty for a single point
        """
        if depth > self.settings.MAX_DEPTH:
            raise PreconditionViolation("depth", f"depth {depth} exceeds MAX_DEPTH {self.settings.MAX_DEPTH}")
        size = 2 ** depth
        bits = np.zeros(size, dtype=bool)
        points = mu.points
        chunk = chunk or max(1, 2_000_000 // max(1, len(points)))
        for start in range(0, len(points) - 1, chunk):
            block = points[start:start + chunk]
            rest = points[start + 1:]
            dx = rest[None, :, 0] - block[:, None, 0]
            dy = rest[None, :, 1] - block[:, None, 1]
            later = np.arange(start + 1, len(points))[None, :] > np.arange(start, start + len(block))[:, None]
            valid = later & ((dx != 0) | (dy != 0))
            phi = np.arctan2(dy[valid], dx[valid]) / (2 * np.pi)
            cells = np.floor(np.mod(phi, 1.0) * size).astype(np.int64) % size
            bits[cells] = True
            bits[(cells + size // 2) % size] = True
        return DirectionSet(depth, bits)

    def check_cone_energy_bound(self, mu: DiscreteMeasure, G: DirectionSet, M: float,
                                quadrature: LogQuadrature | None = None) -> ConeEnergyReport:
        """
        PURPOSE: Measure both sides of the bounded-pushforward cone energy inequality
        DESCRIPTION: lhs = sum_x w_x int_h^diam mu(X(x, G + 1/4, r)) / r dr/r with the apex
        excluded up to h, rhs = M H(G) mu(E). The ratio is reported, not asserted.
        ARGUMENTS:
            mu: DiscreteMeasure - Sampled measure
            G: DirectionSet - Direction set; its quarter rotation opens the cones
            M: float - Density bound
            quadrature: LogQuadrature | None - Radial rule; from settings when omitted
        RETURNS: ConeEnergyReport - lhs, rhs, ratio (0 when rhs vanishes) and the radius range
        CONTRACTS:
            RAISES:
                - QuadratureUnderresolved - when fewer than 16 nodes per decade are requested
        """
        quadrature = self.quadrature if quadrature is None else quadrature
        r_min, r_max = mu.spacing, exact_diameter(mu.points)
        rhs = M * float(G.measure) * mu.total
        if G.is_empty():
            return ConeEnergyReport(lhs=0.0, rhs=0.0, ratio=0.0, r_min=r_min, r_max=r_max)
        profile = ConeProfile(mu, G.rotate_quarter(), mu.spacing, cache=False)
        energies = ordered_map(lambda i: profile.energy(i, r_min, r_max, quadrature), range(len(mu)),
                               self.settings.THREADS)
        lhs = math.fsum((mu.weights * np.array(energies)).tolist())
        ratio = lhs / rhs if rhs > 0 else 0.0
        logger.info("cone energy bound: lhs=%.6g rhs=%.6g ratio=%.6g", lhs, rhs, ratio)
        return ConeEnergyReport(lhs=lhs, rhs=rhs, ratio=ratio, r_min=r_min, r_max=r_max)

    def rectangle_mass(self, mu: DiscreteMeasure, rect: AnisoRect) -> float:
        return mu.mass(rect_mask(rect, mu.points))

    def rectangle_mass_ratio(self, mu: DiscreteMeasure, rect: AnisoRect, M: float) -> float:
        """mu(R) / (M l(R)); at most 1 (up to sampling) for rectangles oriented close to 1/4."""
        return self.rectangle_mass(mu, rect) / (M * rect.short)
