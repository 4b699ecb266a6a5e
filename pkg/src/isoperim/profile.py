"""Isoperimetric profile assembly, Cheeger constants and structure reports.

Above the inscribed-ball area the profile is the convex conjugate of the
sweep's dual values: J(V) = max over sampled kappa of (kappa*V - g(kappa)).
Below it the minimizers are free disks and J(V) = 2*sqrt(pi*V). The sweep
always carries an analytic sample at the inradius, whose supporting line
is tangent to the disk curve, so the two regimes join cleanly.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import EmptyRegionError, NeckViolationError
from .field import ScalarField, inner_parallel_mask, inradius, mask_measure
from .solver import MinimizerReport, SweepSample, inball_sample, maximal_minimizer, sweep_sample


@dataclass(frozen=True)
class ProfileSegment:
    kappa: float
    v_min: float
    v_max: float
    kind: str  # "point" or "linear-gap"


@dataclass(frozen=True)
class Profile:
    volumes: np.ndarray
    perimeters: np.ndarray  # J(V) per sample
    kappas: np.ndarray
    kinds: list
    ball_threshold: float
    total_volume: float
    covered_max: float
    segments: list
    sweep: list
    inradius: float

    def __post_init__(self):
        self.volumes.setflags(write=False)
        self.perimeters.setflags(write=False)
        self.kappas.setflags(write=False)


@dataclass(frozen=True)
class KappaResult:
    kappa: float
    ball_regime: bool = False
    in_gap: bool = False


@dataclass(frozen=True)
class CheegerReport:
    h_by_profile: float
    h_by_inner_formula: float
    root_radius: float
    contours: list
    inner_formula_failed: bool = False

    def to_json_dict(self) -> dict:
        main = max(self.contours, key=len) if self.contours else []
        return {
            "h_by_profile": self.h_by_profile,
            "h_by_inner_formula": self.h_by_inner_formula,
            "root_radius": self.root_radius,
            "inner_formula_failed": self.inner_formula_failed,
            "contour": [[float(x), float(y)] for x, y in main],
        }


@dataclass(frozen=True)
class ConvexityReport:
    violations_sq: int
    violations_upper: int
    min_second_diff_sq: float
    min_second_diff_upper: float
    tol: float
    ball_concavity_violations: int

    @property
    def ok(self) -> bool:
        return self.violations_sq == 0 and self.violations_upper == 0


def compute_sweep(f: ScalarField, n_samples: int = 128) -> list[SweepSample]:
    """Sample the curvature range on a geometric radius grid, plus the
    analytic inradius sample. Radii where the core disconnects are
    excluded with a warning; all of them disconnecting is an error."""
    if n_samples < 16:
        raise ValueError("need at least 16 curvature samples")
    rhat = inradius(f)
    h = f.grid.h
    samples: list[SweepSample] = []
    try:
        samples.append(inball_sample(f))
    except NeckViolationError as exc:
        warnings.warn(f"inradius sample excluded: {exc}", RuntimeWarning, stacklevel=2)
    r_hi = rhat * (1.0 - 1.0 / n_samples)
    r_lo = max(4.0 * h, rhat / 64.0)
    if r_lo >= r_hi:
        raise ValueError("grid too coarse for the requested sweep")
    ratio = (r_lo / r_hi) ** (1.0 / (n_samples - 1))
    for i in range(n_samples):
        r = r_hi * ratio**i
        try:
            samples.append(sweep_sample(f, r=r))
        except NeckViolationError as exc:
            warnings.warn(str(exc), RuntimeWarning, stacklevel=2)
        except EmptyRegionError as exc:
            warnings.warn(str(exc), RuntimeWarning, stacklevel=2)
    if not samples:
        raise NeckViolationError(
            "no radius in the sweep has a connected core; the profile is "
            "undefined above the ball regime on this grid"
        )
    samples.sort(key=lambda s: -s.r)
    return samples


def _ball_perimeter(V):
    return 2.0 * np.sqrt(math.pi * np.asarray(V))


def profile_from_legendre(
    sweep: list[SweepSample], f: ScalarField, n_v: int = 512
) -> Profile:
    """Assemble J(V) on [0, |domain|] from the sweep's supporting lines.

    The profile is truncated at the largest swept volume; ties in the
    conjugate resolve to the smallest curvature."""
    if not sweep:
        raise ValueError("empty sweep")
    total = f.domain.area
    rhat = inradius(f)
    threshold = math.pi * rhat * rhat
    kappas = np.array([s.kappa for s in sweep])
    gvals = np.array([s.dual_value for s in sweep])
    order = np.argsort(kappas, kind="stable")
    kappas = kappas[order]
    gvals = gvals[order]

    covered = max(s.volume for s in sweep)
    vgrid = np.linspace(0.0, total, n_v)
    keep = vgrid <= covered + 1e-12
    vgrid = vgrid[keep]

    jvals = np.empty_like(vgrid)
    kvals = np.empty_like(vgrid)
    argmax = np.full(len(vgrid), -1, dtype=np.int64)
    below = vgrid < threshold
    jvals[below] = _ball_perimeter(vgrid[below])
    with np.errstate(divide="ignore"):
        kvals[below] = np.where(
            vgrid > 0, np.sqrt(math.pi / np.where(vgrid > 0, vgrid, 1.0)), np.inf
        )[below]
    above = ~below
    if above.any():
        lines = np.outer(vgrid[above], kappas) - gvals[None, :]
        idx = np.argmax(lines, axis=1)  # first max = smallest kappa on ties
        env = lines[np.arange(lines.shape[0]), idx]
        ball = _ball_perimeter(vgrid[above])
        jvals[above] = np.maximum(env, ball)
        kvals[above] = kappas[idx]
        argmax[np.flatnonzero(above)] = idx

    kinds = ["ball"] * len(vgrid)
    segments: list[ProfileSegment] = []
    idxs = np.flatnonzero(above)
    i = 0
    while i < len(idxs):
        j = i
        while j + 1 < len(idxs) and argmax[idxs[j + 1]] == argmax[idxs[i]]:
            j += 1
        kind = "linear-gap" if j > i else "point"
        seg = ProfileSegment(
            kappa=float(kappas[argmax[idxs[i]]]),
            v_min=float(vgrid[idxs[i]]),
            v_max=float(vgrid[idxs[j]]),
            kind=kind,
        )
        segments.append(seg)
        for k in range(i, j + 1):
            kinds[idxs[k]] = kind
        i = j + 1

    return Profile(
        volumes=vgrid,
        perimeters=jvals,
        kappas=kvals,
        kinds=kinds,
        ball_threshold=threshold,
        total_volume=total,
        covered_max=float(covered),
        segments=segments,
        sweep=list(sweep),
        inradius=rhat,
    )


def kappa_of_volume(p: Profile, V: float) -> KappaResult:
    """Curvature of the minimizer at area V: the conjugate argmax for
    V at or above the ball threshold, the free-disk curvature below it
    (flagged)."""
    if not 0.0 < V <= p.total_volume + 1e-9:
        raise ValueError(f"V={V} outside (0, {p.total_volume}]")
    if V < p.ball_threshold:
        return KappaResult(kappa=math.sqrt(math.pi / V), ball_regime=True)
    kappas = np.array([s.kappa for s in p.sweep])
    gvals = np.array([s.dual_value for s in p.sweep])
    order = np.argsort(kappas, kind="stable")
    vals = kappas[order] * V - gvals[order]
    k = float(kappas[order][int(np.argmax(vals))])
    in_gap = any(
        seg.kind == "linear-gap" and seg.v_min - 1e-12 <= V <= seg.v_max + 1e-12
        for seg in p.segments
    )
    return KappaResult(kappa=k, in_gap=in_gap)


def _parabolic_min(x: np.ndarray, y: np.ndarray, i: int) -> float:
    if i <= 0 or i >= len(y) - 1:
        return float(y[i])
    a = 0.5 * (y[i - 1] + y[i + 1]) - y[i]
    b = 0.5 * (y[i + 1] - y[i - 1])
    if a <= 1e-300:
        return float(y[i])
    return float(y[i] - b * b / (4.0 * a))


def cheeger_via_profile(p: Profile) -> float:
    """Minimum of J(V)/V over the profile samples, refined by one
    parabolic step around the discrete argmin."""
    mask = p.volumes > 0
    V = p.volumes[mask]
    q = p.perimeters[mask] / V
    i = int(np.argmin(q))
    return _parabolic_min(V, q, i)


def cheeger_via_inner_formula(f: ScalarField) -> float | None:
    """Radius r solving |inner set at r| = pi r^2, by bisection on the
    sub-cell area estimator; None when there is no sign change."""
    rhat = inradius(f)

    def g(r: float) -> float:
        if r <= 0:
            return f.domain.area
        return mask_measure(inner_parallel_mask(f, r)) - math.pi * r * r

    lo, hi = 0.0, rhat
    if g(hi) >= 0.0:
        return None
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if g(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def build_cheeger_report(f: ScalarField, p: Profile) -> CheegerReport:
    """Combine the profile minimum and the inner-formula root; the inner
    set dilated back by the root radius is the reported Cheeger set."""
    h_prof = cheeger_via_profile(p)
    root = cheeger_via_inner_formula(f)
    failed = root is None
    if failed:
        warnings.warn(
            "inner Cheeger formula has no root on this grid; using the "
            "profile minimum instead",
            RuntimeWarning,
            stacklevel=2,
        )
        root = 1.0 / h_prof
    rep = maximal_minimizer(f, r=root)
    return CheegerReport(
        h_by_profile=h_prof,
        h_by_inner_formula=1.0 / root,
        root_radius=root,
        contours=rep.contours,
        inner_formula_failed=failed,
    )


def check_convexity(p: Profile) -> ConvexityReport:
    """Discrete second differences of J above the ball threshold and of
    J^2 everywhere; counts values below -tol."""
    if len(p.volumes) < 8:
        raise ValueError("need at least 8 profile samples")
    J = p.perimeters
    V = p.volumes
    n_v = len(V)
    sq = J * J
    tol = 1e-3 * float(np.max(np.abs(sq))) / (n_v * n_v)
    d2_sq = sq[2:] - 2.0 * sq[1:-1] + sq[:-2]
    viol_sq = int(np.count_nonzero(d2_sq < -tol))
    upper = V[:-2] >= p.ball_threshold - 1e-12  # triples fully above threshold
    d2_up = (J[2:] - 2.0 * J[1:-1] + J[:-2])[upper]
    viol_up = int(np.count_nonzero(d2_up < -tol))
    lower = V[2:] <= p.ball_threshold + 1e-12
    d2_lo = (J[2:] - 2.0 * J[1:-1] + J[:-2])[lower]
    ball_bad = int(np.count_nonzero(d2_lo > tol))
    return ConvexityReport(
        violations_sq=viol_sq,
        violations_upper=viol_up,
        min_second_diff_sq=float(d2_sq.min()) if len(d2_sq) else 0.0,
        min_second_diff_upper=float(d2_up.min()) if len(d2_up) else 0.0,
        tol=tol,
        ball_concavity_violations=ball_bad,
    )


def interior_ball_report(f: ScalarField, sweep: list[SweepSample]) -> float | None:
    """Smallest sampled curvature whose minimizer fills the domain up to
    tolerance, or None when the uncovered area keeps shrinking with the
    radius (corners force the curvature to grow without bound)."""
    dom = f.domain
    h = f.grid.h
    tol_abs = 5.0 * h * dom.perimeter
    measured = [s for s in sweep if not s.inball]
    if not measured:
        return None
    measured.sort(key=lambda s: s.r)
    deficits = np.array([max(dom.area - s.volume, 0.0) for s in measured])
    radii = np.array([s.r for s in measured])
    cand = np.flatnonzero(deficits <= tol_abs)
    if len(cand) == 0:
        return None
    i = int(cand.max())  # largest candidate radius = smallest curvature
    # Corner rejection: the per-radius deficit rate q = deficit/r decays
    # towards the raster noise floor for domains whose boundary rolls a
    # disk, but keeps growing with r when corners force the curvature to
    # blow up. Compare against the small-radius floor with an absolute
    # h-scale allowance.
    q = deficits / radii
    floor = float(np.median(q[: min(3, len(q))]))
    if q[i] > max(4.0 * floor, 3.0 * h):
        return None
    return 1.0 / float(radii[i])


def write_profile_csv(p: Profile, path) -> None:
    """CSV rows V,J,kappa,segment_kind at 17 significant digits."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(profile_csv_text(p))


def profile_csv_text(p: Profile) -> str:
    lines = ["V,J,kappa,segment_kind"]
    for v, j, k, kind in zip(p.volumes, p.perimeters, p.kappas, p.kinds):
        lines.append(f"{v:.17g},{j:.17g},{k:.17g},{kind}")
    return "\n".join(lines) + "\n"


def resolve_minimizer(
    f: ScalarField,
    p: Profile,
    volume: float | None = None,
    kappa: float | None = None,
) -> MinimizerReport:
    """Minimizer for a requested area or curvature. Area requests resolve
    the curvature through the profile; inside a flat profile stretch the
    family member matching the area is constructed and flagged."""
    from .solver import volume_matched_minimizer

    if (volume is None) == (kappa is None):
        raise ValueError("specify exactly one of volume and kappa")
    if kappa is not None:
        if kappa * p.inradius < 1.0 - f.grid.h / p.inradius:
            raise ValueError(
                f"kappa={kappa} is below the least admissible curvature "
                f"{1.0 / p.inradius}"
            )
        return maximal_minimizer(f, r=min(1.0 / kappa, p.inradius))
    if not 0.0 < volume <= p.total_volume:
        raise ValueError(f"volume={volume} outside (0, {p.total_volume}]")
    res = kappa_of_volume(p, volume)
    if res.ball_regime:
        raise ValueError(
            f"volume={volume} is below the inscribed-ball area "
            f"{p.ball_threshold}; minimizers are free disks"
        )
    r = min(1.0 / res.kappa, p.inradius)
    return volume_matched_minimizer(f, volume, r=r)
