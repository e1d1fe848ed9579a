"""Level-set sampling and transnormal / isoparametric verification.

A function f is transnormal when F(grad f) is constant on each level set
(equal to a(f) for a profile a), and isoparametric when additionally the
Finsler Laplacian is constant on each level set (Delta f = b(f)).  The
verifier samples points of each requested level by radial bisection from an
anchor along a low-discrepancy direction set, computes F*(df), Delta f and
principal curvatures per point, and turns within-level constancy into
verdicts.  A margin band above the tolerance yields "inconclusive" rather
than "no", separating numerical noise from genuine failures, whose spread is
orders of magnitude larger.

Profiles a(t), b(t) are tabulated per-level means with monotone-cubic
interpolation; derivative-sensitive identities instead use pointwise
flow-line differencing of the measured profile, which is accurate to the
differencing step and independent of the interpolant.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy.interpolate import PchipInterpolator

from . import duality
from .calculus import ScalarField, laplacian, reparametrized_field
from .errors import (
    CriticalPoint,
    CriticalPointOnLevel,
    LeftRegularRegion,
    LevelNotReached,
    MinkGeomError,
    NotIsoparametric,
    NotMonotone,
)
from .hypersurface import frame_at
from .norms import MinkowskiNorm, RandersNorm
from .sampling import sphere_directions

LEVEL_RESIDUAL = 1e-10
VERDICTS = ("yes", "inconclusive", "no")


@dataclass
class LevelSample:
    """Sampled points of one regular level set with per-point quantities."""

    t: float
    points: np.ndarray          # (N, n)
    fstar: np.ndarray           # F*(df) per point
    lap: np.ndarray             # Delta f per point
    curvatures: np.ndarray      # (N, n-1) sorted principal curvatures
    groups: list                # per-point ((kappa, mult), ...)
    direction_index: np.ndarray
    skipped: int


def sample_level(norm: MinkowskiNorm, field: ScalarField, t: float, count: int,
                 seed: int = 0, anchor=None) -> LevelSample:
    """Sample ``count`` points of f^{-1}(t) by radial bisection plus Newton.

    Directions that never bracket the level are skipped; more than half
    skipped raises LevelNotReached.  Every returned point satisfies
    |f(x) - t| <= 1e-10 (1 + |t|) and is regular.
    """
    if count < 8:
        raise ValueError("count must be at least 8")
    lo, hi = field.regular_range
    if not lo < t < hi:
        raise ValueError(f"level {t} outside the declared regular range {field.regular_range}")
    anchor = np.asarray(anchor if anchor is not None else field.anchor, dtype=float)
    dirs = sphere_directions(field.dim, count, seed=seed)
    ladder = np.geomspace(2.0**-40, 2.0**40, 161)
    points, idx = [], []
    skipped = 0
    for j, d in enumerate(dirs):
        s = _radial_root(field, anchor, d, t, ladder)
        if s is None:
            # half-space fields (linear levels, one-sided potentials) only
            # bracket on one side; the mirrored ray keeps the sample full
            d = -d
            s = _radial_root(field, anchor, d, t, ladder)
        if s is None:
            skipped += 1
            continue
        x = anchor + s * d
        if abs(field.value(x) - t) > LEVEL_RESIDUAL * (1.0 + abs(t)):
            skipped += 1
            continue
        df = field.d1(x)
        if np.linalg.norm(df) < 1e-8 * (1.0 + abs(t)):
            raise CriticalPointOnLevel(f"sampled point {x!r} on level {t} is critical")
        points.append(x)
        idx.append(j)
    if skipped > count // 2:
        raise LevelNotReached(
            f"level {t}: {skipped}/{count} directions failed to bracket; "
            "check the anchor or the declared regular range"
        )
    points = np.array(points)
    fstar = np.empty(len(points))
    lap = np.empty(len(points))
    curvs = np.empty((len(points), field.dim - 1))
    groups = []
    for i, x in enumerate(points):
        df = field.d1(x)
        fstar[i] = duality.dual_norm(norm, df)
        lap[i] = laplacian(norm, field, x, method="dual")
        fr = frame_at(norm, field, x)
        curvs[i] = fr.principal_curvatures
        groups.append(fr.groups)
    return LevelSample(
        t=float(t), points=points, fstar=fstar, lap=lap,
        curvatures=curvs, groups=groups,
        direction_index=np.array(idx), skipped=skipped,
    )


def _radial_root(field: ScalarField, anchor, d, t, ladder):
    def phi(s):
        try:
            return field.value(anchor + s * d) - t
        except MinkGeomError:
            return math.nan

    vals = [phi(s) for s in ladder]
    bracket = None
    for a in range(len(ladder) - 1):
        va, vb = vals[a], vals[a + 1]
        if math.isnan(va) or math.isnan(vb):
            continue
        if va == 0.0:
            bracket = (ladder[a], ladder[a])
            break
        if va * vb < 0.0:
            bracket = (ladder[a], ladder[a + 1])
            break
    if bracket is None:
        return None
    sa, sb = bracket
    va = phi(sa)
    for _ in range(60):
        if sb - sa <= 1e-13 * max(1.0, sb):
            break
        sm = 0.5 * (sa + sb)
        vm = phi(sm)
        if vm == 0.0:
            sa = sb = sm
            break
        if va * vm < 0.0:
            sb = sm
        else:
            sa, va = sm, vm
    s = 0.5 * (sa + sb)
    for _ in range(3):
        x = anchor + s * d
        try:
            slope = float(field.d1(x) @ d)
        except MinkGeomError:
            return None
        if slope == 0.0:
            break
        s = s - (field.value(x) - t) / slope
        if s <= 0.0:
            return None
    return s


# -- verification ---------------------------------------------------------------


@dataclass
class VerificationReport:
    """Per-level statistics, verdicts, and fitted profiles of one field.

    Verdicts are "yes", "inconclusive" (spread within a factor 10 of the
    tolerance) or "no".  ``transnormal`` / ``isoparametric`` booleans are the
    strict "yes" readings, and isoparametric implies transnormal by
    construction.
    """

    norm: MinkowskiNorm
    field: ScalarField
    levels: list
    count: int
    seed: int
    tolerance: float
    strategy: str
    samples: list
    level_stats: list
    transnormal_verdict: str
    isoparametric_verdict: str
    constant_principal_curvatures: bool
    group_structure: tuple
    a_nodes: np.ndarray
    b_nodes: np.ndarray
    witness: dict | None = None
    scenario_id: str = ""
    extras: dict = dc_field(default_factory=dict)

    @property
    def transnormal(self) -> bool:
        return self.transnormal_verdict == "yes"

    @property
    def isoparametric(self) -> bool:
        return self.isoparametric_verdict == "yes"

    def a_interp(self) -> PchipInterpolator:
        return PchipInterpolator(self.a_nodes[:, 0], self.a_nodes[:, 1])

    def b_interp(self) -> PchipInterpolator:
        return PchipInterpolator(self.b_nodes[:, 0], self.b_nodes[:, 1])

    # -- serialization ----------------------------------------------------------

    def to_json_dict(self) -> dict:
        per_level = []
        for st in self.level_stats:
            per_level.append({k: _jsonify(v) for k, v in st.items()})
        return {
            "schema": 1,
            "scenario": self.scenario_id,
            "norm": {
                "family": self.norm.family,
                "dim": self.norm.dim,
                "strategy": self.norm.strategy,
            },
            "field": {"tag": self.field.tag, "uses_fd": self.field.uses_fd},
            "levels": [_jsonify(t) for t in self.levels],
            "samples_per_level": self.count,
            "seed": self.seed,
            "tolerance": _jsonify(self.tolerance),
            "derivative_strategy": self.strategy,
            "verdicts": {
                "transnormal": self.transnormal_verdict,
                "isoparametric": self.isoparametric_verdict,
                "transnormal_bool": self.transnormal,
                "isoparametric_bool": self.isoparametric,
                "constant_principal_curvatures": self.constant_principal_curvatures,
            },
            "group_structure": list(self.group_structure),
            "profiles": {
                "a": [[_jsonify(t), _jsonify(v)] for t, v in self.a_nodes],
                "b": [[_jsonify(t), _jsonify(v)] for t, v in self.b_nodes],
            },
            "witness": _jsonify(self.witness),
        }

    def write_json(self, path):
        with open(path, "w") as fh:
            fh.write(dumps_17g(self.to_json_dict()))
            fh.write("\n")

    def write_csv(self, path, coord_columns: int = 6, curvature_columns: int = 5):
        """One row per sample point with fixed, padded columns."""
        cols = (
            ["scenario", "level"]
            + [f"x{i+1}" for i in range(coord_columns)]
            + ["fstar_df", "laplacian"]
            + [f"k{i+1}" for i in range(curvature_columns)]
        )
        lines = [",".join(cols)]
        for sample in self.samples:
            for i in range(len(sample.points)):
                row = [self.scenario_id, _fmt(sample.t)]
                coords = list(sample.points[i]) + [None] * (coord_columns - self.field.dim)
                row += ["" if c is None else _fmt(c) for c in coords]
                row += [_fmt(sample.fstar[i]), _fmt(sample.lap[i])]
                ks = list(sample.curvatures[i]) + [None] * (curvature_columns - (self.field.dim - 1))
                row += ["" if k is None else _fmt(k) for k in ks]
                lines.append(",".join(row))
        with open(path, "w") as fh:
            fh.write("\n".join(lines))
            fh.write("\n")


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _jsonify(v):
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, (np.integer, int)):
        return int(v)
    if isinstance(v, np.ndarray):
        return [_jsonify(x) for x in v]
    if isinstance(v, (list, tuple)):
        return [_jsonify(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonify(x) for k, x in v.items()}
    return v


def dumps_17g(obj) -> str:
    """JSON text with floats rendered at 17 significant digits, sorted keys.

    Byte-identical output for identical inputs, independent of platform float
    repr choices.
    """
    enc = json.encoder

    def floatstr(o, _inf=float("inf")):
        if o != o or o in (_inf, -_inf):
            raise ValueError("non-finite float in report")
        return format(o, ".17g")

    iterencode = enc._make_iterencode(
        {}, None, enc.encode_basestring_ascii, "  ", floatstr,
        ": ", ",", True, False, False)
    return "".join(iterencode(obj, 0))


def verify(norm: MinkowskiNorm, field: ScalarField, levels, count: int = 64,
           tol: float | None = None, seed: int = 0, anchor=None,
           witness_points: int = 8) -> VerificationReport:
    """Verify the transnormal / isoparametric conditions on the given levels.

    Per-level relative spreads of F*(df) and Delta f drive the verdicts; for
    a Randers norm the dual-coefficient system in the Euclidean quantities is
    evaluated as an independent second witness and recorded alongside.
    """
    levels = [float(t) for t in levels]
    if len(levels) < 3:
        raise ValueError("verification needs at least 3 levels")
    uses_fd = norm.strategy == "fd" or field.uses_fd
    if tol is None:
        tol = 1e-4 if uses_fd else 1e-6
    samples = [sample_level(norm, field, t, count, seed=seed, anchor=anchor)
               for t in levels]
    stats = []
    worst_f = worst_lap = worst_curv = 0.0
    for s in samples:
        st = {
            "level": s.t,
            "points": len(s.points),
            "skipped": s.skipped,
            "fstar_mean": float(s.fstar.mean()),
            "fstar_spread": float(s.fstar.max() - s.fstar.min()),
            "fstar_cv": _cv(s.fstar),
            "lap_mean": float(s.lap.mean()),
            "lap_spread": float(s.lap.max() - s.lap.min()),
            "lap_cv": _cv(s.lap),
            "curvature_groups": [list(g) for g in _modal_groups(s)],
            "curvature_spread": list(s.curvatures.max(axis=0) - s.curvatures.min(axis=0)),
        }
        stats.append(st)
        worst_f = max(worst_f, st["fstar_spread"] / (1.0 + abs(st["fstar_mean"])))
        worst_lap = max(worst_lap, st["lap_spread"] / (1.0 + abs(st["lap_mean"])))
        kscale = 1.0 + float(np.max(np.abs(s.curvatures))) if s.curvatures.size else 1.0
        worst_curv = max(worst_curv, float(np.max(st["curvature_spread"])) / kscale)

    trans_verdict = _verdict(worst_f, tol)
    lap_verdict = _verdict(worst_lap, tol)
    iso_verdict = _combine(trans_verdict, lap_verdict)
    const_curv = worst_curv <= tol

    a_nodes = np.array(sorted((s.t, float(s.fstar.mean())) for s in samples))
    b_nodes = np.array(sorted((s.t, float(s.lap.mean())) for s in samples))
    structure = _modal_structure(samples)

    witness = None
    if isinstance(norm, RandersNorm):
        witness = _randers_witness(norm, field, samples, tol, witness_points)

    return VerificationReport(
        norm=norm, field=field, levels=levels, count=count, seed=seed,
        tolerance=tol, strategy=("fd" if uses_fd else norm.strategy),
        samples=samples, level_stats=stats,
        transnormal_verdict=trans_verdict,
        isoparametric_verdict=iso_verdict,
        constant_principal_curvatures=const_curv,
        group_structure=structure,
        a_nodes=a_nodes, b_nodes=b_nodes, witness=witness,
    )


def _cv(values: np.ndarray) -> float:
    m = float(values.mean())
    return float(values.std() / (1.0 + abs(m)))


def _verdict(spread: float, tol: float) -> str:
    if spread <= tol:
        return "yes"
    if spread <= 10.0 * tol:
        return "inconclusive"
    return "no"


def _combine(trans: str, lap: str) -> str:
    order = {"yes": 0, "inconclusive": 1, "no": 2}
    return max(trans, lap, key=lambda v: order[v])


def _modal_groups(sample: LevelSample):
    structures = {}
    for g in sample.groups:
        key = tuple(m for _, m in g)
        structures.setdefault(key, []).append(g)
    key = max(structures, key=lambda k: len(structures[k]))
    chosen = structures[key]
    out = []
    for r in range(len(key)):
        out.append((float(np.mean([g[r][0] for g in chosen])), key[r]))
    return tuple(out)


def _modal_structure(samples) -> tuple:
    counts = {}
    for s in samples:
        for g in s.groups:
            key = tuple(m for _, m in g)
            counts[key] = counts.get(key, 0) + 1
    return max(counts, key=counts.get)


def measured_profile_derivative(norm, field, x, step: float = 1e-4):
    """(a(t), a'(t)) at the level through x, by flow-line differencing.

    Moves +-h along the forward unit normal with h = step * a(t) (the radius
    scale of the model families); d(F*(df))/drho = a'(f) a(f).
    """
    df = field.d1(x)
    grad = duality.legendre_inverse(norm, df)
    a_pt = norm.value(grad)
    n_vec = grad / a_pt
    h = step * max(a_pt, 1e-2)
    ap = duality.dual_norm(norm, field.d1(x + h * n_vec))
    am = duality.dual_norm(norm, field.d1(x - h * n_vec))
    return a_pt, (ap - am) / (2.0 * h * a_pt)


def _randers_witness(norm: RandersNorm, field: ScalarField, samples, tol, npts) -> dict:
    lam = norm.lam
    b = norm.b
    r1_max = r2_max = 0.0
    for s in samples:
        a_fit = float(s.fstar.mean())
        b_fit = float(s.lap.mean())
        take = min(npts, len(s.points))
        a_primes = []
        for x in s.points[:take]:
            try:
                a_primes.append(measured_profile_derivative(norm, field, x)[1])
            except MinkGeomError:
                continue
        a_prime = float(np.mean(a_primes)) if a_primes else 0.0
        for x in s.points[:take]:
            df = field.d1(x)
            zeta = float(df @ b)
            r1 = float(df @ df) - lam * a_fit**2 - 2.0 * a_fit * zeta
            lap_alpha = float(np.trace(field.d2(x)))
            r2 = lap_alpha - lam * b_fit - (b_fit / a_fit + a_prime) * zeta
            r1_max = max(r1_max, abs(r1) / (1.0 + df @ df))
            r2_max = max(r2_max, abs(r2) / (1.0 + abs(lap_alpha)))
    w_tol = max(100.0 * tol, 1e-4)
    return {
        "r1_max": r1_max,
        "r2_max": r2_max,
        "r1_pass": bool(r1_max <= w_tol),
        "r2_pass": bool(r2_max <= w_tol),
        "tolerance": w_tol,
    }


# -- identities, flow, reparametrization ------------------------------------------


def consistency_identities(report: VerificationReport, points_per_level: int = 4,
                           step: float = 1e-4) -> dict:
    """Residual table of the structural identities of an isoparametric field.

    (i)  sum_a k_a = a'(t) - b(t)/a(t), with a' measured by flow-line
         differencing;
    (ii) dk_a/drho = k_a^2 along f-segments (flat ambient space);
    (iii) for sphere/cylinder model potentials, sum k_a^2 = q / a(t)^2 with
         q = (model dimension - 1).
    """
    if not report.isoparametric:
        raise NotIsoparametric("consistency identities require an isoparametric verdict")
    norm, field = report.norm, report.field
    rows = {"level": [], "sum_k_vs_profile": [], "riccati": [], "model_sum_sq": []}
    q = _model_q(report)
    for s in report.samples:
        a_fit = float(s.fstar.mean())
        b_fit = float(s.lap.mean())
        res_i = res_ii = res_iii = 0.0
        for x in s.points[: min(points_per_level, len(s.points))]:
            a_pt, a_prime = measured_profile_derivative(norm, field, x, step)
            fr = frame_at(norm, field, x)
            sum_k = float(np.sum(fr.principal_curvatures))
            res_i = max(res_i, abs(sum_k - (a_prime - b_fit / a_fit)))
            h = step * max(a_pt, 1e-2)
            kp = frame_at(norm, field, x + h * fr.normal).principal_curvatures
            km = frame_at(norm, field, x - h * fr.normal).principal_curvatures
            dk = (kp - km) / (2.0 * h)
            res_ii = max(res_ii, float(np.max(np.abs(dk - fr.principal_curvatures**2))))
            if q is not None:
                res_iii = max(res_iii, abs(float(np.sum(fr.principal_curvatures**2)) - q / a_fit**2))
        rows["level"].append(s.t)
        rows["sum_k_vs_profile"].append(res_i)
        rows["riccati"].append(res_ii)
        rows["model_sum_sq"].append(res_iii if q is not None else math.nan)
    rows["max_sum_k_vs_profile"] = max(rows["sum_k_vs_profile"])
    rows["max_riccati"] = max(rows["riccati"])
    rows["max_model_sum_sq"] = (max(rows["model_sum_sq"]) if q is not None else math.nan)
    return rows


def _model_q(report: VerificationReport):
    tag = report.field.tag
    if tag in ("half_squared_norm", "half_squared_norm_reverse"):
        return report.field.dim - 1
    if tag in ("half_squared_subspace_dual", "half_squared_subspace_dual_reverse"):
        return report.field.meta["m"] - 1
    return None


def _f_length(norm: MinkowskiNorm, delta: np.ndarray) -> float:
    # homogeneity-normalized evaluation, safe below the zero-exclusion ball
    nrm = float(np.linalg.norm(delta))
    if nrm == 0.0:
        return 0.0
    return nrm * norm.value(delta / nrm)


@dataclass(frozen=True)
class FlowResult:
    endpoint: np.ndarray
    arclength: float
    trajectory: np.ndarray
    chord_deviation: float


def f_segment_flow(norm: MinkowskiNorm, field: ScalarField, x0, t1: float, t2: float,
                   steps: int = 512) -> FlowResult:
    """Integrate the unit-speed gradient flow from f = t1 up to f = t2.

    The trajectory is the f-segment through x0.  Integration runs in the
    level parameter (dx/dt = grad f / F*(df)^2, classical RK4), the endpoint
    is Newton-projected onto f = t2, and the F-arclength is accumulated along
    the polyline, which is exact for the straight segments of a Minkowski
    space.  ``chord_deviation`` is the maximum Euclidean distance of the
    trajectory from the chord, a direct straightness check.
    """
    if not t1 < t2:
        raise ValueError("need t1 < t2")
    x = np.asarray(x0, dtype=float).copy()
    if abs(field.value(x) - t1) > 1e-8 * (1.0 + abs(t1)):
        raise ValueError("x0 does not lie on the level t1")

    def velocity(x_cur):
        try:
            df = field.d1(x_cur)
            grad = duality.legendre_inverse(norm, df)
        except (CriticalPoint, MinkGeomError) as exc:
            raise LeftRegularRegion(str(exc)) from exc
        fstar = norm.value(grad)
        if fstar < 1e-10:
            raise LeftRegularRegion("F(grad f) collapsed along the flow")
        return grad / fstar**2

    if steps % 2:
        steps += 1
    dt = (t2 - t1) / steps
    traj = [x.copy()]
    arclength = 0.0
    for _ in range(steps):
        k1 = velocity(x)
        k2 = velocity(x + 0.5 * dt * k1)
        k3 = velocity(x + 0.5 * dt * k2)
        k4 = velocity(x + dt * k3)
        delta = (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        arclength += _f_length(norm, delta)
        x = x + delta
        traj.append(x.copy())
    for _ in range(3):
        df = field.d1(x)
        grad = duality.legendre_inverse(norm, df)
        fstar = norm.value(grad)
        correction = (field.value(x) - t2) / fstar**2
        x = x - correction * grad
    arclength += _f_length(norm, x - traj[-1])
    traj[-1] = x.copy()
    traj = np.array(traj)
    chord = traj[-1] - traj[0]
    chord_norm2 = float(chord @ chord)
    rel = traj - traj[0]
    proj = np.outer(rel @ chord / chord_norm2, chord)
    deviation = float(np.max(np.linalg.norm(rel - proj, axis=1)))
    return FlowResult(endpoint=x, arclength=float(arclength),
                      trajectory=traj, chord_deviation=deviation)


def transnormal_profile_value(norm: MinkowskiNorm, field: ScalarField, t: float,
                              count: int = 8, seed: int = 0) -> float:
    """a(t) of a transnormal field, measured from a small level sample."""
    s = sample_level(norm, field, t, count, seed=seed)
    return float(s.fstar.mean())


def reparametrize_isoparametric(report: VerificationReport, profile,
                                count: int | None = None) -> VerificationReport:
    """Re-verify phi o f for a monotone smooth profile.

    The verdict must remain isoparametric and the fitted profiles transform
    as a_new(phi(t)) = phi'(t) a(t) and b_new(phi(t)) = phi'' a^2 + phi' b.
    """
    if not report.isoparametric:
        raise NotIsoparametric("reparametrization requires an isoparametric report")
    for t in report.levels:
        if profile.derivatives(t)[1] <= 0.0:
            raise NotMonotone(f"profile derivative is not positive at t={t}")
    new_field = reparametrized_field(report.field, profile)
    new_levels = [profile.derivatives(t)[0] for t in report.levels]
    return verify(report.norm, new_field, new_levels,
                  count=count or report.count, tol=report.tolerance,
                  seed=report.seed)
