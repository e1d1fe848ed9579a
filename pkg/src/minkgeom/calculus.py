"""Scalar fields and the nonlinear calculus of a Minkowski norm.

The gradient of f is the Legendre preimage of df.  In linear coordinates on a
Minkowski space the Chern connection coefficients vanish and the Legendre
inverse has Jacobian g^{-1}, so the covariant Hessian collapses to the
coordinate Hessian:

    D^2 f(X, Y) = g_{grad f}(X^j d_j(grad f), Y) = f_ij X^i Y^j,

and the Laplacian (divergence of the gradient for any constant-density volume
form, so BH and HT agree) reduces to

    Delta f = g*^{ij}(df) f_ij = g^{ij}(grad f) f_ij = tr_{g_{grad f}} D^2 f.

The three expressions are evaluated through numerically distinct pipelines
(dual tensor, primal inverse metric, orthonormal-frame trace) and used to
cross-check each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import duality
from ._linalg import orthonormal_basis
from .errors import (
    BadDimension,
    CriticalPoint,
    DegenerateMetric,
    DimensionTooLarge,
    EigenFailure,
    NoConvergence,
)
from .norms import MinkowskiNorm, RandersNorm
from .sampling import sphere_directions, sphere_mean

CRITICAL_EPS = 1e-8

CATALOG_TAGS = (
    "linear",
    "half_squared_norm",
    "half_squared_norm_reverse",
    "half_squared_subspace_dual",
    "half_squared_subspace_dual_reverse",
    "norm_plus_linear",
    "custom",
    "reparametrized",
)


@dataclass
class ScalarField:
    """A scalar function on R^n with first and second derivative services.

    Catalog entries carry analytic derivatives; custom fields may fall back
    to finite differences, which is flagged (``uses_fd``) and propagated into
    verification reports.  ``regular_range`` is the declared open interval of
    regular values J, and ``anchor`` the star-shape center used by radial
    level sampling.
    """

    dim: int
    tag: str
    value_fn: object
    d1_fn: object
    d2_fn: object
    uses_fd: bool = False
    anchor: np.ndarray | None = None
    regular_range: tuple = (-math.inf, math.inf)
    meta: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if self.anchor is None:
            self.anchor = np.zeros(self.dim)

    def value(self, x) -> float:
        return float(self.value_fn(np.asarray(x, dtype=float)))

    def d1(self, x) -> np.ndarray:
        return np.asarray(self.d1_fn(np.asarray(x, dtype=float)), dtype=float)

    def d2(self, x) -> np.ndarray:
        return np.asarray(self.d2_fn(np.asarray(x, dtype=float)), dtype=float)

    def __repr__(self):
        return f"<ScalarField {self.tag} dim={self.dim}>"


# -- catalog -------------------------------------------------------------------


def linear_field(c) -> ScalarField:
    c = np.asarray(c, dtype=float)
    n = c.size
    return ScalarField(
        dim=n,
        tag="linear",
        value_fn=lambda x: c @ x,
        d1_fn=lambda x: c.copy(),
        d2_fn=lambda x: np.zeros((n, n)),
        meta={"c": c},
    )


def sphere_potential(norm: MinkowskiNorm, reverse: bool = False) -> ScalarField:
    """f = F^2(x)/2, or -F^2(-x)/2 for the reverse hypersphere family.

    Level t of the forward field is the Minkowski hypersphere F(x) = sqrt(2t);
    level t < 0 of the reverse field is the reverse hypersphere
    F(-x) = sqrt(-2t).  The forward normal of the reverse field points toward
    the center, which is what flips the principal curvature sign.
    """
    n = norm.dim
    if reverse:
        return ScalarField(
            dim=n,
            tag="half_squared_norm_reverse",
            value_fn=lambda x: -0.5 * norm.value(-x) ** 2,
            d1_fn=lambda x: norm.legendre(-x),
            d2_fn=lambda x: -norm.derivatives(-x, order=2).d2,
            regular_range=(-math.inf, 0.0),
            meta={"norm": norm, "reverse": True},
        )
    return ScalarField(
        dim=n,
        tag="half_squared_norm",
        value_fn=lambda x: 0.5 * norm.value(x) ** 2,
        d1_fn=lambda x: norm.legendre(x),
        d2_fn=lambda x: norm.derivatives(x, order=2).d2,
        regular_range=(0.0, math.inf),
        meta={"norm": norm, "reverse": False},
    )


def cylinder_potential(norm: MinkowskiNorm, m: int, reverse: bool = False) -> ScalarField:
    """f = Ftilde^2(xbar)/2 (or the reverse-signed variant).

    Ftilde is the subspace dual of F on the first m coordinates; the level
    r^2/2 is the F*-Minkowski cylinder of radius r (a Ftilde-sphere in Vbar
    crossed with the flat complement).
    """
    n = norm.dim
    sd = duality.subspace_dual(norm, m)
    tilde = sd.norm

    def embed_cov(xibar):
        out = np.zeros(n)
        out[:m] = xibar
        return out

    def embed_mat(h):
        out = np.zeros((n, n))
        out[:m, :m] = h
        return out

    sign = -1.0 if reverse else 1.0
    tag = "half_squared_subspace_dual" + ("_reverse" if reverse else "")
    return ScalarField(
        dim=n,
        tag=tag,
        value_fn=lambda x: sign * 0.5 * tilde.value(sign * x[:m]) ** 2,
        d1_fn=lambda x: embed_cov(tilde.legendre(sign * x[:m])),
        d2_fn=lambda x: sign * embed_mat(tilde.derivatives(sign * x[:m], order=2).d2),
        regular_range=(0.0, math.inf) if not reverse else (-math.inf, 0.0),
        meta={"norm": norm, "m": m, "reverse": reverse, "tilde": tilde},
    )


def norm_plus_linear(norm: RandersNorm, m: int) -> ScalarField:
    """f(x) = |xbar| + b.x for a Randers norm with defining covector b.

    The transnormal-but-not-isoparametric counterexample field: F*(df) = 1
    identically, while Delta f varies over level sets whenever b has a
    component outside the first m coordinates.
    """
    if not isinstance(norm, RandersNorm):
        raise BadDimension("norm_plus_linear requires a Randers norm")
    n = norm.dim
    if not 1 <= m < n:
        raise BadDimension(f"m must satisfy 1 <= m < {n}")
    b = norm.b

    def value(x):
        return np.linalg.norm(x[:m]) + b @ x

    def d1(x):
        out = b.copy()
        r = np.linalg.norm(x[:m])
        out[:m] += x[:m] / r
        return out

    def d2(x):
        out = np.zeros((n, n))
        r = np.linalg.norm(x[:m])
        out[:m, :m] = (np.eye(m) - np.outer(x[:m], x[:m]) / r**2) / r
        return out

    return ScalarField(
        dim=n,
        tag="norm_plus_linear",
        value_fn=value,
        d1_fn=d1,
        d2_fn=d2,
        regular_range=(0.0, math.inf),
        meta={"norm": norm, "m": m, "b": b},
    )


def custom_field(dim: int, value_fn, d1_fn=None, d2_fn=None, fd_step: float = 1e-5) -> ScalarField:
    """Wrap user callables; missing derivatives use central differences.

    Custom evaluators must be side-effect free: fields are shared freely
    across threads by the verification pipeline.
    """

    def fd_d1(x):
        h = fd_step * (1.0 + np.linalg.norm(x))
        out = np.zeros(dim)
        for i in range(dim):
            e = np.zeros(dim)
            e[i] = h
            d_h = (value_fn(x + e) - value_fn(x - e)) / (2 * h)
            d_h2 = (value_fn(x + 0.5 * e) - value_fn(x - 0.5 * e)) / h
            out[i] = (4 * d_h2 - d_h) / 3
        return out

    def fd_d2(x):
        h = 10 * fd_step * (1.0 + np.linalg.norm(x))
        out = np.zeros((dim, dim))
        f0 = value_fn(x)
        for i in range(dim):
            ei = np.zeros(dim)
            ei[i] = h
            out[i, i] = (value_fn(x + ei) - 2 * f0 + value_fn(x - ei)) / h**2
            for j in range(i + 1, dim):
                ej = np.zeros(dim)
                ej[j] = h
                out[i, j] = out[j, i] = (
                    value_fn(x + ei + ej) - value_fn(x + ei - ej)
                    - value_fn(x - ei + ej) + value_fn(x - ei - ej)
                ) / (4 * h**2)
        return out

    uses_fd = d1_fn is None or d2_fn is None
    return ScalarField(
        dim=dim,
        tag="custom",
        value_fn=value_fn,
        d1_fn=d1_fn or fd_d1,
        d2_fn=d2_fn or fd_d2,
        uses_fd=uses_fd,
    )


def reparametrized_field(field: ScalarField, profile) -> ScalarField:
    """phi o f with chain-rule derivatives; profile supplies phi, phi', phi''."""

    def value(x):
        return profile.derivatives(field.value(x))[0]

    def d1(x):
        return profile.derivatives(field.value(x))[1] * field.d1(x)

    def d2(x):
        p, dp, d2p = profile.derivatives(field.value(x))[:3]
        df = field.d1(x)
        return d2p * np.outer(df, df) + dp * field.d2(x)

    lo, hi = field.regular_range
    plo = _safe_profile_value(profile, lo, -math.inf)
    phi_hi = _safe_profile_value(profile, hi, math.inf)
    return ScalarField(
        dim=field.dim,
        tag="reparametrized",
        value_fn=value,
        d1_fn=d1,
        d2_fn=d2,
        uses_fd=field.uses_fd,
        anchor=field.anchor.copy(),
        regular_range=(plo, phi_hi),
        meta={"base": field, "profile": profile},
    )


def _safe_profile_value(profile, t, default):
    if not math.isfinite(t):
        return default
    try:
        with np.errstate(all="ignore"):
            v = profile.derivatives(t)[0]
    except (ArithmeticError, ValueError):
        return default
    return v if math.isfinite(v) else default


# -- differential operators ------------------------------------------------------


def _regular_d1(norm: MinkowskiNorm, field: ScalarField, x) -> np.ndarray:
    df = field.d1(x)
    scale = 1.0 + abs(field.value(x))
    if np.linalg.norm(df) < CRITICAL_EPS * scale:
        raise CriticalPoint(
            f"df vanishes at x={np.asarray(x)!r}; downstream formulas divide by F(grad f)"
        )
    return df


def gradient(norm: MinkowskiNorm, field: ScalarField, x) -> np.ndarray:
    """grad f(x) = L^{-1}(df(x)); satisfies F(grad f) = F*(df) and L(grad f) = df."""
    return duality.legendre_inverse(norm, _regular_d1(norm, field, x))


def hessian_form(norm: MinkowskiNorm, field: ScalarField, x, X, Y) -> float:
    """D^2 f(X, Y) at x; symmetric; equals f_ij X^i Y^j in linear coordinates."""
    _regular_d1(norm, field, x)
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    return float(X @ field.d2(x) @ Y)


def prefix_support(df: np.ndarray, hess: np.ndarray) -> int:
    """Largest coordinate prefix carrying df and the Hessian.

    Returns the smallest m such that df vanishes beyond index m and hess
    vanishes outside the leading m x m block; equals the dimension for
    generically supported data.  Cylinder-model potentials are supported on
    such a prefix, which lets computations drop to the subspace-dual norm
    when a singular norm family degenerates on the complement.
    """
    n = df.size
    sdf = float(np.max(np.abs(df)))
    sh = max(float(np.max(np.abs(hess))), 1e-300)
    m = n
    while m > 1 and (
        abs(df[m - 1]) <= 1e-14 * sdf
        and float(np.max(np.abs(hess[m - 1, :]))) <= 1e-14 * sh
        and float(np.max(np.abs(hess[:, m - 1]))) <= 1e-14 * sh
    ):
        m -= 1
    return m


def laplacian(norm: MinkowskiNorm, field: ScalarField, x, volume: str = "bh",
              method: str = "dual") -> float:
    """Finsler Laplacian Delta f(x) = div(grad f).

    ``volume`` in {"bh", "ht"}: the density is constant on a Minkowski space,
    so both give the same value; the argument documents intent.  ``method``
    selects the pipeline: "dual" contracts the dual fundamental tensor at df
    (production), "primal" inverts g at grad f (the analytic divergence
    form), "frame_trace" sums D^2 f over a g_{grad f}-orthonormal basis.

    If the norm degenerates at grad f (k-th root families on coordinate
    planes) but the data is supported on a coordinate prefix, the value is
    computed in the subspace-dual geometry, which is exact there.
    """
    if volume not in ("bh", "ht"):
        raise ValueError("volume must be 'bh' or 'ht'")
    df = _regular_d1(norm, field, x)
    hess = field.d2(x)
    try:
        return _laplacian_value(norm, df, hess, method)
    except (np.linalg.LinAlgError, DegenerateMetric, EigenFailure, NoConvergence):
        m = prefix_support(df, hess)
        if m == norm.dim:
            raise
        tilde = duality.subspace_dual(norm, m).norm
        return _laplacian_value(tilde, df[:m], hess[:m, :m], method)


def _laplacian_value(norm: MinkowskiNorm, df, hess, method: str) -> float:
    if method == "dual":
        return float(np.tensordot(duality.dual_fundamental_tensor(norm, df), hess))
    if method == "primal":
        grad = duality.legendre_inverse(norm, df)
        ginv = np.linalg.inv(norm.derivatives(grad, order=2).d2)
        return float(np.tensordot(ginv, hess))
    if method == "frame_trace":
        grad = duality.legendre_inverse(norm, df)
        g = norm.derivatives(grad, order=2).d2
        frame = np.vstack([
            orthonormal_basis(g, first=grad)[:],
            (grad / math.sqrt(grad @ g @ grad))[None, :],
        ])
        return float(sum(e @ hess @ e for e in frame))
    raise ValueError(f"unknown laplacian method {method!r}")


def laplacian_trace_check(norm: MinkowskiNorm, field: ScalarField, x) -> tuple[float, float]:
    """(dual-trace value, orthonormal-frame trace value); the two must agree."""
    return (
        laplacian(norm, field, x, method="dual"),
        laplacian(norm, field, x, method="frame_trace"),
    )


def divergence_fd(norm: MinkowskiNorm, field: ScalarField, x, step: float = 1e-5) -> float:
    """Centered finite difference of div(grad f); an independent oracle."""
    x = np.asarray(x, dtype=float)
    n = field.dim
    h = step * (1.0 + np.linalg.norm(x))
    total = 0.0
    for i in range(n):
        e = np.zeros(n)
        e[i] = h
        gp = gradient(norm, field, x + e)[i]
        gm = gradient(norm, field, x - e)[i]
        total += (gp - gm) / (2 * h)
    return total


# -- volume constants -------------------------------------------------------------


@dataclass(frozen=True)
class VolumeConstant:
    """Busemann-Hausdorff and Holmes-Thompson densities with error estimates.

    sigma_bh = vol(B^n) / vol({F < 1});  sigma_ht = vol({F* < 1}) / vol(B^n).
    Both equal 1 for the Euclidean norm, and both are constants on a
    Minkowski space, so they cancel in the Laplacian; they are reported for
    completeness.  Error fields are relative quasi-Monte-Carlo estimates.
    """

    sigma_bh: float
    sigma_ht: float
    sigma_bh_error: float
    sigma_ht_error: float


def volume_constants(norm: MinkowskiNorm, count: int | None = None, seed: int = 0) -> VolumeConstant:
    n = norm.dim
    if n > 6:
        raise DimensionTooLarge("volume quadrature supports n <= 6")
    if count is None:
        count = 100_000 if _has_closed_dual(norm) else 20_000
    dirs = sphere_directions(n, count, seed=seed)
    fvals = np.array([norm.value(u) for u in dirs])
    bh_mean, bh_err = sphere_mean(fvals ** (-float(n)))
    fstar = np.array([duality.dual_norm(norm, u) for u in dirs])
    ht_mean, ht_err = sphere_mean(fstar ** (-float(n)))
    return VolumeConstant(
        sigma_bh=1.0 / bh_mean,
        sigma_ht=ht_mean,
        sigma_bh_error=bh_err / bh_mean,
        sigma_ht_error=ht_err / max(ht_mean, 1e-300),
    )


def _has_closed_dual(norm: MinkowskiNorm) -> bool:
    from .norms import EuclideanNorm, KthRootNorm, ScaledNorm

    if isinstance(norm, ScaledNorm):
        return _has_closed_dual(norm.base)
    return isinstance(norm, (EuclideanNorm, RandersNorm, KthRootNorm))
