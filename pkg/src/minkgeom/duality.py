"""Legendre transform, dual norms, and subspace duals.

The Legendre transform L maps vectors to covectors by L(y)_i = F F_{y^i}(y),
which is the gradient of G = F^2/2, so its Jacobian is exactly the
fundamental tensor g(y).  It is a norm-preserving diffeomorphism away from
zero, with inverse computed here either in closed form (Euclidean, Randers,
k-th root, scaled) or by a damped Newton iteration on the generic path.

The dual norm is F*(xi) = sup_{y != 0} xi(y)/F(y) = F(L^{-1}(xi)), and the
dual fundamental tensor satisfies g*(L(y)) = g(y)^{-1}.

For a coordinate subspace Vbar of dimension m, the subspace dual is the norm
on Vbar whose value is sup over covectors supported in the first m
coordinates, Ftilde(ybar) = sup xibar(ybar) / F*(xibar).  In general
Ftilde <= F restricted to Vbar, with equality exactly when the Legendre map
preserves the subspace.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import BadDimension, NoConvergence, ZeroCovector, ZeroVector
from .norms import (
    AlphaBetaNorm,
    EuclideanNorm,
    KthRootNorm,
    MinkowskiNorm,
    RandersNorm,
    ScaledNorm,
    ZERO_EXCLUSION,
)
from .sampling import sphere_directions

DUAL_MODES = ("analytic_randers", "newton_legendre", "sup_over_indicatrix")


def _as_covector(xi, n: int) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    if xi.shape != (n,):
        raise BadDimension(f"expected a covector of length {n}, got shape {xi.shape}")
    if not np.all(np.isfinite(xi)) or np.linalg.norm(xi) < ZERO_EXCLUSION:
        raise ZeroCovector("covector is inside the zero-exclusion ball")
    return xi


def legendre(norm: MinkowskiNorm, y) -> np.ndarray:
    """L(y)_i = F(y) F_{y^i}(y); equals g_ij(y) y^j; 1-homogeneous."""
    return norm.legendre(y)


def legendre_inverse(norm: MinkowskiNorm, xi) -> np.ndarray:
    """The vector y with L(y) = xi.

    Closed forms where the family admits them, damped Newton otherwise.
    """
    xi = _as_covector(xi, norm.dim)
    if isinstance(norm, EuclideanNorm):
        return xi.copy()
    if isinstance(norm, RandersNorm):
        return _randers_inverse(norm, xi)
    if isinstance(norm, KthRootNorm):
        return _kth_root_inverse(norm.k, xi)
    if isinstance(norm, ScaledNorm):
        return legendre_inverse(norm.base, xi / norm.factor**2)
    return legendre_inverse_newton(norm, xi)


def _randers_inverse(norm: RandersNorm, xi: np.ndarray) -> np.ndarray:
    lam = norm.lam
    b = norm.b
    astar_xi = (lam * xi + b * (b @ xi)) / lam**2
    alpha_star = float(np.sqrt(xi @ astar_xi))
    fstar = alpha_star - float(b @ xi) / lam
    return (fstar / (lam * alpha_star)) * (xi - fstar * b)


def _kth_root_inverse(k: int, xi: np.ndarray) -> np.ndarray:
    p = k / (k - 1.0)
    sstar = float(np.sum(np.abs(xi) ** p))
    return np.sign(xi) * np.abs(xi) ** (1.0 / (k - 1.0)) * sstar ** ((k - 2.0) / k)


def legendre_inverse_newton(norm: MinkowskiNorm, xi, max_iter: int = 50) -> np.ndarray:
    """Generic damped Newton inversion of the Legendre map.

    Seeded with a naive index raise through g at the covector's components;
    L is a global diffeomorphism, so for well-conditioned norms this
    converges from that seed.  Iterates past the acceptance threshold down to
    stagnation, so the result is limited by conditioning, not by the stop
    rule.
    """
    xi = _as_covector(xi, norm.dim)
    scale = float(np.linalg.norm(xi))
    try:
        y = np.linalg.solve(norm.derivatives(xi, order=2).d2, xi)
    except (ZeroVector, np.linalg.LinAlgError):
        y = xi.copy()
    res = norm.legendre(y) - xi
    rnorm = float(np.linalg.norm(res))
    for iteration in range(max_iter):
        if rnorm <= 1e-15 * scale:
            break
        try:
            step = np.linalg.solve(norm.derivatives(y, order=2).d2, -res)
        except np.linalg.LinAlgError as exc:
            raise NoConvergence(iteration, rnorm) from exc
        t = 1.0
        while t > 1e-6:
            y_new = y + t * step
            try:
                res_new = norm.legendre(y_new) - xi
            except ZeroVector:
                t *= 0.5
                continue
            rn = float(np.linalg.norm(res_new))
            if rn < rnorm:
                break
            t *= 0.5
        else:
            break  # stagnated; accept current iterate if below tolerance
        y, res, rnorm = y_new, res_new, rn
    fstar_sq = norm.value(y) ** 2
    if rnorm > 1e-12 * max(fstar_sq, ZERO_EXCLUSION):
        raise NoConvergence(max_iter, rnorm)
    return y


def dual_norm(norm: MinkowskiNorm, xi) -> float:
    """F*(xi) = sup_y xi(y)/F(y), by closed form or Legendre inversion."""
    xi = _as_covector(xi, norm.dim)
    if isinstance(norm, EuclideanNorm):
        return float(np.linalg.norm(xi))
    if isinstance(norm, RandersNorm):
        return _randers_dual_value(norm, xi)
    if isinstance(norm, KthRootNorm):
        p = norm.k / (norm.k - 1.0)
        return float(np.sum(np.abs(xi) ** p) ** (1.0 / p))
    if isinstance(norm, ScaledNorm):
        return dual_norm(norm.base, xi) / norm.factor
    return norm.value(legendre_inverse_newton(norm, xi))


def _randers_dual_value(norm: RandersNorm, xi: np.ndarray) -> float:
    lam = norm.lam
    bxi = float(norm.b @ xi)
    alpha_star = float(np.sqrt((lam * (xi @ xi) + bxi**2))) / lam
    return alpha_star - bxi / lam


def dual_fundamental_tensor(norm: MinkowskiNorm, xi) -> np.ndarray:
    """g*^{ij}(xi) of the dual norm; equals g(L^{-1} xi)^{-1}.

    For Randers the analytic dual coefficients give an independent closed
    form, used as the production fast path.
    """
    xi = _as_covector(xi, norm.dim)
    if isinstance(norm, EuclideanNorm):
        return np.eye(norm.dim)
    if isinstance(norm, RandersNorm):
        lam = norm.lam
        b = norm.b
        astar = (lam * np.eye(norm.dim) + np.outer(b, b)) / lam**2
        astar_xi = astar @ xi
        alpha_star = float(np.sqrt(xi @ astar_xi))
        fstar = alpha_star - float(b @ xi) / lam
        al = astar_xi / alpha_star
        fs = al - b / lam
        return np.outer(fs, fs) + (fstar / alpha_star) * (astar - np.outer(al, al))
    if isinstance(norm, ScaledNorm):
        return dual_fundamental_tensor(norm.base, xi) / norm.factor**2
    y = legendre_inverse(norm, xi)
    return np.linalg.inv(norm.derivatives(y, order=2).d2)


class DualNorm:
    """The dual norm F* of a base Minkowski norm, with a selectable path.

    Modes: ``analytic_randers`` (closed forms, Euclidean/Randers only),
    ``newton_legendre`` (generic production path), ``sup_over_indicatrix``
    (grid maximization; a test oracle, never used in production code).
    """

    def __init__(self, base: MinkowskiNorm, mode: str | None = None, grid_count: int = 10_000):
        if mode is None:
            mode = (
                "analytic_randers"
                if isinstance(base, (EuclideanNorm, RandersNorm))
                else "newton_legendre"
            )
        if mode not in DUAL_MODES:
            raise ValueError(f"unknown dual mode {mode!r}")
        if mode == "analytic_randers" and not isinstance(base, (EuclideanNorm, RandersNorm)):
            raise ValueError("analytic_randers mode requires a Euclidean or Randers base")
        self.base = base
        self.mode = mode
        self.grid_count = grid_count

    def value(self, xi) -> float:
        if self.mode == "analytic_randers":
            return dual_norm(self.base, xi)
        if self.mode == "newton_legendre":
            xi = _as_covector(xi, self.base.dim)
            return self.base.value(legendre_inverse_newton(self.base, xi))
        return dual_norm_grid_sup(self.base, xi, count=self.grid_count)

    __call__ = value

    def fundamental_tensor(self, xi) -> np.ndarray:
        return dual_fundamental_tensor(self.base, xi)

    def inverse(self, xi) -> np.ndarray:
        if self.mode == "newton_legendre":
            return legendre_inverse_newton(self.base, _as_covector(xi, self.base.dim))
        return legendre_inverse(self.base, xi)


def dual_norm_grid_sup(norm: MinkowskiNorm, xi, count: int = 10_000, refine: bool = True) -> float:
    """Grid-maximization oracle for F*: max of xi(u)/F(u) over a sphere lattice.

    Independent of the Legendre machinery (uses only norm values); local
    Nelder-Mead refinement sharpens the best grid direction.
    """
    xi = _as_covector(xi, norm.dim)
    dirs = sphere_directions(norm.dim, count, seed=0)
    ratios = dirs @ xi / np.array([norm.value(u) for u in dirs])
    best = dirs[int(np.argmax(ratios))]

    def neg_ratio(u):
        nrm = np.linalg.norm(u)
        if nrm < 1e-12:
            return np.inf
        return -float(u @ xi) / norm.value(u)

    if refine:
        out = minimize(neg_ratio, best, method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000})
        return float(-out.fun)
    return float(np.max(ratios))


# -- subspace duals ------------------------------------------------------------


@dataclass(frozen=True)
class SubspaceDual:
    """The dual metric Ftilde of F*|_{first m coordinates}, as a norm on R^m."""

    base: MinkowskiNorm
    m: int
    norm: MinkowskiNorm

    def value(self, ybar) -> float:
        return self.norm.value(ybar)

    def embed(self, ybar) -> np.ndarray:
        out = np.zeros(self.base.dim)
        out[: self.m] = np.asarray(ybar, dtype=float)
        return out

    def gap(self, ybar) -> float:
        """F(ybar embedded) - Ftilde(ybar); nonnegative up to roundoff."""
        return self.base.value(self.embed(ybar)) - self.norm.value(ybar)


def subspace_dual(norm: MinkowskiNorm, m: int) -> SubspaceDual:
    """Construct Ftilde on the first m coordinates.

    Coordinate alignment is a precondition: rotate the norm first for other
    subspaces (supported for Euclidean/Randers; the k-th root family is not
    rotation invariant and rejects rotation).
    """
    n = norm.dim
    if not 1 <= m < n:
        raise BadDimension(f"subspace dimension must satisfy 1 <= m < {n}, got {m}")
    if isinstance(norm, EuclideanNorm):
        return SubspaceDual(norm, m, EuclideanNorm(m, strategy=norm.strategy))
    if isinstance(norm, RandersNorm):
        bbar = norm.b[:m]
        c = float(np.sqrt(norm.lam + bbar @ bbar))
        if abs(c - 1.0) < 1e-14:
            tilde = RandersNorm(bbar, strategy=norm.strategy, validate=False)
        elif np.linalg.norm(bbar) == 0.0:
            tilde = ScaledNorm(EuclideanNorm(m, strategy=norm.strategy), c)
        else:
            tilde = ScaledNorm(RandersNorm(bbar / c, strategy=norm.strategy, validate=False), c)
        return SubspaceDual(norm, m, tilde)
    if isinstance(norm, ScaledNorm):
        return SubspaceDual(norm, m, ScaledNorm(subspace_dual(norm.base, m).norm, norm.factor))
    if isinstance(norm, KthRootNorm):
        # L preserves coordinate subspaces for this family, so Ftilde = F|Vbar.
        return SubspaceDual(norm, m, norm.restricted(m))
    if isinstance(norm, AlphaBetaNorm) and np.all(norm.beta_vec[m:] == 0.0):
        return SubspaceDual(norm, m, norm.restricted(m))
    raise BadDimension(
        f"no closed subspace dual for family {norm.family!r}; "
        "use subspace_dual_sup as an oracle"
    )


def subspace_dual_sup(norm: MinkowskiNorm, m: int, ybar, count: int = 10_000) -> float:
    """Oracle for Ftilde(ybar): sup of xibar(ybar)/F*(xibar) over a Vbar* grid."""
    ybar = np.asarray(ybar, dtype=float)
    if ybar.shape != (m,):
        raise BadDimension(f"expected a vector of length {m}")
    dirs = sphere_directions(m, count, seed=0) if m > 1 else np.array([[1.0], [-1.0]])
    vals = []
    for u in dirs:
        xi = np.zeros(norm.dim)
        xi[:m] = u
        vals.append(float(u @ ybar) / dual_norm(norm, xi))
    best = dirs[int(np.argmax(vals))]

    def neg(u):
        if np.linalg.norm(u) < 1e-12:
            return np.inf
        xi = np.zeros(norm.dim)
        xi[:m] = u
        return -float(u @ ybar) / dual_norm(norm, xi)

    out = minimize(neg, best, method="Nelder-Mead",
                   options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000})
    return float(-out.fun)
