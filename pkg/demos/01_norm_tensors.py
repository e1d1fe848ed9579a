"""Norm families and their derivative tensors.

Walks through the four built-in Minkowski norm families, evaluates the
fundamental tensor g, the Cartan tensor C and its derivative, and checks the
structural identities that every strongly convex norm satisfies:

    g(y) y . y = F(y)^2        (Euler)
    C(y)(. , . , y) = 0        (homogeneity of g)

and the agreement of the hand-derived closed forms with the exact
truncated-Taylor (jet) path.
"""

import numpy as np

from minkgeom import norms

y = np.array([0.8, -0.5, 1.1])

zoo = [
    norms.EuclideanNorm(3),
    norms.RandersNorm([0.5, 0.0, 0.0]),
    norms.KthRootNorm(4, 3),
    norms.AlphaBetaNorm(norms.PolynomialProfile([1.0, 1.0, 0.1]), 0.3, 3),
]

for norm in zoo:
    F = norm.value(y)
    d = norm.derivatives(y, order=4)
    g = d.d2
    C = 0.5 * d.d3
    euler = abs(g @ y @ y - F**2)
    contraction = np.max(np.abs(np.einsum("ijk,k->ij", C, y)))
    print(f"{norm.family:<12} F(y) = {F:.12f}")
    print(f"{'':<12} |g y.y - F^2|        = {euler:.2e}")
    print(f"{'':<12} |C(.,.,y)|           = {contraction:.2e}")
    print(f"{'':<12} eigenvalues of g     = {np.linalg.eigvalsh(g)}")

# closed forms vs jets, Randers worked example
randers = norms.RandersNorm([0.5, 0.0])
print("\nRanders g at y = (1, 0):")
print(randers.fundamental_tensor([1.0, 0.0]))  # diag(2.25, 1.5)
da = randers._analytic(np.array([0.3, -1.2]), 4)
dt = randers._taylor(np.array([0.3, -1.2]), 4)
for name in ("d1", "d2", "d3", "d4"):
    diff = np.max(np.abs(getattr(da, name) - getattr(dt, name)))
    print(f"closed form vs jet, {name}: {diff:.2e}")
