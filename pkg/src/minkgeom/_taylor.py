"""Truncated multivariate Taylor (jet) arithmetic up to order 4.

A :class:`Jet` stores the Taylor coefficients of a smooth function around a
base point, for all monomials of total degree <= 4 in ``n`` variables.  Sums,
products, quotients and composition with a univariate function (given its
derivatives at the inner value) are exact on the truncated algebra, so the
extracted derivative tensors are accurate to roundoff.  This is the generic
derivative path for norm families without closed forms, and the cross-check
for the families that have them.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

ORDER = 4

_SPACES: dict[int, "JetSpace"] = {}


class JetSpace:
    """Monomial bookkeeping for jets in ``n`` variables (cached per n)."""

    def __init__(self, n: int):
        self.n = n
        monos = []
        for deg in range(ORDER + 1):
            monos.extend(
                sorted(
                    k
                    for k in itertools.product(range(deg + 1), repeat=n)
                    if sum(k) == deg
                )
            )
        self.monomials = monos
        self.size = len(monos)
        self.index = {m: i for i, m in enumerate(monos)}
        self.degree = np.array([sum(m) for m in monos])
        # Dense multiplication table: all coefficient pairs whose product
        # monomial still has degree <= ORDER.
        ia, ib, iout = [], [], []
        for a, ma in enumerate(monos):
            da = sum(ma)
            for b, mb in enumerate(monos):
                if da + sum(mb) > ORDER:
                    continue
                ia.append(a)
                ib.append(b)
                iout.append(self.index[tuple(x + y for x, y in zip(ma, mb))])
        self._mul_a = np.array(ia)
        self._mul_b = np.array(ib)
        self._mul_out = np.array(iout)
        self._factorial = np.array(
            [math.prod(math.factorial(e) for e in m) for m in monos], dtype=float
        )

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        out = np.zeros(self.size)
        np.add.at(out, self._mul_out, a[self._mul_a] * b[self._mul_b])
        return out


def space(n: int) -> JetSpace:
    sp = _SPACES.get(n)
    if sp is None:
        sp = _SPACES[n] = JetSpace(n)
    return sp


class Jet:
    __slots__ = ("space", "c")

    def __init__(self, sp: JetSpace, coeffs: np.ndarray):
        self.space = sp
        self.c = coeffs

    # -- constructors -------------------------------------------------------

    @staticmethod
    def constant(sp: JetSpace, value: float) -> "Jet":
        c = np.zeros(sp.size)
        c[0] = value
        return Jet(sp, c)

    @staticmethod
    def variable(sp: JetSpace, i: int, base: float) -> "Jet":
        c = np.zeros(sp.size)
        c[0] = base
        e = [0] * sp.n
        e[i] = 1
        c[sp.index[tuple(e)]] = 1.0
        return Jet(sp, c)

    @staticmethod
    def variables(sp: JetSpace, base: np.ndarray) -> list["Jet"]:
        return [Jet.variable(sp, i, float(base[i])) for i in range(sp.n)]

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Jet):
            return Jet(self.space, self.c + other.c)
        c = self.c.copy()
        c[0] += other
        return Jet(self.space, c)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.space, -self.c)

    def __sub__(self, other):
        if isinstance(other, Jet):
            return Jet(self.space, self.c - other.c)
        c = self.c.copy()
        c[0] -= other
        return Jet(self.space, c)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            return Jet(self.space, self.space.mul(self.c, other.c))
        return Jet(self.space, self.c * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        return Jet(self.space, self.c / other)

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, p):
        if isinstance(p, int) and p >= 0:
            out = Jet.constant(self.space, 1.0)
            for _ in range(p):
                out = out * self
            return out
        return self.compose_univariate(_pow_derivs(self.c[0], p))

    # -- composition --------------------------------------------------------

    def compose_univariate(self, derivs) -> "Jet":
        """h(self) for a univariate h given h, h', ..., h'''' at self.value.

        Horner evaluation of the degree-4 Taylor polynomial of h in the
        nilpotent part of the jet.
        """
        coeffs = [derivs[j] / math.factorial(j) for j in range(ORDER + 1)]
        v = Jet(self.space, self.c.copy())
        v.c[0] = 0.0
        out = Jet.constant(self.space, coeffs[ORDER])
        for j in range(ORDER - 1, -1, -1):
            out = out * v + coeffs[j]
        return out

    def sqrt(self) -> "Jet":
        return self.compose_univariate(_pow_derivs(self.c[0], 0.5))

    def reciprocal(self) -> "Jet":
        return self.compose_univariate(_pow_derivs(self.c[0], -1.0))

    # -- extraction ---------------------------------------------------------

    @property
    def value(self) -> float:
        return float(self.c[0])

    def derivative_tensor(self, order: int) -> np.ndarray:
        """Dense symmetric derivative tensor of the given order."""
        sp = self.space
        if order == 0:
            return np.array(self.value)
        shape = (sp.n,) * order
        out = np.zeros(shape)
        for idx_mono in np.nonzero(sp.degree == order)[0]:
            mono = sp.monomials[idx_mono]
            val = self.c[idx_mono] * sp._factorial[idx_mono]
            indices = []
            for var, exp in enumerate(mono):
                indices.extend([var] * exp)
            for perm in set(itertools.permutations(indices)):
                out[perm] = val
        return out


def _pow_derivs(u0: float, p: float) -> list[float]:
    """Derivatives of t**p at u0, orders 0..4. Requires u0 > 0 for non-integer p."""
    if u0 <= 0.0 and not float(p).is_integer():
        raise ValueError(f"fractional power of non-positive jet value {u0!r}")
    out = []
    coef = 1.0
    for j in range(ORDER + 1):
        out.append(coef * u0 ** (p - j))
        coef *= p - j
    return out
