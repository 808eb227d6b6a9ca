"""Second-order forward-mode jets over m chart variables.

A :class:`Jet2` carries the value, gradient and (symmetric) Hessian of a
scalar function at a point.  :class:`JetMatrix` stores an n x n matrix of
jets as three stacked arrays, which is what the curvature pipeline consumes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .expr_dsl import DomainError, Expr, evaluate

__all__ = ["Jet2", "JetRing", "JET", "JetMatrix", "SingularMetricError",
           "seed_variables", "eval_jet", "jet_matrix", "invert"]

SINGULAR_COND = 1e12


class SingularMetricError(ArithmeticError):
    pass


def _sym(h: np.ndarray) -> np.ndarray:
    return 0.5 * (h + h.T)


class Jet2:
    __slots__ = ("value", "grad", "hess")

    def __init__(self, value: float, grad, hess):
        self.value = float(value)
        self.grad = np.asarray(grad, dtype=float)
        self.hess = np.asarray(hess, dtype=float)

    @classmethod
    def constant(cls, x: float, m: int) -> "Jet2":
        return cls(x, np.zeros(m), np.zeros((m, m)))

    @classmethod
    def variable(cls, x: float, i: int, m: int) -> "Jet2":
        g = np.zeros(m)
        g[i] = 1.0
        return cls(x, g, np.zeros((m, m)))

    @property
    def nvars(self) -> int:
        return self.grad.shape[0]

    def is_constant(self) -> bool:
        return not (self.grad.any() or self.hess.any())

    def __repr__(self) -> str:
        return f"Jet2(value={self.value!r}, grad={self.grad.tolist()}, hess={self.hess.tolist()})"

    def _lift(self, other) -> "Jet2":
        if isinstance(other, Jet2):
            if other.nvars != self.nvars:
                raise ValueError("jets over different variable counts")
            return other
        return Jet2.constant(float(other), self.nvars)

    def __add__(self, other):
        o = self._lift(other)
        return Jet2(self.value + o.value, self.grad + o.grad, self.hess + o.hess)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return Jet2(self.value - o.value, self.grad - o.grad, self.hess - o.hess)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __neg__(self):
        return Jet2(-self.value, -self.grad, -self.hess)

    def __mul__(self, other):
        o = self._lift(other)
        cross = np.outer(self.grad, o.grad)
        hess = self.value * o.hess + o.value * self.hess + cross + cross.T
        return Jet2(self.value * o.value, self.value * o.grad + o.value * self.grad, hess)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o.value == 0:
            raise DomainError("division by a jet with zero value")
        q = self.value / o.value
        # (f - q g)/g with q = f/g, differentiated twice
        grad = (self.grad - q * o.grad) / o.value
        cross = np.outer(grad, o.grad)
        hess = (self.hess - q * o.hess - cross - cross.T) / o.value
        return Jet2(q, grad, _sym(hess))

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def chain(self, f0: float, f1: float, f2: float) -> "Jet2":
        """Apply a scalar function with value/derivatives f0, f1, f2 at self.value."""
        return Jet2(f0, f1 * self.grad,
                    f1 * self.hess + f2 * np.outer(self.grad, self.grad))


class JetRing:
    """Ring operations over :class:`Jet2`, mirroring :class:`~pseudocurv.expr_dsl.RealRing`.

    Value parts are computed with exactly the same float operations as the
    real ring, so jet values equal real evaluations bit for bit.
    """

    def __init__(self, nvars: int):
        self.m = nvars

    def const(self, x):
        return Jet2.constant(float(x), self.m)

    def value(self, a):
        return a.value

    def is_constant(self, a):
        return a.is_constant()

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        return a / b

    def neg(self, a):
        return -a

    def exp(self, a):
        try:
            e = math.exp(a.value)
        except OverflowError:
            raise DomainError("exp overflow") from None
        return a.chain(e, e, e)

    def ln(self, a):
        x = a.value
        if x <= 0:
            raise DomainError(f"ln of non-positive value {x!r}")
        return a.chain(math.log(x), 1.0 / x, -1.0 / (x * x))

    def sqrt(self, a):
        x = a.value
        if x < 0:
            raise DomainError(f"sqrt of negative value {x!r}")
        if x == 0:
            if a.is_constant():
                return self.const(0.0)
            raise DomainError("sqrt is not differentiable at 0")
        s = math.sqrt(x)
        return a.chain(s, 0.5 / s, -0.25 / (s * x))

    def sin(self, a):
        s, c = math.sin(a.value), math.cos(a.value)
        return a.chain(s, c, -s)

    def cos(self, a):
        s, c = math.sin(a.value), math.cos(a.value)
        return a.chain(c, -s, -c)

    def tan(self, a):
        t = math.tan(a.value)
        sec2 = 1.0 + t * t
        return a.chain(t, sec2, 2.0 * t * sec2)

    def sinh(self, a):
        try:
            s, c = math.sinh(a.value), math.cosh(a.value)
        except OverflowError:
            raise DomainError("sinh overflow") from None
        return a.chain(s, c, s)

    def cosh(self, a):
        try:
            s, c = math.sinh(a.value), math.cosh(a.value)
        except OverflowError:
            raise DomainError("cosh overflow") from None
        return a.chain(c, s, c)

    def abs(self, a):
        # derivative taken as sign(x); the kink at 0 is not smoothed
        sgn = float(np.sign(a.value))
        return a.chain(abs(a.value), sgn, 0.0)


JET = JetRing


def seed_variables(values, names) -> dict[str, Jet2]:
    m = len(names)
    return {name: Jet2.variable(float(v), i, m) for i, (name, v) in enumerate(zip(names, values))}


def eval_jet(node: Expr, point, coordinates, params=None) -> Jet2:
    """Evaluate an AST as a Jet2 in the listed coordinates at ``point``."""
    m = len(coordinates)
    bindings: dict = {k: Jet2.constant(float(v), m) for k, v in (params or {}).items()}
    bindings.update(seed_variables(point, coordinates))
    out = evaluate(node, bindings, JetRing(m))
    return out if isinstance(out, Jet2) else Jet2.constant(out, m)


@dataclass(frozen=True)
class JetMatrix:
    """n x n matrix of jets: ``value[i,j]``, ``grad[i,j,a]``, ``hess[i,j,a,b]``."""

    value: np.ndarray
    grad: np.ndarray
    hess: np.ndarray

    @classmethod
    def from_jets(cls, grid) -> "JetMatrix":
        n = len(grid)
        m = grid[0][0].nvars
        val = np.empty((n, n))
        grad = np.empty((n, n, m))
        hess = np.empty((n, n, m, m))
        for i in range(n):
            for j in range(n):
                jet = grid[i][j]
                val[i, j], grad[i, j], hess[i, j] = jet.value, jet.grad, jet.hess
        return cls(val, grad, hess)

    def entry(self, i: int, j: int) -> Jet2:
        return Jet2(self.value[i, j], self.grad[i, j], self.hess[i, j])

    def __matmul__(self, other: "JetMatrix") -> "JetMatrix":
        a, b = self, other
        val = a.value @ b.value
        grad = np.einsum("ika,kj->ija", a.grad, b.value) + np.einsum("ik,kja->ija", a.value, b.grad)
        cross = np.einsum("ika,kjb->ijab", a.grad, b.grad)
        hess = (np.einsum("ikab,kj->ijab", a.hess, b.value) + np.einsum("ik,kjab->ijab", a.value, b.hess)
                + cross + cross.transpose(0, 1, 3, 2))
        return JetMatrix(val, grad, hess)


def jet_matrix(grid_ast, point, coordinates, params=None) -> JetMatrix:
    """Evaluate an n x n grid of ASTs into a JetMatrix."""
    cache: dict = {}
    rows = []
    for row in grid_ast:
        out = []
        for node in row:
            key = id(node)
            if key not in cache:
                cache[key] = eval_jet(node, point, coordinates, params)
            out.append(cache[key])
        rows.append(out)
    return JetMatrix.from_jets(rows)


def invert(M: JetMatrix) -> JetMatrix:
    """Inverse with derivatives from d(M^-1) = -M^-1 dM M^-1 and its second-order analogue."""
    val = np.asarray(M.value, dtype=float)
    n = val.shape[0]
    if n == 0:
        raise SingularMetricError("empty matrix")
    cond = np.linalg.cond(val)
    if not np.isfinite(cond) or cond > SINGULAR_COND:
        raise SingularMetricError(f"metric value part is singular (condition number {cond:.3e})")
    lu = scipy.linalg.lu_factor(val)
    inv = scipy.linalg.lu_solve(lu, np.eye(n))
    # P_a = M^-1 dM_a
    P = np.einsum("ik,kja->ija", inv, M.grad)
    grad = -np.einsum("ika,kj->ija", P, inv)
    # d2(M^-1) = M^-1 (dM_a M^-1 dM_b + dM_b M^-1 dM_a - d2M_ab) M^-1
    PP = np.einsum("ika,kjb->ijab", P, P)
    inner = PP + PP.transpose(0, 1, 3, 2) - np.einsum("ik,kjab->ijab", inv, M.hess)
    hess = np.einsum("ikab,kj->ijab", inner, inv)
    hess = 0.5 * (hess + hess.transpose(0, 1, 3, 2))
    return JetMatrix(inv, grad, hess)
