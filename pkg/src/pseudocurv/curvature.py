"""Curvature of a metric chart at a point.

Three routes produce a :class:`CurvaturePack`:

* :func:`curvature_pack` - the generic pipeline, jets of g_ij through
  Christoffel symbols to R_hijk = g_hs (d_k G^s_ij - d_j G^s_ik + G^r_ij G^s_rk - G^r_ik G^s_rj);
* :func:`warped_components` - block formulas for a warped product with a
  two-dimensional base and a constant-curvature fiber;
* :func:`gauss_pack` - a hypersurface in a space form via the Gauss equation.

The last two are closed-form oracles for the first.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import numpy as np

from . import tensors as tc
from .expr_dsl import BinOp, EvalError, Expr, Num, Var, check_bindings, evaluate, parse
from .jets import JetMatrix, SingularMetricError, eval_jet, invert, jet_matrix

__all__ = [
    "ChartError", "DomainViolation", "WarpedSpec", "MetricChart", "CurvaturePack",
    "WarpedInvariants", "full_chart", "warped_chart", "point_vector", "metric_jets",
    "christoffel", "riemann_from_jets", "pack_from_riemann", "curvature_pack",
    "warped_components", "gauss_pack", "POLE_TOL",
]

POLE_TOL = 1e-3


class ChartError(ValueError):
    """Malformed chart description."""


class DomainViolation(ArithmeticError):
    """The point is outside the chart's domain (pole, F <= 0, singular metric, ...)."""


def _expr(x) -> Expr:
    if isinstance(x, (Num, Var, BinOp)) or hasattr(x, "span"):
        return x
    if isinstance(x, (int, float)):
        return Num(float(x)) if x >= 0 else parse(repr(float(x)))
    return parse(str(x))


@dataclass(frozen=True)
class WarpedSpec:
    base_coordinates: tuple
    base_metric: tuple  # 2x2 ASTs
    warping: Expr
    fiber_dim: int
    fiber_scalar_curvature: float
    fiber_signature: tuple
    fiber_coordinates: tuple

    @property
    def sphere_fiber(self) -> bool:
        """Whether the explicit fiber chart is a round 2-sphere in (theta, phi)."""
        return (self.fiber_dim == 2 and self.fiber_scalar_curvature > 0
                and all(s > 0 for s in self.fiber_signature))


@dataclass(frozen=True)
class MetricChart:
    coordinates: tuple
    params: tuple = ()  # sorted (name, value) pairs
    metric: tuple | None = None  # n x n ASTs, full-matrix mode
    warped: WarpedSpec | None = None
    signature: tuple | None = None
    source: Mapping | None = field(default=None, compare=False)

    @property
    def n(self) -> int:
        return len(self.coordinates)

    @property
    def param_dict(self) -> dict:
        return dict(self.params)

    @property
    def is_warped(self) -> bool:
        return self.warped is not None

    def with_params(self, **updates) -> "MetricChart":
        p = self.param_dict
        unknown = set(updates) - set(p)
        if unknown:
            raise ChartError(f"unknown parameter(s) {sorted(unknown)}")
        p.update({k: float(v) for k, v in updates.items()})
        return replace(self, params=tuple(sorted(p.items())))


def _check_params(params: Mapping) -> tuple:
    out = []
    for k, v in params.items():
        try:
            out.append((str(k), float(v)))
        except (TypeError, ValueError):
            raise ChartError(f"parameter {k!r} must be a number, got {v!r}") from None
    return tuple(sorted(out))


def full_chart(coordinates: Sequence[str], metric, params: Mapping | None = None,
               signature=None, source=None) -> MetricChart:
    coords = tuple(coordinates)
    n = len(coords)
    if n < 1 or n > tc.MAX_DIM:
        raise ChartError(f"dimension must be in 1..{tc.MAX_DIM}")
    if len(metric) != n or any(len(row) != n for row in metric):
        raise ChartError(f"metric grid must be {n}x{n}")
    grid = tuple(tuple(_expr(x) for x in row) for row in metric)
    for i in range(n):
        for j in range(i + 1, n):
            if grid[i][j] != grid[j][i]:
                raise ChartError(f"metric not symmetric as given: g[{i}][{j}] != g[{j}][{i}]")
    params = _check_params(params or {})
    check_bindings([x for row in grid for x in row], coords, [p for p, _ in params])
    return MetricChart(coords, params, metric=grid, signature=tuple(signature) if signature else None,
                       source=source)


def warped_chart(base_coordinates: Sequence[str], base_metric, warping, fiber_dim: int,
                 fiber_scalar_curvature: float, params: Mapping | None = None,
                 fiber_signature=None, fiber_coordinates=None, source=None) -> MetricChart:
    base = tuple(base_coordinates)
    if len(base) != 2:
        raise ChartError("warped mode needs exactly two base coordinates")
    fiber_dim = int(fiber_dim)
    if fiber_dim < 2 or fiber_dim + 2 > tc.MAX_DIM:
        raise ChartError(f"fiber dimension must be in 2..{tc.MAX_DIM - 2}")
    if len(base_metric) != 2 or any(len(r) != 2 for r in base_metric):
        raise ChartError("base metric must be 2x2")
    bm = tuple(tuple(_expr(x) for x in row) for row in base_metric)
    if bm[0][1] != bm[1][0]:
        raise ChartError("base metric not symmetric as given")
    fsig = tuple(int(s) for s in (fiber_signature or [1] * fiber_dim))
    if len(fsig) != fiber_dim or any(s not in (1, -1) for s in fsig):
        raise ChartError("fiber_signature must list fiber_dim signs +-1")
    ktil = float(fiber_scalar_curvature)
    spec = WarpedSpec(base, bm, _expr(warping), fiber_dim, ktil, fsig, ())
    if fiber_coordinates is None:
        fiber_coordinates = ("theta", "phi") if spec.sphere_fiber else tuple(
            f"y{i + 1}" for i in range(fiber_dim))
    fiber_coordinates = tuple(fiber_coordinates)
    if len(fiber_coordinates) != fiber_dim:
        raise ChartError("need one name per fiber coordinate")
    spec = replace(spec, fiber_coordinates=fiber_coordinates)
    params = _check_params(params or {})
    coords = base + fiber_coordinates
    check_bindings([x for row in bm for x in row] + [spec.warping], base,
                   [p for p, _ in params])
    if set(fiber_coordinates) & set(base) or set(fiber_coordinates) & set(dict(params)):
        raise ChartError("fiber coordinate names collide with base coordinates or parameters")
    return MetricChart(coords, params, warped=spec, source=source)


# --------------------------------------------------------------------------
# explicit fiber

def _fiber_metric_exprs(spec: WarpedSpec):
    """n-2 x n-2 ASTs of a constant-curvature fiber chart."""
    d = spec.fiber_dim
    K = spec.fiber_scalar_curvature / (d * (d - 1))
    zero = Num(0.0)
    if spec.sphere_fiber:
        a2 = 1.0 / K
        th = spec.fiber_coordinates[0]
        g = [[parse(repr(a2)), zero], [zero, parse(f"{a2!r}*sin({th})^2")]]
        return g
    ys = spec.fiber_coordinates
    quad = " + ".join(f"{'-' if s < 0 else ''}{y}^2" for y, s in zip(ys, spec.fiber_signature))
    conf = f"(1 + {K / 4!r}*({quad}))^2" if K >= 0 else f"(1 - {-K / 4!r}*({quad}))^2"
    g = [[zero] * d for _ in range(d)]
    for i, s in enumerate(spec.fiber_signature):
        g[i][i] = parse(f"{'-' if s < 0 else ''}1/{conf}")
    return g


def _expanded(chart: MetricChart) -> MetricChart:
    """Full-matrix chart of a warped product with the fiber instantiated explicitly."""
    spec = chart.warped
    n = chart.n
    fib = _fiber_metric_exprs(spec)
    zero = Num(0.0)
    grid = [[zero] * n for _ in range(n)]
    for a in range(2):
        for b in range(2):
            grid[a][b] = spec.base_metric[a][b]
    for i in range(spec.fiber_dim):
        for j in range(spec.fiber_dim):
            e = fib[i][j]
            if not (isinstance(e, Num) and e.value == 0.0):
                grid[2 + i][2 + j] = BinOp("*", spec.warping, e)
    return MetricChart(chart.coordinates, chart.params, metric=tuple(tuple(r) for r in grid))


def point_vector(chart: MetricChart, point) -> np.ndarray:
    """Coordinate vector from a mapping or a sequence; fiber coordinates default to the equator."""
    if isinstance(point, Mapping):
        vals = []
        for i, name in enumerate(chart.coordinates):
            if name in point:
                vals.append(float(point[name]))
            elif chart.is_warped and i >= 2:
                sphere = chart.warped.sphere_fiber
                vals.append(math.pi / 2 if (sphere and i == 2) else 0.0)
            else:
                raise DomainViolation(f"missing value for coordinate {name!r}")
        extra = set(point) - set(chart.coordinates)
        if extra:
            raise ChartError(f"unknown coordinate(s) in point: {sorted(extra)}")
        x = np.array(vals)
    else:
        x = np.asarray(point, dtype=float)
        if chart.is_warped and x.shape == (2,):
            tail = [math.pi / 2, 0.0] if chart.warped.sphere_fiber else [0.0] * chart.warped.fiber_dim
            x = np.concatenate([x, tail])
        if x.shape != (chart.n,):
            raise ChartError(f"point must have {chart.n} coordinates")
    if chart.is_warped and chart.warped.sphere_fiber and abs(math.sin(x[2])) < POLE_TOL:
        raise DomainViolation("fiber point too close to a pole of the (theta, phi) chart")
    return x


# --------------------------------------------------------------------------
# generic pipeline

def metric_jets(chart: MetricChart, point) -> JetMatrix:
    x = point_vector(chart, point)
    full = _expanded(chart) if chart.is_warped else chart
    try:
        return jet_matrix(full.metric, x, full.coordinates, chart.param_dict)
    except EvalError as exc:
        raise DomainViolation(str(exc)) from exc


def _connection(J: JetMatrix):
    try:
        Ji = invert(J)
    except SingularMetricError as exc:
        raise DomainViolation(str(exc)) from exc
    dg, ddg = J.grad, J.hess
    # dg[a, b, k] = d_k g_ab ; low[s, i, j] = (d_i g_js + d_j g_is - d_s g_ij) / 2
    low = 0.5 * (np.einsum("jsi->sij", dg) + np.einsum("isj->sij", dg) - np.einsum("ijs->sij", dg))
    Gamma = np.einsum("hs,sij->hij", Ji.value, low)
    dlow = 0.5 * (np.einsum("jsik->sijk", ddg) + np.einsum("isjk->sijk", ddg)
                  - np.einsum("ijsk->sijk", ddg))
    dGamma = np.einsum("hsk,sij->hijk", Ji.grad, low) + np.einsum("hs,sijk->hijk", Ji.value, dlow)
    return Ji, Gamma, dGamma


def riemann_from_jets(J: JetMatrix):
    """(PointFrame, Gamma, R) from the metric jets."""
    Ji, Gamma, dGamma = _connection(J)
    Rup = (dGamma - np.einsum("sikj->sijk", dGamma)
           + np.einsum("rij,srk->sijk", Gamma, Gamma) - np.einsum("rik,srj->sijk", Gamma, Gamma))
    R = np.einsum("hs,sijk->hijk", J.value, Rup)
    g = 0.5 * (J.value + J.value.T)
    eig = np.linalg.eigvalsh(g)
    frame = tc.PointFrame(g, 0.5 * (Ji.value + Ji.value.T), tuple(sorted(int(np.sign(e)) for e in eig)))
    return frame, Gamma, R


def christoffel(chart: MetricChart, point) -> np.ndarray:
    """Gamma[h, i, j] = Gamma^h_ij."""
    _, Gamma, _ = _connection(metric_jets(chart, point))
    return Gamma


@dataclass(frozen=True)
class CurvaturePack:
    frame: tc.PointFrame
    R: np.ndarray
    S: np.ndarray
    S2: np.ndarray
    kappa: float
    trS2: float
    C: np.ndarray | None
    E: np.ndarray | None
    G: np.ndarray
    Gamma: np.ndarray | None = None
    source: str = "generic"

    @property
    def n(self) -> int:
        return self.frame.n


def pack_from_riemann(frame: tc.PointFrame, R, Gamma=None, S=None, kappa=None, C=None, E=None,
                      source: str = "generic") -> CurvaturePack:
    """Assemble a pack; missing Ricci/Weyl/E data is derived from R."""
    R = np.asarray(R, float)
    S = tc.ricci(R, frame) if S is None else np.asarray(S, float)
    kappa = tc.trace(S, frame) if kappa is None else float(kappa)
    S2 = tc.square(S, frame)
    n = frame.n
    if n >= 4:
        C = tc.weyl(R, frame) if C is None else C
        E = tc.e_tensor(S, frame) if E is None else E
    return CurvaturePack(frame, R, S, S2, kappa, tc.trace(S2, frame), C, E, tc.gtensor(frame),
                         Gamma, source)


def curvature_pack(chart: MetricChart, point, symmetry_tol: float = 1e-6) -> CurvaturePack:
    frame, Gamma, R = riemann_from_jets(metric_jets(chart, point))
    nR = tc.norm(R)
    err = tc.curvature_symmetry_error(R) * nR / max(1.0, nR)
    if err > symmetry_tol:
        raise DomainViolation(f"Riemann tensor fails its symmetries (error {err:.2e}); numerical blow-up")
    return pack_from_riemann(frame, R, Gamma)


# --------------------------------------------------------------------------
# warped products

@dataclass(frozen=True)
class WarpedInvariants:
    tau1: float
    rho: float
    phi: float
    DeltaF: float
    Delta1F: float
    trT: float
    T: np.ndarray
    F: float
    kappa_bar: float
    kappa_tilde: float


def _embed(M, n, offset):
    out = np.zeros((n, n))
    k = M.shape[0]
    out[offset:offset + k, offset:offset + k] = M
    return out


def warped_components(chart: MetricChart, point):
    """Block-formula CurvaturePack and the invariants tau1, rho, phi."""
    if not chart.is_warped:
        raise ChartError("warped_components needs a warped-mode chart")
    spec = chart.warped
    x = point_vector(chart, point)
    n = chart.n
    params = chart.param_dict
    xb = x[:2]
    try:
        Jb = jet_matrix(spec.base_metric, xb, spec.base_coordinates, params)
        Fj = eval_jet(spec.warping, xb, spec.base_coordinates, params)
        fib_exprs = _fiber_metric_exprs(spec)
        fb = dict(zip(spec.fiber_coordinates, x[2:]))
        gt = np.array([[evaluate(e, fb) for e in row] for row in fib_exprs])
    except EvalError as exc:
        raise DomainViolation(str(exc)) from exc
    F = Fj.value
    if not F > 0:
        raise DomainViolation(f"warping function F = {F!r} is not positive")

    bframe, bGamma, Rbar = riemann_from_jets(Jb)
    Sbar = tc.ricci(Rbar, bframe)
    kbar = tc.trace(Sbar, bframe)
    dF = Fj.grad
    hessF = Fj.hess - np.einsum("cab,c->ab", bGamma, dF)
    hessF = 0.5 * (hessF + hessF.T)
    T = hessF - np.outer(dF, dF) / (2 * F)
    DeltaF = tc.trace(hessF, bframe)
    Delta1F = float(dF @ bframe.g_inv @ dF)
    trT = DeltaF - Delta1F / (2 * F)
    ktil = spec.fiber_scalar_curvature

    gbar_full = _embed(bframe.g, n, 0)
    gt_full = _embed(gt, n, 2)
    gfib = F * gt_full
    g = gbar_full + gfib
    frame = tc.frame_from_metric(g)
    T_full = _embed(T, n, 0)

    Rbar_full = np.zeros((n,) * 4)
    Rbar_full[:2, :2, :2, :2] = Rbar
    Gt = 0.5 * tc.kn(gt_full, gt_full)
    Rtilde = ktil / ((n - 2) * (n - 3)) * Gt
    R = Rbar_full - 0.5 * tc.kn(T_full, gt_full) + F * Rtilde - 0.25 * Delta1F * Gt

    S = (_embed(Sbar - (n - 2) / (2 * F) * T, n, 0)
         + (ktil / (n - 2) - 0.5 * (trT + (n - 3) * Delta1F / (2 * F))) * gt_full)
    kappa = kbar + ktil / F - (n - 2) / F * (DeltaF + (n - 5) * Delta1F / (4 * F))
    tau1 = ktil / ((n - 2) * F) - DeltaF / (2 * F) - (n - 4) * Delta1F / (4 * F * F)
    rho = 2 * (n - 3) / (n - 1) * (kbar / 2 + ktil / ((n - 3) * (n - 2) * F)
                                   + (DeltaF - Delta1F / F) / (2 * F))
    S2 = tc.square(S, frame)
    trS2 = tc.trace(S2, frame)
    phi = n * tau1 ** 2 - 2 * kappa * tau1 + (kappa ** 2 - trS2) / (n - 1)

    Gb = 0.5 * tc.kn(gbar_full, gbar_full)
    Gf = 0.5 * tc.kn(gfib, gfib)
    mixed = tc.kn(gbar_full, gfib)
    C = rho / 2 * Gb - rho / (2 * (n - 2)) * mixed + rho / ((n - 3) * (n - 2)) * Gf
    E = (n - 3) * (n - 2) * phi / 2 * Gb - (n - 3) * phi / 2 * mixed + phi * Gf

    pack = CurvaturePack(frame, R, S, S2, kappa, trS2, C, E, tc.gtensor(frame), None, "warped")
    inv = WarpedInvariants(tau1, rho, phi, DeltaF, Delta1F, trT, T, F, kbar, ktil)
    return pack, inv


# --------------------------------------------------------------------------
# hypersurfaces

def gauss_pack(H, frame: tc.PointFrame, eps: int = 1, ambient_kappa: float = 0.0,
               conformally_flat: bool = True) -> CurvaturePack:
    """Hypersurface of a space form with second fundamental form H.

    R = (eps/2) H^H + (k~/(2n(n+1))) g^g; S and kappa from the traced Gauss
    equation; for a conformally flat ambient C is taken from the closed form
    C = (eps/(n-2)) (g^(H^2 - tr H H) + ((n-2)/2) H^H) + (mu/2) g^g.
    """
    H = np.asarray(H, float)
    n = frame.n
    g = frame.g
    ka = float(ambient_kappa)
    R = 0.5 * eps * tc.kn(H, H) + ka / (2 * n * (n + 1)) * tc.kn(g, g)
    H2 = tc.square(H, frame)
    trH, trH2 = tc.trace(H, frame), tc.trace(H2, frame)
    S = eps * (trH * H - H2) + (n - 1) * ka / (n * (n + 1)) * g
    kappa = eps * (trH ** 2 - trH2) + (n - 1) * ka / (n + 1)
    C = None
    if n >= 4 and conformally_flat:
        mu = eps * (trH ** 2 - trH2) / ((n - 2) * (n - 1))
        C = (eps / (n - 2) * (tc.kn(g, H2 - trH * H) + 0.5 * (n - 2) * tc.kn(H, H))
             + 0.5 * mu * tc.kn(g, g))
    return pack_from_riemann(frame, R, S=S, kappa=kappa, C=C, source="gauss")
