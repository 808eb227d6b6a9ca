"""Built-in metric families with closed-form invariant oracles, and tensor fixtures.

Each family is a :class:`FamilySpec`: named numeric parameters with ranges,
named free functions of the base coordinates (given as expression text, so a
user may swap them), a chart builder and an ordered list of oracle formulas.
Oracles are expression-language text evaluated with these bindings:

* the numeric parameters, ``n`` (dimension) and ``kt`` (fiber scalar curvature);
* the base coordinate values;
* every free function ``f`` together with its derivatives ``f_r``, ``f_rr``,
  ``f_t``, ``f_tt``, ``f_tr`` (suffixes follow the base coordinate names),
  taken from second-order jets;
* the values of earlier oracles in the same list.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Callable, Mapping

import numpy as np
import scipy.optimize

from . import tensors as tc
from .curvature import MetricChart, full_chart, gauss_pack, warped_chart
from .expr_dsl import EvalError, evaluate, parse
from .jets import eval_jet

__all__ = [
    "ParamSpec", "FamilySpec", "Family", "CatalogError", "FAMILIES", "PARITY", "family_ids", "get_family",
    "build", "fixture_block_weyl", "fixture_hypersurface", "fixture_rank_two", "fixture_roter",
    "fixture_prop27", "fixture_cor23",
]


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class ParamSpec:
    default: float
    lo: float = -math.inf
    hi: float = math.inf
    integer: bool = False
    doc: str = ""

    def check(self, name: str, value: float) -> float:
        v = float(value)
        if not math.isfinite(v):
            raise CatalogError(f"parameter {name} must be finite")
        if self.integer and not v.is_integer():
            raise CatalogError(f"parameter {name} must be an integer, got {value!r}")
        if not (self.lo <= v <= self.hi):
            raise CatalogError(f"parameter {name}={v!r} outside its range [{self.lo}, {self.hi}]")
        return v


@dataclass(frozen=True)
class FamilySpec:
    id: str
    description: str
    base_coordinates: tuple
    params: Mapping[str, ParamSpec]
    functions: Mapping[str, str]
    builder: Callable[[dict, dict], MetricChart]
    oracles: tuple = ()  # (name, formula text) in evaluation order
    positive: tuple = ()  # expressions in the radial coordinate that must stay > 0
    fixed: Callable[[dict], dict] = field(default=lambda p: {})  # n, kt from params
    default_point: Mapping = field(default_factory=dict)
    sample_box: Mapping = field(default_factory=dict)  # non-radial base coordinate ranges
    radial: str | None = "r"
    constraint: Callable[[dict], None] | None = None
    curvature_sign: int = 1  # the oracles are stated for curvature_sign * R


# Behaviour of oracle quantities under R -> -R (S, kappa, C, rho flip; E, phi,
# and the derivation actions of a tensor on itself do not).  Quantities absent
# here (N, D) are only meaningful through their quotient.
PARITY = {
    "kappa": -1, "tau1": -1, "rho": -1, "phi": 1, "S_rr": -1, "L_R": -1,
    "alpha1": -1, "alpha2": -1, "E_over_C": -1, "E_over_C_corrected": -1,
}


# --------------------------------------------------------------------------
# oracle text

_EX63 = (
    ("kappa", "-(r^2*h_rr + 2*(n-2)*r*h_r + (n-2)*(n-3)*h - kt)/r^2"),
    ("tau1", "-(r*h_r + (n-3)*h - kt/(n-2))/r^2"),
    ("rho", "-(n-3)/(n-1)/r^2*(r^2*h_rr - 2*r*h_r + 2*h - 2*kt/((n-3)*(n-2)))"),
    ("phi", "(r^2*h_rr + (n-4)*r*h_r - 2*(n-3)*h + 2*kt/(n-2))^2/(2*(n-1)*r^4)"),
    ("L_R", "-h_r/(2*r)"),
)

_SSSS = (
    ("phi", "((h^3*(r^2*h_rr - 2*h + 2) + r^2*(h*h_tt - 2*h_t^2))^2 + 4*r^2*h^4*h_t^2)"
            "/(6*r^4*h^6)"),
    ("rho", "(r^2*h_rr - 2*r*h_r + 2*h - 2 + r^2/h^2*h_tt - 2*r^2/h^3*h_t^2)/(3*r^2)"),
    ("E_over_C", "2*phi/rho"),
)

_MM = (
    ("N", "2*(2*(1/f2^2 + 1/f1^2*b_rr/b)*f1_r/f1*b_r/b"
          " - 2/f1^2*f2_r/f2*f2_rr/f2*(f1_r/f1 + b_r/b)"
          " - (f1^2/f2^4 + 1/f1^2*(f2_rr/f2)^2 - 2/f1^2*(f2_r/f2)^4)"
          " + (f2_r/f2)^2*(2/f2^2 + 1/f1^2*(f1_r/f1)^2 + 2/f1^2*b_rr/b + 2/f1^2*(b_r/b)^2)"
          " - 2/f2^2*b_rr/b - 1/f1^2*(b_rr/b)^2 - 1/f1^2*(f1_r/f1)^2*b_r/b)"),
    ("D", "(f1_r/f1 + f2_r/f2 - b_r/b)*b_r/b - (b_rr/b - (b_r/b)^2) - f1_r/f1*f2_r/f2"
          " + (f2_rr/f2 - (f2_r/f2)^2) + (f1/f2)^2"),
    ("E_over_C", "N/D"),
    # N with the coefficient errors of the published text repaired
    ("N_corrected", "2*(2*(1/f2^2 + 1/f1^2*b_rr/b)*f1_r/f1*b_r/b"
                    " - 2/f1^2*f2_r/f2*f2_rr/f2*(f1_r/f1 + b_r/b)"
                    " - (f1^2/f2^4 - 1/f1^2*(f2_rr/f2)^2 + 1/f1^2*(f2_r/f2)^4)"
                    " + (f2_r/f2)^2*(2/f2^2 + 1/f1^2*(f1_r/f1)^2 + 2/f1^2*b_rr/b + 1/f1^2*(b_r/b)^2)"
                    " - 2/f2^2*b_rr/b - 1/f1^2*(b_rr/b)^2 - 1/f1^2*(f1_r/f1)^2*(b_r/b)^2)"),
    ("E_over_C_corrected", "N_corrected/D"),
)

_BPSI = (
    ("N", "r^4*(B^2*psi_r^4 + 4*B^2*psi_rr^2 + 6*B*B_r*psi_r^3 + 4*B_rr^2)"
          " - 16*r^2*(B - 1)*B_rr"
          " + r^2*((12*r^2*B_r*B_rr - 24*(B - 1)*B_r)*psi_r"
          " + (4*r^2*B*B_rr + 9*r^2*B_r^2 - 12*B^2 + 8*B)*psi_r^2)"
          " + r^2*B*(4*r^2*psi_r^2*B + 12*r^2*psi_r*B_r + 8*r^2*B_rr - 16*(B - 1))*psi_rr"
          " + 16*(B - 1)^2"),
    ("D", "2*r^2*((2*psi_rr + psi_r^2)*r^2*B + r*psi_r*(3*r*B_r - 2*B)"
          " + 2*r^2*B_rr - 4*r*B_r + 4*B - 4)"),
    ("E_over_C", "N/D"),
)

_MT = (
    ("N", "r*b_r*(2*b - r*b_r) + 4*r^2*(b - r*b_r)*psi_r"
          " + 4*r^4*(r - b)^2*(psi_r^4 + psi_rr^2)"
          " + 4*r^3*(r - b)*(b - r*b_r)*psi_r^3"
          " + 4*r^2*(r - b)*(2*b + 2*r^2*(r - b)*psi_r^2 + (r*b - r^2*b_r)*psi_r)*psi_rr"
          " + r^2*((r*b_r - b)^2 - 4*(r - b)^2 + 2*(r^2 - 4*b^2))*psi_r^2 + 3*b^2"),
    ("D", "r^3*(r*b_r - 3*b + 2*r^2*(r - b)*(psi_r + psi_rr) - r*(r*b_r + 2*r - 3*b)*psi_r)"),
    ("E_over_C", "N/D"),
    # repaired: the psi_r^2 bracket and psi_r^2 (not psi_r) beside psi_rr in D
    ("N_corrected", "r*b_r*(2*b - r*b_r) + 4*r^2*(b - r*b_r)*psi_r"
                    " + 4*r^4*(r - b)^2*(psi_r^4 + psi_rr^2)"
                    " + 4*r^3*(r - b)*(b - r*b_r)*psi_r^3"
                    " + 4*r^2*(r - b)*(2*b + 2*r^2*(r - b)*psi_r^2 + (r*b - r^2*b_r)*psi_r)*psi_rr"
                    " + r^2*((r*b_r - b)^2 - 4*(r - b)*(r - 3*b))*psi_r^2 + 3*b^2"),
    ("D_corrected", "r^3*(r*b_r - 3*b + 2*r^2*(r - b)*(psi_r^2 + psi_rr)"
                    " - r*(r*b_r + 2*r - 3*b)*psi_r)"),
    ("E_over_C_corrected", "N_corrected/D_corrected"),
)

_JNW = (
    ("S_rr", "b^2*(s^2 - 1)/(2*r^2*(r - b)^2)"),
    ("kappa", "b^2*(s^2 - 1)/(2*r^4)*(1 - b/r)^(s - 2)"),
    ("alpha1", "-b*s*(b*s + b - 2*r)/(4*r^4)*(1 - b/r)^(s - 2)"),
    ("alpha2", "b*(b + 2*b*s^2 + 3*b*s - 6*r*s)/(12*r^4)*(1 - b/r)^(s - 2)"),
)

_SPHERE_PRODUCT = (
    ("kappa", "2*k + 2"),
    ("tau1", "1"),
    ("rho", "2*(k + 1)/3"),
)


# --------------------------------------------------------------------------
# chart builders

def _sub(template: str, functions: Mapping[str, str]) -> str:
    return template.format(**{k: f"({v})" for k, v in functions.items()})


def _static(base, warping="r^2", fiber_dim=2, kt=2.0):
    def build(params, functions):
        bm = [[_sub(x, functions) for x in row] for row in base]
        fd = int(params.get("fiber_dim", fiber_dim))
        k = float(params.get("kt", kt))
        return warped_chart(("t", "r"), bm, _sub(warping, functions), fd, k, params)
    return build


def _ef(params, functions):
    bm = [[_sub("-{h}", functions), "1"], ["1", "0"]]
    rest = dict(params)
    return warped_chart(("v", "r"), bm, "r^2", 2, 2.0, rest)


def _minkowski(params, functions):
    return full_chart(("t", "x", "y", "z"), [["-1", "0", "0", "0"], ["0", "1", "0", "0"],
                                             ["0", "0", "1", "0"], ["0", "0", "0", "1"]], params)


def _sphere_product(params, functions):
    conf = "1/(1 + k/4*(x^2 + y^2))^2"
    return warped_chart(("x", "y"), [[conf, "0"], ["0", conf]], "1", 2, 2.0, params)


def _n4(p):
    return {"n": 4.0, "kt": 2.0}


def _nk(p):
    return {"n": 2.0 + p.get("fiber_dim", 2.0), "kt": p.get("kt", 2.0)}


def _jnw_check(p):
    if p["b"] <= 0:
        raise CatalogError("jnw needs b > 0")


FAMILIES: Mapping[str, FamilySpec] = MappingProxyType({f.id: f for f in [
    FamilySpec(
        "example63", "static warped product -h dt^2 + dr^2/h + r^2 g~, fiber of dimension n-2",
        ("t", "r"),
        {"m": ParamSpec(1.0, doc="mass-like constant in the default h"),
         "q": ParamSpec(0.5, doc="charge-like constant in the default h"),
         "kt": ParamSpec(2.0, doc="fiber scalar curvature"),
         "fiber_dim": ParamSpec(2.0, 2.0, 6.0, integer=True)},
        {"h": "kt/((fiber_dim - 1)*fiber_dim) - 2*m/r + q^2/r^2"},
        _static([["-{h}", "0"], ["0", "1/{h}"]]), _EX63, ("h",), _nk,
        {"t": 0.0, "r": 3.0}),
    FamilySpec(
        "schwarzschild", "Schwarzschild spacetime, h = 1 - 2m/r",
        ("t", "r"), {"m": ParamSpec(1.0, 0.0)}, {"h": "1 - 2*m/r"},
        _static([["-{h}", "0"], ["0", "1/{h}"]]), _EX63, ("h",), _n4, {"t": 0.0, "r": 3.0}),
    FamilySpec(
        "schwarzschild_ef", "Schwarzschild in ingoing Eddington-Finkelstein form -h dv^2 + 2 dv dr",
        ("v", "r"), {"m": ParamSpec(1.0, 0.0)}, {"h": "1 - 2*m/r"},
        _ef, _EX63, (), _n4, {"v": 0.0, "r": 2.0}),
    FamilySpec(
        "reissner_nordstrom", "Reissner-Nordstrom spacetime, h = 1 - 2m/r + q^2/r^2",
        ("t", "r"), {"m": ParamSpec(1.0, 0.0), "q": ParamSpec(1.0)},
        {"h": "1 - 2*m/r + q^2/r^2"},
        _static([["-{h}", "0"], ["0", "1/{h}"]]), _EX63, ("h",), _n4, {"t": 0.0, "r": 2.0}),
    FamilySpec(
        "reissner_nordstrom_ef", "Reissner-Nordstrom in ingoing Eddington-Finkelstein form",
        ("v", "r"), {"m": ParamSpec(1.0, 0.0), "q": ParamSpec(1.0)},
        {"h": "1 - 2*m/r + q^2/r^2"},
        _ef, _EX63, (), _n4, {"v": 0.0, "r": 2.0}),
    FamilySpec(
        "ssss_time_dependent", "-h(t,r) dt^2 + dr^2/h(t,r) + r^2 dOmega^2",
        ("t", "r"), {"m": ParamSpec(1.0, 0.0), "eps": ParamSpec(0.2)},
        {"h": "1 - 2*m/r + eps*sin(t)*r/(1 + r)"},
        _static([["-{h}", "0"], ["0", "1/{h}"]]), _SSSS, ("h",), _n4,
        {"t": 0.7, "r": 4.0}, {"t": (0.2, 1.4)}, curvature_sign=-1),
    FamilySpec(
        "mm_family", "-b(r)^2 dt^2 + f1(r)^2 dr^2 + f2(r)^2 dOmega^2",
        ("t", "r"), {"a": ParamSpec(0.5), "c": ParamSpec(0.3), "d": ParamSpec(0.2)},
        {"b": "1 + a/r", "f1": "1 + c/r^2", "f2": "r*(1 + d/r)"},
        _static([["-{b}^2", "0"], ["0", "{f1}^2"]], "{f2}^2"), _MM, ("b", "f1", "f2"), _n4,
        {"t": 0.0, "r": 3.0}, curvature_sign=-1),
    FamilySpec(
        "bpsi_family", "-B(r) exp(psi(r)) dt^2 + dr^2/B(r) + r^2 dOmega^2",
        ("t", "r"), {"m": ParamSpec(1.0), "a": ParamSpec(0.4)},
        {"B": "1 - 2*m/r + m^2/(2*r^2)", "psi": "a/r"},
        _static([["-{B}*exp({psi})", "0"], ["0", "1/{B}"]]), _BPSI, ("B",), _n4,
        {"t": 0.0, "r": 4.0}, curvature_sign=-1),
    FamilySpec(
        "morris_thorne", "-exp(2 psi(r)) dt^2 + dr^2/(1 - b(r)/r) + r^2 dOmega^2",
        ("t", "r"), {"b0": ParamSpec(1.0, 0.0), "a": ParamSpec(0.3)},
        {"b": "b0^2/r", "psi": "a/r"},
        _static([["-exp(2*{psi})", "0"], ["0", "1/(1 - {b}/r)"]]), _MT, ("1 - {b}/r",), _n4,
        {"t": 0.0, "r": 2.5}, curvature_sign=-1),
    FamilySpec(
        "jnw", "-(1 - b/r)^s dt^2 + (1 - b/r)^(-s) dr^2 + r^2 (1 - b/r)^(1-s) dOmega^2",
        ("t", "r"), {"b": ParamSpec(1.0, 0.0), "s": ParamSpec(0.5, 0.0)},
        {},
        _static([["-(1 - b/r)^s", "0"], ["0", "(1 - b/r)^(-s)"]], "r^2*(1 - b/r)^(1 - s)"),
        _JNW, ("1 - b/r",), _n4, {"t": 0.0, "r": 2.0}, constraint=_jnw_check,
        curvature_sign=-1),
    FamilySpec(
        "minkowski", "flat space-time in Cartesian coordinates", ("t", "x"), {}, {},
        _minkowski, (), (), _n4, {"t": 0.0, "x": 0.0, "y": 0.0, "z": 0.0}, radial=None),
    FamilySpec(
        "unit_sphere_product", "2-dimensional space form of curvature k times the unit 2-sphere",
        ("x", "y"), {"k": ParamSpec(-1.0)}, {},
        _sphere_product, _SPHERE_PRODUCT, (), _n4, {"x": 0.1, "y": 0.2},
        {"x": (-0.5, 0.5), "y": (-0.5, 0.5)}, radial=None),
]})


def family_ids() -> list[str]:
    return sorted(FAMILIES)


def get_family(fid: str) -> FamilySpec:
    try:
        return FAMILIES[fid]
    except KeyError:
        raise CatalogError(f"unknown family {fid!r}; known: {', '.join(family_ids())}") from None


# --------------------------------------------------------------------------
# built families

@dataclass(frozen=True)
class Family:
    spec: FamilySpec
    params: Mapping[str, float]
    functions: Mapping[str, str]
    chart: MetricChart

    @property
    def id(self) -> str:
        return self.spec.id

    def _positive_exprs(self):
        return [parse(_sub("{" + e + "}" if e in self.functions else e, self.functions))
                for e in self.spec.positive]

    def oracle_bindings(self, point: Mapping) -> dict:
        spec = self.spec
        bind = dict(self.params)
        bind.update(spec.fixed(dict(self.params)))
        base = spec.base_coordinates
        x = [float(point.get(c, self.spec.default_point.get(c, 0.0))) for c in base]
        bind.update(dict(zip(base, x)))
        for name, src in self.functions.items():
            env = dict(self.params)
            jet = eval_jet(parse(src), x, base, env)
            bind[name] = jet.value
            for i, a in enumerate(base):
                bind[f"{name}_{a}"] = float(jet.grad[i])
                for j, b in enumerate(base):
                    bind[f"{name}_{a}{b}"] = float(jet.hess[i, j])
        return bind

    def oracles(self, point: Mapping | None = None, native: bool = False) -> dict:
        """Values of the family's closed-form oracles at a base point.

        With ``native=True`` the values are converted to this library's
        curvature sign using :data:`PARITY`; quantities without a known
        parity are dropped from the converted result.
        """
        point = dict(self.spec.default_point if point is None else point)
        bind = self.oracle_bindings(point)
        out = {}
        for name, src in self.spec.oracles:
            try:
                out[name] = float(evaluate(parse(src), bind))
            except EvalError as exc:
                raise CatalogError(f"oracle {name!r} failed at {point}: {exc}") from exc
            bind[name] = out[name]
        if native and self.spec.curvature_sign != 1:
            return {k: v * PARITY[k] for k, v in out.items() if k in PARITY}
        return out

    def in_domain(self, point: Mapping) -> bool:
        base = self.spec.base_coordinates
        env = dict(self.params)
        env.update({c: float(point.get(c, 0.0)) for c in base})
        try:
            return all(float(evaluate(e, env)) > 0 for e in self._positive_exprs())
        except EvalError:
            return False

    def radial_interval(self, margin: float = 0.1, r_max: float = 50.0) -> tuple[float, float]:
        """Sampling interval for r: beyond the largest zero of every positivity function."""
        exprs = self._positive_exprs()
        t0 = {c: float(v) for c, v in self.spec.default_point.items()}
        lo = 0.0
        for e in exprs:
            def f(r):
                env = dict(self.params)
                env.update(t0)
                env["r"] = r
                try:
                    return float(evaluate(e, env))
                except EvalError:
                    return math.nan
            grid = np.geomspace(1e-3, r_max, 2000)
            vals = np.array([f(r) for r in grid])
            root = 0.0
            for i in range(len(grid) - 1, 0, -1):
                a, b = vals[i - 1], vals[i]
                if not np.isfinite(a) or a <= 0 < b:
                    if np.isfinite(a) and a * b < 0:
                        root = scipy.optimize.brentq(f, grid[i - 1], grid[i])
                    else:
                        root = grid[i]
                    break
            lo = max(lo, root)
        lo = lo * (1 + margin) if lo > 0 else 0.5
        return lo, max(4 * lo, lo + 6.0)

    def sample_points(self, k: int, rng: np.random.Generator) -> list[dict]:
        """Random in-domain base points (fiber coordinates left at their defaults)."""
        pts = []
        spec = self.spec
        if spec.radial is not None:
            lo, hi = self.radial_interval()
        tries = 0
        while len(pts) < k:
            tries += 1
            if tries > 200 * k:
                raise CatalogError(f"could not find {k} in-domain sample points for {self.id}")
            p = dict(spec.default_point)
            for c, (a, b) in spec.sample_box.items():
                p[c] = float(rng.uniform(a, b))
            if spec.radial is not None:
                p[spec.radial] = float(rng.uniform(lo, hi))
            if self.in_domain(p):
                pts.append(p)
        return pts


def build(fid: str, params: Mapping | None = None, functions: Mapping | None = None) -> Family:
    """Instantiate a catalog family; unspecified parameters take their defaults."""
    spec = get_family(fid)
    params = dict(params or {})
    unknown = set(params) - set(spec.params)
    if unknown:
        raise CatalogError(f"unknown parameter(s) for {fid}: {sorted(unknown)}")
    vals = {k: ps.check(k, params.get(k, ps.default)) for k, ps in spec.params.items()}
    funcs = dict(spec.functions)
    for k, v in (functions or {}).items():
        if k not in funcs:
            raise CatalogError(f"family {fid} has no free function {k!r}")
        parse(v)
        funcs[k] = str(v)
    if spec.constraint is not None:
        spec.constraint(vals)
    chart = spec.builder(vals, funcs)
    return Family(spec, MappingProxyType(vals), MappingProxyType(funcs), chart)


# --------------------------------------------------------------------------
# tensor fixtures

def fixture_block_weyl(n: int, p: int, tau: float, frame: tc.PointFrame | None = None) -> np.ndarray:
    """Curvature tensor with block-constant Weyl-type components.

    With index blocks a.. in 1..p and alpha.. in p+1..n::

        W_abcd = tau/((p-1)p) (g_ad g_bc - g_ac g_bd)
        W_a alpha beta b = -tau/(p(n-p)) g_ab g_alpha beta
        W_alpha beta gamma delta = tau/((n-p-1)(n-p)) (g_alpha delta g_beta gamma - ...)

    The result is trace free and satisfies W.W = -(tau/(p(n-p))) Q(g, W).
    """
    if not 2 <= p <= n - 2:
        raise ValueError(f"need 2 <= p <= n-2, got p={p}, n={n}")
    if frame is None:
        frame = tc.frame_from_metric(np.eye(n))
    g = frame.g
    if frame.n != n:
        raise tc.DimensionError("frame dimension does not match n")
    if np.any(np.abs(g[:p, p:]) > 1e-14 * max(1.0, np.abs(g).max())):
        raise ValueError("frame metric must be block diagonal in the (p, n-p) split")
    g1 = np.zeros_like(g)
    g2 = np.zeros_like(g)
    g1[:p, :p] = g[:p, :p]
    g2[p:, p:] = g[p:, p:]
    return (tau / ((p - 1) * p) * 0.5 * tc.kn(g1, g1)
            - tau / (p * (n - p)) * tc.kn(g1, g2)
            + tau / ((n - p - 1) * (n - p)) * 0.5 * tc.kn(g2, g2))


def fixture_hypersurface(n: int, rng: np.random.Generator, rank: int | None = None,
                         shift: float = 0.0, eps: int = 1, ambient_kappa: float = 0.0,
                         negatives: int | None = None):
    """Random second fundamental form H = A + shift g with rank(A) as requested; returns (H, pack)."""
    frame = tc.random_frame(n, rng, negatives)
    if rank is None:
        A = tc.random_sym(n, rng)
    elif rank == 2:
        A = tc.random_rank2(n, rng)
    else:
        A = np.zeros((n, n))
        for _ in range(rank):
            u = rng.uniform(-1, 1, n)
            A += (1 if rng.uniform() < 0.5 else -1) * np.outer(u, u)
    H = A + shift * frame.g
    return H, gauss_pack(H, frame, eps, ambient_kappa)


def fixture_rank_two(n: int, rng: np.random.Generator, negatives: int | None = None):
    """Random rank-two construction; returns the :class:`RankTwoConstruction` record."""
    from .pseudosym import section5_psis
    frame = tc.random_frame(n, rng, negatives)
    while True:
        A = tc.random_rank2(n, rng)
        psi3 = float(rng.uniform(-2, 2))
        if abs(psi3) < 0.05:
            continue
        rho = float(rng.uniform(0.1, 2.0))
        eps = 1 if rng.uniform() < 0.5 else -1
        A2 = tc.square(A, frame)
        tr = tc.trace(A, frame)
        # keep A^2 clearly outside span{g, A}
        X = np.stack([frame.g.ravel(), A.ravel()], 1)
        coef, *_ = np.linalg.lstsq(X, A2.ravel(), rcond=None)
        if tc.norm(A2.ravel() - X @ coef) < 1e-3 * max(1.0, tc.norm(A2)) or abs(tr) < 1e-3:
            continue
        return section5_psis(A, rho, eps, psi3, frame)


def fixture_roter(n: int, rng: np.random.Generator, negatives: int | None = None):
    """Roter-type curvature tensor with prescribed constants.

    Ric(A^A) = 2 tr(A) A - 2 A^2 and Ric(g^X) = (n-2) X + tr(X) g give
    Ric(B) = A for B = (phi1/2) A^A + mu1 g^A + (eta1/2) g^g whenever A has
    two eigenvalues k1, k2 (A^2 = (k1 + k2) A - k1 k2 g) and
    mu1 = (1 - phi1 (trA - k1 - k2))/(n-2), eta1 = -(phi1 k1 k2 + mu1 trA)/(n-1).
    Returns (R, frame, phi1, mu1, eta1).
    """
    frame = tc.random_frame(n, rng, negatives)
    p = int(rng.integers(2, n - 1))
    k1, k2 = rng.uniform(0.3, 2.0), -rng.uniform(0.3, 2.0)
    # g-orthonormal basis e_j (columns); in it g = diag(sig) and A = diag(lam sig)
    w, V = np.linalg.eigh(frame.g)
    Einv = np.linalg.inv(V / np.sqrt(np.abs(w)))
    lam = np.array([k1] * p + [k2] * (n - p))
    A = Einv.T @ np.diag(lam * np.sign(w)) @ Einv
    A = 0.5 * (A + A.T)
    trA = tc.trace(A, frame)
    phi1 = float(rng.uniform(0.5, 2.0)) * (1 if rng.uniform() < 0.5 else -1)
    mu1 = (1 - phi1 * (trA - k1 - k2)) / (n - 2)
    eta1 = -(phi1 * k1 * k2 + mu1 * trA) / (n - 1)
    g = frame.g
    R = 0.5 * phi1 * tc.kn(A, A) + mu1 * tc.kn(g, A) + 0.5 * eta1 * tc.kn(g, g)
    return R, frame, phi1, mu1, eta1


def fixture_prop27(n: int, rng: np.random.Generator, negatives: int | None = None):
    """B = (phi1/2) A^A + mu1 g^A + (eta1/2) g^g for a random symmetric A; returns (B, A, frame, phi1, mu1, eta1)."""
    frame = tc.random_frame(n, rng, negatives)
    A = tc.random_sym(n, rng)
    phi1 = float(rng.uniform(0.5, 2.0))
    mu1, eta1 = (float(v) for v in rng.uniform(-1, 1, 2))
    g = frame.g
    B = 0.5 * phi1 * tc.kn(A, A) + mu1 * tc.kn(g, A) + 0.5 * eta1 * tc.kn(g, g)
    return B, A, frame, phi1, mu1, eta1


def fixture_cor23(n: int, rng: np.random.Generator, negatives: int | None = None):
    """Curvature tensor R = (a2/2) S^S + a3 g^S + a4 g^S^2 + (a5/2) g^g with S = Ric(R).

    Built from the rank-2 construction: there Ric(B) = A + eps rho g and
    B = psi3 g^A^2 + (psi2/2) A^A + psi1 g^A + (psi0/2) g^g; rewriting A in
    terms of S gives the coefficients.  Returns (R, frame, alphas).
    """
    s5 = fixture_rank_two(n, rng, negatives)
    ps = s5.psi
    er = s5.eps * s5.rho
    a2, a4 = ps["psi2"], ps["psi3"]
    a3 = ps["psi1"] - 2 * er * ps["psi3"] - er * ps["psi2"]
    a5 = 2 * (ps["psi3"] * er ** 2 + 0.5 * ps["psi2"] * er ** 2 - ps["psi1"] * er + 0.5 * ps["psi0"])
    return s5.B, s5.frame, {"alpha2": a2, "alpha3": a3, "alpha4": a4, "alpha5": a5}
