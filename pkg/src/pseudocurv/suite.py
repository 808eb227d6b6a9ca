"""Reproduction suite: closed-form checks and identity batteries.

Each :class:`Check` produces a :class:`CheckResult` made of items, one per
identity or quantity, carrying the worst residual observed and the tolerance
it was held to.  Items flagged ``informational`` are reported but do not
decide the verdict; they record side results such as repaired formulas.

Scalar comparisons use ``|a - b| / max(1, |b|)`` over random batteries
(matching the tensor residual metric) and plain ``|a - b| / |b|`` at named
points where the expected value is a fixed nonzero number.
"""
from __future__ import annotations

import fnmatch
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import catalog as cat
from . import classify as cl
from . import pseudosym as ps
from . import tensors as tc
from .curvature import curvature_pack, full_chart, warped_components
from .expr_dsl import BinOp, Call, Neg, Num, Var, evaluate, parse, pretty
from .jets import eval_jet

__all__ = ["Item", "CheckResult", "Check", "CHECKS", "select", "run_suite", "criterion_summary"]

DIMS = (4, 5, 6)


@dataclass
class Item:
    label: str
    residual: float
    tol: float
    informational: bool = False
    count: int = 1
    value: float | None = None
    expected: float | None = None
    note: str = ""

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual) and self.residual < self.tol)


@dataclass
class CheckResult:
    name: str
    criterion: int | None
    title: str
    items: list = field(default_factory=list)
    elapsed: float = 0.0
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(i.passed for i in self.items if not i.informational)

    @property
    def max_residual(self) -> float:
        vals = [i.residual for i in self.items if not i.informational]
        return max(vals) if vals else 0.0

    def failures(self) -> list:
        return [i for i in self.items if not i.informational and not i.passed]


class _Battery:
    """Collects the worst residual per label over many instances."""

    def __init__(self):
        self._items: dict[str, Item] = {}

    def add(self, label, residual, tol, informational=False, value=None, expected=None, note=""):
        residual = float(residual)
        it = self._items.get(label)
        if it is None:
            self._items[label] = Item(label, residual, tol, informational, 1, value, expected, note)
            return
        it.count += 1
        if not residual <= it.residual:  # keeps NaN
            it.residual, it.value, it.expected = residual, value, expected
            if note:
                it.note = note

    def scalar(self, label, value, expected, tol, informational=False, relative=False, note=""):
        value, expected = float(value), float(expected)
        den = max(abs(expected), 1e-300) if relative else max(1.0, abs(expected))
        self.add(label, abs(value - expected) / den, tol, informational, value, expected, note)

    def items(self) -> list:
        return list(self._items.values())


@dataclass(frozen=True)
class Check:
    name: str
    criterion: int | None
    title: str
    func: Callable[[np.random.Generator, _Battery], None]
    seed: int = 0

    def run(self) -> CheckResult:
        bat = _Battery()
        t0 = time.perf_counter()
        err = None
        try:
            self.func(np.random.default_rng(self.seed), bat)
        except Exception as exc:  # reported, not raised
            err = f"{type(exc).__name__}: {exc}"
        return CheckResult(self.name, self.criterion, self.title, bat.items(),
                           time.perf_counter() - t0, err)


def _zero(T) -> float:
    return tc.residual(T, np.zeros_like(T))


def _dims(reps: int):
    for n in DIMS:
        for _ in range(reps):
            yield n


# --------------------------------------------------------------------------
# criterion 1: identity batteries

def _lemma31(rng, bat):
    for n in _dims(100):
        A1, A2, F = (tc.random_sym(n, rng) for _ in range(3))
        Q, kn, kn6 = tc.tachibana, tc.kn, tc.kn6
        bat.add("Q(A1,A2^F) + Q(A2,A1^F) = -Q(F,A1^A2)", tc.residual(Q(A1, kn(A2, F)) + Q(A2, kn(A1, F)), -Q(F, kn(A1, A2))), 1e-9)
        bat.add("A1^Q(A2,F) + A2^Q(A1,F) = -Q(F,A1^A2)", tc.residual(kn6(A1, Q(A2, F)) + kn6(A2, Q(A1, F)), -Q(F, kn(A1, A2))), 1e-9)
        half = 0.5 * kn(A1, A1)
        bat.add("A^Q(A,F) = -Q(F,A^A/2)", tc.residual(kn6(A1, Q(A1, F)), -Q(F, half)), 1e-9)
        bat.add("Q(A,A^F) = -Q(F,A^A/2)", tc.residual(Q(A1, kn(A1, F)), -Q(F, half)), 1e-9)


def _rank2_data(n, rng):
    f = tc.random_frame(n, rng)
    A = tc.random_rank2(n, rng)
    A2 = tc.square(A, f)
    A3 = A2 @ f.g_inv @ A
    A4 = A2 @ f.g_inv @ A2
    t1, t2 = tc.trace(A, f), tc.trace(A2, f)
    return f, A, A2, 0.5 * (A3 + A3.T), 0.5 * (A4 + A4.T), t1, t2


def _lemma32(rng, bat):
    Q, kn, kn6 = tc.tachibana, tc.kn, tc.kn6
    for n in _dims(100):
        f, A, A2, A3, A4, t1, t2 = _rank2_data(n, rng)
        g = f.g
        d = 0.5 * (t2 - t1 ** 2)
        AA = kn(A, A)
        hAA = 0.5 * AA
        X = A2 - t1 * A
        gX = kn(g, X)
        bat.add("A^3 = trA A^2 + d A", tc.residual(A3, t1 * A2 + d * A), 1e-9)
        bat.add("A^A^2 = trA/2 A^A", tc.residual(kn(A, A2), 0.5 * t1 * AA), 1e-9)
        bat.add("A^2^A^2 = -d A^A", tc.residual(kn(A2, A2), -d * AA), 1e-9)
        bat.add("X^X = -d A^A, X = A^2 - trA A", tc.residual(kn(X, X), -d * AA), 1e-9)
        bat.add("Q(A,A^2^g) + Q(A^2,A^g) = -trA Q(g,A^A/2)", tc.residual(Q(A, kn(A2, g)) + Q(A2, kn(A, g)), -t1 * Q(g, hAA)), 1e-9)
        bat.add("A^Q(g,A^2) + A^2^Q(g,A) = trA Q(g,A^A/2)", tc.residual(kn6(A, Q(g, A2)) + kn6(A2, Q(g, A)), t1 * Q(g, hAA)), 1e-9)
        bat.add("A^4 in span{A^2, A}", tc.residual(A4, 0.5 * ((t2 + t1 ** 2) * A2 + t1 * (t2 - t1 ** 2) * A)), 1e-9)
        bat.add("A^4 - 2trA A^3 + (trA)^2 A^2 = d X", tc.residual(A4 - 2 * t1 * A3 + t1 ** 2 * A2, d * X), 1e-9)
        bat.add("Q(A2, AA/2) = 0", _zero(Q(A2, hAA)), 1e-9)
        bat.add("(AA/2).(AA/2) = 0", _zero(tc.dot(hAA, hAA, f)), 1e-9)
        bat.add("(g^X).(g^X)", tc.residual(tc.dot(gX, gX, f), d * Q(g, gX)), 1e-9)
        bat.add("(AA/2).(g^X) + (g^X).(AA/2)",
                tc.residual(tc.dot(hAA, gX, f) + tc.dot(gX, hAA, f), d * Q(g, hAA)), 1e-9)
        # part (iii): A^A^2 and A^2^A^2 fold into A^A
        p0, p2, p3, p4, p5, p6 = rng.uniform(-1, 1, 6)
        B = (0.5 * p0 * AA + p2 * kn(g, A) + 0.5 * p3 * kn(g, g) + p4 * kn(g, A2)
             + p5 * kn(A, A2) + 0.5 * p6 * kn(A2, A2))
        p1 = p0 + t1 * p5 - d * p6
        bat.add("reduction (iii)", tc.residual(
            B, 0.5 * p1 * AA + p2 * kn(g, A) + 0.5 * p3 * kn(g, g) + p4 * kn(g, A2)), 1e-9)


def _prop33(rng, bat):
    for n in _dims(100):
        f, A, A2, _, _, t1, t2 = _rank2_data(n, rng)
        g = f.g
        d = 0.5 * (t2 - t1 ** 2)
        P = tc.kn(g, A2 - t1 * A) + 0.5 * (n - 2) * tc.kn(A, A)
        bat.add("P.P = d Q(g,P)", tc.residual(tc.dot(P, P, f), d * tc.tachibana(g, P)), 1e-9)
        lam = rng.uniform(0.2, 2.0) * rng.choice([-1, 1])
        mu = rng.uniform(-2, 2)
        B = lam * P + 0.5 * mu * tc.kn(g, g)
        bat.add("B.B = (mu + lam d) Q(g,B)",
                tc.residual(tc.dot(B, B, f), (mu + lam * d) * tc.tachibana(g, B)), 1e-9)


def _prop34(rng, bat):
    for n in _dims(100):
        f = tc.random_frame(n, rng)
        A = tc.random_sym(n, rng)
        lam = rng.uniform(-3, 3)
        bat.add("E(A + lam g) = E(A)", tc.residual(tc.e_tensor(A + lam * f.g, f), tc.e_tensor(A, f)), 1e-9)
        # (i): B in the reduced rank-2 form has Weyl(B) = phi1/(n-2) E(A)
        f, A, A2, _, _, t1, t2 = _rank2_data(n, rng)
        g = f.g
        p1, p2, p3, p4 = rng.uniform(-1, 1, 4)
        B = 0.5 * p1 * tc.kn(A, A) + p2 * tc.kn(g, A) + 0.5 * p3 * tc.kn(g, g) + p4 * tc.kn(g, A2)
        bat.add("Weyl(B) = phi1/(n-2) E(A)", tc.residual(tc.weyl(B, f), p1 / (n - 2) * tc.e_tensor(A, f)), 1e-9)


def _prop22(rng, bat):
    for n in _dims(100):
        f = tc.random_frame(n, rng)
        g = f.g
        R = tc.random_curvature(n, rng)
        S, _, C = tc.ricci_weyl(R, f)
        S2 = tc.square(S, f)
        a = rng.uniform(-2, 2, 5)
        T = a[0] * R + 0.5 * a[1] * tc.kn(S, S) + a[2] * tc.kn(g, S) + a[3] * tc.kn(g, S2) \
            + 0.5 * a[4] * tc.kn(g, g)
        bat.add("Weyl linearity (R, S)", tc.residual(tc.weyl(T, f), a[0] * C + a[1] / (n - 2) * tc.e_tensor(S, f)), 1e-9)
        A = tc.random_sym(n, rng)
        T = a[0] * R + 0.5 * a[1] * tc.kn(A, A) + a[2] * tc.kn(g, A) + a[3] * tc.kn(g, tc.square(A, f)) \
            + 0.5 * a[4] * tc.kn(g, g)
        bat.add("Weyl linearity (B, A)", tc.residual(tc.weyl(T, f), a[0] * C + a[1] / (n - 2) * tc.e_tensor(A, f)), 1e-9)
        Rc, fc, al = cat.fixture_cor23(n, rng)
        Sc = tc.ricci(Rc, fc)
        g2 = fc.g
        rebuilt = (0.5 * al["alpha2"] * tc.kn(Sc, Sc) + al["alpha3"] * tc.kn(g2, Sc)
                   + al["alpha4"] * tc.kn(g2, tc.square(Sc, fc)) + 0.5 * al["alpha5"] * tc.kn(g2, g2))
        bat.add("fixture R in span{S^S, g^S, g^S^2, g^g}", tc.residual(Rc, rebuilt), 1e-9)
        bat.add("C = alpha2/(n-2) E", tc.residual(tc.weyl(Rc, fc), al["alpha2"] / (n - 2) * tc.e_tensor(Sc, fc)), 1e-9)


# --------------------------------------------------------------------------
# criterion 2: the rank-two construction

def _section5(rng, bat):
    for _ in range(200):
        n = int(rng.choice(DIMS))
        s5 = cat.fixture_rank_two(n, rng)
        for k, v in s5.checks.items():
            bat.add(k, v, 1e-10)
        bb, ww, br = ps.rank_two_conditions(s5)
        for r in (bb, ww, br):
            bat.add(f"condition {r.id}", r.residual, 1e-9)
        fitted = {**bb.coefficients, **ww.coefficients, **br.coefficients}
        for k in ("alpha1", "alpha2", "alpha4", "alpha5"):
            bat.scalar(f"{k} fit vs closed form", fitted[k], s5.alpha[k], 1e-7)
        bat.scalar("alpha3 fit vs printed closed form", fitted["alpha3"], s5.alpha["alpha3_published"], 1e-7)
        bat.scalar("alpha3 fit vs corrected closed form", fitted["alpha3"], s5.alpha["alpha3"], 1e-7,
                   informational=True)
        bat.scalar("alpha3 corrected = defining expression", s5.alpha["alpha3"],
                   s5.alpha_derivation["alpha3"], 1e-10, informational=True)


# --------------------------------------------------------------------------
# criterion 3: generic pipeline vs block formulas

def _warped_families():
    out = []
    for fid in cat.family_ids():
        if fid == "minkowski":
            continue
        out.append((fid, cat.build(fid)))
    out.append(("example63 (n=5)", cat.build("example63", {"fiber_dim": 3, "kt": 6.0})))
    out.append(("example63 (n=6, hyperbolic fiber)",
                cat.build("example63", {"fiber_dim": 4, "kt": -12.0}, {"h": "1 - 2*m/r + q^2/r^2"})))
    return out


def _warped_oracle(rng, bat):
    for label, fam in _warped_families():
        for p in fam.sample_points(20, rng):
            gen = curvature_pack(fam.chart, p)
            blk, inv = warped_components(fam.chart, p)
            for name in ("R", "S", "C", "E"):
                bat.add(f"{label}: {name}", tc.residual(getattr(gen, name), getattr(blk, name)), 1e-8)
            bat.scalar(f"{label}: kappa", gen.kappa, blk.kappa, 1e-8)
            n = blk.n
            f = blk.frame
            A = blk.S - inv.tau1 * f.g
            trA, trA2 = tc.trace(A, f), tc.trace(tc.square(A, f), f)
            lhs = np.linalg.det(A[:2, :2])
            rhs = 0.5 * (n - 1) * inv.phi * np.linalg.det(f.g[:2, :2])
            bat.add("det(S - tau1 g) on the base", abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs)), 1e-9)
            k = trA ** 2 - trA2
            bat.add("(trA)^2 - trA^2 = (n-1) phi",
                    abs(k - (n - 1) * inv.phi) / max(1.0, abs(k)), 1e-9)


# --------------------------------------------------------------------------
# supplementary: warped-product coefficient closed forms

def _generic_points(rng, k=6):
    """Catalog points where the closed forms apply: not Einstein, not conformally flat, phi and rho nonzero."""
    for label, fam in _warped_families():
        for p in fam.sample_points(k, rng):
            pack, inv = warped_components(fam.chart, p)
            n, scale = pack.n, max(1.0, tc.norm(pack.R))
            if tc.norm(pack.S - pack.kappa / n * pack.frame.g) < 1e-9 * max(1.0, tc.norm(pack.S)):
                continue
            if tc.norm(pack.C) < 1e-9 * scale or abs(inv.phi) < 1e-9 or abs(inv.rho) < 1e-9:
                continue
            yield label, pack, inv


def _theorem61(rng, bat):
    for label, pack, inv in _generic_points(rng):
        res = ps.warped_conditions(pack, inv, rtol=1e-6)
        pred = ps.warped_coefficients(pack.n, pack.kappa, inv.tau1, inv.rho, inv.phi)
        for r in res:
            bat.add(f"condition {r.id}", r.residual, 1e-8)
            if r.status != "ok":
                continue  # dependent basis: the coefficients are not determined by the fit
            for k, v in r.coefficients.items():
                if k == "alpha3":
                    bat.scalar("alpha3 vs printed closed form", v, pred["alpha3_published"], 1e-6)
                    bat.scalar("alpha3 vs corrected closed form", v, pred["alpha3"], 1e-6, informational=True)
                elif k in pred:
                    bat.scalar(f"{k} vs closed form", v, pred[k], 1e-6)
        P = ps._Products(pack)
        lc = ps.fit_L(P["dot", "C", "C"], P["Q", "g", "C"], "C.C", "L_C")
        bat.scalar("L_C = -rho/(2(n-2))", lc.coefficients["L_C"], -inv.rho / (2 * (pack.n - 2)), 1e-7)
        lhs = P["dot", "R", "S"]
        tail = pred["alpha4"] * P["Q", "g", "S2"] + pred["alpha5"] * P["Q", "S", "S2"]
        bat.add("closed-form triple satisfies R.S (printed alpha3)",
                tc.residual(lhs, pred["alpha3_published"] * P["Q", "g", "S"] + tail), 1e-8)
        bat.add("closed-form triple satisfies R.S (corrected alpha3)",
                tc.residual(lhs, pred["alpha3"] * P["Q", "g", "S"] + tail), 1e-8, informational=True)
        bat.add("points covered", 0.0, 1.0, informational=True, note=label)


# --------------------------------------------------------------------------
# criterion 4: Reissner-Nordstrom point

def _rn_point(rng, bat):
    fam = cat.build("reissner_nordstrom", {"m": 1.0, "q": 1.0})
    p = {"t": 0.0, "r": 2.0, "theta": 1.5708, "phi": 0.0}
    base = {"t": 0.0, "r": 2.0}
    pack = curvature_pack(fam.chart, p)
    _, inv = warped_components(fam.chart, p)
    orc = fam.oracles(base)
    n = pack.n
    exact = {"tau1": 0.0625, "rho": 0.25, "phi": 1.0 / 96}
    for k, v in exact.items():
        bat.scalar(f"{k} pipeline", getattr(inv, k), v, 1e-7, relative=True)
        bat.scalar(f"{k} closed form", orc[k], v, 1e-7, relative=True)
    cf = ps.warped_coefficients(n, pack.kappa, inv.tau1, inv.rho, inv.phi)
    ec = cl.proportionality(pack.E, pack.C)
    bat.add("E = lambda C holds", ec.residual, 1e-9)
    bat.scalar("E/C fit", ec.coefficients["lambda"], 1.0 / 12, 1e-7, relative=True)
    bat.scalar("E/C closed form 2 phi/rho", 2 * orc["phi"] / orc["rho"], 1.0 / 12, 1e-7, relative=True)
    rf = cl.roter_fit(pack)
    bat.add("Roter form holds", rf.residual, 1e-9)
    bat.scalar("phi1 fit", rf.coefficients["phi1"], 24.0, 1e-7, relative=True)
    bat.scalar("phi1 closed form", cf["phi1"], 24.0, 1e-7, relative=True)
    P = ps._Products(pack)
    lc = ps.fit_L(P["dot", "C", "C"], P["Q", "g", "C"], "C.C", "L_C")
    bat.scalar("L_C fit", lc.coefficients["L_C"], -0.0625, 1e-7, relative=True)
    bat.scalar("L_C closed form", cf["alpha2"], -0.0625, 1e-7, relative=True)
    ric = ps.fit_ricci_three_term(pack, P=P)
    bat.add("R.S three-term condition holds", ric.residual, 1e-9)
    for k, v in (("alpha5", 12.0), ("alpha4", -0.25)):
        bat.scalar(f"{k} closed form", cf[k], v, 1e-7, relative=True)
        bat.scalar(f"{k} fit", ric.coefficients[k], v, 1e-7, relative=True,
                   note=f"basis {ric.status}")
    lhs = P["dot", "R", "S"]
    rhs = cf["alpha3"] * P["Q", "g", "S"] + cf["alpha4"] * P["Q", "g", "S2"] + cf["alpha5"] * P["Q", "S", "S2"]
    bat.add("closed-form (alpha3, alpha4, alpha5) satisfy R.S", tc.residual(lhs, rhs), 1e-9, informational=True)


# --------------------------------------------------------------------------
# criterion 5: Schwarzschild

def _schwarzschild(rng, bat):
    for m in (0.5, 1.0, 2.0):
        fam = cat.build("schwarzschild", {"m": m})
        for p in fam.sample_points(8, rng):
            pack = curvature_pack(fam.chart, p)
            _, inv = warped_components(fam.chart, p)
            r = p["r"]
            bat.add("phi = 0", abs(inv.phi), 1e-9)
            bat.add("S = 0", tc.norm(pack.S) / max(1.0, tc.norm(pack.R)), 1e-9)
            P = ps._Products(pack)
            fit = ps.fit_L(P["dot", "R", "R"], P["Q", "g", "R"], "R.R", "L_R")
            bat.add("R.R = L_R Q(g,R) holds", fit.residual, 1e-9)
            bat.scalar("L_R = -m/r^3", fit.coefficients["L_R"], -m / r ** 3, 1e-8, relative=True)
            bat.scalar("L_R vs -h'/(2r) closed form", fit.coefficients["L_R"], fam.oracles(p)["L_R"], 1e-8,
                       relative=True)
    fam = cat.build("schwarzschild_ef", {"m": 1.0})
    p = {"v": 0.0, "r": 2.0}
    pack = curvature_pack(fam.chart, p)
    _, inv = warped_components(fam.chart, p)
    P = ps._Products(pack)
    fit = ps.fit_L(P["dot", "R", "R"], P["Q", "g", "R"], "R.R", "L_R")
    bat.add("phi = 0 (m=1, r=2, horizon-regular chart)", abs(inv.phi), 1e-9)
    bat.scalar("L_R at m=1, r=2", fit.coefficients["L_R"], -0.125, 1e-8, relative=True)
    bat.scalar("closed form at m=1, r=2", fam.oracles(p)["L_R"], -0.125, 1e-8, relative=True)


# --------------------------------------------------------------------------
# criterion 6: JNW

def _jnw(rng, bat):
    fam = cat.build("jnw", {"b": 1.0, "s": 0.5})
    p = {"t": 0.0, "r": 2.0}
    pack = curvature_pack(fam.chart, p)
    orc = fam.oracles(p, native=True)
    raw = fam.oracles(p)
    S = pack.S
    bat.scalar("S_rr vs closed form (library sign)", S[1, 1], orc["S_rr"], 1e-10, relative=True)
    bat.scalar("printed S_rr = -0.09375", raw["S_rr"], -0.09375, 1e-10, relative=True,
               informational=True)
    off = S.copy()
    off[1, 1] = 0.0
    bat.add("other Ricci components vanish", tc.norm(off) / max(1.0, abs(S[1, 1])), 1e-10)
    bat.add("rank S = 1", abs(cl.numerical_rank(S) - 1), 0.5)
    pe = cl.partially_einstein_fit(S, pack.S2, pack.frame)
    bat.add("S^2 = kappa S holds", pe.residual, 1e-9)
    bat.scalar("kappa (S^2 fit) vs closed form", pe.coefficients["lambda"], orc["kappa"], 1e-7, relative=True)
    bat.scalar("kappa (trace) vs closed form", pack.kappa, orc["kappa"], 1e-7, relative=True)
    two = ps.fit_two_term(pack)
    P = ps._Products(pack)
    cc = ps.fit_L(P["dot", "C", "C"], P["Q", "g", "C"], "C.C", "alpha2")
    bat.add("R.R = Q(S,R) + alpha1 Q(g,C) holds", two.residual, 1e-9)
    bat.add("C.C = alpha2 Q(g,C) holds", cc.residual, 1e-9)
    bat.scalar("alpha1 fit vs closed form", two.coefficients["L"], orc["alpha1"], 1e-7, relative=True)
    bat.scalar("alpha2 fit vs closed form", cc.coefficients["alpha2"], orc["alpha2"], 1e-7, relative=True,
               note="printed alpha2 does not follow the sign of the other printed quantities")
    bat.scalar("alpha2 fit vs printed value", cc.coefficients["alpha2"], raw["alpha2"], 1e-7, relative=True,
               informational=True)
    for b, s, r in ((1.0, 0.3, 2.6), (2.0, 0.7, 5.0), (0.5, 0.9, 1.3)):
        f2 = cat.build("jnw", {"b": b, "s": s})
        q = {"t": 0.0, "r": r}
        pk = curvature_pack(f2.chart, q)
        o = f2.oracles(q, native=True)
        bat.scalar("S_rr at further points", pk.S[1, 1], o["S_rr"], 1e-9, relative=True)
        bat.scalar("alpha1 at further points", ps.fit_two_term(pk).coefficients["L"], o["alpha1"], 1e-7,
                   relative=True)


# --------------------------------------------------------------------------
# criterion 7: hypersurfaces

def _hypersurface(rng, bat):
    for n in _dims(40):
        eps = int(rng.choice([-1, 1]))
        kt = float(rng.uniform(-5, 5))
        H, pack = cat.fixture_hypersurface(n, rng, None, 0.0, eps, kt)
        bat.add("closed-form C = Weyl(R)", tc.residual(pack.C, tc.weyl(pack.R, pack.frame)), 1e-9)
        two = ps.fit_two_term(pack)
        bat.add("R.R = Q(S,R) + L Q(g,C) holds", two.residual, 1e-9)
        bat.scalar("L = -(n-2) kt/(n(n+1))", two.coefficients["L"], -(n - 2) * kt / (n * (n + 1)), 1e-9)

        H, pack = cat.fixture_hypersurface(n, rng, 2, 0.0, eps, kt)
        f = pack.frame
        trH, trH2 = tc.trace(H, f), tc.trace(tc.square(H, f), f)
        P = ps._Products(pack)
        cc = ps.fit_L(P["dot", "C", "C"], P["Q", "g", "C"], "C.C", "L_C")
        bat.add("type number two: C.C proportional to Q(g,C)", cc.residual, 1e-9)
        bat.scalar("type number two: C.C coefficient", cc.coefficients["L_C"],
                   (n - 3) * eps / (2 * (n - 2) * (n - 1)) * (trH2 - trH ** 2), 1e-9)
        rr = ps.fit_L(P["dot", "R", "R"], P["Q", "g", "R"], "R.R", "L_R")
        bat.add("type number two: R.R proportional to Q(g,R)", rr.residual, 1e-9)
        bat.scalar("type number two: L_R = kt/(n(n+1))", rr.coefficients["L_R"], kt / (n * (n + 1)), 1e-9)

        shift = float(rng.uniform(-2, 2))
        H, pack = cat.fixture_hypersurface(n, rng, 1, shift, eps, kt)
        f = pack.frame
        A = H - shift * f.g
        trA, trA2 = tc.trace(A, f), tc.trace(tc.square(A, f), f)
        coef = (n - 3) * eps / (2 * (n - 2) * (n - 1)) * (trA2 - trA ** 2)
        P = ps._Products(pack)
        bat.add("2-quasi-umbilical: C.C = c Q(g,C)", tc.residual(P["dot", "C", "C"], coef * P["Q", "g", "C"]), 1e-9,
                note="C vanishes and c = 0 for rank-one A")
        bat.add("2-quasi-umbilical: C = 0", tc.norm(pack.C) / max(1.0, tc.norm(pack.R)), 1e-9)

        H, pack = cat.fixture_hypersurface(n, rng, 2, shift, eps, kt)
        f = pack.frame
        A = H - shift * f.g
        trA, trA2 = tc.trace(A, f), tc.trace(tc.square(A, f), f)
        P = ps._Products(pack)
        cc = ps.fit_L(P["dot", "C", "C"], P["Q", "g", "C"], "C.C", "L_C")
        bat.scalar("rank-two shifted H: C.C coefficient from A", cc.coefficients["L_C"],
                   (n - 3) * eps / (2 * (n - 2) * (n - 1)) * (trA2 - trA ** 2), 1e-9)


# --------------------------------------------------------------------------
# criterion 8: Roter spaces

def _roter(rng, bat):
    for m, q, r in ((1.0, 1.0, 2.0), (1.0, 0.5, 3.0), (2.0, 1.5, 6.0), (0.5, 0.4, 1.7), (1.0, 1.2, 4.5)):
        fam = cat.build("reissner_nordstrom", {"m": m, "q": q})
        pack = curvature_pack(fam.chart, {"t": 0.0, "r": r, "theta": 1.1, "phi": 0.4})
        fit = cl.roter_fit(pack)
        bat.add("RN: Roter form holds", fit.residual, 1e-9)
        for res in ps.roter_suite(pack, **fit.coefficients):
            bat.add(f"RN: {res.id}", res.residual, 1e-7)
    for _ in range(50):
        n = int(rng.choice(DIMS))
        R, f, phi1, mu1, eta1 = cat.fixture_roter(n, rng)
        pack = ps_pack(f, R)
        for res in ps.roter_suite(pack, phi1, mu1, eta1):
            bat.add(f"fixture: {res.id}", res.residual, 1e-7)
        fit = cl.roter_fit(pack)
        bat.scalar("fixture: fitted phi1", fit.coefficients["phi1"], phi1, 1e-7)
        B, A, f, phi1, mu1, eta1 = cat.fixture_prop27(n, rng)
        for k, v in ps.roter_algebra_checks(B, A, f, phi1, mu1, eta1).items():
            bat.add(f"Roter-form tensor: {k}", v, 1e-7)


def ps_pack(frame, R):
    from .curvature import pack_from_riemann
    return pack_from_riemann(frame, R, source="fixture")


# --------------------------------------------------------------------------
# criterion 9: E/C oracles of the warped-product examples

def _nd_oracles(rng, bat):
    for fid in ("morris_thorne", "mm_family", "bpsi_family", "ssss_time_dependent"):
        fam = cat.build(fid)
        for p in fam.sample_points(6, rng):
            pack = curvature_pack(fam.chart, p)
            ec = cl.proportionality(pack.E, pack.C)
            lam = ec.coefficients["lambda"]
            o = fam.oracles(p, native=True)
            bat.add(f"{fid}: E = lambda C holds", ec.residual, 1e-6)
            bat.scalar(f"{fid}: printed oracle", o["E_over_C"], lam, 1e-6, relative=True)
            if "E_over_C_corrected" in o:
                bat.scalar(f"{fid}: repaired oracle", o["E_over_C_corrected"], lam, 1e-6, relative=True,
                           informational=True)
    for c in (0.5, 1.0):
        fam = cat.build("morris_thorne", {}, {"b": repr(c), "psi": "0"})
        for r in (2 * c, 3 * c):
            p = {"t": 0.0, "r": r}
            pack = curvature_pack(fam.chart, p)
            lam = cl.proportionality(pack.E, pack.C).coefficients["lambda"]
            bat.scalar("morris_thorne psi = 0, b const: printed oracle", fam.oracles(p, native=True)["E_over_C"],
                       lam, 1e-6, relative=True)


# --------------------------------------------------------------------------
# criterion 10: expression language and jets

_FUNCS1 = ("sin", "cos", "exp", "sinh", "cosh")


def _random_ast(rng, depth, names=("x", "y")):
    if depth == 0 or rng.uniform() < 0.25:
        if rng.uniform() < 0.5:
            return Var(str(rng.choice(names)))
        return Num(float(rng.choice([0.5, 1.0, 2.0, 3.0, 1.25])))
    k = rng.integers(0, 5)
    if k == 0:
        return Neg(_random_ast(rng, depth - 1, names))
    if k == 1:
        return Call(str(rng.choice(_FUNCS1)), (_random_ast(rng, depth - 1, names),))
    if k == 2:
        return BinOp("^", _random_ast(rng, depth - 1, names), Num(float(rng.integers(1, 4))))
    op = str(rng.choice(["+", "-", "*", "/"]))
    return BinOp(op, _random_ast(rng, depth - 1, names), _random_ast(rng, depth - 1, names))


def _parser_jets(rng, bat):
    fails = 0
    for _ in range(300):
        ast = _random_ast(rng, 4)
        if parse(pretty(ast)) != ast:
            fails += 1
    bat.add("pretty/parse round trip (300 random trees)", fails, 0.5)
    cases = {"2^3^2": 512.0, "-2^2": -4.0, "(-2)^2": 4.0, "2*3+4": 10.0, "2+3*4": 14.0,
             "8/4/2": 1.0, "2^-1": 0.5, "1-2-3": -4.0, "-x^2": -9.0, "2*-x": -6.0}
    wrong = sum(abs(float(evaluate(parse(s), {"x": 3.0})) - v) > 1e-15 for s, v in cases.items())
    bat.add("precedence table", wrong, 0.5)
    h = 1e-5
    done = 0
    while done < 60:
        src = pretty(_random_ast(rng, 3))
        node = parse(src)
        x = rng.uniform(0.3, 1.2, 2)
        try:
            jet = eval_jet(node, x, ("x", "y"))
            grads = [eval_jet(node, x + h * e, ("x", "y")).grad - eval_jet(node, x - h * e, ("x", "y")).grad
                     for e in np.eye(2)]
            vals = [float(evaluate(node, {"x": x[0] + s * h * (i == 0), "y": x[1] + s * h * (i == 1)}))
                    for i in range(2) for s in (1, -1)]
        except ArithmeticError:
            continue
        scale = max(1.0, abs(jet.value), np.abs(jet.grad).max(), np.abs(jet.hess).max())
        if not np.isfinite(scale) or scale > 1e6:
            continue
        fd_grad = np.array([(vals[0] - vals[1]), (vals[2] - vals[3])]) / (2 * h)
        fd_hess = np.array(grads) / (2 * h)
        bat.add("jet gradient vs finite differences", np.abs(fd_grad - jet.grad).max() / scale, 1e-6)
        bat.add("jet Hessian vs finite differences", np.abs(fd_hess - jet.hess).max() / scale, 1e-6)
        done += 1
    sphere = full_chart(("theta", "phi"), [["1", "0"], ["0", "sin(theta)^2"]])
    for th in (0.4, 1.0, 1.9):
        bat.scalar("unit 2-sphere kappa = 2", curvature_pack(sphere, {"theta": th, "phi": 0.3}).kappa, 2.0, 1e-10,
                   relative=True)
    s3 = full_chart(("a", "b", "c"), [["1", "0", "0"], ["0", "sin(a)^2", "0"],
                                        ["0", "0", "sin(a)^2*sin(b)^2"]])
    bat.scalar("unit 3-sphere kappa = 6", curvature_pack(s3, {"a": 1.1, "b": 0.8, "c": 0.0}).kappa, 6.0, 1e-10,
               relative=True)


# --------------------------------------------------------------------------
# registry

CHECKS: tuple[Check, ...] = (
    Check("lemma31", 1, "Tachibana / Kulkarni-Nomizu identities of symmetric tensors", _lemma31, 101),
    Check("lemma32", 1, "identities of a rank-two symmetric tensor", _lemma32, 102),
    Check("prop33", 1, "pseudosymmetric combinations of a rank-two tensor", _prop33, 103),
    Check("prop34", 1, "E-tensor shift invariance and Weyl part of reduced forms", _prop34, 104),
    Check("prop22", 1, "linearity of the Weyl map", _prop22, 105),
    Check("section5", 2, "rank-two construction: conditions and coefficients", _section5, 201),
    Check("warped_oracle", 3, "generic pipeline vs block formulas on catalog charts", _warped_oracle, 301),
    Check("rn_point", 4, "Reissner-Nordstrom m=q=1, r=2", _rn_point, 401),
    Check("schwarzschild", 5, "Schwarzschild: phi = 0 and L_R = -m/r^3", _schwarzschild, 501),
    Check("jnw", 6, "JNW b=1, s=1/2, r=2", _jnw, 601),
    Check("hypersurface", 7, "hypersurfaces in space forms", _hypersurface, 701),
    Check("roter", 8, "Roter consequence suite", _roter, 801),
    Check("nd_oracles", 9, "E/C oracles of the warped-product examples", _nd_oracles, 901),
    Check("parser_jets", 10, "expression language, jets, sphere canary", _parser_jets, 1001),
    Check("theorem61", None, "warped-product coefficient closed forms at generic points", _theorem61, 1101),
)


def select(pattern: str | None = None) -> list[Check]:
    """Checks whose name matches a glob pattern or contains it as a substring."""
    if not pattern:
        return list(CHECKS)
    return [c for c in CHECKS if fnmatch.fnmatch(c.name, pattern) or pattern in c.name]


def run_suite(pattern: str | None = None, workers: int | None = None) -> list[CheckResult]:
    """Run the selected checks in a thread pool; results come back in registry order."""
    checks = select(pattern)
    if workers == 1 or len(checks) <= 1:
        return [c.run() for c in checks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda c: c.run(), checks))


def criterion_summary(results: list[CheckResult]) -> dict[int, tuple[bool, float]]:
    """Per acceptance criterion: (all its checks passed, worst residual)."""
    out: dict[int, list] = {}
    for r in results:
        if r.criterion is None:
            continue
        ok, worst = out.get(r.criterion, (True, 0.0))
        res = r.max_residual if math.isfinite(r.max_residual) else math.inf
        out[r.criterion] = (ok and r.passed, max(worst, res))
    return dict(sorted(out.items()))
