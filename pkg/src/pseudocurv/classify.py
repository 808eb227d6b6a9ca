"""Pointwise classification of the Ricci and Riemann tensors."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.optimize

from . import tensors as tc
from .curvature import CurvaturePack

__all__ = [
    "RANK_FACTOR", "ILL_POSED_COND", "FitResult", "LinearFit", "RankScan", "ClassFlags",
    "numerical_rank", "quasi_rank_scan", "partially_einstein_fit", "linear_fit",
    "roter_fit", "gen_roter_fit", "proportionality", "classify_pack",
]

RANK_FACTOR = 1e-8
ILL_POSED_COND = 1e10
ZERO_TOL = 1e-12
FIT_TOL = 1e-8


def numerical_rank(M, scale: float | None = None, factor: float = RANK_FACTOR) -> int:
    s = np.linalg.svd(np.asarray(M, float), compute_uv=False)
    n = len(s)
    smax = s[0] if scale is None else scale
    if smax <= 0:
        return 0
    return int(np.sum(s > n * factor * smax))


@dataclass(frozen=True)
class RankScan:
    min_rank: int
    alpha: float | None
    candidates: tuple  # (alpha, rank) pairs
    note: str = ""


def quasi_rank_scan(S, frame: tc.PointFrame, extra_candidates=(), factor: float = RANK_FACTOR) -> RankScan:
    """Minimal numerical rank of S - alpha g over real candidate alphas.

    Candidates are the real eigenvalues of g^-1 S plus any supplied extras;
    each is polished by a golden-section search on the singular value that
    should vanish.
    """
    S = np.asarray(S, float)
    g = frame.g
    n = frame.n
    ev = np.linalg.eigvals(frame.g_inv @ S)
    scale_S = max(np.linalg.norm(S, 2), np.linalg.norm(g, 2) * np.max(np.abs(ev)), 1e-300)
    cands = [float(e.real) for e in ev if abs(e.imag) <= 1e-9 * max(1.0, abs(e))]
    cands += [float(a) for a in extra_candidates]
    note = "" if cands else "no real alpha candidate"
    scale = max(np.linalg.norm(S, 2), 1e-300)

    def sv(alpha):
        return np.linalg.svd(S - alpha * g, compute_uv=False)

    results = []
    for a0 in cands:
        r0 = numerical_rank(S - a0 * g, scale=max(scale, abs(a0) * np.linalg.norm(g, 2)), factor=factor)
        best_a, best_r = a0, r0
        if 0 < r0 < n:
            width = 1e-6 * max(1.0, abs(a0), scale_S)
            res = scipy.optimize.minimize_scalar(lambda a: sv(a)[r0], bracket=(a0 - width, a0, a0 + width),
                                                 method="golden", tol=1e-12)
            if res.success:
                a1 = float(res.x)
                r1 = numerical_rank(S - a1 * g, scale=max(scale, abs(a1) * np.linalg.norm(g, 2)), factor=factor)
                if r1 < r0:
                    best_a, best_r = a1, r1
        results.append((best_a, best_r))
    if not results:
        return RankScan(numerical_rank(S, factor=factor), None, (), note)
    a, r = min(results, key=lambda t: (t[1], abs(t[0])))
    return RankScan(r, a, tuple(results), note)


@dataclass(frozen=True)
class LinearFit:
    names: tuple
    coefficients: dict
    residual: float
    rank: int
    cond: float
    ill_posed: bool
    kept: tuple


def linear_fit(target, basis: dict, drop=(), cond_limit: float = ILL_POSED_COND) -> LinearFit:
    """Joint least-squares fit target ~ sum c_k basis_k on flattened components.

    Columns are scaled to unit norm, the design is factored with
    column-pivoted QR, and the condition number of the kept columns decides
    ill-posedness.  A rank-deficient design still yields the minimum-norm
    solution, taken with respect to the unit-scaled columns.
    """
    names = tuple(basis)
    kept = tuple(k for k in names if k not in drop)
    y = np.asarray(target, float).ravel()
    cols = [np.asarray(basis[k], float).ravel() for k in kept]
    coeffs = {k: 0.0 for k in names}
    if not cols:
        return LinearFit(names, coeffs, tc.norm(y) / max(1.0, tc.norm(y)), 0, np.inf, True, kept)
    X = np.stack(cols, axis=1)
    norms = np.linalg.norm(X, axis=0)
    zero_col = norms < ZERO_TOL
    safe = np.where(zero_col, 1.0, norms)
    Xs = X / safe
    _, Rq, _ = scipy.linalg.qr(Xs, mode="economic", pivoting=True)
    d = np.abs(np.diag(Rq))
    rank = int(np.sum(d > max(d[0], 1e-300) * 1e-12)) if d.size and d[0] > 0 else 0
    sv = np.linalg.svd(Xs, compute_uv=False)
    cond = float(sv[0] / sv[-1]) if sv[-1] > 0 else np.inf
    sol, *_ = scipy.linalg.lstsq(Xs, y, cond=1e-12)
    c = sol / safe
    c[zero_col] = 0.0
    for k, v in zip(kept, c):
        coeffs[k] = float(v)
    resid = tc.norm(y - X @ c) / max(1.0, tc.norm(y))
    return LinearFit(names, coeffs, resid, rank, cond, bool(cond > cond_limit or zero_col.any()), kept)


@dataclass(frozen=True)
class FitResult:
    """A fit plus its verdict and any consequence checks."""

    coefficients: dict
    residual: float
    verdict: bool
    status: str
    extra: dict = field(default_factory=dict)


def partially_einstein_fit(S, S2, frame: tc.PointFrame, tol: float = 1e-9) -> FitResult:
    """S^2 = lambda S + mu g."""
    fit = linear_fit(S2, {"lambda": S, "mu": frame.g})
    lam, mu = fit.coefficients["lambda"], fit.coefficients["mu"]
    status = "ok"
    if fit.rank < 2:
        status = "degenerate"  # S parallel to g (Einstein) or S = 0
    return FitResult({"lambda": lam, "mu": mu}, fit.residual, fit.residual < tol, status,
                     {"rank": fit.rank, "cond": fit.cond})


def _einstein_defect(pack: CurvaturePack) -> float:
    dev = pack.S - pack.kappa / pack.n * pack.frame.g
    return tc.norm(dev) / max(1.0, tc.norm(pack.S))


def roter_fit(pack: CurvaturePack, tol: float = FIT_TOL, zero_tol: float = 1e-9) -> FitResult:
    """R = (phi1/2) S^S + mu1 g^S + (eta1/2) g^g."""
    g, S = pack.frame.g, pack.S
    n = pack.n
    scale = max(1.0, tc.norm(pack.R))
    if pack.C is None or _einstein_defect(pack) < zero_tol or tc.norm(pack.C) < zero_tol * scale:
        return FitResult({"phi1": 0.0, "mu1": 0.0, "eta1": 0.0}, 1.0, False, "outside U_S cap U_C")
    fit = linear_fit(pack.R, {"phi1": 0.5 * tc.kn(S, S), "mu1": tc.kn(g, S), "eta1": 0.5 * tc.kn(g, g)})
    c = fit.coefficients
    if fit.ill_posed:
        return FitResult(c, fit.residual, False, "ill-posed", {"cond": fit.cond, "rank": fit.rank})
    verdict = fit.residual < tol
    extra = {"cond": fit.cond}
    if verdict and abs(c["phi1"]) > 0:
        phi1, mu1, eta1 = c["phi1"], c["mu1"], c["eta1"]
        a1 = pack.kappa + ((n - 2) * mu1 - 1) / phi1
        a2 = (mu1 * pack.kappa + (n - 1) * eta1) / phi1
        extra.update(alpha1=a1, alpha2=a2,
                     consequence_residual=tc.residual(pack.S2, a1 * S + a2 * g))
    return FitResult(c, fit.residual, verdict, "ok", extra)


GEN_ROTER_NAMES = ("phi3", "phi2", "phi1", "mu2", "mu1", "eta1")


def gen_roter_fit(pack: CurvaturePack, tol: float = FIT_TOL, rank_scan: RankScan | None = None) -> FitResult:
    """R over {S^2^S^2/2, S^S^2, S^S/2, g^S^2, g^S, g^g/2}."""
    g, S, S2 = pack.frame.g, pack.S, pack.S2
    basis = {
        "phi3": 0.5 * tc.kn(S2, S2), "phi2": tc.kn(S, S2), "phi1": 0.5 * tc.kn(S, S),
        "mu2": tc.kn(g, S2), "mu1": tc.kn(g, S), "eta1": 0.5 * tc.kn(g, g),
    }
    scan = rank_scan or quasi_rank_scan(S, pack.frame)
    drop = ("phi3", "phi2") if scan.min_rank == 2 else ()
    fit = linear_fit(pack.R, basis, drop=drop)
    pe = partially_einstein_fit(S, S2, pack.frame)
    status = "ok" if not fit.ill_posed else "rank-deficient (minimum-norm solution)"
    return FitResult(fit.coefficients, fit.residual, fit.residual < tol, status,
                     {"dropped": drop, "rank": fit.rank, "cond": fit.cond,
                      "S2_independent": not pe.verdict})


def proportionality(T1, T2, zero_tol: float = ZERO_TOL) -> FitResult:
    """T1 = lambda T2 with lambda = <T1,T2>/<T2,T2> over raw components."""
    T1, T2 = np.asarray(T1, float), np.asarray(T2, float)
    n2 = tc.norm(T2)
    if n2 < zero_tol:
        return FitResult({"lambda": 0.0}, 1.0 if tc.norm(T1) >= zero_tol else 0.0, False, "degenerate")
    lam = float(np.sum(T1 * T2) / n2 ** 2)
    res = tc.norm(T1 - lam * T2) / max(1.0, tc.norm(T1))
    return FitResult({"lambda": lam}, res, res < FIT_TOL, "ok")


@dataclass(frozen=True)
class ClassFlags:
    is_flat: bool
    is_einstein: bool
    is_ricci_simple: bool
    is_quasi_einstein: bool
    is_2_quasi_einstein: bool
    min_rank: int
    alpha: float | None
    rank_S: int
    partially_einstein: FitResult
    roter: FitResult
    gen_roter: FitResult
    e_c: FitResult
    is_conformally_flat: bool
    rank_scan: RankScan

    def labels(self) -> list[str]:
        """Names of the special classes that hold; "flat" alone when R = 0."""
        if self.is_flat:
            return ["flat"]
        named = (("Einstein", self.is_einstein), ("conformally flat", self.is_conformally_flat),
                 ("Ricci-simple", self.is_ricci_simple),
                 ("quasi-Einstein", self.is_quasi_einstein and not self.is_einstein),
                 ("2-quasi-Einstein", self.is_2_quasi_einstein and not self.is_einstein),
                 ("partially Einstein", self.partially_einstein.verdict),
                 ("Roter", self.roter.verdict), ("generalized Roter", self.gen_roter.verdict))
        return [name for name, on in named if on]


def classify_pack(pack: CurvaturePack, extra_alphas=(), rank_factor: float = RANK_FACTOR,
                  zero_tol: float = 1e-9) -> ClassFlags:
    S, frame = pack.S, pack.frame
    scale = max(1.0, tc.norm(pack.R))
    flat = tc.norm(pack.R) < zero_tol
    scan = quasi_rank_scan(S, frame, extra_alphas, factor=rank_factor)
    einstein = scan.min_rank == 0 or tc.norm(S - pack.kappa / pack.n * frame.g) < zero_tol * max(1.0, tc.norm(S))
    rank_S = numerical_rank(S, factor=rank_factor) if tc.norm(S) > zero_tol else 0
    min_rank = 0 if einstein else scan.min_rank
    cflat = pack.C is not None and tc.norm(pack.C) < zero_tol * scale
    e_c = (proportionality(pack.E, pack.C) if pack.C is not None and not einstein
           else FitResult({"lambda": 0.0}, 0.0, False, "degenerate"))
    return ClassFlags(
        is_flat=flat,
        is_einstein=einstein,
        is_ricci_simple=rank_S == 1,
        is_quasi_einstein=min_rank <= 1,
        is_2_quasi_einstein=min_rank <= 2,
        min_rank=min_rank,
        alpha=scan.alpha,
        rank_S=rank_S,
        partially_einstein=partially_einstein_fit(S, pack.S2, frame),
        roter=roter_fit(pack),
        gen_roter=gen_roter_fit(pack, rank_scan=scan),
        e_c=e_c,
        is_conformally_flat=bool(cflat),
        rank_scan=scan,
    )
