"""Pseudosymmetry-type curvature conditions: evaluation, fitting and closed forms.

Every condition is written ``left = sum_k c_k basis_k``; the coefficients are
fitted jointly by least squares and, where a closed form is known, compared
with it coefficient by coefficient.  "Condition holds" (small residual) and
"coefficients match" are separate verdicts.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import tensors as tc
from .classify import linear_fit
from .curvature import CurvaturePack, WarpedInvariants

__all__ = [
    "ZERO_ABS", "RESIDUAL_TOL", "ConditionResult", "fit_L", "fit_terms",
    "pseudo_conditions", "fit_two_term", "fit_ricci_three_term", "fit_mixed",
    "warped_coefficients", "warped_conditions", "roter_constants", "roter_suite", "roter_algebra_checks", "RankTwoConstruction",
    "section5_psis", "rank_two_conditions", "lattice",
]

ZERO_ABS = 1e-12
RESIDUAL_TOL = 1e-8


@dataclass
class ConditionResult:
    id: str
    coefficients: dict
    residual: float
    verdict: bool
    status: str = "ok"
    predicted: dict = field(default_factory=dict)
    deltas: dict = field(default_factory=dict)
    coefficients_match: bool | None = None

    def compare(self, predicted: dict, rtol: float = 1e-7) -> "ConditionResult":
        """Attach closed-form values and relative deltas."""
        self.predicted = dict(predicted)
        self.deltas = {}
        ok = True
        for k, v in predicted.items():
            if k not in self.coefficients:
                continue
            d = abs(self.coefficients[k] - v) / max(1.0, abs(v))
            self.deltas[k] = d
            ok = ok and d < rtol
        self.coefficients_match = ok if self.deltas else None
        return self


def fit_L(left, right, cid: str, name: str = "L", tol: float = RESIDUAL_TOL) -> ConditionResult:
    """left = L right, one scalar by Frobenius projection."""
    left, right = np.asarray(left, float), np.asarray(right, float)
    nl, nr = tc.norm(left), tc.norm(right)
    if nl < ZERO_ABS and nr < ZERO_ABS:
        return ConditionResult(cid, {name: 0.0}, 0.0, True, "trivially satisfied")
    if nr < ZERO_ABS:
        return ConditionResult(cid, {name: 0.0}, 1.0, False, "degenerate: right side vanishes")
    lam = float(np.sum(left * right) / nr ** 2)
    res = tc.norm(left - lam * right) / max(1.0, nl)
    return ConditionResult(cid, {name: lam}, res, res < tol)


def fit_terms(left, basis: dict, cid: str, tol: float = RESIDUAL_TOL) -> ConditionResult:
    """Joint fit left = sum c_k basis_k (column-pivoted QR, minimum norm if rank deficient)."""
    left = np.asarray(left, float)
    if tc.norm(left) < ZERO_ABS and all(tc.norm(b) < ZERO_ABS for b in basis.values()):
        return ConditionResult(cid, {k: 0.0 for k in basis}, 0.0, True, "trivially satisfied")
    fit = linear_fit(left, basis)
    status = "ok"
    if fit.rank < len(basis):
        status = f"rank-deficient basis (rank {fit.rank} of {len(basis)}, minimum-norm coefficients)"
    elif fit.ill_posed:
        status = f"ill-conditioned basis (cond {fit.cond:.2e})"
    return ConditionResult(cid, dict(fit.coefficients), fit.residual, fit.residual < tol, status)


# --------------------------------------------------------------------------
# conditions on a curvature pack

class _Products:
    """Lazily computed derivation actions and Tachibana tensors of one pack."""

    def __init__(self, pack: CurvaturePack):
        self.p = pack
        self._cache = {}

    def __getitem__(self, key):
        if key not in self._cache:
            self._cache[key] = self._compute(key)
        return self._cache[key]

    def _compute(self, key):
        p, f = self.p, self.p.frame
        T = {"R": p.R, "C": p.C, "S": p.S, "S2": p.S2, "g": f.g, "G": p.G}
        op, a, b = key
        if op == "dot":
            return tc.dot(T[a], T[b], f, check=False)
        return tc.tachibana(T[a], T[b])


def pseudo_conditions(pack: CurvaturePack, tol: float = RESIDUAL_TOL):
    """One-coefficient conditions X.Y = L Q(g, Y)."""
    P = _Products(pack)
    out = [
        fit_L(P["dot", "R", "R"], P["Q", "g", "R"], "R.R=L_R Q(g,R)", "L_R", tol),
        fit_L(P["dot", "R", "S"], P["Q", "g", "S"], "R.S=L_S Q(g,S)", "L_S", tol),
    ]
    if pack.C is not None:
        out += [
            fit_L(P["dot", "R", "C"], P["Q", "g", "C"], "R.C=L Q(g,C)", "L", tol),
            fit_L(P["dot", "C", "C"], P["Q", "g", "C"], "C.C=L_C Q(g,C)", "L_C", tol),
            fit_L(P["dot", "C", "R"], P["Q", "g", "R"], "C.R=L Q(g,R)", "L", tol),
            fit_L(P["dot", "C", "S"], P["Q", "g", "S"], "C.S=L Q(g,S)", "L", tol),
        ]
    return out


def fit_two_term(pack: CurvaturePack, tol: float = RESIDUAL_TOL, P=None) -> ConditionResult:
    """R.R = Q(S,R) + L Q(g,C)."""
    P = P or _Products(pack)
    left = P["dot", "R", "R"] - P["Q", "S", "R"]
    if pack.C is None:
        raise tc.DimensionError("needs n >= 4")
    r = fit_L(left, P["Q", "g", "C"], "R.R=Q(S,R)+L Q(g,C)", "L", tol)
    if r.verdict and abs(r.coefficients["L"]) < 1e-10:
        r.status = "R.R=Q(S,R)"
    return r


def fit_ricci_three_term(pack: CurvaturePack, tol: float = RESIDUAL_TOL, P=None) -> ConditionResult:
    """R.S = a3 Q(g,S) + a4 Q(g,S^2) + a5 Q(S,S^2)."""
    P = P or _Products(pack)
    basis = {"alpha3": P["Q", "g", "S"], "alpha4": P["Q", "g", "S2"], "alpha5": P["Q", "S", "S2"]}
    return fit_terms(P["dot", "R", "S"], basis, "R.S=a3 Q(g,S)+a4 Q(g,S2)+a5 Q(S,S2)", tol)


def fit_mixed(pack: CurvaturePack, tol: float = RESIDUAL_TOL, P=None) -> ConditionResult:
    """R.C + C.R = Q(S,C) + a6 Q(g,C)."""
    P = P or _Products(pack)
    left = P["dot", "R", "C"] + P["dot", "C", "R"] - P["Q", "S", "C"]
    return fit_L(left, P["Q", "g", "C"], "R.C+C.R=Q(S,C)+a6 Q(g,C)", "alpha6", tol)


def warped_coefficients(n: int, kappa: float, tau1: float, rho: float, phi: float) -> dict:
    """Closed forms for the warped-product conditions (phi, rho nonzero).

    ``alpha3`` is obtained from the rank-two construction with A = S - tau1 g,
    psi2 = rho/((n-3) phi) and (trA)^2 - trA^2 = (n-1) phi.
    """
    d = n - 2
    out = {
        "alpha2": -rho / (2 * d),
        "alpha6": -(kappa / (n - 1) + (n - 4) * tau1 + rho) / d,
    }
    if phi != 0 and rho != 0:
        out["alpha1"] = ((n - 3) * phi / (d * rho) - (n - 4) * tau1 / d
                         - kappa / (d * (n - 1)) - rho / (2 * d))
    if phi != 0:
        out["alpha3"] = -kappa / (d * (n - 1)) + rho * tau1 ** 2 / (d * phi) - rho / (2 * d)
        # the printed simplification; it disagrees with alpha3 away from special points
        out["alpha3_published"] = ((kappa - 2 * n * tau1 + (n - 3) * (n - 1) * tau1 ** 2) / (d * (n - 1))
                                   - rho / (2 * d))
        out["alpha4"] = (phi - tau1 * rho) / (d * phi)
        out["alpha5"] = rho / (d * phi)
        out["phi1"] = rho / ((n - 3) * phi)
    out["L_C"] = out["alpha2"]
    return out


def warped_conditions(pack: CurvaturePack, inv: WarpedInvariants, rtol: float = 1e-6):
    """The four conditions of the warped-product theorem with closed-form comparison."""
    P = _Products(pack)
    pred = warped_coefficients(pack.n, pack.kappa, inv.tau1, inv.rho, inv.phi)
    two = fit_two_term(pack, P=P)
    two.coefficients = {"alpha1": two.coefficients["L"]}
    cc = fit_L(P["dot", "C", "C"], P["Q", "g", "C"], "C.C=a2 Q(g,C)", "alpha2")
    ric = fit_ricci_three_term(pack, P=P)
    mix = fit_mixed(pack, P=P)
    return [r.compare({k: v for k, v in pred.items() if k in r.coefficients}, rtol)
            for r in (two, cc, ric, mix)]


# --------------------------------------------------------------------------
# Roter spaces

def roter_constants(n: int, kappa: float, phi1: float, mu1: float, eta1: float) -> dict:
    """Constants of the conditions satisfied by R = (phi1/2)S^S + mu1 g^S + (eta1/2) g^g."""
    a1 = kappa + ((n - 2) * mu1 - 1) / phi1
    a2 = (mu1 * kappa + (n - 1) * eta1) / phi1
    L_R = ((n - 2) * (mu1 ** 2 - phi1 * eta1) - mu1) / phi1
    L = L_R + mu1 / phi1
    L_C = L_R + (kappa / (n - 1) - a1) / (n - 2)
    return {"alpha1": a1, "alpha2": a2, "L_R": L_R, "L": L, "L_C": L_C}


def roter_suite(pack: CurvaturePack, phi1: float, mu1: float, eta1: float,
                tol: float = 1e-7) -> list[ConditionResult]:
    """Check every consequence of the Roter form with the predicted constants."""
    n, f, kap = pack.n, pack.frame, pack.kappa
    if abs(phi1) < ZERO_ABS:
        return [ConditionResult("roter", {}, 1.0, False, "degenerate: phi1 = 0")]
    c = roter_constants(n, kap, phi1, mu1, eta1)
    P = _Products(pack)
    g, S, R, C, G = f.g, pack.S, pack.R, pack.C, pack.G
    Q = lambda a, b: P["Q", a, b]
    D = lambda a, b: P["dot", a, b]
    L_R, L, L_C = c["L_R"], c["L"], c["L_C"]
    x = 1.0 / (n - 2)
    checks = [
        ("S2=a1 S+a2 g", pack.S2, c["alpha1"] * S + c["alpha2"] * g),
        ("R.C=L_R Q(g,C)", D("R", "C"), L_R * Q("g", "C")),
        ("R.R=L_R Q(g,R)", D("R", "R"), L_R * Q("g", "R")),
        ("R.S=L_R Q(g,S)", D("R", "S"), L_R * Q("g", "S")),
        ("R.R=Q(S,R)+L Q(g,C)", D("R", "R"), Q("S", "R") + L * Q("g", "C")),
        ("C.C=L_C Q(g,C)", D("C", "C"), L_C * Q("g", "C")),
        ("C.R=L_C Q(g,R)", D("C", "R"), L_C * Q("g", "R")),
        ("C.S=L_C Q(g,S)", D("C", "S"), L_C * Q("g", "S")),
        ("C.R+R.C=Q(S,C)+(L+L_C-1/((n-2)phi1))Q(g,C)", D("C", "R") + D("R", "C"),
         Q("S", "C") + (L + L_C - x / phi1) * Q("g", "C")),
        ("R.C-C.R (Q(g,R), Q(g,g^S) form)", D("R", "C") - D("C", "R"),
         ((mu1 - x) / phi1 + kap / (n - 1)) * Q("g", "R")
         - (mu1 / phi1 * (mu1 - x) - eta1) * tc.tachibana(g, tc.kn(g, S))),
        ("R.C-C.R (Q(., g^S) form)", D("R", "C") - D("C", "R"),
         tc.tachibana((mu1 * kap / (n - 1) + eta1) * g + (x - mu1 - phi1 * kap / (n - 1)) * S,
                      tc.kn(g, S))),
        ("C.R-R.C=Q(S,C)-k/(n-1) Q(g,C)", D("C", "R") - D("R", "C"),
         Q("S", "C") - kap / (n - 1) * Q("g", "C")),
        ("(R-L_R G).(R-L_R G)=0", tc.dot(R - L_R * G, R - L_R * G, f, check=False), 0.0 * D("R", "R")),
        ("(C-L_C G).(C-L_C G)=0", tc.dot(C - L_C * G, C - L_C * G, f, check=False), 0.0 * D("R", "R")),
        ("C=(phi1/(n-2))E", C, phi1 / (n - 2) * pack.E),
        ("Q(S,C) (Q(g,R), Q(g,g^S) form)", Q("S", "C"),
         (x - mu1) / phi1 * Q("g", "R") + x * (L_R - kap / (n - 1)) * tc.tachibana(g, tc.kn(g, S))),
    ]
    out = []
    for cid, lhs, rhs in checks:
        r = tc.residual(lhs, rhs)
        out.append(ConditionResult(cid, {}, r, r < tol, predicted=c))
    return out


def roter_algebra_checks(B, A, frame: tc.PointFrame, phi1: float, mu1: float, eta1: float) -> dict:
    """Residuals of the identities of B = (phi1/2) A^A + mu1 g^A + (eta1/2) g^g, phi1 != 0."""
    n, g = frame.n, frame.g
    RB = tc.ricci(B, frame)
    trA = tc.trace(A, frame)
    c = (n - 2) * (mu1 ** 2 - phi1 * eta1) / phi1
    return {
        "A2": tc.residual(tc.square(A, frame),
                          ((phi1 * trA + (n - 2) * mu1) * A + (mu1 * trA + (n - 1) * eta1) * g - RB) / phi1),
        "B.A": tc.residual(tc.dot(B, A, frame, check=False), tc.tachibana(RB + c * g, A + mu1 / phi1 * g)),
        "B.B": tc.residual(tc.dot(B, B, frame, check=False),
                           tc.tachibana(RB, B) + c * tc.tachibana(g, tc.weyl(B, frame))),
    }


# --------------------------------------------------------------------------
# the rank-two construction

@dataclass
class RankTwoConstruction:
    n: int
    eps: int
    rho: float
    trA: float
    trA2: float
    psi: dict
    beta: dict
    tau: dict
    alpha: dict
    alpha_derivation: dict
    B: np.ndarray
    A: np.ndarray
    frame: tc.PointFrame
    checks: dict


def section5_psis(A, rho: float, eps: int, psi3: float, frame: tc.PointFrame,
                  check_rank: bool = True) -> RankTwoConstruction:
    """Coefficients and tensor B = psi3 g^A^2 + (psi2/2) A^A + psi1 g^A + (psi0/2) g^g.

    ``alpha`` holds the simplified closed forms, ``alpha_derivation`` the
    same coefficients from their defining expressions in psi, beta, tau.
    """
    A = np.asarray(A, float)
    n = frame.n
    g = frame.g
    if n < 4:
        raise tc.DimensionError("needs n >= 4")
    if check_rank:
        s = np.linalg.svd(A, compute_uv=False)
        r = int(np.sum(s > n * 1e-10 * s[0]))
        if r != 2:
            raise ValueError(f"A must have rank 2, got {r}")
    A2 = tc.square(A, frame)
    trA, trA2 = tc.trace(A, frame), tc.trace(A2, frame)
    k = trA ** 2 - trA2
    er = eps * rho
    d = n - 2
    psi2 = d * psi3
    psi1 = 1.0 / d - trA * psi3
    psi0 = (er - trA / d + k * psi3) / (n - 1)
    psi4 = k * psi3 / (n - 1)
    beta1 = -0.5 * k * psi3 + psi0
    beta2 = 0.5 * (trA2 + trA ** 2) * psi3 + trA * psi1 + psi0
    beta3 = -k / (2 * d)
    tau0 = beta2 + psi1 / (d * psi3)
    tau1 = (1 - trA * psi2) / (n - 1)
    tau2 = er / d
    a5 = (n - 3) * psi3
    deriv = {
        "alpha1": tau0 - er,
        "alpha2": psi4 + d * beta3 * psi3,
        "alpha3": rho ** 2 * a5 - 2 * er / d + beta1,
        "alpha4": 1.0 / d - er * a5,
        "alpha5": a5,
    }
    closed = {
        "alpha1": 1.0 / (d * psi2) - d * er / (n - 1) - trA / (d * (n - 1))
                  - (n - 3) / (2 * d * (n - 1)) * k * psi2,
        "alpha2": -(n - 3) / (2 * d * (n - 1)) * k * psi2,
        "alpha3": -(trA + n * er) / (d * (n - 1)) + (n - 3) / d * psi2 * (rho ** 2 - k / (2 * (n - 1))),
        "alpha3_published": (trA - n * er) / (d * (n - 1)) + (n - 3) / d * (rho ** 2 - k / (2 * (n - 1)) * psi2),
        "alpha4": (1 - (n - 3) * er * psi2) / d,
        "alpha5": (n - 3) / d * psi2,
    }
    B = psi3 * tc.kn(g, A2) + 0.5 * psi2 * tc.kn(A, A) + psi1 * tc.kn(g, A) + 0.5 * psi0 * tc.kn(g, g)
    Ric = tc.ricci(B, frame)
    checks = {
        "Ric(B)=A+eps rho g": tc.residual(Ric, A + er * g),
        "Weyl(B)=psi3 E(A)": tc.residual(tc.weyl(B, frame), psi3 * tc.e_tensor(A, frame)),
        "beta1=(n-2) beta3 psi3+psi0": abs(beta1 - (d * beta3 * psi3 + psi0)),
        "beta2=(n-2) beta3 psi3+trA/(n-2)+psi0": abs(beta2 - (d * beta3 * psi3 + trA / d + psi0)),
        "beta2=beta1+trA/(n-2)": abs(beta2 - (beta1 + trA / d)),
        "psi2=(n-2)psi3": abs(psi2 - d * psi3),
        "tau2=eps rho/(n-2)": abs(tau2 - er / d),
    }
    return RankTwoConstruction(
        n=n, eps=eps, rho=rho, trA=trA, trA2=trA2,
        psi={"psi0": psi0, "psi1": psi1, "psi2": psi2, "psi3": psi3, "psi4": psi4},
        beta={"beta1": beta1, "beta2": beta2, "beta3": beta3},
        tau={"tau0": tau0, "tau1": tau1, "tau2": tau2},
        alpha=closed, alpha_derivation=deriv, B=B, A=A, frame=frame, checks=checks,
    )


def rank_two_conditions(s5: RankTwoConstruction, tol: float = 1e-9):
    """Fit the three conditions on B and compare with the coefficient formulas."""
    f = s5.frame
    pack = CurvaturePack(f, s5.B, tc.ricci(s5.B, f), tc.square(tc.ricci(s5.B, f), f),
                         0.0, 0.0, tc.weyl(s5.B, f), None, tc.gtensor(f), None, "rank-two construction")
    P = _Products(pack)
    W = pack.C
    bb = fit_L(P["dot", "R", "R"] - P["Q", "S", "R"], P["Q", "g", "C"], "B.B=Q(Ric,B)+a1 Q(g,W)", "alpha1", tol)
    ww = fit_L(P["dot", "C", "C"], P["Q", "g", "C"], "W.W=a2 Q(g,W)", "alpha2", tol)
    br = fit_terms(P["dot", "R", "S"], {"alpha3": P["Q", "g", "S"], "alpha4": P["Q", "g", "S2"],
                                        "alpha5": P["Q", "S", "S2"]},
                   "B.Ric=a3 Q(g,Ric)+a4 Q(g,Ric2)+a5 Q(Ric,Ric2)", tol)
    del W
    return [bb, ww, br]


# --------------------------------------------------------------------------
# condition lattice

def lattice(pack: CurvaturePack, tol: float = RESIDUAL_TOL) -> list[dict]:
    """Ordered checklist of the pseudosymmetry lattice boxes at a point.

    Rows: R-actions then C-actions; within each, pseudosymmetric,
    semisymmetric, then the corresponding constant-curvature-type box.
    Covariant-derivative boxes are listed as not evaluated.
    """
    P = _Products(pack)
    n, f = pack.n, pack.frame
    out = []

    def box(name, left, right=None):
        if right is None:
            r = tc.norm(left) / max(1.0, tc.norm(left))
            out.append({"box": name, "holds": bool(tc.norm(left) < 1e-9), "residual": r})
        else:
            res = fit_L(left, right, name, tol=tol)
            out.append({"box": name, "holds": bool(res.verdict), "residual": res.residual,
                        "L": res.coefficients["L"]})

    box("R.S = L Q(g,S)", P["dot", "R", "S"], P["Q", "g", "S"])
    box("R.R = L Q(g,R)", P["dot", "R", "R"], P["Q", "g", "R"])
    if pack.C is not None:
        box("R.C = L Q(g,C)", P["dot", "R", "C"], P["Q", "g", "C"])
    box("R.S = 0", P["dot", "R", "S"])
    box("R.R = 0", P["dot", "R", "R"])
    if pack.C is not None:
        box("R.C = 0", P["dot", "R", "C"])
    box("S = (kappa/n) g", pack.S - pack.kappa / n * f.g)
    box("R = kappa/(n(n-1)) G", pack.R - pack.kappa / (n * (n - 1)) * pack.G)
    if pack.C is not None:
        box("C = 0", pack.C)
        box("C.S = L Q(g,S)", P["dot", "C", "S"], P["Q", "g", "S"])
        box("C.R = L Q(g,R)", P["dot", "C", "R"], P["Q", "g", "R"])
        box("C.C = L Q(g,C)", P["dot", "C", "C"], P["Q", "g", "C"])
        box("C.S = 0", P["dot", "C", "S"])
        box("C.R = 0", P["dot", "C", "R"])
        box("C.C = 0", P["dot", "C", "C"])
    for name in ("nabla S = 0", "nabla R = 0", "nabla C = 0"):
        out.append({"box": name, "holds": None, "residual": None, "note": "not evaluated"})
    return out
