"""Pointwise tensor algebra on dense component arrays.

Index conventions: a (0,4) tensor ``T[h, i, j, k]``; a (0,6) tensor
``T[h, i, j, k, l, m]`` whose last pair (l, m) is the antisymmetric
"action" pair produced by derivations and Tachibana tensors.

    (A ^ F)_hijk = A_hk F_ij + A_ij F_hk - A_hj F_ik - A_ik F_hj
    Q(A,F)_hijk  = A_hj F_ik + A_ij F_hk - A_hk F_ij - A_ik F_hj
    (B.A)_hklm   = g^rs (A_rk B_shlm + A_hr B_sklm)

so that G = (1/2) g ^ g has G_hijk = g_hk g_ij - g_hj g_ik and the unit
sphere has positive scalar curvature.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "MAX_DIM", "PointFrame", "frame_from_metric",
    "kn", "kn6", "tachibana", "dot", "ricci", "trace", "square", "scalar",
    "weyl", "ricci_weyl", "e_tensor", "gtensor", "norm", "residual",
    "curvature_symmetry_error", "is_generalized_curvature", "last_pair_antisymmetry_error",
    "random_frame", "random_sym", "random_rank2", "random_curvature", "project_curvature",
    "dim2_toolbox", "DimensionError", "SymmetryError",
]

MAX_DIM = 8


class DimensionError(ValueError):
    pass


class SymmetryError(ValueError):
    pass


@dataclass(frozen=True)
class PointFrame:
    g: np.ndarray
    g_inv: np.ndarray
    signature: tuple

    @property
    def n(self) -> int:
        return self.g.shape[0]


def frame_from_metric(g) -> PointFrame:
    g = np.asarray(g, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise DimensionError("metric must be a square matrix")
    n = g.shape[0]
    if n > MAX_DIM:
        raise DimensionError(f"dimension {n} exceeds the supported maximum {MAX_DIM}")
    g = 0.5 * (g + g.T)
    g_inv = np.linalg.inv(g)
    g_inv = 0.5 * (g_inv + g_inv.T)
    eig = np.linalg.eigvalsh(g)
    if np.any(eig == 0):
        raise np.linalg.LinAlgError("degenerate metric")
    signature = tuple(sorted(int(np.sign(e)) for e in eig))
    return PointFrame(g, g_inv, signature)


def _check_same(*arrays):
    n = arrays[0].shape[0]
    for a in arrays:
        if any(s != n for s in a.shape):
            raise DimensionError("dimension mismatch")
    if n > MAX_DIM:
        raise DimensionError(f"dimension {n} exceeds the supported maximum {MAX_DIM}")


def kn(A, F) -> np.ndarray:
    """Kulkarni-Nomizu product of two symmetric (0,2)-tensors."""
    A, F = np.asarray(A, float), np.asarray(F, float)
    _check_same(A, F)
    return (np.einsum("hk,ij->hijk", A, F) + np.einsum("ij,hk->hijk", A, F)
            - np.einsum("hj,ik->hijk", A, F) - np.einsum("ik,hj->hijk", A, F))


def kn6(A, T) -> np.ndarray:
    """A ^ T for a (0,4)-tensor T, giving a (0,6)-tensor (as in A ^ Q(B, F))."""
    A, T = np.asarray(A, float), np.asarray(T, float)
    _check_same(A, T)
    return (np.einsum("hk,ijlm->hijklm", A, T) + np.einsum("ij,hklm->hijklm", A, T)
            - np.einsum("hj,iklm->hijklm", A, T) - np.einsum("ik,hjlm->hijklm", A, T))


def tachibana(A, T) -> np.ndarray:
    """Tachibana tensor Q(A, T) for a symmetric A and a (0,2) or (0,4) tensor T."""
    A, T = np.asarray(A, float), np.asarray(T, float)
    _check_same(A, T)
    if T.ndim == 2:
        return (np.einsum("hj,ik->hijk", A, T) + np.einsum("ij,hk->hijk", A, T)
                - np.einsum("hk,ij->hijk", A, T) - np.einsum("ik,hj->hijk", A, T))
    if T.ndim == 4:
        X = (np.einsum("hl,mijk->hijklm", A, T) + np.einsum("il,hmjk->hijklm", A, T)
             + np.einsum("jl,himk->hijklm", A, T) + np.einsum("kl,hijm->hijklm", A, T))
        return X - X.swapaxes(4, 5)
    raise DimensionError("T must be a (0,2) or (0,4) tensor")


def curvature_symmetry_error(B) -> float:
    """Largest violation of the generalized-curvature symmetries, relative to |B|."""
    B = np.asarray(B, float)
    scale = max(norm(B), 1e-300)
    errs = [
        B + B.transpose(1, 0, 2, 3),
        B + B.transpose(0, 1, 3, 2),
        B - B.transpose(2, 3, 0, 1),
        B + B.transpose(0, 2, 3, 1) + B.transpose(0, 3, 1, 2),
    ]
    return max(norm(e) for e in errs) / scale if norm(B) > 0 else 0.0


def is_generalized_curvature(B, tol: float = 1e-10) -> bool:
    return curvature_symmetry_error(B) <= tol


def last_pair_antisymmetry_error(T) -> float:
    T = np.asarray(T, float)
    return norm(T + np.swapaxes(T, -1, -2))


def dot(B, T, frame: PointFrame, check: bool = True) -> np.ndarray:
    """Derivation action B.T of a generalized curvature tensor on a (0,2) or (0,4) tensor."""
    B, T = np.asarray(B, float), np.asarray(T, float)
    _check_same(B, T, frame.g)
    if check and not is_generalized_curvature(B, 1e-8):
        raise SymmetryError("B is not a generalized curvature tensor")
    Bup = np.einsum("rs,shlm->rhlm", frame.g_inv, B)
    if T.ndim == 2:
        return np.einsum("rk,rhlm->hklm", T, Bup) + np.einsum("hr,rklm->hklm", T, Bup)
    if T.ndim == 4:
        return (np.einsum("rijk,rhlm->hijklm", T, Bup) + np.einsum("hrjk,rilm->hijklm", T, Bup)
                + np.einsum("hirk,rjlm->hijklm", T, Bup) + np.einsum("hijr,rklm->hijklm", T, Bup))
    raise DimensionError("T must be a (0,2) or (0,4) tensor")


def ricci(B, frame: PointFrame) -> np.ndarray:
    """Ric(B)_ij = g^hk B_hijk."""
    S = np.einsum("hk,hijk->ij", frame.g_inv, np.asarray(B, float))
    return 0.5 * (S + S.T)


def trace(A, frame: PointFrame) -> float:
    return float(np.einsum("ij,ij->", frame.g_inv, A))


def square(A, frame: PointFrame) -> np.ndarray:
    """A^2_ij = A_ir g^rs A_sj."""
    A = np.asarray(A, float)
    out = A @ frame.g_inv @ A
    return 0.5 * (out + out.T)


scalar = trace


def gtensor(frame: PointFrame) -> np.ndarray:
    """G = (1/2) g ^ g."""
    return 0.5 * kn(frame.g, frame.g)


def weyl(B, frame: PointFrame) -> np.ndarray:
    n = frame.n
    if n < 4:
        raise DimensionError("Weyl tensor requested for n < 4")
    S = ricci(B, frame)
    kappa = trace(S, frame)
    g = frame.g
    return B - kn(g, S) / (n - 2) + kappa / (2 * (n - 2) * (n - 1)) * kn(g, g)


def ricci_weyl(B, frame: PointFrame):
    """(Ric(B), kappa(B), Weyl(B))."""
    if frame.n < 3:
        raise DimensionError("requires n >= 3")
    S = ricci(B, frame)
    return S, trace(S, frame), weyl(B, frame)


def e_tensor(A, frame: PointFrame) -> np.ndarray:
    """E(A) = g^A^2 + ((n-2)/2) A^A - tr(A) g^A + ((trA)^2 - trA^2)/(2(n-1)) g^g."""
    n = frame.n
    if n < 4:
        raise DimensionError("E-tensor requested for n < 4")
    g = frame.g
    A = np.asarray(A, float)
    A2 = square(A, frame)
    trA, trA2 = trace(A, frame), trace(A2, frame)
    return (kn(g, A2) + 0.5 * (n - 2) * kn(A, A) - trA * kn(g, A)
            + (trA ** 2 - trA2) / (2 * (n - 1)) * kn(g, g))


def norm(T) -> float:
    return float(np.sqrt(np.sum(np.square(T))))


def residual(lhs, rhs) -> float:
    """||L - R|| / max(1, ||L||, ||R||), Frobenius over raw components."""
    lhs, rhs = np.asarray(lhs, float), np.asarray(rhs, float)
    return norm(lhs - rhs) / max(1.0, norm(lhs), norm(rhs))


# --------------------------------------------------------------------------
# random fixtures

def random_frame(n: int, rng: np.random.Generator, negatives: int | None = None) -> PointFrame:
    """Random well-conditioned metric with the given number of negative directions."""
    if negatives is None:
        negatives = int(rng.integers(0, 2))
    signs = np.array([-1.0] * negatives + [1.0] * (n - negatives))
    while True:
        P = np.eye(n) + 0.4 * rng.uniform(-1, 1, (n, n))
        if np.linalg.cond(P) < 8:
            break
    g = P.T @ np.diag(signs) @ P
    return frame_from_metric(g)


def random_sym(n: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    M = rng.uniform(-scale, scale, (n, n))
    return 0.5 * (M + M.T)


def random_rank2(n: int, rng: np.random.Generator, sign: float | None = None) -> np.ndarray:
    """u (x) u +- v (x) v with u, v not nearly parallel."""
    if sign is None:
        sign = 1.0 if rng.uniform() < 0.5 else -1.0
    while True:
        u, v = rng.uniform(-1, 1, n), rng.uniform(-1, 1, n)
        c = abs(u @ v) / (np.linalg.norm(u) * np.linalg.norm(v))
        if c <= 0.99:
            return np.outer(u, u) + sign * np.outer(v, v)


def project_curvature(T) -> np.ndarray:
    """Orthogonal projection of an n^4 array onto generalized curvature tensors."""
    T = np.asarray(T, float)
    T = 0.5 * (T - T.transpose(1, 0, 2, 3))
    T = 0.5 * (T - T.transpose(0, 1, 3, 2))
    T = 0.5 * (T + T.transpose(2, 3, 0, 1))
    bianchi = (T + T.transpose(0, 2, 3, 1) + T.transpose(0, 3, 1, 2)) / 3.0
    return T - bianchi


def random_curvature(n: int, rng: np.random.Generator) -> np.ndarray:
    return project_curvature(rng.uniform(-1, 1, (n, n, n, n)))


# --------------------------------------------------------------------------
# two-dimensional identities

def dim2_toolbox(A, frame: PointFrame) -> dict:
    """Reductions valid for symmetric A on a 2-dimensional frame.

    Returns the quantities and the residual of each identity:
    ``square``: A^2 = tr(A) A - (k/2) g, with k = (trA)^2 - trA^2;
    ``wedge_square``: A_ad A_bc - A_ac A_bd = (k/2)(g_ad g_bc - g_ac g_bd);
    ``g_wedge``: g_ad A_bc + g_bc A_ad - g_ac A_bd - g_bd A_ac = tr(A)(g_ad g_bc - g_ac g_bd).
    """
    if frame.n != 2:
        raise DimensionError("the 2D toolbox needs n = 2")
    A = np.asarray(A, float)
    g = frame.g
    A2 = square(A, frame)
    trA, trA2 = trace(A, frame), trace(A2, frame)
    k = trA ** 2 - trA2
    G = gtensor(frame)
    return {
        "trA": trA,
        "trA2": trA2,
        "kappa_T": k,
        "A2": A2,
        "square": residual(A2, trA * A - 0.5 * k * g),
        "wedge_square": residual(0.5 * kn(A, A), 0.5 * k * G),
        "g_wedge": residual(kn(g, A), trA * G),
    }
