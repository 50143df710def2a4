"""Kähler angle of an oriented subspace.

For an oriented ``2m``-dimensional subspace ``W`` of an almost-Hermitian
vector space, pull the Kähler form back to an oriented orthonormal frame of
``W``. The resulting skew matrix ``Omega`` has Pfaffian equal to
``omega^m|_W / (m! vol_W)``; this number is ``cos(alpha)``, the Kähler
function, and ``|cos(alpha)| <= 1`` is Wirtinger's inequality. The block
entries ``lambda_k`` of the canonical form of ``Omega`` are the principal
Kähler cosines, with ``cos(alpha) = lambda_1 ... lambda_m``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .config import TOL
from .errors import DimensionMismatch, OddDimension, RankDeficient
from .exterior import SkewMatrix, as_finite_matrix, orthonormalize, pfaffian, skew_canonical
from .structures import CompatibleStructure

__all__ = [
    "Classification",
    "OrientedSubspace",
    "AngleReport",
    "WirtingerCheck",
    "pullback_form",
    "kahler_function",
    "principal_angles",
    "classify",
    "complexity_residual",
    "angle_report",
    "verify_wirtinger",
    "complex_subspace",
]


class Classification(str, Enum):
    COMPLEX = "complex"
    ANTI_COMPLEX = "anti-complex"
    ISOTROPIC = "isotropic"
    GENERIC = "generic"

    def __str__(self) -> str:
        return self.value


class OrientedSubspace:
    """Ordered spanning vectors of a ``2m``-dimensional subspace.

    The order of ``vectors`` (rows) fixes the orientation.
    """

    __slots__ = ("_v",)

    def __init__(self, vectors):
        v = as_finite_matrix(vectors, "subspace vectors")
        k, d = v.shape
        if k == 0 or k % 2:
            raise OddDimension(f"subspace needs an even positive number of vectors, got {k}")
        if k > d:
            raise RankDeficient(f"{k} vectors cannot be independent in dimension {d}")
        v.setflags(write=False)
        self._v = v
        orthonormalize(v)  # rank check under the Euclidean product

    @property
    def vectors(self) -> np.ndarray:
        return self._v

    @property
    def ambient_dim(self) -> int:
        return self._v.shape[1]

    @property
    def dim(self) -> int:
        return self._v.shape[0]

    @property
    def m(self) -> int:
        return self._v.shape[0] // 2

    def reversed(self) -> "OrientedSubspace":
        """Same subspace, opposite orientation (first two vectors swapped)."""
        v = self._v.copy()
        v[[0, 1]] = v[[1, 0]]
        return OrientedSubspace(v)

    def __repr__(self) -> str:
        return f"OrientedSubspace({self._v.tolist()!r})"


def _as_subspace(w) -> OrientedSubspace:
    return w if isinstance(w, OrientedSubspace) else OrientedSubspace(w)


def _check_pair(s: CompatibleStructure, w: OrientedSubspace) -> None:
    if w.ambient_dim != s.dim:
        raise DimensionMismatch(
            f"subspace lives in dimension {w.ambient_dim}, structure in {s.dim}"
        )
    if s.support is not None:
        # component of W outside the support, relative to the vector sizes
        b = s.support
        v = w.vectors
        outside = v - (v @ s.metric @ b) @ b.T
        rel = np.linalg.norm(outside, axis=1) / np.linalg.norm(v, axis=1)
        if rel.max() > TOL.support:
            raise DimensionMismatch("subspace is not contained in the structure's support")


def pullback_form(s: CompatibleStructure, w) -> tuple[np.ndarray, SkewMatrix]:
    """Oriented orthonormal frame of ``w`` and ``Omega_ij = omega(e_i, e_j)``.

    Returns ``(frame, omega)`` with ``frame`` rows G-orthonormal and
    ``omega`` exactly antisymmetric (symmetrised by averaging).
    """
    w = _as_subspace(w)
    _check_pair(s, w)
    e = orthonormalize(w.vectors, s.metric)
    om = (e @ s.jop.T) @ s.metric @ e.T
    return e, SkewMatrix(om, symmetrize=True)


def kahler_function(s: CompatibleStructure, w) -> float:
    """``cos(alpha) = omega^m|_W / (m! vol_W)``, i.e. the Pfaffian of the pulled-back form."""
    return pfaffian(pullback_form(s, w)[1])


def principal_angles(s: CompatibleStructure, w) -> np.ndarray:
    """Principal Kähler cosines ``lambda_k`` (signed, decreasing ``|lambda_k|``)."""
    return np.array(skew_canonical(pullback_form(s, w)[1]).lambdas)


def classify(cos_alpha: float, lambdas=None, omega=None, tol: float = TOL.classify) -> Classification:
    """Label a point from its Kähler function value.

    ``complex`` if ``cos_alpha >= 1 - tol``, ``anti-complex`` if
    ``cos_alpha <= -1 + tol``, ``isotropic`` if the pulled-back form vanishes
    (``max|Omega| <= tol``; falls back to ``max|lambda_k| <= tol`` when
    ``omega`` is not given), else ``generic``. Note ``cos_alpha = 0`` alone
    does not make a subspace isotropic once ``m > 1``.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if cos_alpha >= 1.0 - tol:
        return Classification.COMPLEX
    if cos_alpha <= -1.0 + tol:
        return Classification.ANTI_COMPLEX
    if omega is not None:
        size = float(np.abs(np.asarray(omega, dtype=float)).max(initial=0.0))
    elif lambdas is not None:
        size = float(np.abs(np.asarray(lambdas, dtype=float)).max(initial=0.0))
    else:
        size = math.inf
    if size <= tol:
        return Classification.ISOTROPIC
    return Classification.GENERIC


def complexity_residual(s: CompatibleStructure, frame: np.ndarray) -> float:
    """``|| (I - P_W) J P_W ||`` in the metric operator norm.

    ``frame`` rows are a G-orthonormal basis of ``W``. Zero iff ``J W = W``.
    """
    e = frame.T
    je = s.jop @ e
    normal = je - e @ (e.T @ s.metric @ je)
    chol = np.linalg.cholesky(s.metric)
    return float(np.linalg.norm(chol.T @ normal, 2))


@dataclass(frozen=True)
class AngleReport:
    """Kähler angle data at one oriented subspace.

    ``cos_alpha`` is the raw (unclamped) Kähler function; ``alpha`` is
    ``arccos`` of its clamp to ``[-1, 1]``.
    """

    cos_alpha: float
    alpha: float
    lambdas: tuple[float, ...]
    classification: Classification
    complexity_residual: float

    def as_dict(self) -> dict:
        return {
            "cos_alpha": self.cos_alpha,
            "alpha": self.alpha,
            "lambdas": list(self.lambdas),
            "classification": self.classification.value,
            "complexity_residual": self.complexity_residual,
        }


def angle_report(s: CompatibleStructure, w, tol: float = TOL.classify) -> AngleReport:
    frame, om = pullback_form(s, w)
    cos_alpha = pfaffian(om)
    lam = skew_canonical(om).lambdas
    alpha = math.acos(min(1.0, max(-1.0, cos_alpha)))
    label = classify(cos_alpha, lam, om.array, tol)
    rho = complexity_residual(s, frame)
    return AngleReport(cos_alpha, alpha, tuple(float(x) for x in lam), label, rho)


@dataclass(frozen=True)
class WirtingerCheck:
    """Outcome of checking Wirtinger's inequality on one subspace.

    ``bound_margin = 1 - |cos_alpha|`` must be ``>= -1e-9``. The equality
    clause is consistent when a vanishing complexity residual
    (``<= 1e-8``) comes with ``|cos_alpha| >= 1 - 1e-6``.
    """

    cos_alpha: float
    bound_margin: float
    complexity_residual: float
    bound_ok: bool
    equality_consistent: bool

    @property
    def ok(self) -> bool:
        return self.bound_ok and self.equality_consistent

    def as_dict(self) -> dict:
        return {
            "cos_alpha": self.cos_alpha,
            "bound_margin": self.bound_margin,
            "complexity_residual": self.complexity_residual,
            "bound_ok": self.bound_ok,
            "equality_consistent": self.equality_consistent,
        }


def verify_wirtinger(s: CompatibleStructure, w) -> WirtingerCheck:
    frame, om = pullback_form(s, w)
    c = pfaffian(om)
    margin = 1.0 - abs(c)
    rho = complexity_residual(s, frame)
    consistent = not (rho <= TOL.equality_residual and abs(c) < 1.0 - TOL.equality_cos)
    return WirtingerCheck(c, margin, rho, margin >= -TOL.bound, consistent)


def complex_subspace(s: CompatibleStructure, vectors) -> OrientedSubspace:
    """J-invariant subspace ``span{v1, J v1, v2, J v2, ...}`` with the J-induced orientation.

    Each ``v_k`` is first made G-orthogonal to the complex span of its
    predecessors, then normalised.
    """
    v = as_finite_matrix(vectors, "vectors")
    frame: list[np.ndarray] = []
    g = s.metric
    for x in v:
        for _ in range(2):
            for e in frame:
                x = x - (e @ g @ x) * e
        nx = math.sqrt(x @ g @ x)
        if nx == 0.0:
            raise RankDeficient("vectors are complex-linearly dependent")
        x = x / nx
        jx = s.jop @ x
        frame += [x, jx / math.sqrt(jx @ g @ jx)]
    return OrientedSubspace(np.array(frame))
