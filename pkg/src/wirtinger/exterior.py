"""Small dense skew-symmetric linear algebra.

Metric Gram-Schmidt, the Pfaffian, the block canonical form of a real
skew-symmetric matrix, and a brute-force perfect-matching expansion used as
an independent check of the Pfaffian.

Conventions
-----------
A skew matrix ``omega`` of size ``2m`` has Pfaffian normalised so that
``pfaffian([[0, lam], [-lam, 0]]) == lam``. The canonical form writes
``rotation.T @ omega @ rotation`` as the block diagonal matrix with blocks
``[[0, lam_k], [-lam_k, 0]]``, so ``prod(lambdas) == pfaffian(omega)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .config import TOL
from .errors import (
    BadMetric,
    ConvergenceFailure,
    DimensionMismatch,
    NotSkew,
    OddDimension,
    RankDeficient,
    TooLarge,
)

__all__ = [
    "SkewMatrix",
    "CanonicalForm",
    "as_finite_matrix",
    "check_metric",
    "orthonormalize",
    "pfaffian",
    "pfaffian_scale",
    "skew_canonical",
    "block_matrix",
    "wedge_power_oracle",
    "perfect_matchings",
]

# recursive expansion below this size, Householder reduction above
_EXPANSION_MAX = 8
_ORACLE_MAX = 12


def as_finite_matrix(a, name: str = "matrix") -> np.ndarray:
    """Return ``a`` as a float 2-d array, rejecting NaN and infinities."""
    arr = np.array(a, dtype=float)
    if arr.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


class SkewMatrix:
    """Exactly antisymmetric real matrix of even size.

    Only the strict upper triangle of the input is kept; the lower triangle is
    its exact negation, so ``a + a.T == 0`` holds bit for bit.

    Parameters
    ----------
    a : array_like
        Square matrix. Must be antisymmetric within ``tol`` (relative to its
        largest entry) unless ``symmetrize=True``, in which case the
        antisymmetric part ``(a - a.T) / 2`` is taken.
    """

    __slots__ = ("_a",)

    def __init__(self, a, *, symmetrize: bool = False, tol: float = TOL.algebraic):
        arr = as_finite_matrix(a, "skew matrix")
        n, k = arr.shape
        if n != k:
            raise DimensionMismatch(f"skew matrix must be square, got {arr.shape}")
        if n % 2:
            raise OddDimension(f"skew matrix must have even size, got {n}")
        if symmetrize:
            arr = 0.5 * (arr - arr.T)
        else:
            scale = max(1.0, float(np.abs(arr).max(initial=0.0)))
            if np.abs(arr + arr.T).max(initial=0.0) > tol * scale:
                raise NotSkew("matrix is not antisymmetric")
        upper = np.triu(arr, 1)
        out = upper - upper.T
        out.setflags(write=False)
        self._a = out

    @classmethod
    def from_upper(cls, entries: Sequence[float], n: int) -> "SkewMatrix":
        """Build from the strict upper triangle listed row by row."""
        a = np.zeros((n, n))
        a[np.triu_indices(n, 1)] = entries
        return cls(a - a.T)

    @property
    def array(self) -> np.ndarray:
        return self._a

    @property
    def n(self) -> int:
        return self._a.shape[0]

    @property
    def m(self) -> int:
        return self._a.shape[0] // 2

    def upper(self) -> np.ndarray:
        return self._a[np.triu_indices(self.n, 1)]

    def __array__(self, dtype=None, copy=None):
        a = self._a if dtype is None else self._a.astype(dtype)
        return a.copy() if copy else a

    def __repr__(self) -> str:
        return f"SkewMatrix({self._a.tolist()!r})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, SkewMatrix):
            return NotImplemented
        return np.array_equal(self._a, other._a)

    __hash__ = None


def _skew(omega) -> np.ndarray:
    if isinstance(omega, SkewMatrix):
        return omega.array
    return SkewMatrix(omega).array


def check_metric(metric, dim: int | None = None) -> np.ndarray:
    """Validate a symmetric positive definite metric and return it as an array."""
    g = as_finite_matrix(metric, "metric")
    if g.shape[0] != g.shape[1]:
        raise BadMetric(f"metric must be square, got {g.shape}")
    if dim is not None and g.shape[0] != dim:
        raise DimensionMismatch(f"metric is {g.shape[0]}-dimensional, expected {dim}")
    scale = max(1.0, float(np.abs(g).max()))
    if np.abs(g - g.T).max() > TOL.metric_symmetry * scale:
        raise BadMetric("metric is not symmetric")
    eig = np.linalg.eigvalsh(0.5 * (g + g.T))
    if eig[0] <= TOL.metric_condition * eig[-1] or eig[-1] <= 0:
        raise BadMetric("metric is not positive definite")
    return g


def orthonormalize(basis, metric=None) -> np.ndarray:
    """Orthonormalize an ordered list of vectors in the inner product ``metric``.

    Modified Gram-Schmidt with one re-orthogonalisation pass. The change of
    basis is upper triangular with positive diagonal, so the returned frame
    spans the same subspace with the same orientation.

    Parameters
    ----------
    basis : array_like, shape (k, d)
        Rows are the input vectors, in orientation order.
    metric : array_like, shape (d, d), optional
        Symmetric positive definite Gram matrix of the ambient inner
        product. Defaults to the identity.

    Returns
    -------
    frame : ndarray, shape (k, d)
        Rows are orthonormal with respect to ``metric``.

    Raises
    ------
    RankDeficient
        If ``det(Gram) / prod(|v_i|^2) < 1e-12`` for the Euclidean Gram
        matrix of the input.
    BadMetric
        If ``metric`` is not symmetric positive definite.
    """
    v = as_finite_matrix(basis, "basis")
    k, d = v.shape
    g = np.eye(d) if metric is None else check_metric(metric, d)
    if k == 0:
        return v.copy()

    # rank is metric independent; test it on the Euclidean Gram matrix
    gram = v @ v.T
    norms2 = np.diag(gram)
    if np.any(norms2 <= 0):
        raise RankDeficient("basis contains a zero vector")
    # Hadamard ratio: 1 for orthogonal input, 0 for dependent input
    sign, logdet = np.linalg.slogdet(gram / np.sqrt(np.outer(norms2, norms2)))
    if sign <= 0 or logdet < np.log(TOL.rank):
        raise RankDeficient("basis vectors are linearly dependent")

    e = v.copy()
    for i in range(k):
        for _ in range(2):
            for j in range(i):
                e[i] -= (e[j] @ g @ e[i]) * e[j]
        e[i] /= np.sqrt(e[i] @ g @ e[i])
    return e


def pfaffian_scale(omega) -> float:
    """Upper bound ``sqrt(prod_i |row_i|)`` on ``|pfaffian(omega)|`` (Hadamard)."""
    a = _skew(omega)
    return float(np.sqrt(np.prod(np.linalg.norm(a, axis=1))))


def _pf_expand(a: np.ndarray) -> float:
    n = a.shape[0]
    if n == 0:
        return 1.0
    if n == 2:
        return float(a[0, 1])
    total = 0.0
    rest = np.arange(1, n)
    for idx, j in enumerate(rest):
        if a[0, j] == 0.0:
            continue
        keep = np.delete(rest, idx)
        sub = a[np.ix_(keep, keep)]
        total += (-1) ** idx * a[0, j] * _pf_expand(sub)
    return total


def _pf_householder(a: np.ndarray) -> float:
    a = a.copy()
    n = a.shape[0]
    pf = 1.0
    for k in range(0, n - 2, 2):
        x = a[k + 1 :, k]
        tail = np.linalg.norm(x[1:])
        if tail == 0.0:
            alpha = x[0]
        else:
            alpha = -np.copysign(np.hypot(x[0], tail), x[0])
            v = x.copy()
            v[0] -= alpha
            v /= np.linalg.norm(v)
            # similarity by the reflection I - 2 v v^T on indices k+1..n-1
            sub = a[k + 1 :, k + 1 :]
            w = sub @ v
            sub += 2.0 * (np.outer(v, w) - np.outer(w, v))
            a[k + 1 :, k + 1 :] = sub
            pf = -pf
        if alpha == 0.0:
            return 0.0
        # entry a'[k, k+1] of the reduced matrix is -alpha
        pf *= -alpha
    return pf * a[n - 2, n - 1]


def pfaffian(omega) -> float:
    """Pfaffian of a real skew-symmetric matrix of even size.

    Recursive first-row expansion up to size 8, Householder skew
    tridiagonalisation beyond.

    >>> pfaffian([[0.0, 1.0], [-1.0, 0.0]])
    1.0
    """
    if not isinstance(omega, SkewMatrix):
        arr = np.asarray(omega, dtype=float)
        if arr.ndim == 2 and arr.shape[0] == arr.shape[1] and arr.shape[0] % 2:
            raise OddDimension(f"pfaffian needs an even-sized matrix, got {arr.shape[0]}")
    a = _skew(omega)
    if a.shape[0] <= _EXPANSION_MAX:
        return float(_pf_expand(a))
    return float(_pf_householder(a))


def block_matrix(lambdas: Sequence[float]) -> np.ndarray:
    """Block diagonal skew matrix with blocks ``[[0, lam], [-lam, 0]]``."""
    lam = np.asarray(lambdas, dtype=float)
    m = lam.size
    b = np.zeros((2 * m, 2 * m))
    idx = np.arange(m)
    b[2 * idx, 2 * idx + 1] = lam
    b[2 * idx + 1, 2 * idx] = -lam
    return b


@dataclass(frozen=True)
class CanonicalForm:
    """``rotation.T @ omega @ rotation == block_matrix(lambdas)``, ``det(rotation) = +1``."""

    rotation: np.ndarray
    lambdas: np.ndarray

    @property
    def blocks(self) -> np.ndarray:
        return block_matrix(self.lambdas)

    def reconstruct(self) -> np.ndarray:
        return self.rotation @ self.blocks @ self.rotation.T


def _orth_against(x: np.ndarray, basis: list[np.ndarray]) -> np.ndarray:
    for _ in range(2):
        for b in basis:
            x = x - (b @ x) * b
    return x


def skew_canonical(omega) -> CanonicalForm:
    """Block canonical form of a real skew-symmetric matrix.

    The invariant planes come from the symmetric eigenproblem of
    ``-omega @ omega`` (eigenvalues ``lam_k**2`` in pairs). For each unit
    ``u`` taken in order of decreasing eigenvalue, the plane partner is
    ``-omega @ u / |omega @ u|``; the signed ``lam_k`` is then read off as
    ``omega`` evaluated on the chosen pair. Blocks are sorted by decreasing
    ``|lam_k|`` (non-negative first among ties), and the last block is
    flipped if needed to make ``det(rotation) = +1``.
    """
    a = _skew(omega)
    n = a.shape[0]
    m = n // 2
    if n == 0:
        return CanonicalForm(np.eye(0), np.zeros(0))
    scale = float(np.abs(a).max())
    try:
        mu, vecs = np.linalg.eigh(a.T @ a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    if not np.all(np.isfinite(mu)):
        raise ConvergenceFailure("eigensolver returned non-finite values")

    chosen: list[np.ndarray] = []
    planes: list[tuple[np.ndarray, np.ndarray]] = []
    zero = 1e-13 * max(scale, 1e-300)
    for i in np.argsort(mu)[::-1]:
        if len(planes) == m:
            break
        u = _orth_against(vecs[:, i], chosen)
        nu = np.linalg.norm(u)
        if nu < 0.5:
            continue
        u /= nu
        w = -(a @ u)
        nw = np.linalg.norm(w)
        if nw <= zero:
            break
        w = _orth_against(w / nw, chosen + [u])
        w /= np.linalg.norm(w)
        chosen += [u, w]
        planes.append((u, w))

    if len(planes) < m:
        # kernel of omega: complete to an orthonormal basis and pair arbitrarily
        rest = []
        for i in np.argsort(mu):
            x = _orth_against(vecs[:, i], chosen + rest)
            nx = np.linalg.norm(x)
            if nx >= 0.5:
                rest.append(x / nx)
            if len(chosen) + len(rest) == n:
                break
        if len(chosen) + len(rest) < n:
            raise ConvergenceFailure("could not complete an orthonormal basis")
        planes += [(rest[2 * j], rest[2 * j + 1]) for j in range(len(rest) // 2)]

    rot = np.column_stack([c for pair in planes for c in pair])
    lam = np.array([u @ a @ w for u, w in planes])
    order = sorted(range(m), key=lambda k: (-abs(lam[k]), lam[k] < 0))
    cols = [c for k in order for c in (2 * k, 2 * k + 1)]
    rot = rot[:, cols]
    lam = lam[order]

    if np.linalg.det(rot) < 0:
        j = 2 * (m - 1)
        if lam[-1] != 0.0:
            rot[:, [j, j + 1]] = rot[:, [j + 1, j]]
            lam[-1] = -lam[-1]
        else:
            rot[:, j + 1] = -rot[:, j + 1]
    rot.setflags(write=False)
    lam.setflags(write=False)
    return CanonicalForm(rot, lam)


@lru_cache(maxsize=None)
def perfect_matchings(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All perfect matchings of ``{0..n-1}`` with permutation signs.

    Each matching ``{(i_1, j_1), ..., (i_m, j_m)}`` with ``i_k < j_k`` and
    ``i_1 < i_2 < ...`` is read as the permutation
    ``(i_1 j_1 i_2 j_2 ...)``; its sign is computed by counting inversions.

    Returns ``(rows, cols, signs)`` with ``rows, cols`` of shape
    ``(count, m)``.
    """
    if n % 2:
        raise OddDimension(f"no perfect matchings on {n} points")

    def gen(points: tuple[int, ...]):
        if not points:
            yield ()
            return
        first, others = points[0], points[1:]
        for idx, partner in enumerate(others):
            remaining = others[:idx] + others[idx + 1 :]
            for tail in gen(remaining):
                yield ((first, partner),) + tail

    rows, cols, signs = [], [], []
    for matching in gen(tuple(range(n))):
        perm = [p for pair in matching for p in pair]
        inversions = sum(
            1 for x in range(n) for y in range(x + 1, n) if perm[x] > perm[y]
        )
        rows.append([p[0] for p in matching])
        cols.append([p[1] for p in matching])
        signs.append(-1.0 if inversions % 2 else 1.0)
    m = n // 2
    out = (
        np.array(rows, dtype=np.intp).reshape(-1, m),
        np.array(cols, dtype=np.intp).reshape(-1, m),
        np.array(signs),
    )
    for arr in out:
        arr.setflags(write=False)
    return out


def wedge_power_oracle(omega) -> float:
    """Coefficient of ``omega^m / m!`` on ``theta^1 ^ ... ^ theta^2m``.

    Evaluated by brute-force summation over all ``(2m-1)!!`` perfect
    matchings. Exponential cost, so sizes are capped at 12.
    """
    a = _skew(omega)
    n = a.shape[0]
    if n > _ORACLE_MAX:
        raise TooLarge(f"matching expansion limited to n <= {_ORACLE_MAX}, got {n}")
    if n == 0:
        return 1.0
    rows, cols, signs = perfect_matchings(n)
    terms = np.prod(a[rows, cols], axis=1)
    return float(np.sum(signs * terms))
