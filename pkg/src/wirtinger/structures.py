"""Compatible (metric, almost complex structure) pairs and the torsion test.

A :class:`CompatibleStructure` is the pointwise data: a symmetric positive
definite metric ``G`` and an operator ``J`` with ``J @ J = -I`` and
``J.T @ G @ J = G``. Its Kähler form is ``omega(u, v) = <J u, v>``.

Some ambients are only almost-Hermitian on a subspace (the tangent space of
the six-sphere seen inside R^7). Those carry a ``support``: a basis of the
subspace on which the invariants are required to hold.

Octonion convention
-------------------
Imaginary units ``e1..e7`` multiply by the triples

    (1,2,3) (1,4,5) (1,7,6) (2,4,6) (2,5,7) (3,4,7) (3,6,5)

meaning ``e_i e_j = e_k`` for each triple ``(i, j, k)`` and its cyclic shifts,
with ``e_j e_i = -e_k``. The cross product on R^7 is the imaginary part of
the octonion product.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .config import TOL
from .errors import (
    ChartDomain,
    DimensionMismatch,
    IncompatibleStructure,
    NotUnit,
    StepTooLarge,
    UnknownCatalogEntry,
)
from .exterior import as_finite_matrix, check_metric

__all__ = [
    "CompatibleStructure",
    "StructureField",
    "StructureDiagnostics",
    "OCTONION_TRIPLES",
    "cross7",
    "cross_matrix",
    "standard_structure",
    "random_compatible",
    "kahler_form",
    "s6_structure",
    "sphere_frame",
    "chart_field",
    "nijenhuis",
    "validate",
]

OCTONION_TRIPLES: tuple[tuple[int, int, int], ...] = (
    (1, 2, 3),
    (1, 4, 5),
    (1, 7, 6),
    (2, 4, 6),
    (2, 5, 7),
    (3, 4, 7),
    (3, 6, 5),
)


def _structure_constants() -> np.ndarray:
    # c[i, j, k]: coefficient of e_k in e_i x e_j (0-based)
    c = np.zeros((7, 7, 7))
    for t in OCTONION_TRIPLES:
        i, j, k = (x - 1 for x in t)
        for a, b, d in ((i, j, k), (j, k, i), (k, i, j)):
            c[a, b, d] = 1.0
            c[b, a, d] = -1.0
    c.setflags(write=False)
    return c


_CROSS = _structure_constants()


def cross7(u, v) -> np.ndarray:
    """Seven-dimensional cross product from the octonion table."""
    return np.einsum("i,j,ijk->k", np.asarray(u, float), np.asarray(v, float), _CROSS)


def cross_matrix(p) -> np.ndarray:
    """Matrix of ``v -> p x v``."""
    return np.einsum("i,ijk->kj", np.asarray(p, float), _CROSS)


@dataclass(frozen=True)
class StructureDiagnostics:
    """Residuals of the compatibility conditions.

    ``jsquare`` is the max entry of ``J^2 + I``, ``compatibility`` of
    ``J^T G J - G``, ``symmetry`` of ``G - G^T`` (all on the support when
    one is set). ``eig_min``/``eig_max`` are the metric's extremal eigenvalues.
    """

    jsquare: float
    compatibility: float
    symmetry: float
    eig_min: float
    eig_max: float
    passed: bool

    def as_dict(self) -> dict:
        return {
            "jsquare_residual": self.jsquare,
            "compatibility_residual": self.compatibility,
            "symmetry_residual": self.symmetry,
            "metric_eig_min": self.eig_min,
            "metric_eig_max": self.eig_max,
            "passed": self.passed,
        }


def _diagnose(metric: np.ndarray, jop: np.ndarray, support: np.ndarray | None) -> StructureDiagnostics:
    g, j = metric, jop
    sym = float(np.abs(g - g.T).max(initial=0.0))
    eig = np.linalg.eigvalsh(0.5 * (g + g.T))
    if support is None:
        jr, gr = j, g
    else:
        # support columns are G-orthonormal; coordinates of J restricted to them
        b = support
        gb = b.T @ g
        jr = gb @ j @ b
        gr = gb @ b
    k = jr.shape[0]
    jsq = float(np.abs(jr @ jr + np.eye(k)).max(initial=0.0))
    comp = float(np.abs(jr.T @ gr @ jr - gr).max(initial=0.0))
    eig_min, eig_max = float(eig[0]), float(eig[-1])
    scale = max(1.0, float(np.abs(g).max(initial=0.0)))
    passed = (
        jsq <= TOL.jsquare
        and comp <= TOL.compatibility * scale
        and sym <= TOL.metric_symmetry * scale
        and eig_max > 0
        and eig_min > TOL.metric_condition * eig_max
        and k % 2 == 0
    )
    return StructureDiagnostics(jsq, comp, sym, eig_min, eig_max, bool(passed))


@dataclass(frozen=True, eq=False)
class CompatibleStructure:
    """Metric ``G`` and almost complex operator ``J`` at a point.

    Invariants (checked at construction unless ``check=False``):
    ``J^2 = -I`` and ``J^T G J = G`` within 1e-10, ``G`` symmetric within
    1e-12 with ``eig_min > 1e-10 * eig_max``. With a ``support`` (columns
    G-orthonormal, J-invariant) the two J conditions are required on that
    subspace only.
    """

    metric: np.ndarray
    jop: np.ndarray
    support: np.ndarray | None = None
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        g = as_finite_matrix(self.metric, "metric")
        j = as_finite_matrix(self.jop, "J")
        if g.shape != j.shape or g.shape[0] != g.shape[1]:
            raise DimensionMismatch(f"metric {g.shape} and J {j.shape} must be equal squares")
        sup = None
        if self.support is not None:
            sup = as_finite_matrix(self.support, "support")
            if sup.shape[0] != g.shape[0]:
                raise DimensionMismatch("support basis has wrong ambient dimension")
            sup.setflags(write=False)
        g.setflags(write=False)
        j.setflags(write=False)
        object.__setattr__(self, "metric", g)
        object.__setattr__(self, "jop", j)
        object.__setattr__(self, "support", sup)
        if self.check:
            if sup is None and g.shape[0] % 2:
                raise IncompatibleStructure("almost complex structures need even dimension")
            d = _diagnose(g, j, sup)
            if not d.passed:
                raise IncompatibleStructure(
                    f"invalid compatible structure: |J^2+I|={d.jsquare:.3g}, "
                    f"|J^T G J - G|={d.compatibility:.3g}, |G-G^T|={d.symmetry:.3g}, "
                    f"metric eigenvalues [{d.eig_min:.3g}, {d.eig_max:.3g}]"
                )

    @property
    def dim(self) -> int:
        return self.metric.shape[0]

    @property
    def complex_dim(self) -> int:
        k = self.dim if self.support is None else self.support.shape[1]
        return k // 2

    def omega(self) -> np.ndarray:
        """Matrix of the Kähler form: ``omega(u, v) = u @ W @ v``."""
        return self.jop.T @ self.metric

    def __eq__(self, other):
        if not isinstance(other, CompatibleStructure):
            return NotImplemented
        same_support = (self.support is None and other.support is None) or (
            self.support is not None
            and other.support is not None
            and np.array_equal(self.support, other.support)
        )
        return (
            np.array_equal(self.metric, other.metric)
            and np.array_equal(self.jop, other.jop)
            and same_support
        )

    __hash__ = None


def validate(s: CompatibleStructure) -> StructureDiagnostics:
    """Diagnostic record for a (possibly invalid) structure. Never raises."""
    return _diagnose(s.metric, s.jop, s.support)


def _standard_j(n: int) -> np.ndarray:
    j = np.zeros((2 * n, 2 * n))
    for k in range(n):
        j[2 * k + 1, 2 * k] = 1.0
        j[2 * k, 2 * k + 1] = -1.0
    return j


def standard_structure(n: int) -> CompatibleStructure:
    """Flat C^n: identity metric, ``J e_{2k-1} = e_{2k}``, ``J e_{2k} = -e_{2k-1}``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return CompatibleStructure(np.eye(2 * n), _standard_j(n))


_MAX_COND = 100.0


def random_compatible(n: int, seed: int | np.random.Generator) -> CompatibleStructure:
    """Random compatible pair ``G = A^T A``, ``J = A^-1 J0 A``.

    ``A`` is Gaussian, redrawn until its condition number is at most 100.
    Deterministic in ``seed``.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    while True:
        a = rng.standard_normal((2 * n, 2 * n))
        if np.linalg.cond(a) <= _MAX_COND:
            break
    return structure_from_frame(a)


def structure_from_frame(a) -> CompatibleStructure:
    """Pull the standard structure back through an invertible ``A``."""
    a = as_finite_matrix(a, "A")
    j0 = _standard_j(a.shape[0] // 2)
    g = a.T @ a
    g = 0.5 * (g + g.T)
    j = np.linalg.solve(a, j0 @ a)
    return CompatibleStructure(g, j)


def kahler_form(s: CompatibleStructure, u, v) -> float:
    """``omega(u, v) = (J u)^T G v``."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != (s.dim,) or v.shape != (s.dim,):
        raise DimensionMismatch(f"vectors must have shape ({s.dim},), got {u.shape} and {v.shape}")
    return float((s.jop @ u) @ s.metric @ v)


def _check_unit(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.shape != (7,):
        raise DimensionMismatch(f"S^6 point must be in R^7, got shape {p.shape}")
    if abs(np.linalg.norm(p) - 1.0) > TOL.unit:
        raise NotUnit(f"|p| = {np.linalg.norm(p)!r} is not 1")
    return p


def sphere_frame(p) -> np.ndarray:
    """Rotation ``Q`` in SO(7) with ``Q e7 = p`` (identity at the north pole)."""
    p = _check_unit(p)
    v = p.copy()
    v[6] -= 1.0
    nv = np.linalg.norm(v)
    if nv < 1e-15:
        return np.eye(7)
    v /= nv
    h = np.eye(7) - 2.0 * np.outer(v, v)
    # Householder has det -1; flip the first axis to land in SO(7)
    h[:, 0] = -h[:, 0]
    return h


def s6_structure(p) -> CompatibleStructure:
    """Nearly-Kähler structure ``J_p v = p x v`` on ``T_p S^6``.

    Represented on all of R^7 (so ``J p = 0``); the support is an
    orthonormal basis of ``p``'s orthogonal complement.
    """
    p = _check_unit(p)
    q = sphere_frame(p)
    return CompatibleStructure(np.eye(7), cross_matrix(p), support=q[:, :6])


@dataclass(frozen=True)
class StructureField:
    """Chart-coordinate family of compatible structures.

    ``evaluator(x)`` returns the :class:`CompatibleStructure` (as
    ``chart_dim x chart_dim`` matrices) at chart point ``x``. ``domain_radius``
    bounds the chart domain (a ball around ``center``, ``inf`` for flat charts).
    """

    ambient_dim: int
    chart_dim: int
    evaluator: Callable[[np.ndarray], CompatibleStructure]
    smoothness_step: float = TOL.nijenhuis_step
    domain_radius: float = np.inf
    name: str = ""
    center: np.ndarray | None = None

    def contains(self, x, margin: float = 0.0) -> bool:
        x = np.asarray(x, dtype=float)
        if not np.isfinite(self.domain_radius):
            return True
        c = np.zeros(self.chart_dim) if self.center is None else self.center
        return bool(np.linalg.norm(x - c) + margin < self.domain_radius)

    def __call__(self, x) -> CompatibleStructure:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.chart_dim,):
            raise DimensionMismatch(f"chart point must have shape ({self.chart_dim},), got {x.shape}")
        if not self.contains(x):
            raise ChartDomain(f"point {x.tolist()} is outside the {self.name or 'chart'} domain")
        return self.evaluator(x)

    def with_step(self, step: float) -> "StructureField":
        return StructureField(
            self.ambient_dim, self.chart_dim, self.evaluator, step,
            self.domain_radius, self.name, self.center,
        )


def _flat_field(params: Sequence[float]) -> StructureField:
    n = int(params[0]) if len(params) else 1
    if len(params) > 1 or n < 1 or (len(params) and params[0] != n):
        raise ValueError("flat chart takes one optional parameter: complex dimension n >= 1")
    s = standard_structure(n)
    return StructureField(2 * n, 2 * n, lambda x: s, name="flat")


def _s6_orthographic(params: Sequence[float]) -> StructureField:
    if len(params) == 0:
        base = np.eye(7)[6]
    elif len(params) == 7:
        base = np.asarray(params, dtype=float)
        base = base / np.linalg.norm(base)
    else:
        raise ValueError("s6-orthographic takes a base point in R^7 (or nothing for e7)")
    q = sphere_frame(base)

    def evaluate(x: np.ndarray) -> CompatibleStructure:
        r2 = float(x @ x)
        if r2 >= 1.0:
            raise ChartDomain("orthographic chart needs |x| < 1")
        h = np.sqrt(1.0 - r2)
        point = q @ np.append(x, h)
        dphi = q @ np.vstack([np.eye(6), -x / h])
        g = dphi.T @ dphi
        g = 0.5 * (g + g.T)
        # dphi has full column rank and J_p preserves its range
        j = np.linalg.solve(g, dphi.T @ cross_matrix(point) @ dphi)
        return CompatibleStructure(g, j, check=False)

    return StructureField(7, 6, evaluate, domain_radius=1.0, name="s6-orthographic")


_CATALOG = {
    "flat": _flat_field,
    "s6-orthographic": _s6_orthographic,
}


def chart_field(catalog_name: str, params: Sequence[float] = (), step: float | None = None) -> StructureField:
    """Catalog structure field in chart coordinates.

    ``flat`` (params: ``[n]``, default 1) is the constant standard structure
    on R^2n. ``s6-orthographic`` (params: base point in R^7, default ``e7``)
    is the nearly-Kähler six-sphere in the chart
    ``x -> Q (x, sqrt(1 - |x|^2))`` with ``Q e7`` the base point; metric and
    J are pulled back through the chart differential.
    """
    try:
        make = _CATALOG[catalog_name]
    except KeyError:
        raise UnknownCatalogEntry(
            f"unknown structure field {catalog_name!r}; choose from {sorted(_CATALOG)}"
        ) from None
    f = make(list(params))
    return f if step is None else f.with_step(step)


def nijenhuis(f: StructureField, x, X, Y) -> np.ndarray:
    """Nijenhuis tensor ``N(X, Y)`` of a structure field at chart point ``x``.

    ``X`` and ``Y`` are extended as constant vector fields, so
    ``[X, Y] = 0`` and every bracket reduces to directional derivatives of
    ``J``::

        N = (D_{JX} J) Y - (D_{JY} J) X + J (D_Y J) X - J (D_X J) Y

    Directional derivatives use central differences with step
    ``f.smoothness_step`` along the given (unnormalised) direction.
    """
    x = np.asarray(x, dtype=float)
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    d = f.chart_dim
    for name, arr in (("x", x), ("X", X), ("Y", Y)):
        if arr.shape != (d,):
            raise DimensionMismatch(f"{name} must have shape ({d},), got {arr.shape}")
    h = f.smoothness_step
    if not h > 0:
        raise StepTooLarge("step must be positive")
    if h > TOL.max_step_fraction * f.domain_radius:
        raise StepTooLarge(f"step {h} exceeds 1% of the chart-domain radius {f.domain_radius}")

    j = f(x).jop
    jx, jy = j @ X, j @ Y
    reach = 2.0 * h * max(1.0, *(np.linalg.norm(v) for v in (X, Y, jx, jy)))
    if not f.contains(x, margin=reach):
        raise ChartDomain("point is too close to the chart boundary for the difference stencil")

    def dj(v: np.ndarray) -> np.ndarray:
        return (f(x + h * v).jop - f(x - h * v).jop) / (2.0 * h)

    return dj(jx) @ Y - dj(jy) @ X + j @ (dj(Y) @ X) - j @ (dj(X) @ Y)
