"""Kähler angle fields of parametrized submanifolds.

An :class:`ImmersionChart` maps a rectangular parameter box into an
almost-Hermitian ambient. Its tangent frame at a parameter point is the
ordered list of partial derivatives, so the parameter order fixes the
orientation. :func:`angle_field` evaluates an :class:`~wirtinger.angle.AngleReport`
at every grid point and :func:`gradient_field` adds ``|grad alpha|`` in the
induced metric.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .angle import AngleReport, Classification, OrientedSubspace, angle_report
from .config import TOL
from .errors import (
    ChartDomain,
    DegenerateImmersion,
    DimensionMismatch,
    EvalError,
    GridTooSmall,
    IncompatibleStructure,
    OddDimension,
    RankDeficient,
    UnknownCatalogEntry,
)
from .structures import CompatibleStructure, StructureField, standard_structure

__all__ = [
    "ImmersionChart",
    "AngleField",
    "FieldSummary",
    "tangent_frame",
    "angle_field",
    "gradient_field",
    "field_summary",
    "catalog_chart",
    "CHART_CATALOG",
]

Ambient = CompatibleStructure | StructureField


@dataclass(frozen=True)
class ImmersionChart:
    """Parametrized map ``f`` from a box in R^param_dim into the ambient.

    Parameters
    ----------
    map : callable
        ``f(x) -> ndarray`` of length ``ambient_dim``. Must be pure.
    domain : sequence of (min, max, samples)
        One entry per parameter axis; at least 2 samples each.
    ambient : CompatibleStructure or StructureField
        Constant structure, or a field evaluated at ``f(x)`` (in that case
        ``f`` maps into the field's chart coordinates).
    jacobian : callable, optional
        ``df(x) -> (ambient_dim, param_dim)``. When omitted, central
        differences with step ``step`` are used.
    step : float, optional
        Difference step; defaults to ``1e-5`` times the domain diameter.
    """

    map: Callable[[np.ndarray], np.ndarray]
    domain: tuple[tuple[float, float, int], ...]
    ambient: Ambient
    jacobian: Callable[[np.ndarray], np.ndarray] | None = None
    step: float | None = None
    name: str = ""

    def __post_init__(self):
        dom = tuple((float(lo), float(hi), int(n)) for lo, hi, n in self.domain)
        object.__setattr__(self, "domain", dom)
        if len(dom) == 0 or len(dom) % 2:
            raise OddDimension(f"parameter dimension must be even and positive, got {len(dom)}")
        for lo, hi, n in dom:
            if n < 2:
                raise GridTooSmall("each axis needs at least 2 samples")
            if not hi > lo:
                raise ValueError(f"empty axis [{lo}, {hi}]")
        if self.param_dim > self.ambient_dim:
            raise DimensionMismatch("parameter dimension exceeds ambient dimension")
        if self.step is not None and not self.step > 0:
            raise ValueError("step must be positive")

    @property
    def param_dim(self) -> int:
        return len(self.domain)

    @property
    def ambient_dim(self) -> int:
        a = self.ambient
        return a.dim if isinstance(a, CompatibleStructure) else a.chart_dim

    @property
    def jacobian_mode(self) -> str:
        return "analytic" if self.jacobian is not None else "central"

    @property
    def h(self) -> float:
        if self.step is not None:
            return self.step
        diameter = math.sqrt(sum((hi - lo) ** 2 for lo, hi, _ in self.domain))
        return TOL.chart_step * diameter

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(n for _, _, n in self.domain)

    def axes(self) -> tuple[np.ndarray, ...]:
        return tuple(np.linspace(lo, hi, n) for lo, hi, n in self.domain)

    def points(self) -> np.ndarray:
        """Grid points in C order, shape ``(prod(shape), param_dim)``."""
        mesh = np.meshgrid(*self.axes(), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)

    def structure_at(self, y: np.ndarray) -> CompatibleStructure:
        a = self.ambient
        return a if isinstance(a, CompatibleStructure) else a(y)

    def precompose(self, matrix, domain=None) -> "ImmersionChart":
        """Chart ``x -> f(matrix @ x)`` (linear reparametrization)."""
        lin = np.asarray(matrix, dtype=float)
        jac = None
        if self.jacobian is not None:
            jac = lambda x: self.jacobian(lin @ x) @ lin  # noqa: E731
        return replace(
            self,
            map=lambda x: self.map(lin @ x),
            jacobian=jac,
            domain=self.domain if domain is None else domain,
        )


def _evaluate(c: ImmersionChart, x: np.ndarray) -> np.ndarray:
    y = np.asarray(c.map(x), dtype=float)
    if y.shape != (c.ambient_dim,):
        raise DimensionMismatch(f"chart map returned shape {y.shape}, expected ({c.ambient_dim},)")
    return y


def tangent_frame(c: ImmersionChart, x) -> OrientedSubspace:
    """Ordered partial derivatives ``(df/du_1, ..., df/du_2m)`` at ``x``."""
    x = np.asarray(x, dtype=float)
    if x.shape != (c.param_dim,):
        raise DimensionMismatch(f"parameter point must have shape ({c.param_dim},)")
    if c.jacobian is not None:
        jac = np.asarray(c.jacobian(x), dtype=float)
        if jac.shape != (c.ambient_dim, c.param_dim):
            raise DimensionMismatch(f"jacobian has shape {jac.shape}")
        vecs = jac.T.copy()
    else:
        h = c.h
        for xi, (lo, hi, _) in zip(x, c.domain):
            if xi - h < lo - 1e-12 * (hi - lo) or xi + h > hi + 1e-12 * (hi - lo):
                raise ChartDomain("difference stencil leaves the parameter domain")
        eye = np.eye(c.param_dim)
        vecs = np.array(
            [(_evaluate(c, x + h * e) - _evaluate(c, x - h * e)) / (2.0 * h) for e in eye]
        )
    if not np.all(np.isfinite(vecs)):
        raise DegenerateImmersion("non-finite tangent vectors")
    gram = vecs @ vecs.T
    norms2 = np.diag(gram)
    if np.any(norms2 <= 0):
        raise DegenerateImmersion("a partial derivative vanishes")
    ratio = np.linalg.det(gram / np.sqrt(np.outer(norms2, norms2)))
    if not ratio >= TOL.immersion:
        raise DegenerateImmersion(f"chart differential is rank deficient at {x.tolist()}")
    return OrientedSubspace(vecs)


@dataclass(frozen=True)
class AngleField:
    """Per-grid-point Kähler angle data of a chart.

    Arrays indexed by the flat (C order) grid index: ``points`` holds the
    parameter points, ``reports`` an :class:`AngleReport` or ``None`` for
    flagged points, ``flags`` a tuple of flag names per point,
    ``induced_metrics`` the pulled-back metric in parameter coordinates (NaN
    where unavailable). ``grad_alpha_norm`` is filled by
    :func:`gradient_field` (NaN where not computed).
    """

    shape: tuple[int, ...]
    axes: tuple[np.ndarray, ...]
    points: np.ndarray
    reports: tuple[AngleReport | None, ...]
    flags: tuple[tuple[str, ...], ...]
    induced_metrics: np.ndarray
    grad_alpha_norm: np.ndarray | None = field(default=None)

    @property
    def m(self) -> int:
        return len(self.shape) // 2

    def _scalar(self, attr: str) -> np.ndarray:
        out = np.array([getattr(r, attr) if r is not None else np.nan for r in self.reports])
        return out.reshape(self.shape)

    @property
    def cos_alpha(self) -> np.ndarray:
        return self._scalar("cos_alpha")

    @property
    def alpha(self) -> np.ndarray:
        return self._scalar("alpha")

    @property
    def classifications(self) -> np.ndarray:
        labels = [r.classification.value if r is not None else "" for r in self.reports]
        return np.array(labels, dtype=object).reshape(self.shape)

    def __len__(self) -> int:
        return len(self.reports)


def angle_field(c: ImmersionChart, tol: float = TOL.classify) -> AngleField:
    """Kähler angle report at every grid point of ``c``.

    Points where the stencil leaves the domain are flagged ``boundary``;
    rank drops are flagged ``degenerate``, failed expression evaluations
    ``eval-error``; points mapped outside a structure
    field's chart are flagged ``chart-domain``. None of these are fatal.
    """
    pts = c.points()
    p = c.param_dim
    reports: list[AngleReport | None] = []
    flags: list[tuple[str, ...]] = []
    metrics = np.full((len(pts), p, p), np.nan)
    for i, x in enumerate(pts):
        try:
            w = tangent_frame(c, x)
        except ChartDomain:
            reports.append(None)
            flags.append(("boundary",))
            continue
        except (DegenerateImmersion, RankDeficient):
            reports.append(None)
            flags.append(("degenerate",))
            continue
        except EvalError:
            reports.append(None)
            flags.append(("eval-error",))
            continue
        try:
            s = c.structure_at(_evaluate(c, x)) if isinstance(c.ambient, StructureField) else c.ambient
        except (ChartDomain, IncompatibleStructure):
            reports.append(None)
            flags.append(("chart-domain",))
            continue
        try:
            rep = angle_report(s, w, tol)
        except RankDeficient:
            reports.append(None)
            flags.append(("degenerate",))
            continue
        v = w.vectors
        metrics[i] = v @ s.metric @ v.T
        reports.append(rep)
        flags.append(())
    metrics.setflags(write=False)
    return AngleField(c.shape, c.axes(), pts, tuple(reports), tuple(flags), metrics)


def gradient_field(af: AngleField, c: ImmersionChart | None = None) -> AngleField:
    """Fill ``grad_alpha_norm`` by central differences of ``alpha`` over the grid.

    The gradient is ``sqrt(da^T g^-1 da)`` with ``da_i`` the difference
    quotient along axis ``i`` and ``g`` the induced metric. Points with
    ``|cos alpha| >= 1 - 1e-6`` are flagged ``singular`` (alpha is not smooth
    there); grid edges are flagged ``edge``; points with a singular or
    missing neighbour are flagged ``neighbor``. ``c`` is accepted for
    signature symmetry and only used to cross-check the grid shape.
    """
    if c is not None and c.shape != af.shape:
        raise DimensionMismatch("chart grid does not match the field")
    if any(n < 3 for n in af.shape):
        raise GridTooSmall("gradient needs at least 3 samples per axis")
    cos = af.cos_alpha
    alpha = af.alpha
    singular = np.abs(cos) >= 1.0 - TOL.singular
    usable = np.isfinite(alpha) & ~singular
    spacing = [ax[1] - ax[0] for ax in af.axes]
    grad = np.full(af.shape, np.nan)
    flags = [list(f) for f in af.flags]
    metrics = af.induced_metrics.reshape(af.shape + af.induced_metrics.shape[1:])
    d = len(af.shape)

    for flat, idx in enumerate(np.ndindex(*af.shape)):
        if af.reports[flat] is None:
            continue
        if singular[idx]:
            flags[flat].append("singular")
            continue
        if any(i == 0 or i == n - 1 for i, n in zip(idx, af.shape)):
            flags[flat].append("edge")
            continue
        da = np.empty(d)
        ok = True
        for k in range(d):
            up = idx[:k] + (idx[k] + 1,) + idx[k + 1 :]
            dn = idx[:k] + (idx[k] - 1,) + idx[k + 1 :]
            if not (usable[up] and usable[dn]):
                ok = False
                break
            da[k] = (alpha[up] - alpha[dn]) / (2.0 * spacing[k])
        if not ok:
            flags[flat].append("neighbor")
            continue
        grad[idx] = math.sqrt(max(0.0, float(da @ np.linalg.solve(metrics[idx], da))))

    grad.setflags(write=False)
    return replace(af, flags=tuple(tuple(f) for f in flags), grad_alpha_norm=grad)


@dataclass(frozen=True)
class FieldSummary:
    n_points: int
    n_reported: int
    cos_min: float | None
    cos_max: float | None
    cos_mean: float | None
    counts: dict[str, int]
    fractions: dict[str, float]
    max_grad_alpha_norm: float | None
    n_flagged: int
    flag_counts: dict[str, int]

    def as_dict(self) -> dict:
        return {
            "n_points": self.n_points,
            "n_reported": self.n_reported,
            "cos_alpha_min": self.cos_min,
            "cos_alpha_max": self.cos_max,
            "cos_alpha_mean": self.cos_mean,
            "counts": dict(self.counts),
            "fractions": dict(self.fractions),
            "max_grad_alpha_norm": self.max_grad_alpha_norm,
            "n_flagged": self.n_flagged,
            "flag_counts": dict(self.flag_counts),
        }


def field_summary(af: AngleField) -> FieldSummary:
    """Range of cos(alpha), per-class counts (fractions over reported points), flag totals."""
    reported = [r for r in af.reports if r is not None]
    cos = np.array([r.cos_alpha for r in reported])
    counts = {c.value: 0 for c in Classification}
    counts.update(Counter(r.classification.value for r in reported))
    n = len(reported)
    fractions = {k: (v / n if n else 0.0) for k, v in counts.items()}
    grad = af.grad_alpha_norm
    max_grad = None
    if grad is not None and np.any(np.isfinite(grad)):
        max_grad = float(np.nanmax(grad))
    flag_counts = Counter(f for fl in af.flags for f in fl)
    return FieldSummary(
        n_points=len(af.reports),
        n_reported=n,
        cos_min=float(cos.min()) if n else None,
        cos_max=float(cos.max()) if n else None,
        cos_mean=float(cos.mean()) if n else None,
        counts=counts,
        fractions=fractions,
        max_grad_alpha_norm=max_grad,
        n_flagged=sum(1 for fl in af.flags if fl),
        flag_counts=dict(sorted(flag_counts.items())),
    )


# -- catalog charts in flat C^2 (coordinates x1, y1, x2, y2 with J dx_k = dy_k)


def _slant_plane(theta: float):
    d = np.array([0.0, math.sin(theta), math.cos(theta), 0.0])
    e1 = np.array([1.0, 0.0, 0.0, 0.0])
    jac = np.column_stack([e1, d])
    return (lambda x: x[0] * e1 + x[1] * d), (lambda x: jac)


def _slant_family():
    # frame (e1, sin u e2 + cos u e3): cos(alpha) = sin(u)
    def f(x):
        s, u = x
        return np.array([s, -math.cos(u), math.sin(u), 0.0])

    def jac(x):
        u = x[1]
        return np.array([[1.0, 0.0], [0.0, math.sin(u)], [0.0, math.cos(u)], [0.0, 0.0]])

    return f, jac


def _holomorphic_graph():
    # z -> (z, z^2)
    def f(x):
        a, b = x
        return np.array([a, b, a * a - b * b, 2 * a * b])

    def jac(x):
        a, b = x
        return np.array([[1.0, 0.0], [0.0, 1.0], [2 * a, -2 * b], [2 * b, 2 * a]])

    return f, jac


def _conjugate_graph():
    # z -> (z, conj z)
    mat = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 0.0], [0.0, -1.0]])
    return (lambda x: mat @ x), (lambda x: mat)


CHART_CATALOG: dict[str, tuple[int, Callable]] = {
    "slant-plane": (1, _slant_plane),
    "slant-family": (0, _slant_family),
    "holomorphic-graph": (0, _holomorphic_graph),
    "conjugate-graph": (0, _conjugate_graph),
}


def catalog_chart(
    name: str,
    domain: Sequence[tuple[float, float, int]],
    params: Sequence[float] = (),
    *,
    ambient: Ambient | None = None,
    jacobian: str = "analytic",
    step: float | None = None,
) -> ImmersionChart:
    """Closed-form test surfaces in flat C^2.

    ``slant-plane`` (params ``[theta]``): plane spanned by ``e1`` and
    ``sin(theta) e2 + cos(theta) e3``; cos(alpha) = sin(theta).
    ``slant-family``: ``(s, u) -> (s, -cos u, sin u, 0)``; cos(alpha) = sin(u).
    ``holomorphic-graph``: graph of ``z -> z^2``; complex everywhere.
    ``conjugate-graph``: graph of ``z -> conj(z)``; isotropic everywhere.
    """
    try:
        nparams, make = CHART_CATALOG[name]
    except KeyError:
        raise UnknownCatalogEntry(f"unknown chart {name!r}; choose from {sorted(CHART_CATALOG)}") from None
    if len(params) != nparams:
        raise ValueError(f"chart {name!r} takes {nparams} parameter(s), got {len(params)}")
    if jacobian not in ("analytic", "central"):
        raise ValueError("jacobian must be 'analytic' or 'central'")
    f, jac = make(*params)
    return ImmersionChart(
        map=f,
        domain=tuple(domain),
        ambient=standard_structure(2) if ambient is None else ambient,
        jacobian=jac if jacobian == "analytic" else None,
        step=step,
        name=name,
    )
