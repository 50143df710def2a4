"""Randomized Wirtinger inequality battery."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .angle import OrientedSubspace, WirtingerCheck, complex_subspace, verify_wirtinger
from .errors import RankDeficient
from .structures import CompatibleStructure, random_compatible

__all__ = ["dimension_pairs", "random_pairs", "BatteryResult", "run_battery"]


def dimension_pairs(ambient_dims: Sequence[int], sub_dims: Sequence[int] | None = None) -> list[tuple[int, int]]:
    """All ``(2n, 2m)`` combinations with ``2 <= 2m <= 2n``, both even."""
    pairs = []
    for d in ambient_dims:
        if d < 2 or d % 2:
            raise ValueError(f"ambient dimension must be even and >= 2, got {d}")
        subs = range(2, d + 1, 2) if sub_dims is None else sub_dims
        for k in subs:
            if k % 2 or k < 2:
                raise ValueError(f"subspace dimension must be even and >= 2, got {k}")
            if k <= d:
                pairs.append((d, k))
    if not pairs:
        raise ValueError("no valid (ambient, subspace) dimension pair")
    return pairs


def random_pairs(
    count: int,
    ambient_dims: Sequence[int],
    sub_dims: Sequence[int] | None = None,
    seed: int = 0,
    complex_fraction: float = 0.0,
) -> Iterator[tuple[CompatibleStructure, OrientedSubspace]]:
    """Seeded stream of (structure, subspace) pairs cycling over the dimension pairs.

    With probability ``complex_fraction`` the subspace is built J-invariant
    (J-induced orientation) instead of from Gaussian vectors.
    """
    pairs = dimension_pairs(ambient_dims, sub_dims)
    rng = np.random.default_rng(seed)
    for i in range(count):
        d, k = pairs[i % len(pairs)]
        s = random_compatible(d // 2, rng)
        want_complex = rng.random() < complex_fraction
        while True:
            try:
                if want_complex:
                    w = complex_subspace(s, rng.standard_normal((k // 2, d)))
                else:
                    w = OrientedSubspace(rng.standard_normal((k, d)))
                break
            except RankDeficient:
                continue
        yield s, w


@dataclass
class BatteryResult:
    count: int
    worst_bound_margin: float = np.inf
    worst_index: int = -1
    max_abs_cos: float = 0.0
    n_complex_detected: int = 0
    violations: list[dict] = field(default_factory=list)
    inconsistencies: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations and not self.inconsistencies


def run_battery(
    count: int,
    ambient_dims: Sequence[int],
    sub_dims: Sequence[int] | None = None,
    seed: int = 0,
    complex_fraction: float = 0.0,
) -> BatteryResult:
    res = BatteryResult(count)
    for i, (s, w) in enumerate(random_pairs(count, ambient_dims, sub_dims, seed, complex_fraction)):
        chk: WirtingerCheck = verify_wirtinger(s, w)
        if chk.bound_margin < res.worst_bound_margin:
            res.worst_bound_margin = chk.bound_margin
            res.worst_index = i
        res.max_abs_cos = max(res.max_abs_cos, abs(chk.cos_alpha))
        if chk.complexity_residual <= 1e-8:
            res.n_complex_detected += 1
        entry = {"index": i, "ambient_dim": s.dim, "sub_dim": w.dim, **chk.as_dict()}
        if not chk.bound_ok:
            res.violations.append(entry)
        if not chk.equality_consistent:
            res.inconsistencies.append(entry)
    return res
