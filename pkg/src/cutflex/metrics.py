"""Quality and cost measurement: exact hypervolume, Koza computational
effort, and the flexibility cost aggregates.

Hypervolume is exact (recursive slicing over the last axis down to a 2-D
staircase), minimizing objectives against a reference point that defaults
to the all-ones corner of the normalized space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np
from numba import njit

DEFAULT_Z = 0.99


# ---------------------------------------------------------------------------
# Hypervolume
# ---------------------------------------------------------------------------

@njit(cache=True)
def _hv2(P, n, rx, ry):
    """Staircase area of n (x, y) rows against (rx, ry); dominated and
    duplicate rows are harmless."""
    if n == 0:
        return 0.0
    order = np.argsort(P[:n, 0])
    hv = 0.0
    ymin = ry
    for t in range(n):
        i = order[t]
        x = P[i, 0]
        y = P[i, 1]
        if x >= rx or y >= ymin:
            continue
        hv += (rx - x) * (ymin - y)
        ymin = y
    return hv


@njit(cache=True)
def _hv3(P, n, r0, r1, r2):
    if n == 0:
        return 0.0
    order = np.argsort(P[:n, 2])
    A = np.empty((n, 2))
    na = 0
    hv = 0.0
    i = 0
    while i < n:
        z0 = P[order[i], 2]
        while i < n and P[order[i], 2] == z0:
            A[na, 0] = P[order[i], 0]
            A[na, 1] = P[order[i], 1]
            na += 1
            i += 1
        znext = P[order[i], 2] if i < n else r2
        hv += (znext - z0) * _hv2(A, na, r0, r1)
    return hv


@njit(cache=True)
def _hv4(P, n, r0, r1, r2, r3):
    if n == 0:
        return 0.0
    order = np.argsort(P[:n, 3])
    A = np.empty((n, 3))
    na = 0
    hv = 0.0
    i = 0
    while i < n:
        z0 = P[order[i], 3]
        while i < n and P[order[i], 3] == z0:
            A[na, 0] = P[order[i], 0]
            A[na, 1] = P[order[i], 1]
            A[na, 2] = P[order[i], 2]
            na += 1
            i += 1
        znext = P[order[i], 3] if i < n else r3
        hv += (znext - z0) * _hv3(A, na, r0, r1, r2)
    return hv


def _nondominated_rows(F: np.ndarray) -> np.ndarray:
    """Unique rows not weakly dominated by any other row (minimization)."""
    U = np.unique(F, axis=0)
    n = U.shape[0]
    keep = np.ones(n, dtype=bool)
    for i in range(n):
        if not keep[i]:
            continue
        dominated = ((U <= U[i]).all(axis=1) & (U < U[i]).any(axis=1))
        if dominated.any():
            keep[i] = False
    return U[keep]


def _hv_slice_generic(P: np.ndarray, ref: np.ndarray) -> float:
    # arbitrary-dimension fallback, same slicing scheme in plain python
    d = P.shape[1]
    if d == 2:
        return float(_hv2(np.ascontiguousarray(P), P.shape[0],
                          ref[0], ref[1]))
    order = np.argsort(P[:, -1])
    hv = 0.0
    i = 0
    n = P.shape[0]
    while i < n:
        z0 = P[order[i], -1]
        j = i
        while j < n and P[order[j], -1] == z0:
            j += 1
        znext = P[order[j], -1] if j < n else ref[-1]
        hv += (znext - z0) * _hv_slice_generic(P[order[:j], :-1], ref[:-1])
        i = j
    return hv


def hypervolume(front, ref=None) -> float:
    """Exact dominated hypervolume of a front (minimization).

    Args:
        front: (n, d) array-like of objective vectors; duplicates fine.
        ref: reference point, default all ones.

    Returns:
        Lebesgue measure of the union of [p, ref] boxes; points with any
        component at or beyond the reference contribute nothing.
    """
    F = np.asarray(front, dtype=np.float64)
    if F.size == 0:
        return 0.0
    if F.ndim == 1:
        F = F[None, :]
    d = F.shape[1]
    r = np.ones(d) if ref is None else np.asarray(ref, dtype=np.float64)
    if r.shape != (d,):
        raise ValueError("reference dimension mismatch")
    F = F[(F < r).all(axis=1)]
    if F.shape[0] == 0:
        return 0.0
    F = _nondominated_rows(F)
    F = np.ascontiguousarray(F)
    n = F.shape[0]
    if d == 1:
        return float(r[0] - F.min())
    if d == 2:
        return float(_hv2(F, n, r[0], r[1]))
    if d == 3:
        return float(_hv3(F, n, r[0], r[1], r[2]))
    if d == 4:
        return float(_hv4(F, n, r[0], r[1], r[2], r[3]))
    return float(_hv_slice_generic(F, r))


# ---------------------------------------------------------------------------
# Koza computational effort
# ---------------------------------------------------------------------------

def computational_effort(checkpoints: Iterable[Optional[int]],
                         granularity: int,
                         z: float = DEFAULT_Z) -> Optional[int]:
    """Minimum evaluations for success probability z over repeated runs.

    Args:
        checkpoints: per-run first success evaluation count (a positive
            multiple of granularity) or None for a failed run.
        granularity: evaluations per checkpoint, normally the population
            size.
        z: target success probability.

    Returns:
        min over checkpoints k of k * R(k) with
        R(k) = ceil(ln(1-z) / ln(1-P(k))), R = 1 when P(k) = 1; None when
        every run failed.
    """
    if granularity <= 0:
        raise ValueError("granularity must be positive")
    if not (0.0 < z < 1.0):
        raise ValueError("z must be in (0, 1)")
    marks = list(checkpoints)
    total = len(marks)
    if total == 0:
        raise ValueError("no runs")
    succ = []
    for m in marks:
        if m is None:
            continue
        if m <= 0 or m % granularity != 0:
            raise ValueError(f"checkpoint {m} is not a positive multiple "
                             f"of {granularity}")
        succ.append(m)
    if not succ:
        return None
    succ.sort()
    best = None
    k = granularity
    last = succ[-1]
    i = 0
    done = 0
    while k <= last:
        while i < len(succ) and succ[i] <= k:
            done += 1
            i += 1
        if done > 0:
            p = done / total
            runs = 1 if p == 1.0 else math.ceil(math.log(1.0 - z)
                                                / math.log(1.0 - p))
            cost = k * runs
            if best is None or cost < best:
                best = cost
        k += granularity
    return best


# ---------------------------------------------------------------------------
# Flexibility cost aggregates
# ---------------------------------------------------------------------------

@dataclass
class CostMatrix:
    """Per-(source, target) adaption costs plus per-target scratch costs.
    The diagonal is undefined by construction; a None value records a cell
    whose runs never succeeded."""
    adaption: dict = field(default_factory=dict)
    scratch: dict = field(default_factory=dict)

    def set_adaption(self, source: str, target: str,
                     cost: Optional[int]) -> None:
        if source == target:
            raise ValueError("diagonal cells are undefined")
        self.adaption[(source, target)] = cost

    def set_scratch(self, target: str, cost: Optional[int]) -> None:
        self.scratch[target] = cost


def cost_aggregates(costs) -> tuple[float, float, float]:
    """(worst, average, best) over the defined entries of a cost
    collection; accepts a CostMatrix (its adaption cells) or any iterable
    of costs, skipping None entries."""
    if isinstance(costs, CostMatrix):
        values = list(costs.adaption.values())
    elif isinstance(costs, dict):
        values = list(costs.values())
    else:
        values = list(costs)
    defined = [v for v in values if v is not None]
    if not defined:
        raise ValueError("no defined cost entries")
    return (max(defined), sum(defined) / len(defined), min(defined))


def success_threshold(reference_hv: float,
                      fraction: float = DEFAULT_Z) -> float:
    """Hypervolume bar a run must reach to count as success."""
    if not (0.0 < reference_hv <= 1.0):
        raise ValueError("reference hypervolume must be in (0, 1]")
    if not (0.0 < fraction <= 1.0):
        raise ValueError("fraction must be in (0, 1]")
    return fraction * reference_hv
