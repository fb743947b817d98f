"""Per-material optimization tasks: objectives, feasibility, normalization.

A task wraps one material with the fixed stock geometry and exposes the
four minimized objectives (production time, tool wear, |Fc|, |Ft|) plus
the feasibility rule. Normalization maps achieved objective ranges onto
[0,1]^4 for hypervolume scoring; time and wear span so many decades that
they are log-scaled first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .oxley import (
    ConvergenceError,
    CutOutputs,
    MaterialParams,
    ModelDomainError,
    PROCESS_LOWER,
    PROCESS_UPPER,
    ProcessParams,
    get_material,
    solve_batch,
    solve_cut,
)

SPEED_LIMIT = 50.0
FORCE_LIMIT = 500.0
TOTAL_LENGTH = 1.0
TOTAL_DEPTH = 1.0

# log-scale endpoints of the achieved objective ranges
_LN_TIME_LO = math.log(200.0)
_LN_TIME_HI = math.log(1.0e7)
_LN_WEAR_LO = math.log(110.0)
_LN_WEAR_HI = math.log(5.5e6) + 500.0  # ln of 5.5e6 * e^500 without overflow

N_OBJECTIVES = 4


@dataclass(frozen=True)
class TaskSpec:
    """One material's optimization task over the shared process box."""
    material: MaterialParams
    total_length: float = TOTAL_LENGTH
    total_depth: float = TOTAL_DEPTH
    speed_limit: float = SPEED_LIMIT
    force_limit: float = FORCE_LIMIT
    lower: tuple = tuple(PROCESS_LOWER)
    upper: tuple = tuple(PROCESS_UPPER)

    def __post_init__(self):
        if self.total_length <= 0.0 or self.total_depth <= 0.0:
            raise ValueError("stock geometry must be positive")

    @property
    def name(self) -> str:
        return self.material.name


@dataclass(frozen=True)
class ObjectiveVector:
    production_time: float
    tool_wear: float
    abs_Fc: float
    abs_Ft: float

    def as_array(self) -> np.ndarray:
        return np.array([self.production_time, self.tool_wear,
                         self.abs_Fc, self.abs_Ft])


@dataclass(frozen=True)
class EvalResult:
    feasible: bool
    violation: float
    objectives: Optional[ObjectiveVector]
    outputs: Optional[CutOutputs]


def make_task(material) -> TaskSpec:
    """Build the task for a material given by name or parameter set."""
    if isinstance(material, str):
        material = get_material(material)
    return TaskSpec(material=material)


def production_time(cutting_speed: float, n_layers: int,
                    total_length: float = TOTAL_LENGTH) -> float:
    """Seconds to machine every layer of the stock at this speed."""
    if cutting_speed <= 0.0 or n_layers < 1:
        raise ValueError("need positive speed and at least one layer")
    return total_length / cutting_speed * n_layers


def tool_wear(cutting_speed: float, Fc: float, Ft: float,
              n_layers: int) -> float:
    """Wear load over the whole stock; exponential in force magnitude."""
    if n_layers < 1:
        raise ValueError("need at least one layer")
    return (cutting_speed * math.exp(abs(Fc))
            + 0.1 * cutting_speed * math.exp(abs(Ft))) * n_layers


def is_feasible(proc: ProcessParams, outputs: CutOutputs,
                task: TaskSpec) -> tuple[bool, float]:
    """Strict speed/force limits; violation sums the excess over each."""
    v = max(0.0, proc.cutting_speed - task.speed_limit)
    v += max(0.0, abs(outputs.Fc) - task.force_limit)
    v += max(0.0, abs(outputs.Ft) - task.force_limit)
    feasible = (proc.cutting_speed < task.speed_limit
                and abs(outputs.Fc) < task.force_limit
                and abs(outputs.Ft) < task.force_limit)
    return feasible, v


def evaluate(task: TaskSpec, proc: ProcessParams) -> EvalResult:
    """Evaluate one process point: solve the cut, gate on feasibility,
    and compose the four objectives. Solver failures come back as
    infeasible with an unbounded violation rather than raising."""
    try:
        out = solve_cut(task.material, proc, total_depth=task.total_depth)
    except (ModelDomainError, ConvergenceError):
        return EvalResult(feasible=False, violation=math.inf,
                          objectives=None, outputs=None)
    feasible, violation = is_feasible(proc, out, task)
    if not feasible:
        return EvalResult(feasible=False, violation=violation,
                          objectives=None, outputs=out)
    obj = ObjectiveVector(
        production_time=production_time(proc.cutting_speed, out.n_layers,
                                        task.total_length),
        tool_wear=tool_wear(proc.cutting_speed, out.Fc, out.Ft,
                            out.n_layers),
        abs_Fc=abs(out.Fc),
        abs_Ft=abs(out.Ft))
    return EvalResult(feasible=True, violation=0.0, objectives=obj,
                      outputs=out)


def evaluate_batch(task: TaskSpec, X: np.ndarray
                   ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Array-path evaluation for the optimizer hot loop.

    Args:
        task: the task.
        X: (n, 3) rows of (speed, angle, depth), already inside the box.

    Returns:
        objs: (n, 4) objective rows, NaN where infeasible;
        feasible: (n,) bools;
        violation: (n,) violation magnitudes (inf where the solver failed).
    """
    X = np.asarray(X, dtype=np.float64)
    rows = solve_batch(task.material, X)
    n = X.shape[0]
    objs = np.full((n, N_OBJECTIVES), np.nan)
    feasible = np.zeros(n, dtype=bool)
    violation = np.full(n, np.inf)

    solved = rows[:, 0] == 0
    fc = np.abs(rows[:, 2])
    ft = np.abs(rows[:, 3])
    v = (np.maximum(0.0, X[:, 0] - task.speed_limit)
         + np.maximum(0.0, fc - task.force_limit)
         + np.maximum(0.0, ft - task.force_limit))
    violation[solved] = v[solved]
    feasible[solved] = ((X[solved, 0] < task.speed_limit)
                        & (fc[solved] < task.force_limit)
                        & (ft[solved] < task.force_limit))

    idx = np.where(feasible)[0]
    if idx.size:
        depths = X[idx, 2]
        layers = np.ceil(task.total_depth / depths)
        layers = np.maximum(layers, 1.0)
        speed = X[idx, 0]
        objs[idx, 0] = task.total_length / speed * layers
        objs[idx, 1] = (speed * np.exp(fc[idx])
                        + 0.1 * speed * np.exp(ft[idx])) * layers
        objs[idx, 2] = fc[idx]
        objs[idx, 3] = ft[idx]
    return objs, feasible, violation


def task_evaluator(task: TaskSpec):
    """Bind a task into the (phenotypes) -> (objectives, feasible,
    violation) callable shape the optimizer consumes."""
    def evaluator(X: np.ndarray):
        return evaluate_batch(task, X)
    evaluator.task = task
    return evaluator


class MemoEvaluator:
    """Task evaluator that caches results by exact phenotype bytes.

    Elitist populations re-submit identical phenotypes (crossover
    pass-throughs, unmutated copies, goal-switch re-evaluations), and the
    cutting model is deterministic, so repeated rows can reuse the stored
    objectives without changing any result. Intended lifetime: one
    optimization run.
    """

    def __init__(self, task: TaskSpec):
        self.task = task
        self._cache = {}
        self.calls = 0
        self.hits = 0

    def __call__(self, X: np.ndarray):
        X = np.asarray(X, dtype=np.float64)
        n = X.shape[0]
        self.calls += n
        objs = np.empty((n, N_OBJECTIVES))
        feasible = np.empty(n, dtype=bool)
        violation = np.empty(n)
        pending = {}
        for i in range(n):
            key = X[i].tobytes()
            hit = self._cache.get(key)
            if hit is None:
                pending.setdefault(key, []).append(i)
            else:
                objs[i], feasible[i], violation[i] = hit
                self.hits += 1
        if pending:
            rows = [indices[0] for indices in pending.values()]
            o, f, v = evaluate_batch(self.task, X[rows])
            for j, (key, indices) in enumerate(pending.items()):
                self._cache[key] = (o[j].copy(), bool(f[j]), float(v[j]))
                for i in indices:
                    objs[i] = o[j]
                    feasible[i] = f[j]
                    violation[i] = v[j]
        return objs, feasible, violation


def normalize(obj) -> np.ndarray:
    """Map an objective vector (or (n,4) batch) onto [0,1]^4."""
    if isinstance(obj, ObjectiveVector):
        obj = obj.as_array()
    a = np.asarray(obj, dtype=np.float64)
    out = np.empty_like(a)
    t = a[..., 0]
    w = a[..., 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        out[..., 0] = ((np.log(t) - _LN_TIME_LO)
                       / (_LN_TIME_HI - _LN_TIME_LO))
        out[..., 1] = ((np.log(w) - _LN_WEAR_LO)
                       / (_LN_WEAR_HI - _LN_WEAR_LO))
    out[..., 2] = a[..., 2] / FORCE_LIMIT
    out[..., 3] = a[..., 3] / FORCE_LIMIT
    return np.clip(out, 0.0, 1.0)
