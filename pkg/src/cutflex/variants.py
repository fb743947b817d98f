"""Flexibility extensions of the optimizer: goal schedules that rotate the
evaluation task every few generations, and the active-inactive genotype
whose genes carry spare parameter slots selected by an integer index.

The flat active-inactive layout packs one gene per process parameter:
[selector, slot_1 .. slot_l] repeated n_process times. Selectors are
stored as floats but must always hold exact integers in [1, l]; decoding
validates them and never clamps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .nsga2 import (
    AlgoConfig,
    FrontSnapshot,
    PlainRepresentation,
    RunResult,
    _environmental_selection,
    _feasible_first_front,
    _rank_and_crowd,
    polynomial_mutation,
    sbx_crossover,
    select_parents,
)
from .oxley import N_PROCESS, PROCESS_LOWER, PROCESS_UPPER
from .metrics import hypervolume
from .task import TaskSpec, normalize as normalize_objectives, task_evaluator


class GenotypeError(ValueError):
    """Malformed genotype structure (bad selector, wrong length)."""


@dataclass(frozen=True)
class GoalSchedule:
    """An ordered ring of tasks, each active for epoch_length generations."""
    goals: Tuple[TaskSpec, ...]
    epoch_length: int = 5

    def __post_init__(self):
        goals = tuple(self.goals)
        object.__setattr__(self, "goals", goals)
        if len(goals) < 1:
            raise ValueError("schedule needs at least one goal")
        if len(set(goals)) != len(goals):
            raise ValueError("goals must be distinct")
        if self.epoch_length < 1:
            raise ValueError("epoch length must be at least 1")


def goal_index(i: int, epoch_length: int, n_goals: int) -> int:
    """Which goal generation i (1-based) evaluates against."""
    if i < 1 or epoch_length < 1 or n_goals < 1:
        raise ValueError("generation, epoch length and goal count "
                         "must be positive")
    return ((i - 1) // epoch_length) % n_goals


# ---------------------------------------------------------------------------
# Active-inactive genotype
# ---------------------------------------------------------------------------

def _split(flat: np.ndarray, gene_length: int,
           n_process: int = N_PROCESS) -> np.ndarray:
    flat = np.asarray(flat, dtype=np.float64)
    expect = n_process * (gene_length + 1)
    if flat.shape[-1] != expect:
        raise GenotypeError(
            f"genotype length {flat.shape[-1]} != {expect} "
            f"(n_process={n_process}, gene_length={gene_length})")
    return flat.reshape(flat.shape[:-1] + (n_process, gene_length + 1))


def _selectors_checked(genes: np.ndarray, gene_length: int) -> np.ndarray:
    sel = genes[..., 0]
    rounded = np.rint(sel)
    if not np.array_equal(sel, rounded):
        raise GenotypeError("selector is not an integer")
    if (rounded < 1).any() or (rounded > gene_length).any():
        raise GenotypeError(
            f"selector outside [1, {gene_length}]")
    return rounded.astype(np.int64)


def decode_genotype(flat: np.ndarray, gene_length: int) -> np.ndarray:
    """Read each gene's active slot into a phenotype vector (or batch)."""
    genes = _split(flat, gene_length)
    sel = _selectors_checked(genes, gene_length)
    slots = genes[..., 1:]
    return np.take_along_axis(slots, sel[..., None] - 1, axis=-1)[..., 0]


def encode_genotype(flat: np.ndarray, phenotype: np.ndarray,
                    gene_length: int,
                    lower: Sequence[float] = PROCESS_LOWER,
                    upper: Sequence[float] = PROCESS_UPPER) -> np.ndarray:
    """Write a phenotype into the active slots of a genotype, leaving
    selectors and inactive slots untouched. Returns a new flat vector."""
    flat = np.asarray(flat, dtype=np.float64)
    genes = _split(flat, gene_length).copy()
    sel = _selectors_checked(genes, gene_length)
    p = np.asarray(phenotype, dtype=np.float64)
    if p.shape != genes.shape[:-1]:
        raise GenotypeError(
            f"phenotype shape {p.shape} does not match gene count "
            f"{genes.shape[:-1]}")
    lo = np.asarray(lower, dtype=np.float64)
    up = np.asarray(upper, dtype=np.float64)
    if (p < lo).any() or (p > up).any():
        raise GenotypeError("phenotype outside parameter bounds")
    slots = genes[..., 1:]
    np.put_along_axis(slots, sel[..., None] - 1, p[..., None], axis=-1)
    return genes.reshape(flat.shape)


def two_step_mutation(flat: np.ndarray, gene_length: int,
                      lower: np.ndarray, upper: np.ndarray,
                      rng: np.random.Generator,
                      eta_mut: float = 20.0,
                      flip_prob: Optional[float] = None,
                      mutation_prob: Optional[float] = None) -> np.ndarray:
    """Selector reassignment then phenotype perturbation.

    Step 1 gives every selector an independent chance (default
    1/n_process) to move to a different uniformly random slot index.
    Step 2 decodes, applies bounded polynomial mutation, and encodes the
    result back into the active slots.
    """
    lower = np.asarray(lower, dtype=np.float64)
    upper = np.asarray(upper, dtype=np.float64)
    n_process = lower.shape[0]
    if flip_prob is None:
        flip_prob = 1.0 / n_process
    if mutation_prob is None:
        mutation_prob = 1.0 / n_process
    genes = _split(flat, gene_length, n_process).copy()
    sel = _selectors_checked(genes, gene_length)
    if flip_prob > 0.0 and gene_length > 1:
        for i in range(n_process):
            if rng.random() <= flip_prob:
                r = int(rng.integers(1, gene_length))
                genes[i, 0] = float(r if r < sel[i] else r + 1)
    flat_new = genes.reshape(-1)
    phenotype = decode_genotype(flat_new, gene_length)
    mutated = polynomial_mutation(phenotype, eta_mut, mutation_prob,
                                  lower, upper, rng)
    return encode_genotype(flat_new, mutated, gene_length, lower, upper)


def ai_crossover(g1: np.ndarray, g2: np.ndarray, gene_length: int,
                 lower: np.ndarray, upper: np.ndarray,
                 rng: np.random.Generator,
                 eta_cross: float = 30.0
                 ) -> Tuple[np.ndarray, np.ndarray]:
    """Recombine on the decoded phenotypes; each child keeps its own
    parent's selectors and inactive slots."""
    lower = np.asarray(lower, dtype=np.float64)
    upper = np.asarray(upper, dtype=np.float64)
    p1 = decode_genotype(g1, gene_length)
    p2 = decode_genotype(g2, gene_length)
    c1, c2 = sbx_crossover(p1, p2, eta_cross, lower, upper, rng)
    return (encode_genotype(g1, c1, gene_length, lower, upper),
            encode_genotype(g2, c2, gene_length, lower, upper))


class ActiveInactiveRepresentation:
    """Engine adapter for the selector-slot genotype."""

    def __init__(self, config: AlgoConfig, gene_length: int = 2,
                 lower: Sequence[float] = PROCESS_LOWER,
                 upper: Sequence[float] = PROCESS_UPPER,
                 flip_prob: Optional[float] = None):
        if gene_length < 1:
            raise ValueError("gene length must be at least 1")
        self.lower = np.asarray(lower, dtype=np.float64)
        self.upper = np.asarray(upper, dtype=np.float64)
        self.config = config
        self.gene_length = gene_length
        self.n_process = self.lower.shape[0]
        self.genotype_length = self.n_process * (gene_length + 1)
        self.flip_prob = flip_prob

    def random_population(self, n: int,
                          rng: np.random.Generator) -> np.ndarray:
        l = self.gene_length
        genes = np.empty((n, self.n_process, l + 1))
        genes[:, :, 0] = rng.integers(
            1, l + 1, size=(n, self.n_process)).astype(np.float64)
        span = self.upper - self.lower
        genes[:, :, 1:] = (self.lower[None, :, None]
                           + rng.random((n, self.n_process, l))
                           * span[None, :, None])
        return genes.reshape(n, self.genotype_length)

    def decode(self, genotypes: np.ndarray) -> np.ndarray:
        return decode_genotype(genotypes, self.gene_length)

    def mate(self, g1: np.ndarray, g2: np.ndarray,
             rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
        return ai_crossover(g1, g2, self.gene_length,
                            self.lower, self.upper, rng,
                            eta_cross=self.config.eta_cross)

    def mutate(self, g: np.ndarray,
               rng: np.random.Generator) -> np.ndarray:
        return two_step_mutation(g, self.gene_length,
                                 self.lower, self.upper, rng,
                                 eta_mut=self.config.eta_mut,
                                 flip_prob=self.flip_prob,
                                 mutation_prob=self.config.mutation_prob)

    def embed(self, phenotypes: np.ndarray,
              rng: np.random.Generator) -> np.ndarray:
        """Wrap plain phenotypes in fresh random genotypes, so archives
        from a plain-genotype run can seed an active-inactive run."""
        phenotypes = np.atleast_2d(np.asarray(phenotypes, dtype=np.float64))
        shells = self.random_population(phenotypes.shape[0], rng)
        return encode_genotype(shells, phenotypes, self.gene_length,
                               self.lower, self.upper)


GENOTYPE_KINDS = ("plain", "active-inactive")


def make_representation(kind: str, config: AlgoConfig,
                        gene_length: int = 2,
                        lower: Sequence[float] = PROCESS_LOWER,
                        upper: Sequence[float] = PROCESS_UPPER):
    if kind == "plain":
        return PlainRepresentation(config, lower, upper)
    if kind == "active-inactive":
        return ActiveInactiveRepresentation(config, gene_length,
                                            lower, upper)
    raise ValueError(f"unknown genotype kind {kind!r}, "
                     f"expected one of {GENOTYPE_KINDS}")


# ---------------------------------------------------------------------------
# Varying-goals loop
# ---------------------------------------------------------------------------

@dataclass
class VaryingGoalsResult:
    result: RunResult
    per_goal_best_hv: List[float]
    switches: int


def varying_goals_run(schedule: GoalSchedule, config: AlgoConfig,
                      genotype_kind: str = "plain",
                      gene_length: int = 2,
                      representation=None,
                      initial_genotypes: Optional[np.ndarray] = None,
                      evaluators: Optional[Sequence[Callable]] = None,
                      normalize_fn: Callable = normalize_objectives
                      ) -> VaryingGoalsResult:
    """Generational loop with a rotating evaluation goal.

    Generation i (1-based) evaluates against
    schedule.goals[goal_index(i, E, n)]; the initial population uses the
    first generation's goal. When the goal changes, the incumbent
    population is re-evaluated under the new goal and those evaluations
    are counted. The stored front is replaced whenever the current goal's
    best hypervolume strictly improves. A single-goal schedule reproduces
    the plain optimizer run exactly.
    """
    rng = np.random.default_rng(config.seed)
    if representation is None:
        representation = make_representation(genotype_kind, config,
                                             gene_length)
    if evaluators is None:
        evaluators = [task_evaluator(t) for t in schedule.goals]
    if len(evaluators) != len(schedule.goals):
        raise ValueError("one evaluator per goal required")
    n_goals = len(schedule.goals)
    epoch = schedule.epoch_length
    pop_size = config.population_size

    if initial_genotypes is not None and len(initial_genotypes) > 0:
        seeds = np.asarray(initial_genotypes, dtype=np.float64)
        if seeds.ndim != 2 or seeds.shape[1] != representation.genotype_length:
            raise ValueError("seed genotypes do not fit the representation")
        seeds = seeds[:pop_size]
        if seeds.shape[0] < pop_size:
            filler = representation.random_population(
                pop_size - seeds.shape[0], rng)
            genotypes = np.vstack([seeds, filler])
        else:
            genotypes = seeds.copy()
    else:
        genotypes = representation.random_population(pop_size, rng)

    active = goal_index(1, epoch, n_goals)
    phenotypes = representation.decode(genotypes)
    objs, feasible, violation = evaluators[active](phenotypes)
    evaluations = pop_size
    extra = 0
    switches = 0

    per_goal_best = [-1.0] * n_goals
    stored = FrontSnapshot(genotypes=np.empty((0, genotypes.shape[1])),
                           phenotypes=np.empty((0, phenotypes.shape[1])),
                           objectives=np.empty((0, objs.shape[1])),
                           hypervolume=0.0, generation=0, evaluations=0)
    trace: List[Tuple[int, float]] = []

    def observe(generation: int):
        nonlocal stored
        first = _feasible_first_front(objs, feasible, violation)
        hv = 0.0
        if first.size:
            hv = hypervolume(normalize_fn(objs[first]))
        if hv > per_goal_best[active]:
            per_goal_best[active] = hv
            stored = FrontSnapshot(genotypes=genotypes[first].copy(),
                                   phenotypes=phenotypes[first].copy(),
                                   objectives=objs[first].copy(),
                                   hypervolume=hv, generation=generation,
                                   evaluations=evaluations)
        trace.append((evaluations, max(per_goal_best[active], 0.0)))

    observe(0)

    generation = 0
    _, rank, crowd = _rank_and_crowd(objs, feasible, violation)
    for generation in range(1, config.max_generations + 1):
        goal = goal_index(generation, epoch, n_goals)
        if goal != active:
            active = goal
            switches += 1
            objs, feasible, violation = evaluators[active](phenotypes)
            evaluations += pop_size
            extra += pop_size
            _, rank, crowd = _rank_and_crowd(objs, feasible, violation)

        parents = select_parents(rank, crowd, rng)
        child_genos = np.empty_like(genotypes)
        for t in range(0, pop_size, 2):
            g1 = genotypes[parents[t]]
            g2 = genotypes[parents[t + 1]]
            if (config.crossover_prob >= 1.0
                    or rng.random() <= config.crossover_prob):
                c1, c2 = representation.mate(g1, g2, rng)
            else:
                c1, c2 = g1.copy(), g2.copy()
            child_genos[t] = representation.mutate(c1, rng)
            child_genos[t + 1] = representation.mutate(c2, rng)
        child_phenos = representation.decode(child_genos)
        c_objs, c_feas, c_viol = evaluators[active](child_phenos)
        evaluations += pop_size

        merged_genos = np.vstack([genotypes, child_genos])
        merged_phenos = np.vstack([phenotypes, child_phenos])
        merged_objs = np.vstack([objs, c_objs])
        merged_feas = np.concatenate([feasible, c_feas])
        merged_viol = np.concatenate([violation, c_viol])

        idx, rank, crowd = _environmental_selection(
            merged_objs, merged_feas, merged_viol, pop_size)
        genotypes = merged_genos[idx]
        phenotypes = merged_phenos[idx]
        objs = merged_objs[idx]
        feasible = merged_feas[idx]
        violation = merged_viol[idx]

        observe(generation)

    result = RunResult(best_front=stored,
                       best_hypervolume=stored.hypervolume,
                       evaluations_used=evaluations,
                       success_checkpoint=None,
                       trace=trace,
                       generations_executed=generation,
                       extra_evaluations=extra)
    return VaryingGoalsResult(result=result,
                              per_goal_best_hv=[max(h, 0.0)
                                                for h in per_goal_best],
                              switches=switches)
