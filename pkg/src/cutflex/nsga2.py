"""Elitist multi-objective engine: non-dominated sorting with constraint
handling, crowding, binary tournaments, bounded simulated-binary crossover,
bounded polynomial mutation, and the generational loop with optional
archive seeding and threshold-based early stopping.

Populations are handled as arrays (genotypes, objectives, feasibility,
violation) rather than per-individual objects; ranks and crowding are
recomputed each selection pass.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .oxley import N_PROCESS, PROCESS_LOWER, PROCESS_UPPER
from .metrics import hypervolume
from .task import normalize as normalize_objectives


@dataclass(frozen=True)
class AlgoConfig:
    population_size: int = 100
    max_generations: int = 50
    tournament_size: int = 2
    eta_cross: float = 30.0
    eta_mut: float = 20.0
    mutation_prob: float = 1.0 / N_PROCESS
    crossover_prob: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.population_size < 4 or self.population_size % 2:
            raise ValueError("population size must be even and at least 4")
        if self.max_generations < 0:
            raise ValueError("negative generation count")
        if self.tournament_size != 2:
            raise ValueError("only binary tournaments are supported")
        if self.eta_cross <= 0 or self.eta_mut <= 0:
            raise ValueError("distribution indices must be positive")
        for p in (self.mutation_prob, self.crossover_prob):
            if not 0.0 <= p <= 1.0:
                raise ValueError("probabilities must lie in [0, 1]")


@dataclass
class FrontSnapshot:
    """A stored Pareto front: the feasible first front of some generation."""
    genotypes: np.ndarray
    phenotypes: np.ndarray
    objectives: np.ndarray
    hypervolume: float
    generation: int
    evaluations: int

    def __len__(self) -> int:
        return self.genotypes.shape[0]


@dataclass
class RunResult:
    best_front: FrontSnapshot
    best_hypervolume: float
    evaluations_used: int
    success_checkpoint: Optional[int]
    trace: List[Tuple[int, float]]
    generations_executed: int
    extra_evaluations: int = 0  # re-evaluations outside the generational grid


# ---------------------------------------------------------------------------
# Domination and sorting
# ---------------------------------------------------------------------------

def dominates(a, b) -> bool:
    """Strict Pareto domination for minimization."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    return bool((a <= b).all() and (a < b).any())


def _domination_matrix(objs: np.ndarray, feasible: np.ndarray,
                       violation: np.ndarray) -> np.ndarray:
    """dom[i, j] true iff i constraint-dominates j: feasible beats
    infeasible, feasible pairs compare by Pareto domination, infeasible
    pairs by violation magnitude."""
    n = objs.shape[0]
    dom = np.zeros((n, n), dtype=bool)
    f = feasible
    if f.any():
        o = objs[f]
        le = (o[:, None, :] <= o[None, :, :]).all(axis=2)
        lt = (o[:, None, :] < o[None, :, :]).any(axis=2)
        idx = np.where(f)[0]
        dom[np.ix_(idx, idx)] = le & lt
        dom[np.ix_(idx, np.where(~f)[0])] = True
    if (~f).any():
        idx = np.where(~f)[0]
        v = violation[idx]
        dom[np.ix_(idx, idx)] = v[:, None] < v[None, :]
    return dom


def non_dominated_sort(objs: np.ndarray,
                       feasible: Optional[np.ndarray] = None,
                       violation: Optional[np.ndarray] = None
                       ) -> Tuple[List[np.ndarray], np.ndarray]:
    """Partition a population into successive non-dominated fronts.

    Returns (fronts, rank): fronts as index arrays in discovery order,
    rank[i] = front index of individual i.
    """
    objs = np.asarray(objs, dtype=np.float64)
    n = objs.shape[0]
    if feasible is None:
        feasible = np.ones(n, dtype=bool)
    if violation is None:
        violation = np.zeros(n)
    dom = _domination_matrix(objs, feasible, violation)
    n_dominators = dom.sum(axis=0)
    rank = np.full(n, -1, dtype=np.int64)
    fronts: List[np.ndarray] = []
    remaining = n
    level = 0
    while remaining:
        current = np.where((n_dominators == 0) & (rank < 0))[0]
        rank[current] = level
        fronts.append(current)
        n_dominators = n_dominators - dom[current].sum(axis=0)
        remaining -= current.size
        level += 1
    return fronts, rank


def crowding_distance(objs: np.ndarray) -> np.ndarray:
    """Crowding of one front: boundary individuals get +inf, interior ones
    the per-objective neighbor-gap sum over the front's min-max range.
    Exact duplicate vectors score 0 unless they hold a boundary slot."""
    objs = np.asarray(objs, dtype=np.float64)
    if objs.ndim == 1:
        objs = objs[:, None]
    m = objs.shape[0]
    if m <= 2:
        return np.full(m, np.inf)
    d = np.zeros(m)
    for j in range(objs.shape[1]):
        col = objs[:, j]
        order = np.argsort(col, kind="stable")
        d[order[0]] = np.inf
        d[order[-1]] = np.inf
        lo_v = col[order[0]]
        hi_v = col[order[-1]]
        # an all-infinite column (a front of solver failures crowding on
        # violation) has no usable range, same as an all-equal one
        if np.isfinite(lo_v) and np.isfinite(hi_v) and hi_v > lo_v:
            inner = order[1:-1]
            d[inner] += (col[order[2:]] - col[order[:-2]]) / (hi_v - lo_v)
    _, inverse, counts = np.unique(objs, axis=0, return_inverse=True,
                                   return_counts=True)
    dup = counts[inverse] > 1
    d[dup & np.isfinite(d)] = 0.0
    return d


def crowded_precedes(rank_a: int, crowd_a: float,
                     rank_b: int, crowd_b: float) -> bool:
    """True iff a strictly precedes b: lower rank, or equal rank and
    larger crowding. Equal rank and crowding is a tie (false), so callers
    fall back to stable original order."""
    if rank_a != rank_b:
        return rank_a < rank_b
    return crowd_a > crowd_b


# ---------------------------------------------------------------------------
# Variation operators
# ---------------------------------------------------------------------------

def sbx_crossover(p1: np.ndarray, p2: np.ndarray, eta: float,
                  lower: np.ndarray, upper: np.ndarray,
                  rng: np.random.Generator
                  ) -> Tuple[np.ndarray, np.ndarray]:
    """Bounded simulated-binary crossover. Per gene: recombined with
    probability 0.5 using one shared spread draw, children clipped to the
    bounds and swapped with probability 0.5; genes closer than 1e-14 pass
    through unchanged."""
    c1 = p1.astype(np.float64).copy()
    c2 = p2.astype(np.float64).copy()
    for i in range(c1.shape[0]):
        if rng.random() > 0.5:
            continue
        if abs(c1[i] - c2[i]) <= 1e-14:
            continue
        xl = lower[i]
        xu = upper[i]
        x1 = min(c1[i], c2[i])
        x2 = max(c1[i], c2[i])
        u = rng.random()

        beta = 1.0 + (2.0 * (x1 - xl) / (x2 - x1))
        alpha = 2.0 - beta ** -(eta + 1.0)
        if u <= 1.0 / alpha:
            beta_q = (u * alpha) ** (1.0 / (eta + 1.0))
        else:
            beta_q = (1.0 / (2.0 - u * alpha)) ** (1.0 / (eta + 1.0))
        lo_child = 0.5 * (x1 + x2 - beta_q * (x2 - x1))

        beta = 1.0 + (2.0 * (xu - x2) / (x2 - x1))
        alpha = 2.0 - beta ** -(eta + 1.0)
        if u <= 1.0 / alpha:
            beta_q = (u * alpha) ** (1.0 / (eta + 1.0))
        else:
            beta_q = (1.0 / (2.0 - u * alpha)) ** (1.0 / (eta + 1.0))
        hi_child = 0.5 * (x1 + x2 + beta_q * (x2 - x1))

        lo_child = min(max(lo_child, xl), xu)
        hi_child = min(max(hi_child, xl), xu)
        if rng.random() <= 0.5:
            c1[i], c2[i] = hi_child, lo_child
        else:
            c1[i], c2[i] = lo_child, hi_child
    return c1, c2


def polynomial_mutation(x: np.ndarray, eta: float, prob: float,
                        lower: np.ndarray, upper: np.ndarray,
                        rng: np.random.Generator) -> np.ndarray:
    """Bounded polynomial mutation, each gene perturbed with the given
    probability."""
    y = x.astype(np.float64).copy()
    mut_pow = 1.0 / (eta + 1.0)
    for i in range(y.shape[0]):
        if rng.random() > prob:
            continue
        xl = lower[i]
        xu = upper[i]
        span = xu - xl
        if span <= 0.0:
            continue
        v = y[i]
        u = rng.random()
        if u < 0.5:
            xy = 1.0 - (v - xl) / span
            val = 2.0 * u + (1.0 - 2.0 * u) * xy ** (eta + 1.0)
            delta_q = val ** mut_pow - 1.0
        else:
            xy = 1.0 - (xu - v) / span
            val = (2.0 * (1.0 - u)
                   + 2.0 * (u - 0.5) * xy ** (eta + 1.0))
            delta_q = 1.0 - val ** mut_pow
        v = v + delta_q * span
        y[i] = min(max(v, xl), xu)
    return y


# ---------------------------------------------------------------------------
# Genotype representations
# ---------------------------------------------------------------------------

class PlainRepresentation:
    """Genotype equals the process-parameter vector."""

    def __init__(self, config: AlgoConfig,
                 lower: Sequence[float] = PROCESS_LOWER,
                 upper: Sequence[float] = PROCESS_UPPER):
        self.lower = np.asarray(lower, dtype=np.float64)
        self.upper = np.asarray(upper, dtype=np.float64)
        self.config = config
        self.genotype_length = self.lower.shape[0]

    def random_population(self, n: int,
                          rng: np.random.Generator) -> np.ndarray:
        span = self.upper - self.lower
        return self.lower + rng.random((n, self.genotype_length)) * span

    def decode(self, genotypes: np.ndarray) -> np.ndarray:
        return np.asarray(genotypes, dtype=np.float64)

    def mate(self, g1: np.ndarray, g2: np.ndarray,
             rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
        return sbx_crossover(g1, g2, self.config.eta_cross,
                             self.lower, self.upper, rng)

    def mutate(self, g: np.ndarray,
               rng: np.random.Generator) -> np.ndarray:
        return polynomial_mutation(g, self.config.eta_mut,
                                   self.config.mutation_prob,
                                   self.lower, self.upper, rng)


# ---------------------------------------------------------------------------
# Generational machinery
# ---------------------------------------------------------------------------

def _rank_and_crowd(objs: np.ndarray, feasible: np.ndarray,
                    violation: np.ndarray
                    ) -> Tuple[List[np.ndarray], np.ndarray, np.ndarray]:
    """Fronts, ranks, and per-individual crowding. Feasible fronts crowd
    on raw objectives; infeasible fronts crowd on the violation scalar."""
    fronts, rank = non_dominated_sort(objs, feasible, violation)
    crowd = np.zeros(objs.shape[0])
    for front in fronts:
        if feasible[front].all():
            crowd[front] = crowding_distance(objs[front])
        else:
            crowd[front] = crowding_distance(violation[front])
    return fronts, rank, crowd


def select_parents(rank: np.ndarray, crowd: np.ndarray,
                   rng: np.random.Generator) -> np.ndarray:
    """Binary tournaments over two independent shuffles, each pairing the
    population into disjoint duels; the shuffle-first individual wins
    ties."""
    n = rank.shape[0]
    winners = np.empty(n, dtype=np.int64)
    w = 0
    for _ in range(2):
        perm = rng.permutation(n)
        for t in range(0, n, 2):
            a = perm[t]
            b = perm[t + 1]
            if crowded_precedes(rank[b], crowd[b], rank[a], crowd[a]):
                winners[w] = b
            else:
                winners[w] = a
            w += 1
    return winners


def _environmental_selection(objs, feasible, violation, pop_size):
    """NSGA-II survivor choice over a merged population: whole fronts
    while they fit, crowding truncation on the boundary front. Returns
    (chosen indices, rank of chosen, crowding of chosen)."""
    fronts, rank, crowd = _rank_and_crowd(objs, feasible, violation)
    chosen: List[int] = []
    for front in fronts:
        if len(chosen) + front.size <= pop_size:
            chosen.extend(front.tolist())
            if len(chosen) == pop_size:
                break
        else:
            need = pop_size - len(chosen)
            order = np.argsort(-crowd[front], kind="stable")
            chosen.extend(front[order[:need]].tolist())
            break
    idx = np.array(chosen, dtype=np.int64)
    return idx, rank[idx], crowd[idx]


def _feasible_first_front(objs, feasible, violation):
    fronts, _ = non_dominated_sort(objs, feasible, violation)
    first = fronts[0]
    return first[feasible[first]]


def run(evaluator: Callable, config: AlgoConfig,
        representation=None,
        initial_genotypes: Optional[np.ndarray] = None,
        stop_threshold: Optional[float] = None,
        normalize_fn: Callable = normalize_objectives) -> RunResult:
    """One seeded optimization run.

    Args:
        evaluator: maps (n, 3) phenotypes to (objectives, feasible,
            violation) arrays; never raises for in-bounds inputs.
        config: algorithm parameters; config.seed fixes the whole run.
        representation: genotype handler, default plain real vector.
        initial_genotypes: optional seed individuals (an adaption start);
            truncated to the population size, topped up with random
            genotypes, and re-evaluated here.
        stop_threshold: normalized hypervolume that ends the run early,
            checked once per generation at population-size granularity.
        normalize_fn: objective scaling applied before hypervolume.

    Returns:
        RunResult; its best_front holds the feasible first front with the
        highest hypervolume seen, captured when it last improved.
    """
    rng = np.random.default_rng(config.seed)
    if representation is None:
        representation = PlainRepresentation(config)
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

    phenotypes = representation.decode(genotypes)
    objs, feasible, violation = evaluator(phenotypes)
    evaluations = pop_size

    best_hv = -1.0
    best_front = FrontSnapshot(genotypes=np.empty((0, genotypes.shape[1])),
                               phenotypes=np.empty((0, phenotypes.shape[1])),
                               objectives=np.empty((0, objs.shape[1])),
                               hypervolume=0.0, generation=0, evaluations=0)
    trace: List[Tuple[int, float]] = []
    success: Optional[int] = None

    def observe(generation: int) -> float:
        nonlocal best_hv, best_front
        first = _feasible_first_front(objs, feasible, violation)
        hv = 0.0
        if first.size:
            hv = hypervolume(normalize_fn(objs[first]))
        if hv > best_hv:
            best_hv = hv
            best_front = FrontSnapshot(
                genotypes=genotypes[first].copy(),
                phenotypes=phenotypes[first].copy(),
                objectives=objs[first].copy(),
                hypervolume=hv, generation=generation,
                evaluations=evaluations)
        trace.append((evaluations, best_hv if best_hv > 0.0 else 0.0))
        return hv

    observe(0)
    if (stop_threshold is not None and best_hv >= stop_threshold
            and success is None):
        success = evaluations

    generation = 0
    if success is None:
        _, rank, crowd = _rank_and_crowd(objs, feasible, violation)
        for generation in range(1, config.max_generations + 1):
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
            c_objs, c_feas, c_viol = evaluator(child_phenos)
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
            if stop_threshold is not None and best_hv >= stop_threshold:
                success = evaluations
                break

    return RunResult(best_front=best_front,
                     best_hypervolume=max(best_hv, 0.0),
                     evaluations_used=evaluations,
                     success_checkpoint=success,
                     trace=trace,
                     generations_executed=generation)
