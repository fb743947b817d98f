"""Tests for goal scheduling, the active-inactive genotype operators,
and the varying-goals optimization loop."""

import numpy as np
import pytest

from cutflex.nsga2 import AlgoConfig, PlainRepresentation, run
from cutflex.oxley import PROCESS_LOWER, PROCESS_UPPER
from cutflex.task import make_task
from cutflex.variants import (
    ActiveInactiveRepresentation,
    GenotypeError,
    GoalSchedule,
    ai_crossover,
    decode_genotype,
    encode_genotype,
    goal_index,
    make_representation,
    two_step_mutation,
    varying_goals_run,
)

LO = np.asarray(PROCESS_LOWER)
UP = np.asarray(PROCESS_UPPER)


def random_genotype(rng, l):
    genes = np.empty((3, l + 1))
    genes[:, 0] = rng.integers(1, l + 1, size=3)
    genes[:, 1:] = LO[:, None] + rng.random((3, l)) * (UP - LO)[:, None]
    return genes.reshape(-1)


def inactive_slots(flat, l):
    """Multiset of (gene, slot value) pairs not pointed at by a selector."""
    genes = flat.reshape(3, l + 1)
    out = []
    for i in range(3):
        sel = int(genes[i, 0])
        for j in range(1, l + 1):
            if j != sel:
                out.append((i, genes[i, j]))
    return sorted(out)


# ---------------------------------------------------------------------------
# Goal index arithmetic
# ---------------------------------------------------------------------------

def test_goal_index_first_epoch():
    assert goal_index(1, 5, 2) == 0
    assert goal_index(5, 5, 2) == 0


def test_goal_index_second_epoch_starts_after_e_generations():
    assert goal_index(6, 5, 2) == 1
    assert goal_index(10, 5, 2) == 1
    assert goal_index(11, 5, 2) == 0


def test_goal_index_three_goals():
    assert goal_index(26, 5, 3) == 2


def test_goal_index_periodic_and_surjective():
    for e, n in [(1, 2), (5, 2), (3, 4), (7, 3)]:
        seen = set()
        for i in range(1, 4 * e * n + 1):
            g = goal_index(i, e, n)
            assert 0 <= g < n
            assert g == goal_index(i + e * n, e, n)
            seen.add(g)
        assert seen == set(range(n))


def test_goal_index_rejects_bad_arguments():
    with pytest.raises(ValueError):
        goal_index(0, 5, 2)
    with pytest.raises(ValueError):
        goal_index(1, 0, 2)
    with pytest.raises(ValueError):
        goal_index(1, 5, 0)


def test_goal_schedule_validation():
    steel = make_task("steel")
    tungsten = make_task("tungsten_alloy")
    GoalSchedule((steel, tungsten), 5)
    GoalSchedule((steel,), 1)
    with pytest.raises(ValueError):
        GoalSchedule((), 5)
    with pytest.raises(ValueError):
        GoalSchedule((steel, steel), 5)
    with pytest.raises(ValueError):
        GoalSchedule((steel, tungsten), 0)


# ---------------------------------------------------------------------------
# Decode / encode
# ---------------------------------------------------------------------------

def test_decode_hand_case():
    flat = np.array([1.0, 3.0, 4.0,
                     2.0, 0.1, 0.2,
                     1.0, 5e-4, 7e-4])
    assert decode_genotype(flat, 2).tolist() == [3.0, 0.2, 5e-4]


def test_decode_all_selectors_one_reads_first_slots():
    rng = np.random.default_rng(1)
    for l in (1, 2, 4):
        g = random_genotype(rng, l)
        genes = g.reshape(3, l + 1)
        genes[:, 0] = 1.0
        assert (decode_genotype(genes.reshape(-1), l)
                == genes[:, 1]).all()


def test_decode_rejects_malformed_selectors():
    flat = np.array([1.0, 3.0, 4.0, 2.0, 0.1, 0.2, 1.0, 5e-4, 7e-4])
    for bad, value in [(0, 0.0), (0, 3.0), (3, 1.5), (6, -1.0)]:
        broken = flat.copy()
        broken[bad] = value
        with pytest.raises(GenotypeError):
            decode_genotype(broken, 2)


def test_decode_rejects_wrong_length():
    with pytest.raises(GenotypeError):
        decode_genotype(np.zeros(8), 2)


def test_decode_encode_roundtrip_randomized():
    rng = np.random.default_rng(2)
    for _ in range(200):
        l = int(rng.integers(1, 5))
        g = random_genotype(rng, l)
        p = LO + rng.random(3) * (UP - LO)
        assert np.array_equal(decode_genotype(
            encode_genotype(g, p, l), l), p)


def test_encode_decode_identity():
    rng = np.random.default_rng(3)
    for _ in range(200):
        l = int(rng.integers(1, 5))
        g = random_genotype(rng, l)
        assert np.array_equal(encode_genotype(g, decode_genotype(g, l), l),
                              g)


def test_encode_touches_only_selected_slots():
    rng = np.random.default_rng(4)
    g = random_genotype(rng, 3)
    genes = g.reshape(3, 4)
    genes[:, 0] = 2.0
    g = genes.reshape(-1)
    p = LO + rng.random(3) * (UP - LO)
    out = encode_genotype(g, p, 3).reshape(3, 4)
    assert (out[:, 2] == p).all()
    assert (out[:, 0] == 2.0).all()
    assert (out[:, 1] == genes[:, 1]).all()
    assert (out[:, 3] == genes[:, 3]).all()


def test_encode_preserves_inactive_multiset():
    rng = np.random.default_rng(5)
    for _ in range(100):
        l = int(rng.integers(2, 5))
        g = random_genotype(rng, l)
        p = LO + rng.random(3) * (UP - LO)
        out = encode_genotype(g, p, l)
        assert inactive_slots(out, l) == inactive_slots(g, l)


def test_encode_rejects_length_mismatch_and_out_of_bounds():
    rng = np.random.default_rng(6)
    g = random_genotype(rng, 2)
    with pytest.raises(GenotypeError):
        encode_genotype(g, np.zeros(4), 2)
    bad = np.array([10.0, 0.0, 5e-4])  # speed above its upper bound
    with pytest.raises(GenotypeError):
        encode_genotype(g, bad, 2)


# ---------------------------------------------------------------------------
# Two-step mutation
# ---------------------------------------------------------------------------

def test_two_step_mutation_suppressed_is_identity():
    rng = np.random.default_rng(7)
    g = random_genotype(rng, 2)
    out = two_step_mutation(g, 2, LO, UP, rng,
                            flip_prob=0.0, mutation_prob=0.0)
    assert np.array_equal(out, g)


def test_two_step_mutation_forced_flip_toggles_selector():
    rng = np.random.default_rng(8)
    g = random_genotype(rng, 2)
    before = g.reshape(3, 3).copy()
    out = two_step_mutation(g, 2, LO, UP, rng,
                            flip_prob=1.0, mutation_prob=0.0)
    after = out.reshape(3, 3)
    for i in range(3):
        assert after[i, 0] == 3.0 - before[i, 0]  # 1 <-> 2
    # with the perturbation off, slot values cannot move
    assert np.array_equal(after[:, 1:], before[:, 1:])


def test_two_step_mutation_flip_rate():
    rng = np.random.default_rng(9)
    g = random_genotype(rng, 2)
    sel0 = g.reshape(3, 3)[:, 0].copy()
    trials = 100_000
    flips = np.zeros(3)
    for _ in range(trials):
        out = two_step_mutation(g, 2, LO, UP, rng, mutation_prob=0.0)
        flips += out.reshape(3, 3)[:, 0] != sel0
    rate = flips / trials
    p = 1.0 / 3.0
    se = np.sqrt(p * (1 - p) / trials)
    assert (np.abs(rate - p) <= 3 * se).all(), rate


def test_two_step_mutation_preserves_inactive_slots():
    rng = np.random.default_rng(10)
    for _ in range(50):
        l = int(rng.integers(2, 4))
        g = random_genotype(rng, l)
        out = two_step_mutation(g, l, LO, UP, rng, flip_prob=0.0)
        # selectors unchanged, so inactivity pattern is comparable
        assert inactive_slots(out, l) == inactive_slots(g, l)


def test_two_step_mutation_keeps_genotype_well_formed():
    rng = np.random.default_rng(11)
    g = random_genotype(rng, 3)
    for _ in range(300):
        g = two_step_mutation(g, 3, LO, UP, rng)
        genes = g.reshape(3, 4)
        assert ((genes[:, 0] >= 1) & (genes[:, 0] <= 3)).all()
        assert (genes[:, 0] == np.rint(genes[:, 0])).all()
        p = decode_genotype(g, 3)
        assert (p >= LO).all() and (p <= UP).all()


def test_two_step_mutation_single_slot_never_flips():
    rng = np.random.default_rng(12)
    g = random_genotype(rng, 1)
    for _ in range(50):
        out = two_step_mutation(g, 1, LO, UP, rng, mutation_prob=0.0)
        assert np.array_equal(out, g)


# ---------------------------------------------------------------------------
# Crossover on the decoded phenotype
# ---------------------------------------------------------------------------

def test_ai_crossover_identical_parents_unchanged():
    rng = np.random.default_rng(13)
    g = random_genotype(rng, 2)
    c1, c2 = ai_crossover(g, g.copy(), 2, LO, UP, rng)
    assert np.array_equal(c1, g) and np.array_equal(c2, g)


def test_ai_crossover_children_keep_own_structure():
    rng = np.random.default_rng(14)
    for _ in range(100):
        l = int(rng.integers(2, 5))
        g1 = random_genotype(rng, l)
        g2 = random_genotype(rng, l)
        c1, c2 = ai_crossover(g1, g2, l, LO, UP, rng)
        for child, parent in ((c1, g1), (c2, g2)):
            assert np.array_equal(child.reshape(3, l + 1)[:, 0],
                                  parent.reshape(3, l + 1)[:, 0])
            assert inactive_slots(child, l) == inactive_slots(parent, l)
            p = decode_genotype(child, l)
            assert (p >= LO).all() and (p <= UP).all()


# ---------------------------------------------------------------------------
# Representation adapter
# ---------------------------------------------------------------------------

def test_ai_representation_random_population_well_formed():
    cfg = AlgoConfig(population_size=20, max_generations=1, seed=0)
    rep = ActiveInactiveRepresentation(cfg, gene_length=3)
    rng = np.random.default_rng(15)
    pop = rep.random_population(30, rng)
    assert pop.shape == (30, 12)
    genes = pop.reshape(30, 3, 4)
    assert ((genes[:, :, 0] >= 1) & (genes[:, :, 0] <= 3)).all()
    assert (genes[:, :, 0] == np.rint(genes[:, :, 0])).all()
    assert (genes[:, :, 1:] >= LO[None, :, None]).all()
    assert (genes[:, :, 1:] <= UP[None, :, None]).all()
    phen = rep.decode(pop)
    assert phen.shape == (30, 3)
    assert (phen >= LO).all() and (phen <= UP).all()


def test_ai_representation_embed_roundtrip():
    cfg = AlgoConfig(population_size=20, max_generations=1, seed=0)
    rep = ActiveInactiveRepresentation(cfg, gene_length=2)
    rng = np.random.default_rng(16)
    P = LO + rng.random((7, 3)) * (UP - LO)
    G = rep.embed(P, rng)
    assert G.shape == (7, rep.genotype_length)
    assert np.array_equal(rep.decode(G), P)


def test_make_representation_dispatch():
    cfg = AlgoConfig(population_size=8, max_generations=1, seed=0)
    assert isinstance(make_representation("plain", cfg),
                      PlainRepresentation)
    rep = make_representation("active-inactive", cfg, gene_length=4)
    assert isinstance(rep, ActiveInactiveRepresentation)
    assert rep.genotype_length == 15
    with pytest.raises(ValueError):
        make_representation("ternary", cfg)


# ---------------------------------------------------------------------------
# Varying-goals loop
# ---------------------------------------------------------------------------

def first_axis_evaluator(flipped):
    def evaluator(X):
        u = (X[:, 0] - LO[0]) / (UP[0] - LO[0])
        if flipped:
            u = 1.0 - u
        objs = np.stack([u, (1.0 - u) ** 2], axis=1)
        return objs, np.ones(len(X), dtype=bool), np.zeros(len(X))
    return evaluator


def identity_normalize(objs):
    return np.clip(objs, 0.0, 1.0)


def test_single_goal_schedule_matches_plain_run():
    cfg = AlgoConfig(population_size=12, max_generations=10, seed=321)
    schedule = GoalSchedule((make_task("steel"),), epoch_length=5)
    evaluator = first_axis_evaluator(False)
    plain = run(evaluator, cfg, normalize_fn=identity_normalize)
    vg = varying_goals_run(schedule, cfg, evaluators=[evaluator],
                           normalize_fn=identity_normalize)
    assert vg.switches == 0
    assert vg.result.trace == plain.trace
    assert vg.result.best_hypervolume == plain.best_hypervolume
    assert np.array_equal(vg.result.best_front.genotypes,
                          plain.best_front.genotypes)
    assert np.array_equal(vg.result.best_front.objectives,
                          plain.best_front.objectives)


def test_epoch_longer_than_run_never_switches():
    cfg = AlgoConfig(population_size=12, max_generations=8, seed=99)
    schedule = GoalSchedule((make_task("steel"),
                             make_task("tungsten_alloy")),
                            epoch_length=100)
    evaluator = first_axis_evaluator(False)
    other = first_axis_evaluator(True)
    plain = run(evaluator, cfg, normalize_fn=identity_normalize)
    vg = varying_goals_run(schedule, cfg, evaluators=[evaluator, other],
                           normalize_fn=identity_normalize)
    assert vg.switches == 0
    assert vg.per_goal_best_hv[1] == 0.0
    assert vg.result.trace == plain.trace
    assert np.array_equal(vg.result.best_front.genotypes,
                          plain.best_front.genotypes)


def test_switch_count_and_evaluation_accounting():
    cfg = AlgoConfig(population_size=10, max_generations=50, seed=5)
    schedule = GoalSchedule((make_task("steel"),
                             make_task("tungsten_alloy")),
                            epoch_length=5)
    vg = varying_goals_run(
        schedule, cfg,
        evaluators=[first_axis_evaluator(False),
                    first_axis_evaluator(True)],
        normalize_fn=identity_normalize)
    assert vg.switches == 9  # generations 6, 11, ..., 46
    assert vg.result.extra_evaluations == 9 * 10
    assert vg.result.evaluations_used == 10 * 51 + 9 * 10
    assert vg.result.generations_executed == 50


def test_varying_goals_tracks_both_goals():
    cfg = AlgoConfig(population_size=16, max_generations=30, seed=42)
    schedule = GoalSchedule((make_task("steel"),
                             make_task("tungsten_alloy")),
                            epoch_length=5)
    vg = varying_goals_run(
        schedule, cfg,
        evaluators=[first_axis_evaluator(False),
                    first_axis_evaluator(True)],
        normalize_fn=identity_normalize)
    assert len(vg.per_goal_best_hv) == 2
    assert all(h > 0.0 for h in vg.per_goal_best_hv)
    # the stored archive was captured at some goal's improvement moment
    assert vg.result.best_front.hypervolume in vg.per_goal_best_hv
    assert len(vg.result.best_front) >= 1


def test_varying_goals_deterministic():
    cfg = AlgoConfig(population_size=8, max_generations=12, seed=7)
    schedule = GoalSchedule((make_task("steel"),
                             make_task("tungsten_alloy")),
                            epoch_length=3)
    kw = dict(evaluators=[first_axis_evaluator(False),
                          first_axis_evaluator(True)],
              normalize_fn=identity_normalize)
    a = varying_goals_run(schedule, cfg, **kw)
    b = varying_goals_run(schedule, cfg, **kw)
    assert a.result.trace == b.result.trace
    assert a.per_goal_best_hv == b.per_goal_best_hv
    assert np.array_equal(a.result.best_front.genotypes,
                          b.result.best_front.genotypes)


def test_varying_goals_with_active_inactive_genotype():
    cfg = AlgoConfig(population_size=10, max_generations=12, seed=17)
    schedule = GoalSchedule((make_task("steel"),
                             make_task("tungsten_alloy")),
                            epoch_length=4)
    vg = varying_goals_run(
        schedule, cfg, genotype_kind="active-inactive", gene_length=2,
        evaluators=[first_axis_evaluator(False),
                    first_axis_evaluator(True)],
        normalize_fn=identity_normalize)
    front = vg.result.best_front
    assert front.genotypes.shape[1] == 9
    assert np.array_equal(decode_genotype(front.genotypes, 2),
                          front.phenotypes)


def test_flip_suppressed_ai_run_shadows_plain_run():
    """With selector flips disabled and a shared seed population, the
    slot genotype must behave exactly like the plain one."""
    cfg = AlgoConfig(population_size=12, max_generations=10, seed=1001)
    schedule = GoalSchedule((make_task("steel"),), epoch_length=5)
    evaluator = first_axis_evaluator(False)

    seed_rng = np.random.default_rng(5150)
    P = LO + seed_rng.random((12, 3)) * (UP - LO)
    plain = varying_goals_run(schedule, cfg, genotype_kind="plain",
                              initial_genotypes=P,
                              evaluators=[evaluator],
                              normalize_fn=identity_normalize)

    l = 3
    shells = np.empty((12, 3, l + 1))
    shells[:, :, 0] = 2.0
    shells[:, :, 1:] = (LO[None, :, None]
                        + seed_rng.random((12, 3, l))
                        * (UP - LO)[None, :, None])
    G = encode_genotype(shells.reshape(12, -1), P, l)
    rep = ActiveInactiveRepresentation(cfg, gene_length=l, flip_prob=0.0)
    shadow = varying_goals_run(schedule, cfg, representation=rep,
                               initial_genotypes=G,
                               evaluators=[evaluator],
                               normalize_fn=identity_normalize)

    assert shadow.result.trace == plain.result.trace
    assert np.array_equal(shadow.result.best_front.phenotypes,
                          plain.result.best_front.phenotypes)
    assert np.array_equal(shadow.result.best_front.objectives,
                          plain.result.best_front.objectives)
