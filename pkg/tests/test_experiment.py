"""Campaign harness: cell enumeration, seeding, checkpoints, resume."""

import json

import numpy as np
import pytest

from cutflex.archive import from_dict as archive_from_dict
from cutflex.experiment import (ADAPT, AI_ADAPT, AI_TRAIN, SCRATCH,
                                SWEEP_SCRATCH, VG_ADAPT, VG_TRAIN, Cell,
                                ExperimentConfig, assemble_bundle,
                                cell_effort, derive_seed, enumerate_cells,
                                load_cell, own_checkpoint, render_report,
                                run_cell_run, run_experiment, runs_csv)
from cutflex.metrics import computational_effort

MICRO = ExperimentConfig(
    materials=("steel", "tungsten_alloy", "inconel_718"),
    population_size=8, max_generations=4, runs_per_cell=2,
    epoch_length=2, population_sweep=(6,), base_seed=424242)

TINY = ExperimentConfig(
    materials=("steel", "tungsten_alloy"), population_size=6,
    max_generations=2, runs_per_cell=1, epoch_length=1,
    population_sweep=(), base_seed=7)


# ---------------------------------------------------------------------------
# Cell enumeration
# ---------------------------------------------------------------------------

def test_default_matrix_has_sixty_cells():
    cells = enumerate_cells(ExperimentConfig())
    # 4 scratch + 12 ordered pairs + 6 unordered pairs + 6*2 adaptions,
    # twice (vg and vg-ai), + 2 sweep populations * 4 materials
    assert len(cells) == 4 + 12 + (6 + 12) * 2 + 8
    kinds = [c.kind for c in cells]
    assert kinds[:4] == [SCRATCH] * 4
    assert kinds[4:16] == [ADAPT] * 12
    assert kinds[16:22] == [VG_TRAIN] * 6
    assert kinds[22:34] == [VG_ADAPT] * 12
    assert kinds[34:40] == [AI_TRAIN] * 6
    assert kinds[40:52] == [AI_ADAPT] * 12
    assert kinds[52:] == [SWEEP_SCRATCH] * 8


def test_cell_indices_are_positional():
    cells = enumerate_cells(ExperimentConfig())
    assert [c.index for c in cells] == list(range(len(cells)))


def test_scratch_cells_follow_material_order():
    cells = enumerate_cells(ExperimentConfig())
    assert [c.materials[0] for c in cells[:4]] == [
        "steel", "tungsten_alloy", "steel_dummy", "inconel_718"]


def test_adapt_cells_cover_all_ordered_pairs():
    cells = enumerate_cells(ExperimentConfig())
    pairs = [c.materials for c in cells if c.kind == ADAPT]
    mats = ExperimentConfig().materials
    expected = [(s, t) for s in mats for t in mats if s != t]
    assert pairs == expected
    for c in cells:
        if c.kind == ADAPT:
            assert cells[c.source_cell].kind == SCRATCH
            assert cells[c.source_cell].materials == (c.materials[0],)


def test_vg_adapt_targets_exclude_the_training_pair():
    cells = enumerate_cells(ExperimentConfig())
    for c in cells:
        if c.kind in (VG_ADAPT, AI_ADAPT):
            pair, target = c.materials[:2], c.materials[2]
            assert target not in pair
            source = cells[c.source_cell]
            assert source.materials == pair
            assert source.kind in (VG_TRAIN, AI_TRAIN)


def test_population_sweep_orders_pops_then_materials():
    cells = enumerate_cells(ExperimentConfig())
    sweep = [(c.population_size, c.materials[0]) for c in cells
             if c.kind == SWEEP_SCRATCH]
    mats = ExperimentConfig().materials
    assert sweep == [(50, m) for m in mats] + [(20, m) for m in mats]


def test_epoch_and_gene_sweeps_append_blocks():
    base = len(enumerate_cells(MICRO))
    cfg = ExperimentConfig(
        materials=MICRO.materials, population_size=8, max_generations=4,
        runs_per_cell=2, epoch_length=2, population_sweep=(6,),
        base_seed=424242, epoch_sweep=(3, 4), gene_length_sweep=(4,))
    cells = enumerate_cells(cfg)
    # each extra epoch: 3 vg-train + 3 vg-adapt; extra gene length same
    # for the active-inactive block
    assert len(cells) == base + 2 * 6 + 6
    extra = cells[base:]
    assert {c.epoch_length for c in extra if c.kind == VG_TRAIN} == {3, 4}
    assert {c.gene_length for c in extra if c.kind == AI_TRAIN} == {4}


def test_training_cells_store_archives_sweep_does_not():
    for c in enumerate_cells(ExperimentConfig()):
        expected = c.kind in (SCRATCH, VG_TRAIN, AI_TRAIN)
        assert c.stores_archives == expected


def test_config_rejects_bad_values():
    with pytest.raises(ValueError):
        ExperimentConfig(materials=("steel",))
    with pytest.raises(ValueError):
        ExperimentConfig(materials=("steel", "steel"))
    with pytest.raises(ValueError):
        ExperimentConfig(runs_per_cell=0)
    with pytest.raises(ValueError):
        ExperimentConfig(threshold_fraction=0.0)
    with pytest.raises(ValueError):
        ExperimentConfig(population_sweep=(50, 0))


# ---------------------------------------------------------------------------
# Seeds and checkpoints
# ---------------------------------------------------------------------------

def test_derive_seed_is_base_for_cell_zero_run_zero():
    assert derive_seed(2026, 0, 0) == 2026


def test_derive_seed_unique_across_grid():
    seeds = {derive_seed(99, c, r) for c in range(80) for r in range(150)}
    assert len(seeds) == 80 * 150


def test_own_checkpoint_hand_cases():
    trace = [(10, 0.0), (20, 0.5), (30, 0.9), (40, 1.0)]
    assert own_checkpoint(trace, 0.99) == 40
    assert own_checkpoint(trace, 0.5) == 20
    assert own_checkpoint(trace, 0.9) == 30
    assert own_checkpoint([(10, 1.0)], 0.99) == 10
    assert own_checkpoint([(10, 0.0), (20, 0.0)], 0.99) is None


# ---------------------------------------------------------------------------
# Single cell runs
# ---------------------------------------------------------------------------

def test_scratch_run_record_shape():
    cell = enumerate_cells(TINY)[0]
    record, archive = run_cell_run(TINY, cell, 0)
    assert record["seed"] == derive_seed(TINY.base_seed, 0, 0)
    assert record["evaluations"] == 6 * 3
    assert record["generations"] == 2
    assert record["own_checkpoint"] in (6, 12, 18)
    assert record["success_checkpoint"] is None
    assert record["threshold"] is None
    assert record["seeded"] is None
    assert archive is not None
    loaded = archive_from_dict(archive)
    assert loaded.tasks == ("steel",)
    assert record["front_size"] == len(loaded.genotypes)


def test_training_run_records_goal_bookkeeping():
    cells = enumerate_cells(TINY)
    train = next(c for c in cells if c.kind == VG_TRAIN)
    record, archive = run_cell_run(TINY, train, 0)
    assert len(record["per_goal_best_hv"]) == 2
    # E=1: generation 1 keeps the initial goal, generation 2 moves on
    assert record["switches"] == 1
    assert record["extra_evaluations"] == 6
    assert archive is not None


def test_adaption_requires_threshold():
    cells = enumerate_cells(TINY)
    adapt = next(c for c in cells if c.kind == ADAPT)
    with pytest.raises(ValueError, match="threshold"):
        run_cell_run(TINY, adapt, 0)


def test_adaption_run_reports_seeded_flag():
    cells = enumerate_cells(TINY)
    scratch = cells[0]
    _, archive = run_cell_run(TINY, scratch, 0)
    seeds = archive_from_dict(archive).genotypes
    adapt = next(c for c in cells if c.kind == ADAPT)
    record, arch = run_cell_run(TINY, adapt, 0, seed_genotypes=seeds,
                                threshold=0.2)
    assert arch is None
    assert record["seeded"] is True
    assert record["threshold"] == 0.2
    unseeded, _ = run_cell_run(TINY, adapt, 0, seed_genotypes=None,
                               threshold=0.2)
    assert unseeded["seeded"] is False


def test_cell_runs_are_deterministic():
    cell = enumerate_cells(TINY)[0]
    a, _ = run_cell_run(TINY, cell, 0)
    b, _ = run_cell_run(TINY, cell, 0)
    assert a == b
    c, _ = run_cell_run(TINY, cell, 1)
    assert c["seed"] != a["seed"]


def test_cell_effort_matches_metric():
    cell = Cell(index=0, kind=SCRATCH, algorithm="baseline",
                materials=("steel",), population_size=10)
    runs = [{"own_checkpoint": v, "success_checkpoint": None}
            for v in (20, None, 40)]
    assert cell_effort(cell, {"runs": runs}) == computational_effort(
        [20, None, 40], 10)
    adapt = Cell(index=1, kind=ADAPT, algorithm="baseline",
                 materials=("steel", "tungsten_alloy"), population_size=10,
                 source_cell=0)
    runs = [{"own_checkpoint": None, "success_checkpoint": 30}]
    assert cell_effort(adapt, {"runs": runs}) == computational_effort(
        [30], 10)


# ---------------------------------------------------------------------------
# Full micro campaign, resume, bundle
# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def micro_campaign(tmp_path_factory):
    out = tmp_path_factory.mktemp("campaign")
    log = []
    bundle = run_experiment(MICRO, out, progress=log.append)
    return out, bundle, log


def test_campaign_emits_all_artifacts(micro_campaign):
    out, bundle, log = micro_campaign
    cells = enumerate_cells(MICRO)
    assert (out / "bundle.json").exists()
    assert (out / "runs.csv").exists()
    assert (out / "report.txt").exists()
    stored = sorted(p.name for p in (out / "cells").glob("cell_*.json"))
    assert stored == [f"cell_{i:03d}.json" for i in range(len(cells))]
    assert len(log) == len(cells)


def test_campaign_bundle_structure(micro_campaign):
    _, bundle, _ = micro_campaign
    assert set(bundle["references"]) == set(MICRO.materials)
    for ref in bundle["references"].values():
        assert ref["count"] == MICRO.runs_per_cell
        assert ref["threshold"] == pytest.approx(0.99 * ref["mean"])
    grid = bundle["matrices"]["adapt-baseline"]["effort"]
    for i in range(len(MICRO.materials)):
        assert grid[i][i] is None
    assert set(bundle["aggregates"]) == {
        "scratch", "adapt-baseline", "varying-goals",
        "varying-goals+active-inactive"}
    assert bundle["population_sweep"]["6"].keys() == set(MICRO.materials)
    assert len(bundle["cells"]) == len(enumerate_cells(MICRO))


def test_campaign_resume_is_bit_identical(micro_campaign):
    out, bundle, _ = micro_campaign
    before = (out / "bundle.json").read_bytes()
    log = []
    again = run_experiment(MICRO, out, progress=log.append)
    assert all("resumed" in line for line in log)
    assert (out / "bundle.json").read_bytes() == before
    assert again == bundle


def test_campaign_rejects_mismatched_resume_dir(micro_campaign):
    out, _, _ = micro_campaign
    other = ExperimentConfig(
        materials=MICRO.materials, population_size=8, max_generations=4,
        runs_per_cell=2, epoch_length=2, population_sweep=(6,),
        base_seed=5)
    with pytest.raises(ValueError, match="fresh output directory"):
        run_experiment(other, out, progress=lambda _: None)


def test_incomplete_cell_is_recomputed(micro_campaign, tmp_path):
    out, _, _ = micro_campaign
    target = out / "cells" / "cell_000.json"
    data = json.loads(target.read_text())
    clipped = dict(data, runs=data["runs"][:1])
    work = tmp_path / "partial"
    (work / "cells").mkdir(parents=True)
    (work / "cells" / "cell_000.json").write_text(json.dumps(clipped))
    cell = enumerate_cells(MICRO)[0]
    assert load_cell(work, MICRO, cell) is None
    assert load_cell(out, MICRO, cell) == data


def test_runs_csv_shape_and_reparse(micro_campaign):
    out, _, _ = micro_campaign
    lines = (out / "runs.csv").read_text().splitlines()
    cells = enumerate_cells(MICRO)
    assert len(lines) == 1 + len(cells) * MICRO.runs_per_cell
    header = lines[0].split(",")
    assert header == [
        "cell_index", "kind", "algorithm", "materials",
        "population_size", "epoch_length", "gene_length", "run_index",
        "seed", "best_hv", "evaluations", "extra_evaluations",
        "generations", "front_size", "own_checkpoint",
        "success_checkpoint", "threshold", "seeded"]
    first = lines[1].split(",")
    assert first[0] == "0"
    assert first[1] == SCRATCH
    float(first[9])  # best_hv round-trips through repr


def test_bundle_matches_reassembly_from_cells(micro_campaign):
    out, bundle, _ = micro_campaign
    cells = enumerate_cells(MICRO)
    data = {c.index: load_cell(out, MICRO, c) for c in cells}
    rebuilt = assemble_bundle(MICRO, cells, data)
    assert rebuilt == bundle


def test_adaption_thresholds_come_from_scratch_means(micro_campaign):
    out, bundle, _ = micro_campaign
    cells = enumerate_cells(MICRO)
    for c in cells:
        if c.kind in (ADAPT, VG_ADAPT, AI_ADAPT):
            data = load_cell(out, MICRO, c)
            ref = bundle["references"][c.materials[-1]]
            assert data["threshold"] == pytest.approx(0.99 * ref["mean"])
            assert data["reference_mean"] == pytest.approx(ref["mean"])


def test_adaption_runs_pair_with_source_archives(micro_campaign):
    out, _, _ = micro_campaign
    cells = enumerate_cells(MICRO)
    adapt = next(c for c in cells if c.kind == ADAPT)
    source = load_cell(out, MICRO, cells[adapt.source_cell])
    seeds = archive_from_dict(source["archives"][1]).genotypes
    record, _ = run_cell_run(MICRO, adapt, 1, seed_genotypes=seeds,
                             threshold=load_cell(out, MICRO,
                                                 adapt)["threshold"])
    stored = load_cell(out, MICRO, adapt)["runs"][1]
    assert record == stored


def test_report_renders_every_section(micro_campaign):
    _, bundle, _ = micro_campaign
    text = render_report(bundle)
    assert "Reference hypervolumes" in text
    assert "Baseline adaption effort" in text
    assert "Varying-goals adaption effort" in text
    assert "Active-inactive adaption effort" in text
    assert "Aggregate computational effort" in text
    assert "Population sweep" in text
    for m in MICRO.materials:
        assert m in text


def test_runs_csv_roundtrips_through_loaded_cells(micro_campaign):
    out, _, _ = micro_campaign
    cells = enumerate_cells(MICRO)
    data = {c.index: load_cell(out, MICRO, c) for c in cells}
    # byte compare: the csv module terminates rows with \r\n, which
    # read_text would fold away
    assert runs_csv(cells, data).encode() == (out / "runs.csv").read_bytes()


def test_seed_column_matches_derivation(micro_campaign):
    out, _, _ = micro_campaign
    for line in (out / "runs.csv").read_text().splitlines()[1:]:
        parts = line.split(",")
        cell, run, seed = int(parts[0]), int(parts[7]), int(parts[8])
        assert seed == derive_seed(MICRO.base_seed, cell, run)
