"""Campaign orchestration for the flexibility benchmark.

The experiment matrix covers, per configured material list:

  * from-scratch optimization per material (reference hypervolumes and
    from-scratch computational effort),
  * baseline adaption over every ordered material pair (seed the target
    run with the source material's stored front),
  * varying-goals training over every unordered pair, then adaption to
    each excluded material,
  * the same with the active-inactive genotype,
  * a from-scratch population-size sweep,
  * optional epoch-length and gene-length sweeps for the training
    variants.

Cells are enumerated in a stable order; the per-run seed is
base_seed XOR (cell_index * 2^64-free shift + run_index), so any cell can
be recomputed in isolation. Each finished cell is persisted as one JSON
file under <out>/cells/, which doubles as the resume checkpoint; the
final bundle (references, effort matrices, aggregate table, per-run CSV)
is reassembled from the cell files on every invocation.
"""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .archive import (from_dict as archive_from_dict, from_snapshot,
                      to_dict as archive_to_dict)
from .metrics import computational_effort, cost_aggregates
from .nsga2 import AlgoConfig, RunResult, run
from .oxley import MATERIAL_ORDER
from .task import MemoEvaluator, make_task
from .variants import (GoalSchedule, make_representation,
                       varying_goals_run)

BUNDLE_VERSION = 1

SCRATCH = "scratch"
ADAPT = "adapt"
VG_TRAIN = "vg-train"
VG_ADAPT = "vg-adapt"
AI_TRAIN = "ai-train"
AI_ADAPT = "ai-adapt"
SWEEP_SCRATCH = "sweep-scratch"

_TRAINING_KINDS = (SCRATCH, VG_TRAIN, AI_TRAIN, SWEEP_SCRATCH)
_ADAPTION_KINDS = (ADAPT, VG_ADAPT, AI_ADAPT)


@dataclass(frozen=True)
class ExperimentConfig:
    materials: Tuple[str, ...] = MATERIAL_ORDER
    population_size: int = 100
    max_generations: int = 50
    runs_per_cell: int = 100
    threshold_fraction: float = 0.99
    epoch_length: int = 5
    gene_length: int = 2
    population_sweep: Tuple[int, ...] = (50, 20)
    epoch_sweep: Tuple[int, ...] = ()
    gene_length_sweep: Tuple[int, ...] = ()
    base_seed: int = 2026
    eta_cross: float = 30.0
    eta_mut: float = 20.0
    crossover_prob: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "materials", tuple(self.materials))
        object.__setattr__(self, "population_sweep",
                           tuple(self.population_sweep))
        object.__setattr__(self, "epoch_sweep", tuple(self.epoch_sweep))
        object.__setattr__(self, "gene_length_sweep",
                           tuple(self.gene_length_sweep))
        if len(self.materials) < 2:
            raise ValueError("need at least two materials")
        if len(set(self.materials)) != len(self.materials):
            raise ValueError("materials must be distinct")
        if self.runs_per_cell < 1:
            raise ValueError("run count must be at least 1")
        if not 0.0 < self.threshold_fraction <= 1.0:
            raise ValueError("threshold fraction must be in (0, 1]")
        for v in ((self.population_size, self.max_generations,
                   self.epoch_length, self.gene_length)
                  + self.population_sweep + self.epoch_sweep
                  + self.gene_length_sweep):
            if v <= 0:
                raise ValueError("every size and sweep value must be "
                                 "positive")


@dataclass(frozen=True)
class Cell:
    index: int
    kind: str
    algorithm: str
    materials: Tuple[str, ...]
    population_size: int
    genotype_kind: str = "plain"
    gene_length: Optional[int] = None
    epoch_length: Optional[int] = None
    source_cell: Optional[int] = None

    @property
    def label(self) -> str:
        if self.kind in (SCRATCH, SWEEP_SCRATCH):
            extra = (f" pop={self.population_size}"
                     if self.kind == SWEEP_SCRATCH else "")
            return f"scratch {self.materials[0]}{extra}"
        if self.kind == ADAPT:
            return f"adapt {self.materials[0]} -> {self.materials[1]}"
        pair = "+".join(self.materials[:2])
        tag = "vg" if self.kind in (VG_TRAIN, VG_ADAPT) else "vg-ai"
        suffix = ""
        if self.kind in (VG_TRAIN, AI_TRAIN):
            suffix = f" E={self.epoch_length}"
            if self.gene_length is not None:
                suffix += f" l={self.gene_length}"
            return f"{tag} train {pair}{suffix}"
        return f"{tag} adapt {pair} -> {self.materials[2]}"

    @property
    def stores_archives(self) -> bool:
        return self.kind in _TRAINING_KINDS and self.kind != SWEEP_SCRATCH


def enumerate_cells(config: ExperimentConfig) -> List[Cell]:
    """The full campaign matrix in its stable order."""
    mats = config.materials
    cells: List[Cell] = []

    def add(**kw) -> int:
        cell = Cell(index=len(cells), **kw)
        cells.append(cell)
        return cell.index

    scratch_of = {}
    for m in mats:
        scratch_of[m] = add(kind=SCRATCH, algorithm="baseline",
                            materials=(m,),
                            population_size=config.population_size)
    for s in mats:
        for t in mats:
            if s != t:
                add(kind=ADAPT, algorithm="baseline", materials=(s, t),
                    population_size=config.population_size,
                    source_cell=scratch_of[s])

    def training_block(kind_train, kind_adapt, algorithm, genotype_kind,
                       epoch_length, gene_length):
        train_of = {}
        for i in range(len(mats)):
            for j in range(i + 1, len(mats)):
                pair = (mats[i], mats[j])
                train_of[pair] = add(
                    kind=kind_train, algorithm=algorithm, materials=pair,
                    population_size=config.population_size,
                    genotype_kind=genotype_kind,
                    gene_length=gene_length, epoch_length=epoch_length)
        for pair, src in train_of.items():
            for t in mats:
                if t not in pair:
                    add(kind=kind_adapt, algorithm=algorithm,
                        materials=pair + (t,),
                        population_size=config.population_size,
                        genotype_kind=genotype_kind,
                        gene_length=gene_length, source_cell=src)

    training_block(VG_TRAIN, VG_ADAPT, "varying-goals", "plain",
                   config.epoch_length, None)
    training_block(AI_TRAIN, AI_ADAPT, "varying-goals+active-inactive",
                   "active-inactive", config.epoch_length,
                   config.gene_length)

    for pop in config.population_sweep:
        for m in mats:
            add(kind=SWEEP_SCRATCH, algorithm="baseline", materials=(m,),
                population_size=pop)

    for epoch in config.epoch_sweep:
        training_block(VG_TRAIN, VG_ADAPT, "varying-goals", "plain",
                       epoch, None)
    for gl in config.gene_length_sweep:
        training_block(AI_TRAIN, AI_ADAPT,
                       "varying-goals+active-inactive", "active-inactive",
                       config.epoch_length, gl)

    return cells


def derive_seed(base_seed: int, cell_index: int, run_index: int) -> int:
    """Independent per-run stream: base ^ (cell * 2^32 + run)."""
    return base_seed ^ (cell_index * (1 << 32) + run_index)


def _algo_config(config: ExperimentConfig, cell: Cell, seed: int
                 ) -> AlgoConfig:
    return AlgoConfig(population_size=cell.population_size,
                      max_generations=config.max_generations,
                      eta_cross=config.eta_cross,
                      eta_mut=config.eta_mut,
                      crossover_prob=config.crossover_prob,
                      seed=seed)


def own_checkpoint(trace: Sequence[Tuple[int, float]],
                   fraction: float) -> Optional[int]:
    """First evaluation count at which a run reached the given fraction
    of its own final best hypervolume."""
    final = trace[-1][1]
    if final <= 0.0:
        return None
    target = fraction * final
    for evals, hv in trace:
        if hv >= target:
            return evals
    return None


# ---------------------------------------------------------------------------
# Single-run execution
# ---------------------------------------------------------------------------

def _base_record(cell: Cell, run_index: int, seed: int,
                 result: RunResult) -> dict:
    return {
        "run_index": run_index,
        "seed": seed,
        "best_hv": result.best_hypervolume,
        "evaluations": result.evaluations_used,
        "extra_evaluations": result.extra_evaluations,
        "generations": result.generations_executed,
        "front_size": len(result.best_front),
        "success_checkpoint": result.success_checkpoint,
        "own_checkpoint": None,
        "threshold": None,
        "seeded": None,
    }


def _archive_or_none(result: RunResult, cell: Cell, tasks: Sequence[str],
                     config: AlgoConfig) -> Optional[dict]:
    if len(result.best_front) == 0:
        return None
    archive = from_snapshot(result.best_front, tasks, cell.algorithm,
                            cell.genotype_kind, cell.gene_length, config)
    return archive_to_dict(archive)


def run_cell_run(config: ExperimentConfig, cell: Cell, run_index: int,
                 seed_genotypes: Optional[np.ndarray] = None,
                 threshold: Optional[float] = None
                 ) -> Tuple[dict, Optional[dict]]:
    """Execute one seeded run of one cell. Returns (record, archive dict
    or None)."""
    seed = derive_seed(config.base_seed, cell.index, run_index)
    algo = _algo_config(config, cell, seed)

    if cell.kind in (SCRATCH, SWEEP_SCRATCH):
        evaluator = MemoEvaluator(make_task(cell.materials[0]))
        result = run(evaluator, algo)
        record = _base_record(cell, run_index, seed, result)
        record["own_checkpoint"] = own_checkpoint(
            result.trace, config.threshold_fraction)
        return record, _archive_or_none(result, cell, cell.materials, algo)

    if cell.kind in (VG_TRAIN, AI_TRAIN):
        goals = tuple(make_task(m) for m in cell.materials)
        schedule = GoalSchedule(goals, epoch_length=cell.epoch_length)
        evaluators = [MemoEvaluator(t) for t in goals]
        vg = varying_goals_run(
            schedule, algo, genotype_kind=cell.genotype_kind,
            gene_length=cell.gene_length or 2, evaluators=evaluators)
        record = _base_record(cell, run_index, seed, vg.result)
        record["per_goal_best_hv"] = vg.per_goal_best_hv
        record["switches"] = vg.switches
        return record, _archive_or_none(vg.result, cell, cell.materials,
                                        algo)

    if cell.kind in _ADAPTION_KINDS:
        if threshold is None:
            raise ValueError("adaption cells need a threshold")
        target = cell.materials[-1]
        evaluator = MemoEvaluator(make_task(target))
        representation = make_representation(
            cell.genotype_kind, algo, cell.gene_length or 2)
        result = run(evaluator, algo, representation=representation,
                     initial_genotypes=seed_genotypes,
                     stop_threshold=threshold)
        record = _base_record(cell, run_index, seed, result)
        record["threshold"] = threshold
        record["seeded"] = bool(seed_genotypes is not None
                                and len(seed_genotypes) > 0)
        return record, None

    raise ValueError(f"unknown cell kind {cell.kind!r}")


# ---------------------------------------------------------------------------
# Cell persistence and the campaign loop
# ---------------------------------------------------------------------------

def _cells_dir(out_dir: Path) -> Path:
    return out_dir / "cells"


def _cell_path(out_dir: Path, cell: Cell) -> Path:
    return _cells_dir(out_dir) / f"cell_{cell.index:03d}.json"


def _cell_signature(config: ExperimentConfig, cell: Cell) -> dict:
    sig = asdict(cell)
    sig["runs_per_cell"] = config.runs_per_cell
    sig["max_generations"] = config.max_generations
    sig["base_seed"] = config.base_seed
    sig["threshold_fraction"] = config.threshold_fraction
    # normalize through JSON so tuples compare equal to reloaded lists
    return json.loads(json.dumps(sig))


def load_cell(out_dir: Path, config: ExperimentConfig,
              cell: Cell) -> Optional[dict]:
    path = _cell_path(out_dir, cell)
    if not path.exists():
        return None
    data = json.loads(path.read_text(encoding="utf-8"))
    if data.get("signature") != _cell_signature(config, cell):
        raise ValueError(
            f"{path} was produced by a different configuration; "
            f"use a fresh output directory")
    if len(data.get("runs", ())) != config.runs_per_cell:
        return None
    return data


def save_cell(out_dir: Path, config: ExperimentConfig, cell: Cell,
              runs: List[dict], archives: List[Optional[dict]],
              extras: dict) -> dict:
    data = {
        "bundle_version": BUNDLE_VERSION,
        "signature": _cell_signature(config, cell),
        "label": cell.label,
        "runs": runs,
        "archives": archives,
    }
    data.update(extras)
    path = _cell_path(out_dir, cell)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(data, sort_keys=True), encoding="utf-8")
    tmp.replace(path)
    return data


def _seed_genotypes_from(source_data: dict, run_index: int
                         ) -> Optional[np.ndarray]:
    archives = source_data.get("archives") or []
    if run_index >= len(archives) or archives[run_index] is None:
        return None
    archive = archive_from_dict(archives[run_index])
    return archive.genotypes


def run_experiment(config: ExperimentConfig, out_dir,
                   progress=print) -> dict:
    """Run (or resume) the full campaign and assemble the bundle.

    Completed cells are loaded from their JSON checkpoints; missing ones
    are computed. The bundle is rebuilt from cell data every time, so a
    crashed campaign restarts where it stopped.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    cells = enumerate_cells(config)
    data_by_cell: Dict[int, dict] = {}

    references: Dict[str, dict] = {}

    def reference_for(material: str) -> dict:
        if material not in references:
            raise ValueError(
                f"no reference hypervolume for {material!r}; scratch "
                f"cells must run first")
        return references[material]

    for cell in cells:
        t0 = time.time()
        data = load_cell(out_dir, config, cell)
        if data is None:
            runs: List[dict] = []
            archives: List[Optional[dict]] = []
            extras: dict = {}
            if cell.kind in _ADAPTION_KINDS:
                source = data_by_cell[cell.source_cell]
                target = cell.materials[-1]
                ref = reference_for(target)
                threshold = config.threshold_fraction * ref["mean"]
                extras["threshold"] = threshold
                extras["reference_mean"] = ref["mean"]
                for r in range(config.runs_per_cell):
                    seeds = _seed_genotypes_from(source, r)
                    record, _ = run_cell_run(config, cell, r,
                                             seed_genotypes=seeds,
                                             threshold=threshold)
                    runs.append(record)
                    archives.append(None)
            else:
                for r in range(config.runs_per_cell):
                    record, archive = run_cell_run(config, cell, r)
                    runs.append(record)
                    archives.append(archive if cell.stores_archives
                                    else None)
            data = save_cell(out_dir, config, cell, runs, archives,
                             extras)
            status = "computed"
        else:
            status = "resumed"
        data_by_cell[cell.index] = data

        if cell.kind == SCRATCH:
            best = [r["best_hv"] for r in data["runs"]]
            references[cell.materials[0]] = {
                "mean": float(np.mean(best)),
                "std": float(np.std(best)),
                "count": len(best),
            }
        progress(f"[{cell.index + 1:3d}/{len(cells)}] {cell.label}: "
                 f"{status} in {time.time() - t0:.1f}s")

    bundle = assemble_bundle(config, cells, data_by_cell)
    (out_dir / "bundle.json").write_text(
        json.dumps(bundle, sort_keys=True, indent=2) + "\n",
        encoding="utf-8")
    (out_dir / "runs.csv").write_text(runs_csv(cells, data_by_cell),
                                      encoding="utf-8")
    (out_dir / "report.txt").write_text(render_report(bundle),
                                        encoding="utf-8")
    return bundle


# ---------------------------------------------------------------------------
# Bundle assembly
# ---------------------------------------------------------------------------

def cell_effort(cell: Cell, data: dict) -> Optional[int]:
    """Koza computational effort of one cell's run set."""
    if cell.kind in _ADAPTION_KINDS:
        checkpoints = [r["success_checkpoint"] for r in data["runs"]]
    else:
        checkpoints = [r["own_checkpoint"] for r in data["runs"]]
    return computational_effort(checkpoints, cell.population_size)


def assemble_bundle(config: ExperimentConfig, cells: List[Cell],
                    data_by_cell: Dict[int, dict]) -> dict:
    mats = list(config.materials)
    efforts = {c.index: cell_effort(c, data_by_cell[c.index])
               for c in cells}
    mean_hv = {c.index: float(np.mean([r["best_hv"]
                                       for r in data_by_cell[c.index]
                                       ["runs"]]))
               for c in cells}

    references = {}
    for c in cells:
        if c.kind == SCRATCH:
            best = [r["best_hv"] for r in data_by_cell[c.index]["runs"]]
            references[c.materials[0]] = {
                "mean": float(np.mean(best)),
                "std": float(np.std(best)),
                "count": len(best),
                "threshold": config.threshold_fraction
                * float(np.mean(best)),
            }

    pairs = [f"{a}+{b}" for ai, a in enumerate(mats)
             for b in mats[ai + 1:]]

    def pair_row(c: Cell) -> int:
        return pairs.index("+".join(c.materials[:2]))

    def baseline_matrix_for() -> dict:
        grid = [[None] * len(mats) for _ in mats]
        for c in cells:
            if c.kind == ADAPT:
                i = mats.index(c.materials[0])
                j = mats.index(c.materials[1])
                grid[i][j] = efforts[c.index]
        return {"rows": mats, "columns": mats, "effort": grid}

    def pair_matrix_for(kind) -> dict:
        # sweep blocks repeat (pair, target) combinations; the default
        # block comes first in cell order and fills the main matrix
        grid = [[None] * len(mats) for _ in pairs]
        seen = set()
        for c in cells:
            if c.kind != kind:
                continue
            i = pair_row(c)
            j = mats.index(c.materials[-1])
            if (i, j) in seen:
                continue
            seen.add((i, j))
            grid[i][j] = efforts[c.index]
        return {"rows": pairs, "columns": mats, "effort": grid}

    baseline_matrix = baseline_matrix_for()
    vg_matrix = pair_matrix_for(VG_ADAPT)
    ai_matrix = pair_matrix_for(AI_ADAPT)

    scratch_efforts = [efforts[c.index] for c in cells
                       if c.kind == SCRATCH]
    adapt_efforts = [efforts[c.index] for c in cells if c.kind == ADAPT]
    per_block = len(pairs) * (len(mats) - 2)
    vg_efforts = [efforts[c.index] for c in cells
                  if c.kind == VG_ADAPT][:per_block]
    ai_efforts = [efforts[c.index] for c in cells
                  if c.kind == AI_ADAPT][:per_block]

    def aggregate(values) -> Optional[dict]:
        usable = [v for v in values if v is not None]
        if not usable:
            return None
        worst, average, best = cost_aggregates(usable)
        return {"worst": worst, "average": average, "best": best,
                "cells": len(values), "failed": len(values) - len(usable)}

    aggregates = {
        "scratch": aggregate(scratch_efforts),
        "adapt-baseline": aggregate(adapt_efforts),
        "varying-goals": aggregate(vg_efforts),
        "varying-goals+active-inactive": aggregate(ai_efforts),
    }

    sweep = {}
    for c in cells:
        if c.kind != SWEEP_SCRATCH:
            continue
        pop = str(c.population_size)
        sweep.setdefault(pop, {})[c.materials[0]] = {
            "mean_hv": mean_hv[c.index],
            "std_hv": float(np.std([r["best_hv"] for r in
                                    data_by_cell[c.index]["runs"]])),
            "effort": efforts[c.index],
        }

    cell_rows = []
    for c in cells:
        data = data_by_cell[c.index]
        n_success = sum(
            1 for r in data["runs"]
            if (r["success_checkpoint"] is not None
                if c.kind in _ADAPTION_KINDS
                else r["own_checkpoint"] is not None))
        cell_rows.append({
            "index": c.index,
            "kind": c.kind,
            "label": c.label,
            "materials": list(c.materials),
            "algorithm": c.algorithm,
            "population_size": c.population_size,
            "epoch_length": c.epoch_length,
            "gene_length": c.gene_length,
            "effort": efforts[c.index],
            "mean_best_hv": mean_hv[c.index],
            "runs": len(data["runs"]),
            "successes": n_success,
        })

    return {
        "bundle_version": BUNDLE_VERSION,
        "config": asdict(config),
        "references": references,
        "scratch_effort": {c.materials[0]: efforts[c.index]
                           for c in cells if c.kind == SCRATCH},
        "matrices": {
            "adapt-baseline": baseline_matrix,
            "varying-goals": vg_matrix,
            "varying-goals+active-inactive": ai_matrix,
        },
        "aggregates": aggregates,
        "population_sweep": sweep,
        "cells": cell_rows,
    }


def runs_csv(cells: List[Cell], data_by_cell: Dict[int, dict]) -> str:
    """Flatten every run of every cell into one CSV table."""
    out = io.StringIO()
    writer = csv.writer(out)
    writer.writerow([
        "cell_index", "kind", "algorithm", "materials",
        "population_size", "epoch_length", "gene_length", "run_index",
        "seed", "best_hv", "evaluations", "extra_evaluations",
        "generations", "front_size", "own_checkpoint",
        "success_checkpoint", "threshold", "seeded",
    ])
    for cell in cells:
        for r in data_by_cell[cell.index]["runs"]:
            writer.writerow([
                cell.index, cell.kind, cell.algorithm,
                "+".join(cell.materials), cell.population_size,
                cell.epoch_length if cell.epoch_length is not None
                else "",
                cell.gene_length if cell.gene_length is not None else "",
                r["run_index"], r["seed"],
                repr(r["best_hv"]), r["evaluations"],
                r["extra_evaluations"], r["generations"],
                r["front_size"],
                r["own_checkpoint"] if r["own_checkpoint"] is not None
                else "",
                r["success_checkpoint"]
                if r["success_checkpoint"] is not None else "",
                repr(r["threshold"]) if r["threshold"] is not None
                else "",
                "" if r["seeded"] is None else int(r["seeded"]),
            ])
    return out.getvalue()


def render_report(bundle: dict) -> str:
    """Human-readable tables from an assembled bundle."""
    lines: List[str] = []
    mats = bundle["config"]["materials"]

    lines.append("Reference hypervolumes (from scratch)")
    lines.append(f"{'material':20s} {'mean':>8s} {'std':>8s} "
                 f"{'threshold':>10s} {'effort':>8s}")
    for m in mats:
        ref = bundle["references"][m]
        eff = bundle["scratch_effort"][m]
        lines.append(f"{m:20s} {ref['mean']:8.4f} {ref['std']:8.4f} "
                     f"{ref['threshold']:10.4f} "
                     f"{eff if eff is not None else 'failed':>8}")
    lines.append("")

    def fmt(v) -> str:
        return f"{v:>10d}" if v is not None else f"{'-':>10s}"

    for name, title in (("adapt-baseline", "Baseline adaption effort"),
                        ("varying-goals", "Varying-goals adaption effort"),
                        ("varying-goals+active-inactive",
                         "Active-inactive adaption effort")):
        m = bundle["matrices"][name]
        lines.append(f"{title} (rows: source, columns: target)")
        head = " " * 42 + "".join(f"{c[:10]:>11s}" for c in m["columns"])
        lines.append(head)
        for rname, row in zip(m["rows"], m["effort"]):
            lines.append(f"{rname:42s}" + "".join(f" {fmt(v)}"
                                                  for v in row))
        lines.append("")

    lines.append("Aggregate computational effort (evaluations)")
    lines.append(f"{'setting':36s} {'worst':>8s} {'average':>8s} "
                 f"{'best':>8s} {'failed':>7s}")
    for key in ("scratch", "adapt-baseline", "varying-goals",
                "varying-goals+active-inactive"):
        agg = bundle["aggregates"][key]
        if agg is None:
            lines.append(f"{key:36s} {'all cells failed':>25s}")
        else:
            lines.append(f"{key:36s} {agg['worst']:8d} "
                         f"{round(agg['average']):8d} {agg['best']:8d} "
                         f"{agg['failed']:7d}")
    lines.append("")

    if bundle["population_sweep"]:
        lines.append("Population sweep, from-scratch mean hypervolume")
        pops = sorted(bundle["population_sweep"], key=int, reverse=True)
        lines.append(f"{'material':20s}" + "".join(f"{'pop ' + p:>12s}"
                                                   for p in pops))
        for m in mats:
            row = f"{m:20s}"
            for p in pops:
                entry = bundle["population_sweep"][p].get(m)
                row += (f"{entry['mean_hv']:12.4f}" if entry else
                        f"{'-':>12s}")
            lines.append(row)
        lines.append("")

    return "\n".join(lines) + "\n"
