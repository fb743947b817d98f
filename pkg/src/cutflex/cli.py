"""Command-line harness for the flexibility benchmark.

Subcommands:
  simulate    one cutting-model evaluation, printed as key/value text
  sample      uniform random sampling of a task, emits the feasible
              non-dominated subset and its hypervolume
  optimize    one optimization run from scratch, writes a front archive
              and prints the per-generation trace as CSV
  adapt       seed a run from a stored archive and race it against a
              reference hypervolume threshold
  experiment  the full campaign matrix (see cutflex.experiment)
  hv          recompute the hypervolume of an archive file
  report      re-render the campaign tables from a raw runs.csv

Exit codes: 0 success, 1 usage error, 2 I/O or schema error,
3 model-domain or convergence failure.

Machine-readable output (CSV rows, archive files, the hv value) goes to
stdout or the --out path; progress and summaries go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import tempfile
from dataclasses import fields as dataclass_fields
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import archive as archive_mod
from .archive import ArchiveError, from_snapshot
from .experiment import (Cell, ExperimentConfig, assemble_bundle,
                         render_report, run_experiment)
from .metrics import hypervolume
from .nsga2 import AlgoConfig, non_dominated_sort, run
from .oxley import (BUILTIN_MATERIALS, PROCESS_LOWER, PROCESS_UPPER,
                    CatalogError, ConvergenceError, DomainError,
                    ModelDomainError, ProcessParams, get_material,
                    load_material_catalog)
from .task import (MemoEvaluator, evaluate, evaluate_batch, make_task,
                   normalize)
from .variants import GoalSchedule, make_representation, varying_goals_run

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO_SCHEMA = 2
EXIT_MODEL = 3


class UsageError(Exception):
    """Bad command-line input; maps to exit code 1."""


class SchemaError(Exception):
    """Unreadable or malformed file content; maps to exit code 2."""


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad flags; the contract here
    reserves 2 for I/O and schema problems, so route parse failures
    through UsageError instead."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


# ---------------------------------------------------------------------------
# Shared helpers
# ---------------------------------------------------------------------------

def _load_catalog(path: Optional[str]) -> dict:
    if path is None:
        return {}
    try:
        return load_material_catalog(path)
    except OSError as exc:
        raise SchemaError(f"cannot read catalog {path}: {exc}") from exc
    except CatalogError as exc:
        raise SchemaError(str(exc)) from exc


def _resolve_material(name: str, catalog: dict):
    try:
        return get_material(name, catalog)
    except CatalogError:
        known = sorted(set(BUILTIN_MATERIALS) | set(catalog))
        raise UsageError(
            f"unknown material {name!r}; available: {', '.join(known)}"
        ) from None


def _algo_from_args(args, default_pop=100, default_gens=50) -> AlgoConfig:
    try:
        return AlgoConfig(
            population_size=(args.pop if args.pop is not None
                             else default_pop),
            max_generations=(args.gens if args.gens is not None
                             else default_gens),
            seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _check_writable(path: Path) -> None:
    """Fail before compute if the output file cannot be created."""
    parent = path.resolve().parent
    if not parent.is_dir():
        raise SchemaError(f"output directory {parent} does not exist")
    if path.exists() and path.is_dir():
        raise SchemaError(f"output path {path} is a directory")
    try:
        with tempfile.NamedTemporaryFile(dir=parent):
            pass
    except OSError as exc:
        raise SchemaError(f"cannot write to {parent}: {exc}") from exc


def _trace_csv(trace, stream) -> None:
    writer = csv.writer(stream)
    writer.writerow(["evaluations", "best_hypervolume"])
    for evals, hv in trace:
        writer.writerow([int(evals), repr(float(hv))])


def _front_csv(phenotypes: np.ndarray, objectives: np.ndarray,
               stream) -> None:
    writer = csv.writer(stream)
    writer.writerow(["cutting_speed", "cutting_angle", "cutting_depth",
                     "production_time", "tool_wear", "abs_Fc", "abs_Ft"])
    for x, f in zip(phenotypes, objectives):
        writer.writerow([repr(float(v)) for v in x]
                        + [repr(float(v)) for v in f])


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------

def cmd_simulate(args) -> int:
    catalog = _load_catalog(args.catalog)
    material = _resolve_material(args.material, catalog)
    try:
        proc = ProcessParams(cutting_speed=args.speed,
                             cutting_angle=args.rake,
                             cutting_depth=args.depth)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc

    task = make_task(material)
    res = evaluate(task, proc)
    if res.outputs is None:
        raise ModelDomainError(
            f"no valid cutting state for {material.name} at "
            f"speed={args.speed}, rake={args.rake}, depth={args.depth}")

    out = res.outputs
    rows = [
        ("material", material.name, ""),
        ("cutting_speed", repr(proc.cutting_speed), "m/s"),
        ("cutting_angle", repr(proc.cutting_angle), "rad"),
        ("cutting_depth", repr(proc.cutting_depth), "m"),
        ("shear_angle", repr(out.shear_angle), "rad"),
        ("Fc", repr(out.Fc), "N"),
        ("Ft", repr(out.Ft), "N"),
        ("chip_thickness", repr(out.t_c), "m"),
        ("layers", str(out.n_layers), ""),
        ("feasible", "yes" if res.feasible else "no", ""),
        ("violation", repr(res.violation), ""),
    ]
    if res.feasible:
        obj = res.objectives
        rows += [
            ("production_time", repr(obj.production_time), "s"),
            ("tool_wear", repr(obj.tool_wear), ""),
            ("abs_Fc", repr(obj.abs_Fc), "N"),
            ("abs_Ft", repr(obj.abs_Ft), "N"),
        ]
    width = max(len(name) for name, _, _ in rows)
    for name, value, unit in rows:
        suffix = f" {unit}" if unit else ""
        print(f"{name:<{width}}  {value}{suffix}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# sample
# ---------------------------------------------------------------------------

def cmd_sample(args) -> int:
    if args.samples < 1:
        raise UsageError("--samples must be at least 1")
    catalog = _load_catalog(args.catalog)
    material = _resolve_material(args.material, catalog)
    task = make_task(material)

    rng = np.random.default_rng(args.seed)
    X = rng.uniform(PROCESS_LOWER, PROCESS_UPPER,
                    size=(args.samples, len(PROCESS_LOWER)))
    objs, feasible, violation = evaluate_batch(task, X)

    if feasible.any():
        fronts, _ = non_dominated_sort(objs, feasible, violation)
        front = fronts[0]
        hv = hypervolume(normalize(objs[front]))
    else:
        front = np.array([], dtype=int)
        hv = 0.0

    buf = io.StringIO()
    _front_csv(X[front], objs[front], buf)
    if args.out:
        Path(args.out).write_text(buf.getvalue(), encoding="utf-8")
    else:
        sys.stdout.write(buf.getvalue())
    _say(f"sampled {args.samples} points for {material.name}: "
         f"{len(front)} feasible non-dominated")
    _say(f"hypervolume {hv!r}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# optimize
# ---------------------------------------------------------------------------

_ALGO_TAGS = {
    "baseline": "baseline",
    "vg": "varying-goals",
    "vg-ai": "varying-goals+active-inactive",
}


def cmd_optimize(args) -> int:
    catalog = _load_catalog(args.catalog)
    tag = _ALGO_TAGS[args.algo]

    if args.algo == "baseline":
        if args.material is None:
            raise UsageError("--algo baseline needs --material")
        names = [args.material]
    else:
        if args.materials is None or len(args.materials) != 2:
            raise UsageError(f"--algo {args.algo} needs --materials "
                             f"SOURCE TARGET (a training pair)")
        if args.materials[0] == args.materials[1]:
            raise UsageError("--materials must name two distinct tasks")
        names = list(args.materials)
    tasks = [make_task(_resolve_material(n, catalog)) for n in names]

    out_path = Path(args.out)
    _check_writable(out_path)
    algo = _algo_from_args(args)
    genotype_kind = "active-inactive" if args.algo == "vg-ai" else "plain"
    gene_length = args.gene_length if args.algo == "vg-ai" else None

    if args.algo == "baseline":
        result = run(MemoEvaluator(tasks[0]), algo)
    else:
        schedule = GoalSchedule(tuple(tasks), epoch_length=args.epoch)
        vg = varying_goals_run(
            schedule, algo, genotype_kind=genotype_kind,
            gene_length=gene_length or 2,
            evaluators=[MemoEvaluator(t) for t in tasks])
        result = vg.result
        _say(f"per-goal best hypervolume: "
             + ", ".join(f"{n}={v!r}" for n, v in
                         zip(names, vg.per_goal_best_hv)))
        _say(f"goal switches: {vg.switches}, re-evaluations: "
             f"{result.extra_evaluations}")

    if len(result.best_front) == 0:
        raise ModelDomainError(
            "no feasible front found; nothing to archive")

    arch = from_snapshot(result.best_front, names, tag, genotype_kind,
                         gene_length, algo)
    archive_mod.save(arch, out_path)
    _trace_csv(result.trace, sys.stdout)
    _say(f"best hypervolume {result.best_hypervolume!r} after "
         f"{result.evaluations_used} evaluations "
         f"({result.generations_executed} generations)")
    _say(f"archived {len(result.best_front)} individuals to {out_path}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# adapt
# ---------------------------------------------------------------------------

def _reference_from_bundle(path: str, target: str) -> float:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise SchemaError(f"cannot read bundle {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc})") from exc
    refs = doc.get("references")
    if not isinstance(refs, dict) or target not in refs:
        raise UsageError(
            f"{path} holds no reference hypervolume for {target!r}; run "
            f"the from-scratch campaign first (cutflex experiment) or "
            f"pass --reference-hv")
    return float(refs[target]["mean"])


def cmd_adapt(args) -> int:
    catalog = _load_catalog(args.catalog)
    try:
        arch = archive_mod.load(args.archive)
    except ArchiveError as exc:
        raise SchemaError(f"{args.archive}: {exc}") from exc

    material = _resolve_material(args.material, catalog)
    task = make_task(material)

    if args.reference_hv is not None:
        reference = args.reference_hv
    elif args.bundle is not None:
        reference = _reference_from_bundle(args.bundle, material.name)
    else:
        raise UsageError(
            "a reference hypervolume for the target is required: pass "
            "--reference-hv, or --bundle pointing at a bundle.json from "
            "a prior from-scratch campaign (cutflex experiment)")
    if not 0.0 < args.threshold <= 1.0:
        raise UsageError("--threshold must be in (0, 1]")
    if reference <= 0.0:
        raise UsageError("the reference hypervolume must be positive")
    threshold = args.threshold * reference

    algo = _algo_from_args(args,
                           default_pop=arch.config.population_size,
                           default_gens=arch.config.max_generations)
    representation = make_representation(arch.genotype_kind, algo,
                                         arch.gene_length or 2)
    result = run(MemoEvaluator(task), algo, representation=representation,
                 initial_genotypes=arch.genotypes,
                 stop_threshold=threshold)

    if args.out:
        out_path = Path(args.out)
        _check_writable(out_path)
        if len(result.best_front) == 0:
            _say(f"no feasible front found; {out_path} not written")
        else:
            adapted = from_snapshot(result.best_front, [material.name],
                                    "baseline", arch.genotype_kind,
                                    arch.gene_length, algo)
            archive_mod.save(adapted, out_path)
            _say(f"adapted front archived to {out_path}")

    _trace_csv(result.trace, sys.stdout)
    seeded = min(len(arch.genotypes), algo.population_size)
    _say(f"seeded {seeded} of {algo.population_size} individuals from "
         f"{args.archive} ({' + '.join(arch.tasks)})")
    _say(f"target {material.name}: reference {reference!r}, "
         f"threshold {threshold!r}")
    if result.success_checkpoint is not None:
        _say(f"threshold reached after {result.success_checkpoint} "
             f"evaluations")
    else:
        _say(f"threshold not reached within "
             f"{result.evaluations_used} evaluations")
    _say(f"best hypervolume {result.best_hypervolume!r}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# experiment
# ---------------------------------------------------------------------------

_CONFIG_FIELDS = {f.name for f in dataclass_fields(ExperimentConfig)}
_TUPLE_FIELDS = {"materials", "population_sweep", "epoch_sweep",
                 "gene_length_sweep"}


def _experiment_config(args) -> ExperimentConfig:
    values: dict = {}
    if args.config is not None:
        try:
            doc = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except OSError as exc:
            raise SchemaError(
                f"cannot read config {args.config}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise SchemaError(
                f"{args.config}: not valid JSON ({exc})") from exc
        if not isinstance(doc, dict):
            raise SchemaError(f"{args.config}: expected a JSON object")
        unknown = set(doc) - _CONFIG_FIELDS
        if unknown:
            raise SchemaError(
                f"{args.config}: unknown config keys "
                f"{sorted(unknown)}; valid keys: "
                f"{sorted(_CONFIG_FIELDS)}")
        values.update(doc)

    overrides = {
        "materials": args.materials,
        "population_size": args.pop,
        "max_generations": args.gens,
        "runs_per_cell": args.runs,
        "base_seed": args.seed,
        "epoch_length": args.epoch,
        "gene_length": args.gene_length,
        "threshold_fraction": args.threshold,
    }
    values.update({k: v for k, v in overrides.items() if v is not None})
    for key in _TUPLE_FIELDS & set(values):
        if not isinstance(values[key], (list, tuple)):
            raise SchemaError(f"config key {key!r} must be a list")
        values[key] = tuple(values[key])
    try:
        return ExperimentConfig(**values)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"invalid experiment config: {exc}") from exc


def cmd_experiment(args) -> int:
    catalog = _load_catalog(args.catalog)
    # make catalog materials visible to the campaign loop, which looks
    # tasks up by name (process-local registration)
    BUILTIN_MATERIALS.update(catalog)
    config = _experiment_config(args)
    for name in config.materials:
        _resolve_material(name, catalog)

    bundle = run_experiment(config, args.out, progress=_say)
    sys.stdout.write(render_report(bundle))
    _say(f"bundle, runs.csv and report.txt written under {args.out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# hv
# ---------------------------------------------------------------------------

def cmd_hv(args) -> int:
    try:
        arch = archive_mod.load(args.archive)
    except ArchiveError as exc:
        raise SchemaError(f"{args.archive}: {exc}") from exc
    hv = hypervolume(normalize(arch.objectives))
    print(repr(hv))
    _say(f"{len(arch.genotypes)} individuals, tasks "
         f"{' + '.join(arch.tasks)}, stored best "
         f"{arch.best_hypervolume!r}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# report (rebuild the tables from the raw per-run CSV)
# ---------------------------------------------------------------------------

def _int_or_none(text: str) -> Optional[int]:
    return int(text) if text else None


def _rebuild_from_csv(text: str) -> dict:
    """Reconstruct the report bundle from runs.csv alone.

    The CSV is the raw record of the campaign: every derived table
    (references, effort matrices, aggregates, sweep summary) can be
    recomputed from it, which is what this does.
    """
    try:
        rows = list(csv.DictReader(io.StringIO(text)))
    except csv.Error as exc:
        raise SchemaError(f"cannot parse CSV: {exc}") from exc
    if not rows:
        raise SchemaError("the CSV holds no runs")
    required = {"cell_index", "kind", "algorithm", "materials",
                "population_size", "epoch_length", "gene_length",
                "run_index", "seed", "best_hv", "evaluations",
                "extra_evaluations", "generations", "front_size",
                "own_checkpoint", "success_checkpoint", "threshold",
                "seeded"}
    missing = required - set(rows[0])
    if missing:
        raise SchemaError(f"CSV is missing columns {sorted(missing)}")

    cells: Dict[int, Cell] = {}
    data: Dict[int, dict] = {}
    try:
        for row in rows:
            idx = int(row["cell_index"])
            if idx not in cells:
                algorithm = row["algorithm"]
                geno_kind = ("active-inactive" if algorithm.endswith(
                    "active-inactive") else "plain")
                cells[idx] = Cell(
                    index=idx, kind=row["kind"], algorithm=algorithm,
                    materials=tuple(row["materials"].split("+")),
                    population_size=int(row["population_size"]),
                    genotype_kind=geno_kind,
                    gene_length=_int_or_none(row["gene_length"]),
                    epoch_length=_int_or_none(row["epoch_length"]))
                data[idx] = {"runs": []}
            data[idx]["runs"].append({
                "run_index": int(row["run_index"]),
                "seed": int(row["seed"]),
                "best_hv": float(row["best_hv"]),
                "evaluations": int(row["evaluations"]),
                "extra_evaluations": int(row["extra_evaluations"]),
                "generations": int(row["generations"]),
                "front_size": int(row["front_size"]),
                "own_checkpoint": _int_or_none(row["own_checkpoint"]),
                "success_checkpoint":
                    _int_or_none(row["success_checkpoint"]),
                "threshold": (float(row["threshold"])
                              if row["threshold"] else None),
                "seeded": (bool(int(row["seeded"])) if row["seeded"]
                           else None),
            })
    except (KeyError, ValueError) as exc:
        raise SchemaError(f"malformed CSV row: {exc}") from exc

    ordered = [cells[i] for i in sorted(cells)]
    scratch = [c for c in ordered if c.kind == "scratch"]
    if not scratch:
        raise SchemaError("the CSV holds no from-scratch cells; cannot "
                          "rebuild reference hypervolumes")
    materials = tuple(c.materials[0] for c in scratch)

    ref_mean = {c.materials[0]:
                float(np.mean([r["best_hv"]
                               for r in data[c.index]["runs"]]))
                for c in scratch}
    fraction = None
    for c in ordered:
        for r in data[c.index]["runs"]:
            if r["threshold"] is not None:
                target = c.materials[-1]
                if ref_mean.get(target):
                    fraction = min(r["threshold"] / ref_mean[target], 1.0)
                break
        if fraction is not None:
            break

    sweep_pops: List[int] = []
    for c in ordered:
        if c.kind == "sweep-scratch" and c.population_size not in sweep_pops:
            sweep_pops.append(c.population_size)

    def first(kind: str, attr: str, default):
        for c in ordered:
            if c.kind == kind and getattr(c, attr) is not None:
                return getattr(c, attr)
        return default

    try:
        config = ExperimentConfig(
            materials=materials,
            population_size=scratch[0].population_size,
            max_generations=max(r["generations"]
                                for r in data[scratch[0].index]["runs"]),
            runs_per_cell=len(data[scratch[0].index]["runs"]),
            threshold_fraction=fraction if fraction is not None else 0.99,
            epoch_length=first("vg-train", "epoch_length", 5),
            gene_length=first("ai-train", "gene_length", 2),
            population_sweep=tuple(sweep_pops),
            base_seed=data[scratch[0].index]["runs"][0]["seed"])
    except ValueError as exc:
        raise SchemaError(
            f"CSV does not describe a full campaign: {exc}") from exc
    return assemble_bundle(config, ordered, data)


def cmd_report(args) -> int:
    path = Path(args.path)
    if path.is_dir():
        path = path / "runs.csv"
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    report = render_report(_rebuild_from_csv(text))
    if args.out:
        Path(args.out).write_text(report, encoding="utf-8")
        _say(f"report written to {args.out}")
    sys.stdout.write(report)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser wiring
# ---------------------------------------------------------------------------

def _add_catalog(p: _Parser) -> None:
    p.add_argument("--catalog", metavar="FILE",
                   help="JSON material catalog with extra material "
                        "definitions ({\"materials\": {name: {...}}})")


def _add_algo_knobs(p: _Parser, with_seed_default=0) -> None:
    p.add_argument("--pop", type=int, metavar="N",
                   help="population size (default 100)")
    p.add_argument("--gens", type=int, metavar="N",
                   help="generation budget (default 50)")
    p.add_argument("--seed", type=int, default=with_seed_default,
                   metavar="N", help="random seed (default %(default)s)")


def build_parser() -> _Parser:
    parser = _Parser(
        prog="cutflex",
        description="Flexibility benchmark for multi-objective "
                    "metal-cutting optimization.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("simulate",
                       help="evaluate the cutting model at one point")
    p.add_argument("--material", required=True)
    p.add_argument("--speed", type=float, required=True, metavar="M_PER_S",
                   help=f"cutting speed in [{PROCESS_LOWER[0]}, "
                        f"{PROCESS_UPPER[0]}] m/s")
    p.add_argument("--rake", type=float, required=True, metavar="RAD",
                   help=f"rake angle in [{PROCESS_LOWER[1]}, "
                        f"{PROCESS_UPPER[1]}] rad")
    p.add_argument("--depth", type=float, required=True, metavar="M",
                   help=f"cutting depth in [{PROCESS_LOWER[2]}, "
                        f"{PROCESS_UPPER[2]}] m")
    _add_catalog(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sample",
                       help="uniform random sampling of one task")
    p.add_argument("--material", required=True)
    p.add_argument("-n", "--samples", type=int, default=10000, metavar="N",
                   help="number of uniform points (default %(default)s)")
    p.add_argument("--seed", type=int, default=0, metavar="N")
    p.add_argument("--out", metavar="FILE",
                   help="write the front CSV here instead of stdout")
    _add_catalog(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("optimize",
                       help="one optimization run, archived")
    p.add_argument("--material", help="task for --algo baseline")
    p.add_argument("--materials", nargs=2, metavar=("A", "B"),
                   help="training pair for --algo vg / vg-ai")
    p.add_argument("--algo", choices=sorted(_ALGO_TAGS), default="baseline")
    p.add_argument("--epoch", type=int, default=5, metavar="E",
                   help="generations per goal before switching "
                        "(default %(default)s)")
    p.add_argument("--gene-length", type=int, default=2, metavar="L",
                   help="slots per process value for vg-ai "
                        "(default %(default)s)")
    _add_algo_knobs(p)
    p.add_argument("--out", required=True, metavar="FILE",
                   help="archive path for the best front")
    _add_catalog(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("adapt",
                       help="seed a run from an archive, race a "
                            "reference threshold")
    p.add_argument("archive", help="stored front archive to seed from")
    p.add_argument("--material", required=True, help="target task")
    p.add_argument("--threshold", type=float, default=0.99, metavar="F",
                   help="fraction of the reference hypervolume to reach "
                        "(default %(default)s)")
    p.add_argument("--reference-hv", type=float, metavar="HV",
                   help="reference hypervolume for the target")
    p.add_argument("--bundle", metavar="FILE",
                   help="bundle.json of a from-scratch campaign to pull "
                        "the reference from")
    _add_algo_knobs(p)
    p.add_argument("--out", metavar="FILE",
                   help="also archive the adapted front here")
    _add_catalog(p)
    p.set_defaults(func=cmd_adapt)

    p = sub.add_parser("experiment", help="run the full campaign matrix")
    p.add_argument("--out", required=True, metavar="DIR",
                   help="output directory (resumable)")
    p.add_argument("--config", metavar="FILE",
                   help="JSON experiment config; keys are "
                        "ExperimentConfig fields")
    p.add_argument("--materials", nargs="+", metavar="NAME",
                   help="override the material list")
    p.add_argument("--pop", type=int, metavar="N")
    p.add_argument("--gens", type=int, metavar="N")
    p.add_argument("--runs", type=int, metavar="N",
                   help="runs per cell (default 100)")
    p.add_argument("--seed", type=int, metavar="N",
                   help="base seed (default 2026)")
    p.add_argument("--epoch", type=int, metavar="E")
    p.add_argument("--gene-length", type=int, metavar="L")
    p.add_argument("--threshold", type=float, metavar="F",
                   help="threshold fraction (default 0.99)")
    _add_catalog(p)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("hv", help="recompute an archive's hypervolume")
    p.add_argument("archive")
    p.set_defaults(func=cmd_hv)

    p = sub.add_parser("report",
                       help="re-render campaign tables from runs.csv")
    p.add_argument("path", help="runs.csv file or campaign directory")
    p.add_argument("--out", metavar="FILE",
                   help="also write the rendered report here")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "func", None) is None:
            parser.print_help(sys.stderr)
            return EXIT_USAGE
        return args.func(args)
    except UsageError as exc:
        _say(f"error: {exc}")
        return EXIT_USAGE
    except SchemaError as exc:
        _say(f"error: {exc}")
        return EXIT_IO_SCHEMA
    except (ModelDomainError, ConvergenceError) as exc:
        _say(f"error: {exc}")
        return EXIT_MODEL
    except BrokenPipeError:
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
