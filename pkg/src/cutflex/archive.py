"""Front-store persistence: saved Pareto fronts with enough provenance to
seed later runs. The on-disk format is canonical JSON (sorted keys, fixed
indentation, shortest-round-trip floats), so write -> read -> write is
byte-identical and files diff cleanly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Tuple

import numpy as np

from .nsga2 import AlgoConfig, FrontSnapshot
from .oxley import PROCESS_LOWER, PROCESS_UPPER

FORMAT_VERSION = 1

ALGORITHM_TAGS = ("baseline", "varying-goals",
                  "varying-goals+active-inactive")


class ArchiveError(ValueError):
    """Schema or content problem in a front-store file."""


@dataclass
class ParetoArchive:
    tasks: Tuple[str, ...]
    algorithm: str
    genotype_kind: str
    gene_length: Optional[int]
    config: AlgoConfig
    seed: int
    genotypes: np.ndarray
    phenotypes: np.ndarray
    objectives: np.ndarray
    best_hypervolume: float
    generation: int
    evaluations: int
    format_version: int = FORMAT_VERSION

    def __len__(self) -> int:
        return self.genotypes.shape[0]


def _config_dict(config: AlgoConfig) -> dict:
    return {
        "population_size": config.population_size,
        "max_generations": config.max_generations,
        "tournament_size": config.tournament_size,
        "eta_cross": config.eta_cross,
        "eta_mut": config.eta_mut,
        "mutation_prob": config.mutation_prob,
        "crossover_prob": config.crossover_prob,
        "seed": config.seed,
    }


def _config_from_dict(d: dict) -> AlgoConfig:
    try:
        return AlgoConfig(
            population_size=int(d["population_size"]),
            max_generations=int(d["max_generations"]),
            tournament_size=int(d["tournament_size"]),
            eta_cross=float(d["eta_cross"]),
            eta_mut=float(d["eta_mut"]),
            mutation_prob=float(d["mutation_prob"]),
            crossover_prob=float(d["crossover_prob"]),
            seed=int(d["seed"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ArchiveError(f"bad algorithm config in archive: {exc}") from exc


def from_snapshot(front: FrontSnapshot, tasks: Sequence[str],
                  algorithm: str, genotype_kind: str,
                  gene_length: Optional[int], config: AlgoConfig,
                  seed: Optional[int] = None) -> ParetoArchive:
    """Wrap an engine front snapshot for storage."""
    if len(front) == 0:
        raise ArchiveError("cannot archive an empty front")
    if algorithm not in ALGORITHM_TAGS:
        raise ArchiveError(f"unknown algorithm tag {algorithm!r}")
    return ParetoArchive(
        tasks=tuple(tasks),
        algorithm=algorithm,
        genotype_kind=genotype_kind,
        gene_length=gene_length,
        config=config,
        seed=config.seed if seed is None else seed,
        genotypes=np.asarray(front.genotypes, dtype=np.float64),
        phenotypes=np.asarray(front.phenotypes, dtype=np.float64),
        objectives=np.asarray(front.objectives, dtype=np.float64),
        best_hypervolume=float(front.hypervolume),
        generation=int(front.generation),
        evaluations=int(front.evaluations),
    )


def to_dict(archive: ParetoArchive) -> dict:
    individuals = [
        {
            "genotype": archive.genotypes[i].tolist(),
            "phenotype": archive.phenotypes[i].tolist(),
            "objectives": archive.objectives[i].tolist(),
        }
        for i in range(len(archive))
    ]
    return {
        "format_version": archive.format_version,
        "tasks": list(archive.tasks),
        "algorithm": archive.algorithm,
        "genotype_kind": archive.genotype_kind,
        "gene_length": archive.gene_length,
        "config": _config_dict(archive.config),
        "seed": archive.seed,
        "individuals": individuals,
        "best_hypervolume": float(archive.best_hypervolume),
        "generation": archive.generation,
        "evaluations": archive.evaluations,
    }


def _require(d: dict, key: str):
    if key not in d:
        raise ArchiveError(f"archive missing field {key!r}")
    return d[key]


def from_dict(d: dict) -> ParetoArchive:
    if not isinstance(d, dict):
        raise ArchiveError("archive root must be an object")
    version = _require(d, "format_version")
    if version != FORMAT_VERSION:
        raise ArchiveError(
            f"unsupported archive format_version {version!r}, "
            f"expected {FORMAT_VERSION}")
    tasks = _require(d, "tasks")
    if (not isinstance(tasks, list) or not tasks
            or not all(isinstance(t, str) for t in tasks)):
        raise ArchiveError("tasks must be a non-empty list of names")
    algorithm = _require(d, "algorithm")
    if algorithm not in ALGORITHM_TAGS:
        raise ArchiveError(f"unknown algorithm tag {algorithm!r}")
    genotype_kind = _require(d, "genotype_kind")
    if genotype_kind not in ("plain", "active-inactive"):
        raise ArchiveError(f"unknown genotype kind {genotype_kind!r}")
    gene_length = _require(d, "gene_length")
    if gene_length is not None:
        gene_length = int(gene_length)
        if gene_length < 1:
            raise ArchiveError("gene_length must be positive when set")
    config = _config_from_dict(_require(d, "config"))
    individuals = _require(d, "individuals")
    if not isinstance(individuals, list) or not individuals:
        raise ArchiveError("individuals must be a non-empty list")
    try:
        genotypes = np.asarray([ind["genotype"] for ind in individuals],
                               dtype=np.float64)
        phenotypes = np.asarray([ind["phenotype"] for ind in individuals],
                                dtype=np.float64)
        objectives = np.asarray([ind["objectives"] for ind in individuals],
                                dtype=np.float64)
    except (KeyError, TypeError, ValueError) as exc:
        raise ArchiveError(f"malformed individual record: {exc}") from exc
    if genotypes.ndim != 2 or phenotypes.ndim != 2 or objectives.ndim != 2:
        raise ArchiveError("individual arrays must be rectangular")
    lo = np.asarray(PROCESS_LOWER)
    up = np.asarray(PROCESS_UPPER)
    if phenotypes.shape[1] != lo.shape[0]:
        raise ArchiveError(
            f"phenotype length {phenotypes.shape[1]} != {lo.shape[0]}")
    if (phenotypes < lo).any() or (phenotypes > up).any():
        raise ArchiveError("phenotype outside parameter bounds")
    return ParetoArchive(
        tasks=tuple(tasks),
        algorithm=algorithm,
        genotype_kind=genotype_kind,
        gene_length=gene_length,
        config=config,
        seed=int(_require(d, "seed")),
        genotypes=genotypes,
        phenotypes=phenotypes,
        objectives=objectives,
        best_hypervolume=float(_require(d, "best_hypervolume")),
        generation=int(_require(d, "generation")),
        evaluations=int(_require(d, "evaluations")),
        format_version=int(version),
    )


def dumps(archive: ParetoArchive) -> str:
    """Canonical serialization: stable key order and layout."""
    return json.dumps(to_dict(archive), sort_keys=True, indent=2) + "\n"


def save(archive: ParetoArchive, path) -> None:
    Path(path).write_text(dumps(archive), encoding="utf-8")


def load(path) -> ParetoArchive:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ArchiveError(f"cannot read archive {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ArchiveError(f"archive {path} is not valid JSON: "
                           f"{exc}") from exc
    return from_dict(data)
