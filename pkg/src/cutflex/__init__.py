"""Flexibility benchmark for multi-objective metal-cutting optimization.

An analytic orthogonal-cutting evaluator, one four-objective task per
material, an NSGA-II engine with two adaption-oriented extensions, and the
measurement stack (hypervolume, computational effort, adaption-cost
aggregates) behind a command-line harness.
"""

from .archive import (
    ArchiveError,
    ParetoArchive,
    from_snapshot,
)
from .archive import load as load_archive
from .archive import save as save_archive
from .experiment import (
    Cell,
    ExperimentConfig,
    assemble_bundle,
    derive_seed,
    enumerate_cells,
    own_checkpoint,
    render_report,
    run_experiment,
    runs_csv,
)
from .metrics import (
    computational_effort,
    cost_aggregates,
    hypervolume,
    success_threshold,
)
from .nsga2 import (
    AlgoConfig,
    FrontSnapshot,
    RunResult,
    non_dominated_sort,
    run,
)
from .oxley import (
    BUILTIN_MATERIALS,
    CUTTING_WIDTH,
    MATERIAL_ORDER,
    N_PROCESS,
    PROCESS_LOWER,
    PROCESS_UPPER,
    CatalogError,
    ConvergenceError,
    CutOutputs,
    DomainError,
    MaterialParams,
    ModelDomainError,
    ProcessParams,
    flow_stress,
    get_material,
    layer_count,
    load_material_catalog,
    solve_batch,
    solve_cut,
)
from .task import (
    EvalResult,
    MemoEvaluator,
    TaskSpec,
    evaluate,
    evaluate_batch,
    is_feasible,
    make_task,
    normalize,
    task_evaluator,
)
from .variants import (
    GoalSchedule,
    VaryingGoalsResult,
    decode_genotype,
    encode_genotype,
    goal_index,
    make_representation,
    varying_goals_run,
)

__all__ = [
    "AlgoConfig",
    "ArchiveError",
    "BUILTIN_MATERIALS",
    "CUTTING_WIDTH",
    "CatalogError",
    "Cell",
    "ConvergenceError",
    "CutOutputs",
    "DomainError",
    "EvalResult",
    "ExperimentConfig",
    "FrontSnapshot",
    "GoalSchedule",
    "MATERIAL_ORDER",
    "MaterialParams",
    "MemoEvaluator",
    "ModelDomainError",
    "N_PROCESS",
    "PROCESS_LOWER",
    "PROCESS_UPPER",
    "ParetoArchive",
    "ProcessParams",
    "RunResult",
    "TaskSpec",
    "VaryingGoalsResult",
    "assemble_bundle",
    "computational_effort",
    "cost_aggregates",
    "decode_genotype",
    "derive_seed",
    "encode_genotype",
    "enumerate_cells",
    "evaluate",
    "evaluate_batch",
    "flow_stress",
    "from_snapshot",
    "get_material",
    "goal_index",
    "hypervolume",
    "is_feasible",
    "layer_count",
    "load_archive",
    "load_material_catalog",
    "make_representation",
    "make_task",
    "non_dominated_sort",
    "normalize",
    "own_checkpoint",
    "render_report",
    "run",
    "run_experiment",
    "runs_csv",
    "save_archive",
    "solve_batch",
    "solve_cut",
    "success_threshold",
    "task_evaluator",
    "varying_goals_run",
]

__version__ = "0.1.0"
