"""Prototype selection toolkit.

A grid spatial-abstraction accelerator plus five classic selection algorithms
(ENN, DROP3, ICF, LSSm, LSBo), composable into fast pipelines, with a
cross-validated benchmark harness and CLI.
"""

from .dataset import (
    Dataset,
    DataFormatError,
    FoldAssignment,
    Instance,
    bundled_path,
    distance,
    fold_split,
    load_csv,
    min_max_scaled,
    save_csv,
    stratified_folds,
)
from .evaluation import EvaluationReport, accuracy, knn_classify, reduction, run_experiment
from .partitioning import (
    GridSpec,
    PartitionSet,
    Prototype,
    extract_prototype,
    grid_spec,
    interval_index,
    partition,
    partition_debug_dump,
    psasa,
    snap_to_instances,
)
from .pipeline import PipelineConfig, PipelineTiming, run_pipeline
from .selectors import (
    SELECTOR_NAMES,
    NeighborIndex,
    SelectionResult,
    coverage_reachable,
    drop3,
    enn,
    icf,
    local_set,
    lsbo,
    lssm,
    run_selector,
)
from .synthetic import gaussian_blobs

__version__ = "0.1.0"

__all__ = [
    "Dataset",
    "DataFormatError",
    "FoldAssignment",
    "Instance",
    "bundled_path",
    "distance",
    "fold_split",
    "load_csv",
    "min_max_scaled",
    "save_csv",
    "stratified_folds",
    "EvaluationReport",
    "accuracy",
    "knn_classify",
    "reduction",
    "run_experiment",
    "GridSpec",
    "PartitionSet",
    "Prototype",
    "extract_prototype",
    "grid_spec",
    "interval_index",
    "partition",
    "partition_debug_dump",
    "psasa",
    "snap_to_instances",
    "PipelineConfig",
    "PipelineTiming",
    "run_pipeline",
    "SELECTOR_NAMES",
    "NeighborIndex",
    "SelectionResult",
    "coverage_reachable",
    "drop3",
    "enn",
    "icf",
    "local_set",
    "lsbo",
    "lssm",
    "run_selector",
    "gaussian_blobs",
    "__version__",
]
