"""Privacy metrics for synthetic tabular data.

Computes seventeen privacy metrics over a pair of datasets (real Y,
synthetic Z), covering re-identification, attribute-inference, and
membership-inference risk. Each score is reported raw and normalized to
[0, 1] with an explicit direction tag. See the README for the CLI.
"""

from .classify import (
    FoldPlan,
    GBTBinaryClassifier,
    LabeledSet,
    MLPBinaryClassifier,
    auc,
    build_labeled_set,
    holdout_recall,
    kfold_auc,
    make_fold_plan,
    train_gbt,
    train_mlp,
)
from .config import MetricConfig, load_generation_map
from .dataset import (
    AttrKind,
    Attribute,
    Dataset,
    Role,
    Schema,
    ValueStats,
    load_dataset,
    load_dataset_files,
    project,
    serialize_dataset,
    value_stats,
)
from .errors import (
    ConfigError,
    DegenerateEntropyError,
    EmptyDatasetError,
    InsufficientRealRecordsError,
    InvalidValueError,
    MissingGenerationMapError,
    MissingValueError,
    NonFiniteValueError,
    SchemaMismatchError,
    SynthAuditError,
    UnknownAttributeError,
)
from .geometry import (
    DatasetEncoder,
    EncodedMatrix,
    PCAProjection,
    dist_euclid,
    dist_hamming,
    dist_minkowski,
    distance_extrema,
    encode,
    fit_projection,
    minimizer_set,
    nearest,
    nearest_two,
    pairwise_distances,
    project_point,
)
from .metrics import (
    CANONICAL_ORDER,
    METRIC_FUNCS,
    METRICS,
    MatchKind,
    MatchSet,
    MetricInfo,
    air,
    auth,
    crp,
    cvp,
    dcr,
    dmlp,
    dvp,
    evaluate_all,
    gcap,
    hidden_rate,
    hitting_rate,
    identifiability,
    mdcr,
    mir,
    nnaa,
    nndr,
    nsnd,
    zcap,
)
from .oracle import ORACLE_FUNCS, OracleSummary, run_oracle
from .report import (
    TOOL_VERSION,
    OutputFormat,
    RunConfig,
    build_report,
    render,
    render_json,
    render_markdown,
    sha256_of_file,
    validate_report,
)
from .result import Direction, MetricResult

__version__ = TOOL_VERSION

__all__ = [
    "AttrKind",
    "Attribute",
    "CANONICAL_ORDER",
    "ConfigError",
    "Dataset",
    "DatasetEncoder",
    "DegenerateEntropyError",
    "Direction",
    "EmptyDatasetError",
    "EncodedMatrix",
    "FoldPlan",
    "GBTBinaryClassifier",
    "InsufficientRealRecordsError",
    "InvalidValueError",
    "LabeledSet",
    "METRICS",
    "METRIC_FUNCS",
    "MLPBinaryClassifier",
    "MatchKind",
    "MatchSet",
    "MetricConfig",
    "MetricInfo",
    "MetricResult",
    "MissingGenerationMapError",
    "MissingValueError",
    "NonFiniteValueError",
    "ORACLE_FUNCS",
    "OracleSummary",
    "OutputFormat",
    "PCAProjection",
    "Role",
    "RunConfig",
    "Schema",
    "SchemaMismatchError",
    "SynthAuditError",
    "TOOL_VERSION",
    "UnknownAttributeError",
    "ValueStats",
    "air",
    "auc",
    "auth",
    "build_labeled_set",
    "build_report",
    "crp",
    "cvp",
    "dcr",
    "dist_euclid",
    "dist_hamming",
    "dist_minkowski",
    "distance_extrema",
    "dmlp",
    "dvp",
    "encode",
    "evaluate_all",
    "fit_projection",
    "gcap",
    "hidden_rate",
    "hitting_rate",
    "holdout_recall",
    "identifiability",
    "kfold_auc",
    "load_dataset",
    "load_dataset_files",
    "load_generation_map",
    "make_fold_plan",
    "mdcr",
    "minimizer_set",
    "mir",
    "nearest",
    "nearest_two",
    "nnaa",
    "nndr",
    "nsnd",
    "pairwise_distances",
    "project",
    "project_point",
    "render",
    "render_json",
    "render_markdown",
    "run_oracle",
    "serialize_dataset",
    "sha256_of_file",
    "train_gbt",
    "train_mlp",
    "validate_report",
    "value_stats",
    "zcap",
    "__version__",
]
