"""Onion-peeling (convex layers) outlier detection for 2-D point sets."""
from onionpeel.datagen import DEFAULT_SPEC, DataSet, GenSpec, generate, load_points, save_points
from onionpeel.detector import (
    DetectionConfig,
    OutlierReport,
    Removal,
    Scoring,
    detect,
)
from onionpeel.errors import (
    DegenerateInputError,
    EmptyDatasetError,
    InsufficientDataError,
    InvalidInputError,
    InvalidParameterError,
    OnionPeelError,
    ParseError,
    PreconditionError,
)
from onionpeel.evaluation import (
    DEFAULT_SCENARIOS,
    common_outliers,
    grade,
    recall,
    run_experiment,
)
from onionpeel.geometry import (
    Hull,
    Orientation,
    PeelDecomposition,
    convex_hull,
    hull_area,
    onion_peel,
    orientation,
)
from onionpeel.metrics import (
    Covariance2,
    MetricKind,
    Variances2,
    estimate_covariance,
    euclidean,
    mahalanobis,
    standardize,
    standardized_euclidean,
)

__version__ = "0.1.0"
