"""Exact analysis of finite metrics: block splits, tight-span cutpoints,
block realizations and the induced decomposition into block metrics."""

from .cutpoints import (
    CutpointRecord,
    CutSystem,
    Dic,
    compute_cut_points,
    dedup_insert,
    extend_cutpoint,
    extend_splits,
    incremental_components,
)
from .errors import (
    Asymmetry,
    CapExceeded,
    EmptySubset,
    GammaOutOfRange,
    MetricError,
    NegativeEntry,
    NonzeroDiagonal,
    ParseError,
    RealizationCheckFailed,
    TriangleViolation,
    UnknownPoint,
    ZeroOffDiagonal,
)
from .estimator import MetricCutpoints
from .io import (
    cut_system_to_json,
    decomposition_to_json,
    metric_from_json,
    metric_to_json,
    parse_matrix,
    realization_to_dot,
    realization_to_json,
    report_to_json,
)
from .metric import (
    Classification,
    Metric,
    PointMap,
    Rational,
    SupportGraph,
    as_metric,
    classify_cutstar,
    gamma_graph,
    is_in_polytope,
    is_in_tight_span,
    kuratowski_map,
    support,
    to_rational,
    validate_metric,
    virtual_distance,
)
from .oracle import (
    CheckResult,
    VerificationReport,
    bridge_split_correspondence,
    brute_force_block_splits,
    decomposition_path_independent,
    generate_block_instance,
    generate_random_metric,
    permutation_harness,
    reference_cut_points,
    split_witness_map,
    verify_cut_system,
)
from .realization import (
    BlockDecomposition,
    RealizationGraph,
    block_metric,
    blocks_and_cut_vertices,
    build_block_realization,
    check_realization,
    decompose,
)
from .splits import (
    BlockSplitRecord,
    Split,
    are_compatible,
    block_split_record,
    endpoint_maps,
    is_block_split,
    isolation_index,
    split_map,
)

__version__ = "0.1.0"
