"""Frequentist model averaging for Gaussian DAG estimation.

Builds a nested sequence of candidate graphs by greedy search, fits each
by per-node least squares, and combines the coefficient matrices with
weights minimizing a penalized residual criterion over the probability
simplex. Ships a scikit-learn style estimator, a Monte Carlo benchmark
harness, and a CLI.
"""

from .errors import (
    ConstantColumnError,
    DagavgError,
    DataError,
    DuplicateHeaderError,
    MissingValueError,
    NotConvergedError,
    NumericalError,
    ParseError,
    RankDeficientError,
    SearchExhaustedError,
    TooManyParentsError,
)
from .estimator import DagModelAverager
from .graphs import CandidateModel, CandidateSet, Dag, support_dag, topological_order, validate_dag
from .io import (
    RESULTS_HEADER,
    DegreeSummary,
    default_names,
    degree_summary,
    export_dot,
    load_csv,
    read_dot_edges,
    standardize,
    write_results_csv,
    write_weights_csv,
)
from .leastsquares import FitResult, estimate_sigma2, fit_edgeset, profile_loglik
from .metrics import (
    CandidateTaxonomy,
    MetricsRecord,
    classify_candidates,
    estimated_precision,
    estimation_errors,
    kl_divergence_model,
    kl_loss,
    prediction_error,
    taxonomy_weight_sums,
)
from .sampling import SynthConfig, derive_seeds, generate_true_dag, sample_data, true_precision
from .search import SearchConfig, build_candidates, initial_graph, split_data, validation_score
from .simulate import (
    ExperimentConfig,
    RunRecord,
    emit_results,
    run_simulation,
    run_weight_consistency,
    simulate_replication,
)
from .weights import (
    AveragingConfig,
    WeightSolution,
    average_estimator,
    gram_matrix,
    lambda_value,
    solve_weights,
)

__version__ = "0.1.0"

__all__ = [
    "AveragingConfig",
    "CandidateModel",
    "CandidateSet",
    "CandidateTaxonomy",
    "ConstantColumnError",
    "Dag",
    "DagModelAverager",
    "DagavgError",
    "DataError",
    "DegreeSummary",
    "DuplicateHeaderError",
    "ExperimentConfig",
    "FitResult",
    "MetricsRecord",
    "MissingValueError",
    "NotConvergedError",
    "NumericalError",
    "ParseError",
    "RESULTS_HEADER",
    "RankDeficientError",
    "RunRecord",
    "SearchConfig",
    "SearchExhaustedError",
    "SynthConfig",
    "TooManyParentsError",
    "WeightSolution",
    "__version__",
    "average_estimator",
    "build_candidates",
    "classify_candidates",
    "default_names",
    "degree_summary",
    "derive_seeds",
    "emit_results",
    "estimate_sigma2",
    "estimated_precision",
    "estimation_errors",
    "export_dot",
    "fit_edgeset",
    "generate_true_dag",
    "gram_matrix",
    "initial_graph",
    "kl_divergence_model",
    "kl_loss",
    "lambda_value",
    "load_csv",
    "prediction_error",
    "profile_loglik",
    "read_dot_edges",
    "run_simulation",
    "run_weight_consistency",
    "sample_data",
    "simulate_replication",
    "solve_weights",
    "split_data",
    "standardize",
    "support_dag",
    "taxonomy_weight_sums",
    "topological_order",
    "true_precision",
    "validate_dag",
    "validation_score",
    "write_results_csv",
    "write_weights_csv",
]
