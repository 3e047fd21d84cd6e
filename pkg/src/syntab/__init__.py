"""syntab: evaluate synthetic tabular data against the table it imitates.

Three pillars — privacy (distance- and attack-based), statistical
similarity, and machine-learning utility — plus baseline generators and
a CLI that bundles everything into one reproducible report.
"""

from syntab.tabular import (
    CATEGORICAL,
    NUMERIC,
    ColumnSpec,
    Dataset,
    Schema,
    SplitPair,
    discretize,
    discretize_dataset,
    dynamic_train_test_split,
    infer_schema,
    load_csv,
    mixed_distance,
    normalize,
    sample_rows,
)

__version__ = "0.1.0"

from syntab.attack_privacy import (
    AuxSplit,
    RiskEstimate,
    inference_risk,
    linkability_risk,
    singling_out_risk,
    wilson_interval,
)
from syntab.distance_privacy import (
    DistancePrivacyReport,
    dcr,
    disco,
    distance_privacy_report,
    nnaa,
    nndr,
    rep_u,
)
from syntab.evaluation import (
    EvalConfig,
    MetricReport,
    SinkhornSettings,
    emit_plot_data,
    emit_report,
    load_config,
    run_evaluation,
)
from syntab.generators import (
    CopulaModel,
    GmmModel,
    fit_gaussian_copula,
    fit_gmm,
    random_model,
    sample_gaussian_copula,
    sample_gmm,
)
from syntab.ml_utility import (
    Learner,
    UtilityReport,
    train_classifier,
    training_split,
    tstr_compare,
)
from syntab.similarity import (
    SimilarityReport,
    SinkhornResult,
    correlation_similarity,
    js_similarity,
    ks_similarity,
    nmi_similarity,
    similarity_report,
    sinkhorn_distance,
    wasserstein_exact_1d,
)

__all__ = [
    "CATEGORICAL",
    "NUMERIC",
    "AuxSplit",
    "ColumnSpec",
    "CopulaModel",
    "Dataset",
    "DistancePrivacyReport",
    "EvalConfig",
    "GmmModel",
    "Learner",
    "MetricReport",
    "RiskEstimate",
    "Schema",
    "SimilarityReport",
    "SinkhornResult",
    "SinkhornSettings",
    "SplitPair",
    "UtilityReport",
    "correlation_similarity",
    "dcr",
    "disco",
    "discretize",
    "discretize_dataset",
    "distance_privacy_report",
    "dynamic_train_test_split",
    "emit_plot_data",
    "emit_report",
    "fit_gaussian_copula",
    "fit_gmm",
    "infer_schema",
    "inference_risk",
    "js_similarity",
    "ks_similarity",
    "linkability_risk",
    "load_config",
    "load_csv",
    "mixed_distance",
    "nmi_similarity",
    "nnaa",
    "nndr",
    "normalize",
    "random_model",
    "rep_u",
    "run_evaluation",
    "sample_gaussian_copula",
    "sample_gmm",
    "sample_rows",
    "similarity_report",
    "singling_out_risk",
    "sinkhorn_distance",
    "train_classifier",
    "training_split",
    "tstr_compare",
    "wasserstein_exact_1d",
    "wilson_interval",
    "__version__",
]
