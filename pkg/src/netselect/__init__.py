"""ANP + TOPSIS access-network selection with ranking-abnormality and handoff simulation."""

from .anp import (
    HierarchyWeights,
    PairwiseMatrix,
    WeightVector,
    build_pairwise,
    compose_hierarchy,
    consistency,
    derive_weights,
    form_supermatrix,
    limit_supermatrix,
    normalize_columns,
)
from .strategy import (
    HistoryState,
    NetworkSnapshot,
    TrafficClassProfile,
    VariantId,
    build_decision_matrix,
    load_profile,
    select_network,
    update_history,
)
from .topsis import CriterionDirection, DecisionMatrix, topsis

__version__ = "0.1.0"

__all__ = [
    "CriterionDirection",
    "DecisionMatrix",
    "HierarchyWeights",
    "HistoryState",
    "NetworkSnapshot",
    "PairwiseMatrix",
    "TrafficClassProfile",
    "VariantId",
    "WeightVector",
    "build_decision_matrix",
    "build_pairwise",
    "compose_hierarchy",
    "consistency",
    "derive_weights",
    "form_supermatrix",
    "limit_supermatrix",
    "load_profile",
    "normalize_columns",
    "select_network",
    "topsis",
    "update_history",
]
