"""Latent tree analysis for categorical survey data.

Learns tree-structured latent variable models from dichotomous/categorical
data, extracts co-occurrence and mutual-exclusion patterns, clusters cases
jointly over declared symptom groups, and derives score-based
classification rules.
"""

from .model import (
    CategoricalDataset,
    LatentTreeModel,
    Variable,
    forward_sample,
    latent_var,
    manifest_var,
    validate_model,
)
from .inference import (
    log_likelihood,
    map_state,
    marginal,
    pairwise_marginal,
    posterior,
    reroot,
)
from .em import EMConfig, EMResult, em_fit, local_em

__all__ = [
    "CategoricalDataset",
    "EMConfig",
    "EMResult",
    "LatentTreeModel",
    "Variable",
    "em_fit",
    "forward_sample",
    "latent_var",
    "local_em",
    "log_likelihood",
    "manifest_var",
    "map_state",
    "marginal",
    "pairwise_marginal",
    "posterior",
    "reroot",
    "validate_model",
]
