"""Artificial languages from generalized categorial grammars."""

from ._alforge import (
    Grammar,
    NgramModel,
    augment_long,
    derives,
    enumerate_templates,
    grammar,
    grammars,
    heuristic_filter,
    judge_pairs,
    pearson,
    permute,
    perplexity,
    plausibility,
    run_pipeline,
    ta_score,
)

__all__ = [
    "Grammar",
    "NgramModel",
    "augment_long",
    "derives",
    "enumerate_templates",
    "grammar",
    "grammars",
    "heuristic_filter",
    "judge_pairs",
    "pearson",
    "permute",
    "perplexity",
    "plausibility",
    "run_pipeline",
    "ta_score",
]
