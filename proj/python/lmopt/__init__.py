"""Prompt and weight optimization for LM programs."""

import json

from ._lmopt import (
    LmoptError,
    aggregate_runs,
    exact_match,
    extract_last_number,
    gsm8k_score,
    normalize_answer,
    parse_completion,
    parse_strategy,
    render_vanilla_prompt,
    report,
    round_one_decimal,
    strategy_names,
    synth,
)
from ._lmopt import optimize_json as _optimize_json


def optimize(config, task, strategy, seed=0, run_id=None):
    """Run one strategy and return the parsed summary.json."""
    return json.loads(_optimize_json(str(config), task, strategy, seed, run_id))


__all__ = [
    "LmoptError",
    "aggregate_runs",
    "exact_match",
    "extract_last_number",
    "gsm8k_score",
    "normalize_answer",
    "optimize",
    "parse_completion",
    "parse_strategy",
    "render_vanilla_prompt",
    "report",
    "round_one_decimal",
    "strategy_names",
    "synth",
]
