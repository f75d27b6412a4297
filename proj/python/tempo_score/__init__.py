"""Scores for temporal properties over per-timestep detector scores."""

from ._core import (
    ContractError,
    DataError,
    Formula,
    LabelTrace,
    ParseError,
    ScoreTrace,
    __version__,
    adaptive_threshold,
    balanced_accuracy,
    eval_boolean,
    ir_metrics,
    load_label_db,
    load_score_db,
    logstop,
    logstop_all_starts,
    match,
    parse_formula,
    rank_metrics,
    retrieve,
    run_cli,
    stl_robustness,
    templates,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
