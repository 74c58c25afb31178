"""Searching for and verifying theta-type congruences of p_r(n)."""

from .export import read_verdicts_csv, summarize, verdicts_to_csv, verdicts_to_json
from .search import (
    SearchTask,
    SearchVerdict,
    brute_verify,
    classify_candidate,
    ramanujan_check,
    reduce_modulus,
    rule_out_search,
    search_grid,
)
from .theorems import (
    AbnormalInput,
    FamilyRow,
    FigurePair,
    abnormal_verify,
    b_value,
    etafamily_verify,
    family_enumerate,
    figure_pairs,
)

__all__ = [
    "SearchTask",
    "SearchVerdict",
    "brute_verify",
    "classify_candidate",
    "ramanujan_check",
    "reduce_modulus",
    "rule_out_search",
    "search_grid",
    "AbnormalInput",
    "FamilyRow",
    "FigurePair",
    "abnormal_verify",
    "b_value",
    "etafamily_verify",
    "family_enumerate",
    "figure_pairs",
    "read_verdicts_csv",
    "summarize",
    "verdicts_to_csv",
    "verdicts_to_json",
]
