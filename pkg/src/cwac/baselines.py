"""Unweighted comparators sharing the CWAC rank/prune/classify path.

``cba`` mines class rules over every attribute with Apriori; ``garc``
keeps the information-gain anchor but counts transactions instead of
summing hub weights.
"""

from __future__ import annotations

from .dataset import Dataset
from .miner import LEVELWISE, CandidateSet, RuleSet, classic_rules

DEFAULT_CANDIDATE_CAP = 10**6


def baseline_cba_candidates(
    train: Dataset, min_sup: float, min_conf: float, max_candidates: int = DEFAULT_CANDIDATE_CAP
) -> tuple[RuleSet, CandidateSet]:
    return classic_rules(train, None, min_sup, min_conf, LEVELWISE, max_candidates, "cba")


def baseline_cba(
    train: Dataset, min_sup: float, min_conf: float, max_candidates: int = DEFAULT_CANDIDATE_CAP
) -> RuleSet:
    return baseline_cba_candidates(train, min_sup, min_conf, max_candidates)[0]


def baseline_garc_candidates(
    train: Dataset, anchor: int, min_sup: float, min_conf: float, mode: str = LEVELWISE
) -> tuple[RuleSet, CandidateSet]:
    return classic_rules(train, anchor, min_sup, min_conf, mode)


def baseline_garc(
    train: Dataset, anchor: int, min_sup: float, min_conf: float, mode: str = LEVELWISE
) -> RuleSet:
    return baseline_garc_candidates(train, anchor, min_sup, min_conf, mode)[0]
