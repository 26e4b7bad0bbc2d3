"""Rule ordering, conflict/redundancy removal and first-match classification."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .dataset import Dataset, Transaction
from .errors import ConsistencyError, EmptyInputError
from .miner import Rule

# Measures are compared after rounding so that values equal up to float
# noise (e.g. weighted vs. counted support of the same rule) tie.
RANK_DIGITS = 12


def rank_key(rule: Rule):
    return (
        -round(rule.wconf, RANK_DIGITS),
        -round(rule.wsup, RANK_DIGITS),
        len(rule.antecedent),
        rule.antecedent,
        rule.consequent,
    )


def rank_rules(rules: Iterable[Rule]) -> list[Rule]:
    """Order by weighted confidence, weighted support, shorter antecedent,
    then item order (attribute index, value index)."""
    return sorted(rules, key=rank_key)


@dataclass(frozen=True)
class RankedRuleList:
    rules: tuple[Rule, ...]
    default_class: Optional[int]

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)


def prune_conflicts_and_redundancy(
    ordered: Sequence[Rule], default_class: Optional[int] = None
) -> RankedRuleList:
    """Drop conflicting and redundant rules from a ranked list.

    Among rules with the same antecedent only the first (highest ranked)
    survives. A surviving rule is then dropped when another survivor predicts
    the same class from a strict subset of its antecedent.
    """
    seen = set()
    unique = []
    for r in ordered:
        if r.antecedent in seen:
            continue
        seen.add(r.antecedent)
        unique.append(r)

    by_class: dict[int, list[frozenset]] = {}
    for r in unique:
        by_class.setdefault(r.consequent, []).append(frozenset(r.antecedent))
    kept = []
    for r in unique:
        body = frozenset(r.antecedent)
        if any(other < body for other in by_class[r.consequent]):
            continue
        kept.append(r)
    return RankedRuleList(tuple(kept), default_class)


def default_class(train: Dataset) -> int:
    """Majority class; ties go to the lowest class value index."""
    if len(train) == 0:
        raise EmptyInputError("default class of an empty training set")
    return int(np.argmax(train.class_counts()))


def build_classifier(rules: Iterable[Rule], train: Dataset) -> RankedRuleList:
    return prune_conflicts_and_redundancy(rank_rules(rules), default_class(train))


def _row(instance, n_attributes: Optional[int]):
    row = instance.items if isinstance(instance, Transaction) else instance
    if isinstance(row, tuple) and row and hasattr(row[0], "attribute"):
        row = [it.value for it in row]
    if n_attributes is not None and len(row) != n_attributes:
        raise ConsistencyError(f"instance has {len(row)} attributes, expected {n_attributes}")
    return row


def classify(rrl: RankedRuleList, instance, n_attributes: Optional[int] = None) -> Optional[int]:
    """Class of the first rule whose antecedent the instance satisfies.

    ``instance`` is a :class:`Transaction` or a row of value indices; a value
    index of -1 stands for an unseen value and matches nothing. The class
    attribute's value, if present, is ignored.
    """
    row = _row(instance, n_attributes)
    for r in rrl.rules:
        if r.matches(row):
            return r.consequent
    return rrl.default_class


def predict(rrl: RankedRuleList, d: Dataset) -> np.ndarray:
    out = np.full(len(d), -1 if rrl.default_class is None else rrl.default_class)
    open_rows = np.ones(len(d), dtype=bool)
    for r in rrl.rules:
        hit = open_rows.copy()
        for it in r.antecedent:
            hit &= d.codes[:, it.attribute] == it.value
        out[hit] = r.consequent
        open_rows &= ~hit
        if not open_rows.any():
            break
    return out


def accuracy(rrl: RankedRuleList, test: Dataset) -> float:
    if len(test) == 0:
        raise EmptyInputError("accuracy on an empty test set")
    return float(np.mean(predict(rrl, test) == test.class_codes))
