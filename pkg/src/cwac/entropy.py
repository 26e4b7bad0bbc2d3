"""Class entropy, expected information and information gain (in bits)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import EmptyInputError, ParameterError, SchemaError


GAIN_TIE_TOL = 1e-12


@dataclass(frozen=True)
class GainScore:
    attribute: int
    gain: float


def entropy_of_counts(counts) -> float:
    counts = np.asarray(counts, dtype=float)
    total = counts.sum()
    if total <= 0:
        raise EmptyInputError("entropy of an empty distribution")
    p = counts[counts > 0] / total
    return float(-(p * np.log2(p)).sum())


def class_entropy(d: Dataset) -> float:
    if len(d) == 0:
        raise EmptyInputError("class entropy of an empty dataset")
    return entropy_of_counts(d.class_counts())


def _check_feature(d: Dataset, a: int) -> None:
    if not 0 <= a < d.n_attributes:
        raise ParameterError(f"attribute index {a} out of range")
    if a == d.class_index:
        raise ParameterError("information measures need a non-class attribute")


def contingency(d: Dataset, a: int) -> np.ndarray:
    """Counts table of shape (|values of a|, |classes|)."""
    _check_feature(d, a)
    table = np.zeros((len(d.schema[a].values), d.n_classes), dtype=np.int64)
    np.add.at(table, (d.codes[:, a], d.class_codes), 1)
    return table


def expected_info(d: Dataset, a: int) -> float:
    """Weighted mean class entropy of the partition of ``d`` by attribute ``a``."""
    if len(d) == 0:
        raise EmptyInputError("expected information of an empty dataset")
    table = contingency(d, a)
    n = len(d)
    return float(sum(row.sum() / n * entropy_of_counts(row) for row in table if row.sum()))


def info_gain(d: Dataset, a: int) -> GainScore:
    h = class_entropy(d)
    # Clamp float noise so 0 <= gain <= h holds exactly.
    gain = min(max(h - expected_info(d, a), 0.0), h)
    return GainScore(a, gain)


def select_anchor(d: Dataset) -> int:
    """Non-class attribute of maximum gain; ties go to the lowest index."""
    features = d.feature_indices
    if not features:
        raise SchemaError("dataset has no non-class attribute")
    best = None
    for a in features:
        score = info_gain(d, a)
        if best is None or score.gain > best.gain + GAIN_TIE_TOL:
            best = score
    return best.attribute
