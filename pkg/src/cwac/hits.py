"""HITS hub weights on the transaction/item bipartite graph, and the
weighted support and confidence measures built on them.

Transactions are hubs, items are authorities. A transaction's converged hub
score is its voting weight when counting rule support.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .dataset import Dataset, Item
from .errors import ConsistencyError, ParameterError, UndefinedConfidenceError

DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 100


@dataclass(frozen=True, eq=False)
class BipartiteIncidence:
    transaction_count: int
    items: tuple[Item, ...]
    adjacency: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.adjacency) != self.transaction_count:
            raise ConsistencyError("adjacency must list every transaction")
        k = len(self.items)
        for t, row in enumerate(self.adjacency):
            if not row:
                raise ConsistencyError(f"transaction {t} has no items")
            if min(row) < 0 or max(row) >= k:
                raise ConsistencyError(f"transaction {t} references an unknown item")

    @property
    def item_count(self) -> int:
        return len(self.items)

    @property
    def edge_count(self) -> int:
        return sum(len(row) for row in self.adjacency)

    def matrix(self) -> np.ndarray:
        """Dense 0/1 incidence, transactions by items."""
        m = np.zeros((self.transaction_count, self.item_count))
        for t, row in enumerate(self.adjacency):
            m[t, list(row)] = 1.0
        return m

    @classmethod
    def from_matrix(cls, m) -> "BipartiteIncidence":
        m = np.asarray(m)
        items = tuple(Item(0, j) for j in range(m.shape[1]))
        adjacency = tuple(tuple(int(j) for j in np.flatnonzero(row)) for row in m)
        return cls(m.shape[0], items, adjacency)


def build_incidence(d: Dataset, include_class_items: bool = True) -> BipartiteIncidence:
    items = d.items_present(include_class=include_class_items)
    position = {it: j for j, it in enumerate(items)}
    attrs = [a.index for a in d.schema if include_class_items or not a.is_class]
    adjacency = tuple(
        tuple(sorted(position[Item(a, int(row[a]))] for a in attrs)) for row in d.codes
    )
    return BipartiteIncidence(len(d), tuple(items), adjacency)


@dataclass(frozen=True, eq=False)
class HubWeights:
    weights: np.ndarray
    iterations: int = 0
    residual: float = 0.0
    converged: bool = True

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if w.ndim != 1 or (w < 0).any():
            raise ConsistencyError("hub weights must be a nonnegative vector")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    def __len__(self) -> int:
        return self.weights.shape[0]

    @property
    def total(self) -> float:
        return math.fsum(self.weights)

    @classmethod
    def uniform(cls, n: int) -> "HubWeights":
        return cls(np.full(n, 1.0 / n))

    def to_dict(self) -> dict:
        return {
            "iterations": self.iterations,
            "residual": self.residual,
            "converged": self.converged,
            "weights": [float(x) for x in self.weights],
        }


def compute_hub_weights(
    g: BipartiteIncidence, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER
) -> HubWeights:
    """Power-iterate hub and authority scores until the hub vector settles.

    Each round sets every authority to the sum of its hubs, then every hub
    to the sum of its authorities, and rescales hubs to sum to 1. Stops once
    the L1 change of the hub vector is at most ``tol``; hitting ``max_iter``
    first returns the current vector with ``converged=False``.
    """
    if tol <= 0:
        raise ParameterError("tol must be positive")
    if max_iter < 1:
        raise ParameterError("max_iter must be at least 1")
    m = g.matrix()
    hub = np.full(g.transaction_count, 1.0 / g.transaction_count)
    residual = math.inf
    for it in range(1, max_iter + 1):
        authority = m.T @ hub
        new = m @ authority
        new /= new.sum()
        residual = float(np.abs(new - hub).sum())
        hub = new
        if residual <= tol:
            return HubWeights(hub, it, residual, True)
    return HubWeights(hub, max_iter, residual, False)


def hub_weights(
    d: Dataset,
    include_class_items: bool = True,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> HubWeights:
    return compute_hub_weights(build_incidence(d, include_class_items), tol, max_iter)


def _check(antecedent: Iterable[Item], hw: HubWeights, d: Dataset) -> list[Item]:
    if len(hw) != len(d):
        raise ConsistencyError(f"{len(hw)} hub weights for {len(d)} transactions")
    antecedent = list(antecedent)
    for it in antecedent:
        if it.attribute == d.class_index:
            raise ParameterError("antecedent must not contain a class item")
    return antecedent


def match_mask(d: Dataset, items: Sequence[Item]) -> np.ndarray:
    mask = np.ones(len(d), dtype=bool)
    for it in items:
        mask &= d.codes[:, it.attribute] == it.value
    return mask


def weighted_sum(hw: HubWeights, mask: np.ndarray) -> float:
    """Share of total hub weight carried by the masked transactions."""
    return math.fsum(hw.weights[mask]) / hw.total


def w_support(
    antecedent: Iterable[Item], class_item: Optional[Item], hw: HubWeights, d: Dataset
) -> float:
    """Weighted support of ``antecedent -> class_item``.

    With ``class_item=None`` this is the weighted support of the bare
    antecedent over all classes.
    """
    antecedent = _check(antecedent, hw, d)
    mask = match_mask(d, antecedent)
    if class_item is not None:
        if class_item.attribute != d.class_index:
            raise ParameterError("class_item must belong to the class attribute")
        mask &= d.class_codes == class_item.value
    return weighted_sum(hw, mask)


def w_confidence(
    antecedent: Iterable[Item], class_item: Item, hw: HubWeights, d: Dataset
) -> float:
    antecedent = list(antecedent)
    bare = w_support(antecedent, None, hw, d)
    if bare <= 0:
        raise UndefinedConfidenceError("antecedent carries zero hub weight")
    return w_support(antecedent, class_item, hw, d) / bare
