"""Anchored class association rule mining.

Every antecedent contains one item of the anchor attribute. Itemsets grow
level by level (or, in ``prefix`` mode, only along each transaction's
column order), and an itemset is kept while at least one class reaches the
minimum weighted support.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from .dataset import Dataset, Item
from .errors import BudgetError, ConsistencyError, OracleScaleError, ParameterError
from .hits import HubWeights, match_mask

LEVELWISE = "levelwise"
PREFIX = "prefix"
GENERATION_MODES = (LEVELWISE, PREFIX)

# Thresholds are inclusive; this absorbs rounding in sums of hub weights.
EPS = 1e-12
ORACLE_MAX_ATTRIBUTES = 12


def meets(value: float, threshold: float) -> bool:
    return value >= threshold - EPS


@dataclass(frozen=True)
class WeightedMeasure:
    wsup: float
    wconf: float
    sup: float
    conf: float


@dataclass(frozen=True)
class Rule:
    antecedent: tuple[Item, ...]
    consequent: int
    measure: WeightedMeasure

    @property
    def wsup(self) -> float:
        return self.measure.wsup

    @property
    def wconf(self) -> float:
        return self.measure.wconf

    @property
    def key(self) -> tuple[tuple[Item, ...], int]:
        return self.antecedent, self.consequent

    def matches(self, row) -> bool:
        return all(row[it.attribute] == it.value for it in self.antecedent)

    def format(self, d: Dataset) -> str:
        lhs = ", ".join(d.item_label(it) for it in self.antecedent)
        m = self.measure
        return (
            f"{lhs} => {d.class_labels[self.consequent]} "
            f"[wsup={m.wsup:.6f}, wconf={m.wconf:.6f}, sup={m.sup:.6f}, conf={m.conf:.6f}]"
        )


@dataclass(frozen=True)
class RuleSet:
    rules: tuple[Rule, ...]
    anchor: Optional[int]
    generation_mode: str
    thresholds: tuple[float, float]

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        keys = [r.key for r in self.rules]
        if len(set(keys)) != len(keys):
            raise ConsistencyError("rule set contains duplicate rules")

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self) -> Iterator[Rule]:
        return iter(self.rules)

    def keys(self) -> set:
        return {r.key for r in self.rules}


@dataclass(frozen=True)
class Candidate:
    """An itemset with its per-class weighted support table.

    ``class_count`` and ``bare_count`` are plain transaction counts, kept so
    that classic support and confidence can be reported alongside.
    """

    itemset: tuple[Item, ...]
    class_wsup: tuple[float, ...]
    bare_wsup: float
    class_count: tuple[int, ...]
    bare_count: int


@dataclass(frozen=True)
class CandidateSet:
    candidates: tuple[Candidate, ...]
    anchor: Optional[int]
    mode: str
    min_wsup: float
    evaluated: int = 0

    def __len__(self) -> int:
        return len(self.candidates)

    def __iter__(self) -> Iterator[Candidate]:
        return iter(self.candidates)

    @property
    def rule_item_count(self) -> int:
        """Number of (itemset, class) pairs under consideration."""
        return sum(len(c.class_wsup) for c in self.candidates)


def _weighted_scorer(d: Dataset, hw: HubWeights):
    if len(hw) != len(d):
        raise ConsistencyError(f"{len(hw)} hub weights for {len(d)} transactions")
    class_masks = [d.class_codes == c for c in range(d.n_classes)]
    w = hw.weights
    total = hw.total

    def score(itemset, mask):
        return Candidate(
            itemset,
            tuple(math.fsum(w[mask & cm]) / total for cm in class_masks),
            math.fsum(w[mask]) / total,
            tuple(int((mask & cm).sum()) for cm in class_masks),
            int(mask.sum()),
        )

    return score


def _count_scorer(d: Dataset):
    class_masks = [d.class_codes == c for c in range(d.n_classes)]
    n = len(d)

    def score(itemset, mask):
        counts = tuple(int((mask & cm).sum()) for cm in class_masks)
        bare = int(mask.sum())
        return Candidate(itemset, tuple(c / n for c in counts), bare / n, counts, bare)

    return score


def _grow(
    d: Dataset,
    anchor: Optional[int],
    score,
    min_sup: float,
    max_candidates: Optional[int] = None,
) -> tuple[list[Candidate], int]:
    """Apriori growth, optionally rooted at the anchor attribute's items.

    An itemset is extended only by items of attributes after its last
    non-anchor attribute, and only if every one-smaller itemset (keeping
    the anchor item) survived; this is the usual prefix join plus prune.
    """
    extension = [
        it for it in d.items_present(include_class=False) if it.attribute != anchor
    ]
    masks = {it: d.codes[:, it.attribute] == it.value for it in d.items_present(False)}
    out: list[Candidate] = []
    evaluated = 0

    def evaluate(itemset, mask):
        nonlocal evaluated
        evaluated += 1
        if max_candidates is not None and evaluated > max_candidates:
            raise BudgetError(f"candidate budget of {max_candidates} exceeded")
        if not mask.any():
            return None
        cand = score(itemset, mask)
        if max(cand.class_wsup, default=0.0) >= min_sup - EPS:
            return cand
        return None

    survivors: set[tuple[tuple[Item, ...], tuple[Item, ...]]] = set()
    level: list[tuple[tuple[Item, ...], tuple[Item, ...], np.ndarray]] = []
    if anchor is None:
        survivors.add(((), ()))
        level.append(((), (), np.ones(len(d), dtype=bool)))
    else:
        for it in d.items_present(False):
            if it.attribute != anchor:
                continue
            cand = evaluate((it,), masks[it])
            if cand is not None:
                out.append(cand)
                survivors.add(((it,), ()))
                level.append(((it,), (), masks[it]))

    while level:
        nxt = []
        for base, tail, mask in level:
            last = tail[-1].attribute if tail else -1
            for it in extension:
                if it.attribute <= last:
                    continue
                new_tail = tail + (it,)
                if any(
                    (base, new_tail[:i] + new_tail[i + 1 :]) not in survivors
                    for i in range(len(new_tail))
                ):
                    continue
                new_mask = mask & masks[it]
                itemset = tuple(sorted(base + new_tail))
                cand = evaluate(itemset, new_mask)
                if cand is None:
                    continue
                out.append(cand)
                survivors.add((base, new_tail))
                nxt.append((base, new_tail, new_mask))
        level = nxt
    out.sort(key=lambda c: (len(c.itemset), c.itemset))
    return out, evaluated


def prefix_itemsets(d: Dataset, anchor: int) -> list[tuple[Item, ...]]:
    """Distinct chains {anchor}, {anchor, next}, ... over each transaction.

    "Next" walks the remaining non-class attributes in column order.
    """
    order = [anchor] + [a for a in d.feature_indices if a != anchor]
    seen = {}
    for row in d.codes:
        chain = []
        for a in order:
            chain.append(Item(a, int(row[a])))
            seen.setdefault(tuple(sorted(chain)), None)
    return list(seen)


def _check_anchor(d: Dataset, anchor: int) -> None:
    if not 0 <= anchor < d.n_attributes:
        raise ParameterError(f"anchor {anchor} out of range")
    if anchor == d.class_index:
        raise ParameterError("anchor must be a non-class attribute")


def _check_fraction(name: str, x: float) -> None:
    if not 0.0 <= x <= 1.0:
        raise ParameterError(f"{name} must lie in [0, 1], got {x}")


def _candidates(d, anchor, score, min_wsup, mode, max_candidates=None) -> CandidateSet:
    if mode == LEVELWISE:
        cands, evaluated = _grow(d, anchor, score, min_wsup, max_candidates)
    elif mode == PREFIX:
        cands = []
        chains = prefix_itemsets(d, anchor)
        for itemset in chains:
            cand = score(itemset, match_mask(d, itemset))
            if max(cand.class_wsup, default=0.0) >= min_wsup - EPS:
                cands.append(cand)
        cands.sort(key=lambda c: (len(c.itemset), c.itemset))
        evaluated = len(chains)
    else:
        raise ParameterError(f"unknown generation mode {mode!r}")
    return CandidateSet(tuple(cands), anchor, mode, min_wsup, evaluated)


def generate_anchored_candidates(
    train: Dataset,
    anchor: int,
    hw: HubWeights,
    min_wsup: float,
    mode: str = LEVELWISE,
) -> CandidateSet:
    _check_anchor(train, anchor)
    _check_fraction("min_wsup", min_wsup)
    return _candidates(train, anchor, _weighted_scorer(train, hw), min_wsup, mode)


def _rules_from(cands: CandidateSet, min_conf: float, n: int) -> list[Rule]:
    rules = []
    for cand in cands:
        if cand.bare_wsup <= 0 or cand.bare_count == 0:
            continue
        for c, wsup in enumerate(cand.class_wsup):
            wconf = wsup / cand.bare_wsup
            if meets(wsup, cands.min_wsup) and meets(wconf, min_conf):
                hits = cand.class_count[c]
                measure = WeightedMeasure(wsup, wconf, hits / n, hits / cand.bare_count)
                rules.append(Rule(cand.itemset, c, measure))
    return rules


def finalize_rules(
    candidates: CandidateSet, hw: HubWeights, train: Dataset, min_wconf: float
) -> RuleSet:
    """Turn candidates into rules meeting both weighted thresholds."""
    _check_fraction("min_wconf", min_wconf)
    if len(hw) != len(train):
        raise ConsistencyError(f"{len(hw)} hub weights for {len(train)} transactions")
    rules = _rules_from(candidates, min_wconf, len(train))
    return RuleSet(
        tuple(rules), candidates.anchor, candidates.mode, (candidates.min_wsup, min_wconf)
    )


def mine_rules(
    train: Dataset,
    anchor: int,
    hw: HubWeights,
    min_wsup: float,
    min_wconf: float,
    mode: str = LEVELWISE,
) -> RuleSet:
    cands = generate_anchored_candidates(train, anchor, hw, min_wsup, mode)
    return finalize_rules(cands, hw, train, min_wconf)


def classic_rules(
    train: Dataset,
    anchor: Optional[int],
    min_sup: float,
    min_conf: float,
    mode: str = LEVELWISE,
    max_candidates: Optional[int] = None,
    label: Optional[str] = None,
) -> tuple[RuleSet, CandidateSet]:
    """Unweighted counterpart: support and confidence from plain counts.

    ``anchor=None`` mines over all attributes. The returned rules carry the
    classic measures in both the weighted and unweighted slots.
    """
    if anchor is not None:
        _check_anchor(train, anchor)
    _check_fraction("min_sup", min_sup)
    _check_fraction("min_conf", min_conf)
    cands = _candidates(train, anchor, _count_scorer(train), min_sup, mode, max_candidates)
    rules = _rules_from(cands, min_conf, len(train))
    return RuleSet(tuple(rules), anchor, label or mode, (min_sup, min_conf)), cands


def brute_force_rules(
    train: Dataset, anchor: int, hw: HubWeights, min_wsup: float, min_wconf: float
) -> RuleSet:
    """Reference enumeration of every anchored rule, for testing.

    Each transaction contributes its weight to every anchored itemset it
    contains (all subsets of its non-anchor attributes), so no join or
    pruning logic is involved.
    """
    _check_anchor(train, anchor)
    features = train.feature_indices
    if len(features) > ORACLE_MAX_ATTRIBUTES:
        raise OracleScaleError(
            f"{len(features)} attributes exceed the oracle limit of {ORACLE_MAX_ATTRIBUTES}"
        )
    if len(hw) != len(train):
        raise ConsistencyError(f"{len(hw)} hub weights for {len(train)} transactions")
    others = [a for a in features if a != anchor]
    g = train.n_classes
    n = len(train)
    per_class: dict[tuple[Item, ...], list[list[float]]] = {}
    for t in range(n):
        row = train.codes[t]
        c = int(row[train.class_index])
        w = float(hw.weights[t])
        for r in range(len(others) + 1):
            for combo in itertools.combinations(others, r):
                key = tuple(sorted([Item(anchor, int(row[anchor]))] + [Item(a, int(row[a])) for a in combo]))
                per_class.setdefault(key, [[] for _ in range(g)])[c].append(w)

    total = math.fsum(float(x) for x in hw.weights)
    rules = []
    for key in sorted(per_class, key=lambda k: (len(k), k)):
        lists = per_class[key]
        everything = [w for ws in lists for w in ws]
        bare = math.fsum(everything) / total
        if bare <= 0:
            continue
        for c in range(g):
            wsup = math.fsum(lists[c]) / total
            wconf = wsup / bare
            if wsup >= min_wsup - EPS and wconf >= min_wconf - EPS:
                sup = len(lists[c]) / n
                conf = len(lists[c]) / len(everything)
                rules.append(Rule(key, c, WeightedMeasure(wsup, wconf, sup, conf)))
    return RuleSet(tuple(rules), anchor, "brute-force", (min_wsup, min_wconf))


def write_rules(path: str | os.PathLike, rules: Sequence[Rule], d: Dataset) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for r in rules:
            fh.write(r.format(d) + "\n")
