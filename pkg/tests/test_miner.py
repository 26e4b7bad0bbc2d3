import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cwac.dataset import Attribute, Dataset, Item
from cwac.errors import OracleScaleError, ParameterError
from cwac.hits import HubWeights, hub_weights, w_confidence, w_support
from cwac.miner import (
    LEVELWISE,
    PREFIX,
    brute_force_rules,
    generate_anchored_candidates,
    mine_rules,
    prefix_itemsets,
    write_rules,
)

from corpus import WCONF_GRID, WSUP_GRID, random_dataset

CD4, SWEAT, TB, TEMP = ("CD4 Cell Count", "Sweating at Night", "Tuberculosis (TB)", "Temperature")


def itemset(d, *pairs):
    return tuple(sorted(d.item(a, v) for a, v in pairs))


def test_prefix_first_transaction(hiv):
    got = prefix_itemsets(hiv.subset([0]), 0)
    assert got == [
        itemset(hiv, (CD4, ">500")),
        itemset(hiv, (CD4, ">500"), (SWEAT, "High")),
        itemset(hiv, (CD4, ">500"), (SWEAT, "High"), (TB, "no")),
        itemset(hiv, (CD4, ">500"), (SWEAT, "High"), (TB, "no"), (TEMP, "Normal")),
    ]


def test_prefix_skips_non_contiguous(hiv):
    cands = generate_anchored_candidates(hiv, 0, hub_weights(hiv), 0.0, PREFIX)
    sets = {c.itemset for c in cands}
    assert itemset(hiv, (CD4, ">500"), (TB, "no")) not in sets
    assert itemset(hiv, (CD4, ">500"), (TEMP, "Normal")) not in sets


def test_prefix_anchor_not_first_column(hiv):
    chains = prefix_itemsets(hiv.subset([0]), 2)
    assert [len(c) for c in chains] == [1, 2, 3, 4]
    assert chains[1] == itemset(hiv, (TB, "no"), (CD4, ">500"))


def test_t4_levelwise_candidates(t4):
    cands = generate_anchored_candidates(t4, 0, hub_weights(t4), 0.0, LEVELWISE)
    assert len(cands) == 6
    assert cands.rule_item_count == 12
    assert all(c.itemset[0].attribute == 0 for c in cands)


def test_t4_rules(t4):
    rs = mine_rules(t4, 0, hub_weights(t4), 0.1, 0.5)
    by_key = {r.key: r for r in rs}
    a1 = ((t4.item("A", "a1"),), t4.class_attribute.value_index("+"))
    a2 = ((t4.item("A", "a2"),), t4.class_attribute.value_index("-"))
    for key in (a1, a2):
        assert by_key[key].wsup == pytest.approx(0.5)
        assert by_key[key].wconf == pytest.approx(1.0)


def test_t4_full_confidence_only_pure(t4):
    rs = mine_rules(t4, 0, hub_weights(t4), 0.0, 1.0)
    assert len(rs) > 0
    assert all(r.wconf == pytest.approx(1.0) for r in rs)


def test_full_support_is_empty(hiv):
    assert len(mine_rules(hiv, 0, hub_weights(hiv), 1.0, 0.0)) == 0


def test_class_anchor_rejected(t4):
    with pytest.raises(ParameterError):
        generate_anchored_candidates(t4, 2, hub_weights(t4), 0.1)
    with pytest.raises(ParameterError):
        generate_anchored_candidates(t4, 0, hub_weights(t4), 0.1, "bogus")


def test_rule_measures_consistent(hiv):
    hw = hub_weights(hiv)
    for r in mine_rules(hiv, 0, hw, 0.05, 0.5):
        cls = hiv.class_attribute.index
        assert r.wsup == pytest.approx(w_support(r.antecedent, Item(cls, r.consequent), hw, hiv), abs=1e-12)
        assert r.wconf == pytest.approx(
            w_confidence(r.antecedent, Item(cls, r.consequent), hw, hiv), abs=1e-12
        )
        assert any(it.attribute == 0 for it in r.antecedent)


@pytest.mark.parametrize("min_wsup", WSUP_GRID)
@pytest.mark.parametrize("min_wconf", WCONF_GRID)
def test_t4_oracle_grid(t4, min_wsup, min_wconf):
    hw = hub_weights(t4)
    got = mine_rules(t4, 0, hw, min_wsup, min_wconf)
    assert got.keys() == brute_force_rules(t4, 0, hw, min_wsup, min_wconf).keys()


def test_prefix_subset_of_oracle(hiv):
    hw = hub_weights(hiv)
    prefix = mine_rules(hiv, 0, hw, 0.0, 0.0, PREFIX)
    assert prefix.keys() <= brute_force_rules(hiv, 0, hw, 0.0, 0.0).keys()
    assert prefix.keys() <= mine_rules(hiv, 0, hw, 0.0, 0.0).keys()


def test_oracle_empty_train(hiv):
    empty = hiv.subset([])
    assert len(brute_force_rules(empty, 0, HubWeights([]), 0.0, 0.0)) == 0


def test_oracle_attribute_guard():
    schema = tuple(Attribute(f"x{j}", j, ("a",)) for j in range(13)) + (
        Attribute("c", 13, ("+",), is_class=True),
    )
    d = Dataset(schema, np.zeros((1, 14), dtype=int))
    with pytest.raises(OracleScaleError):
        brute_force_rules(d, 0, HubWeights([1.0]), 0.0, 0.0)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_rule_count_monotone_in_thresholds(seed):
    d = random_dataset(seed, max_attributes=6, max_rows=40)
    hw = hub_weights(d)
    anchor = d.feature_indices[0]
    counts = {(s, c): len(mine_rules(d, anchor, hw, s, c)) for s in WSUP_GRID for c in WCONF_GRID}
    for (s, c), n in counts.items():
        for s2 in WSUP_GRID:
            if s2 >= s:
                assert counts[(s2, c)] <= n
        for c2 in WCONF_GRID:
            if c2 >= c:
                assert counts[(s, c2)] <= n


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_antecedent_shape(seed):
    d = random_dataset(seed, max_attributes=6, max_rows=40)
    anchor = d.feature_indices[-1]
    for mode in (LEVELWISE, PREFIX):
        for r in mine_rules(d, anchor, hub_weights(d), 0.05, 0.3, mode):
            attrs = [it.attribute for it in r.antecedent]
            assert anchor in attrs
            assert d.class_index not in attrs
            assert len(set(attrs)) == len(attrs) and attrs == sorted(attrs)


def test_write_rules(tmp_path, t4):
    rs = mine_rules(t4, 0, hub_weights(t4), 0.1, 0.5)
    path = tmp_path / "rules.txt"
    write_rules(path, list(rs), t4)
    lines = path.read_text().splitlines()
    assert len(lines) == len(rs)
    assert lines[0].startswith("A=a1 => +")
    assert "wsup=" in lines[0] and "conf=" in lines[0]
