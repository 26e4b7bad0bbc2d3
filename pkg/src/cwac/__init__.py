"""Compact weighted class association rule mining and classification."""

from .baselines import baseline_cba, baseline_garc
from .classifier import (
    RankedRuleList,
    accuracy,
    build_classifier,
    classify,
    default_class,
    predict,
    prune_conflicts_and_redundancy,
    rank_rules,
)
from .dataset import Attribute, Dataset, Item, Transaction, discretize, holdout_split, load_csv, load_dataset
from .entropy import GainScore, class_entropy, expected_info, info_gain, select_anchor
from .experiment import ExperimentConfig, Report, emit_report, run_comparison, run_experiment
from .hits import (
    BipartiteIncidence,
    HubWeights,
    build_incidence,
    compute_hub_weights,
    hub_weights,
    w_confidence,
    w_support,
)
from .miner import (
    Rule,
    RuleSet,
    WeightedMeasure,
    brute_force_rules,
    finalize_rules,
    generate_anchored_candidates,
    mine_rules,
)

__version__ = "0.1.0"
