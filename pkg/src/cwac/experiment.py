"""End-to-end holdout experiment and its report.

Pipeline: load -> discretize -> split -> anchor -> weights -> mine -> prune
-> evaluate, for CWAC or one of the unweighted baselines.
"""

from __future__ import annotations

import dataclasses
import json
import logging
import os
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Optional

from . import baselines
from .classifier import accuracy, build_classifier, predict
from .dataset import Dataset, discretize, holdout_split, load_csv
from .entropy import info_gain, select_anchor
from .errors import CWACError, ParameterError, StageError
from .hits import HubWeights, hub_weights
from .miner import GENERATION_MODES, LEVELWISE, finalize_rules, generate_anchored_candidates, write_rules

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
MODES = ("cwac", "garc", "cba")
REPORT_FORMATS = ("json", "text")


@dataclass
class ExperimentConfig:
    data_path: str = ""
    class_column: str = "-1"
    bins: int = 3
    test_fraction: float = 1 / 3
    seed: int = 0
    min_wsup: float = 0.01
    min_wconf: float = 0.5
    mode: str = "cwac"
    generation: str = LEVELWISE
    include_class_in_hits: bool = True
    report_format: str = "json"
    rules_out: Optional[str] = None
    delimiter: str = ","
    missing_token: str = "?"
    max_candidates: int = baselines.DEFAULT_CANDIDATE_CAP
    # Reserved; any value is rejected.
    min_chi_square: Optional[float] = None

    def validate(self) -> None:
        if self.bins < 2:
            raise ParameterError("bins must be >= 2")
        if not 0 < self.test_fraction < 1:
            raise ParameterError("test_fraction must lie in (0, 1)")
        for name in ("min_wsup", "min_wconf"):
            if not 0 <= getattr(self, name) <= 1:
                raise ParameterError(f"{name} must lie in [0, 1]")
        if self.mode not in MODES:
            raise ParameterError(f"mode must be one of {MODES}")
        if self.generation not in GENERATION_MODES:
            raise ParameterError(f"generation must be one of {GENERATION_MODES}")
        if self.report_format not in REPORT_FORMATS:
            raise ParameterError(f"report format must be one of {REPORT_FORMATS}")
        if self.max_candidates < 1:
            raise ParameterError("max_candidates must be positive")
        if self.min_chi_square is not None:
            raise ParameterError("chi-square filtering is not supported")

    def class_selector(self) -> int | str:
        try:
            return int(self.class_column)
        except ValueError:
            return self.class_column

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def _coerce(f: dataclasses.Field, raw: str):
    kind = f.type if isinstance(f.type, str) else getattr(f.type, "__name__", str(f.type))
    if raw.strip().lower() in ("", "none", "null") and "Optional" in kind:
        return None
    if "bool" in kind:
        lowered = raw.strip().lower()
        if lowered in ("1", "true", "yes", "on"):
            return True
        if lowered in ("0", "false", "no", "off"):
            return False
        raise ParameterError(f"{f.name}: expected a boolean, got {raw!r}")
    try:
        if "int" in kind:
            return int(raw)
        if "float" in kind:
            return float(raw)
    except ValueError:
        raise ParameterError(f"{f.name}: cannot parse {raw!r}") from None
    return raw


def parse_config_text(text: str) -> dict[str, Any]:
    """Parse ``key=value`` lines; ``#`` starts a comment, dashes equal underscores."""
    fields = {f.name: f for f in dataclasses.fields(ExperimentConfig)}
    aliases = {"data": "data_path", "report": "report_format"}
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"config line {lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        key = aliases.get(key, key)
        if key not in fields:
            raise ParameterError(f"config line {lineno}: unknown key {key!r}")
        out[key] = _coerce(fields[key], value)
    return out


def load_config_file(path: str | os.PathLike) -> dict[str, Any]:
    with open(path, encoding="utf-8") as fh:
        return parse_config_text(fh.read())


@dataclass
class Report:
    schema_version: int
    dataset: dict
    config: dict
    anchor: Optional[dict]
    gains: list
    rule_counts: dict
    train_size: int
    test_size: int
    correct: int
    accuracy: float
    default_class: Optional[str]
    hits: Optional[dict]
    rules: list
    timings: dict = field(default_factory=dict)

    def to_dict(self, include_timings: bool = True) -> dict:
        d = dataclasses.asdict(self)
        if not include_timings:
            d.pop("timings")
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        return cls(**d)


def _rule_dict(rule, d: Dataset) -> dict:
    return {
        "antecedent": [
            {"attribute": d.schema[it.attribute].name, "value": d.decode(it)}
            for it in rule.antecedent
        ],
        "consequent": d.class_labels[rule.consequent],
        "wsup": rule.measure.wsup,
        "wconf": rule.measure.wconf,
        "sup": rule.measure.sup,
        "conf": rule.measure.conf,
    }


class _Stages:
    def __init__(self):
        self.timings: dict[str, float] = {}

    @contextmanager
    def __call__(self, name: str):
        start = time.perf_counter()
        try:
            yield
        except StageError:
            raise
        except (CWACError, OSError, ValueError) as exc:
            raise StageError(name, exc) from exc
        finally:
            self.timings[name] = time.perf_counter() - start


def run_experiment(cfg: ExperimentConfig, data: Optional[Dataset] = None) -> Report:
    """Run one holdout experiment.

    ``data`` short-circuits loading from ``cfg.data_path``. Everything in the
    report except ``timings`` is a pure function of the data and ``cfg``.
    """
    stage = _Stages()
    with stage("config"):
        cfg.validate()
    with stage("load"):
        if data is None:
            data = load_csv(
                cfg.data_path,
                class_column=cfg.class_selector(),
                missing_token=cfg.missing_token,
                delimiter=cfg.delimiter,
            )
    with stage("discretize"):
        data = discretize(data, cfg.bins)
    with stage("split"):
        train, test = holdout_split(data, cfg.test_fraction, cfg.seed)
    with stage("anchor"):
        gains = [info_gain(train, a) for a in train.feature_indices]
        anchor = select_anchor(train)

    hw: Optional[HubWeights] = None
    with stage("weights"):
        if cfg.mode == "cwac":
            hw = hub_weights(train, include_class_items=cfg.include_class_in_hits)
            if not hw.converged:
                log.warning("HITS stopped after %d iterations (residual %.3g)", hw.iterations, hw.residual)
    with stage("mine"):
        if cfg.mode == "cwac":
            cands = generate_anchored_candidates(train, anchor, hw, cfg.min_wsup, cfg.generation)
            ruleset = finalize_rules(cands, hw, train, cfg.min_wconf)
        elif cfg.mode == "garc":
            ruleset, cands = baselines.baseline_garc_candidates(
                train, anchor, cfg.min_wsup, cfg.min_wconf, cfg.generation
            )
        else:
            ruleset, cands = baselines.baseline_cba_candidates(
                train, cfg.min_wsup, cfg.min_wconf, cfg.max_candidates
            )
    with stage("prune"):
        model = build_classifier(ruleset, train)
    with stage("evaluate"):
        acc = accuracy(model, test)
        correct = int((predict(model, test) == test.class_codes).sum())
    with stage("report"):
        if cfg.rules_out:
            write_rules(cfg.rules_out, model.rules, train)

    report = Report(
        schema_version=SCHEMA_VERSION,
        dataset={
            "name": data.name,
            "transactions": len(data),
            "attributes": len(data.feature_indices),
            "items": len(data.items_present(include_class=False)),
            "classes": data.n_classes,
        },
        config=cfg.to_dict(),
        anchor=None
        if cfg.mode == "cba"
        else {
            "index": anchor,
            "name": train.schema[anchor].name,
            "gain": next(g.gain for g in gains if g.attribute == anchor),
        },
        gains=[
            {"index": g.attribute, "name": train.schema[g.attribute].name, "gain": g.gain}
            for g in gains
        ],
        rule_counts={
            "candidates": cands.rule_item_count,
            "thresholded": len(ruleset),
            "pruned": len(model),
        },
        train_size=len(train),
        test_size=len(test),
        correct=correct,
        accuracy=acc,
        default_class=train.class_labels[model.default_class],
        hits=None if hw is None else {"include_class_items": cfg.include_class_in_hits, **hw.to_dict()},
        rules=[_rule_dict(r, train) for r in model.rules],
        timings=stage.timings,
    )
    return report


def run_comparison(cfg: ExperimentConfig, data: Optional[Dataset] = None) -> dict[str, Report]:
    """Run all three modes with otherwise equal settings.

    Logs a warning when the usual rule-count ordering cba >= garc >= cwac
    does not hold; weighting can legitimately reorder borderline itemsets.
    """
    reports = {
        mode: run_experiment(dataclasses.replace(cfg, mode=mode, rules_out=None), data)
        for mode in MODES
    }
    counts = {m: r.rule_counts["thresholded"] for m, r in reports.items()}
    if not counts["cba"] >= counts["garc"] >= counts["cwac"]:
        log.warning("rule counts not ordered cba >= garc >= cwac: %s", counts)
    return reports


def emit_report(r: Report, fmt: str = "json", include_timings: bool = True) -> str:
    if fmt == "json":
        return json.dumps(r.to_dict(include_timings), indent=2) + "\n"
    if fmt == "text":
        return format_text(r, include_timings)
    raise ParameterError(f"unknown report format {fmt!r}")


def _table(rows: list[tuple[str, str]]) -> list[str]:
    width = max(len(k) for k, _ in rows)
    return [f"{k.ljust(width)}  {v}" for k, v in rows]


def format_text(r: Report, include_timings: bool = True) -> str:
    cfg = r.config
    ds = r.dataset
    rc = r.rule_counts
    rows = [
        ("dataset", f"{ds['name']}  transactions={ds['transactions']}  items={ds['items']}  classes={ds['classes']}"),
        ("mode", f"{cfg['mode']}  generation={cfg['generation']}"),
        ("thresholds", f"min_wsup={cfg['min_wsup']:g}  min_wconf={cfg['min_wconf']:g}"),
        ("split", f"train={r.train_size}  test={r.test_size}  seed={cfg['seed']}"),
        ("anchor", "-" if r.anchor is None else f"{r.anchor['name']}  (gain {r.anchor['gain']:.4f} bits)"),
        ("rules", f"candidates={rc['candidates']}  thresholded={rc['thresholded']}  pruned={rc['pruned']}"),
        ("default class", str(r.default_class)),
        ("accuracy", f"{r.accuracy:.4f}  ({r.correct}/{r.test_size})"),
    ]
    if r.hits is not None:
        h = r.hits
        rows.append(("hits", f"iterations={h['iterations']}  residual={h['residual']:.3g}  converged={h['converged']}"))
    if include_timings and r.timings:
        rows.append(("time", "  ".join(f"{k}={v * 1000:.1f}ms" for k, v in r.timings.items())))
    lines = [f"experiment report (schema {r.schema_version})", *_table(rows), "", "final rules:"]
    for i, rule in enumerate(r.rules, start=1):
        lhs = ", ".join(f"{a['attribute']}={a['value']}" for a in rule["antecedent"])
        lines.append(
            f"{i:4d}. {lhs} => {rule['consequent']}  "
            f"wconf={rule['wconf']:.4f} wsup={rule['wsup']:.4f} conf={rule['conf']:.4f} sup={rule['sup']:.4f}"
        )
    return "\n".join(lines) + "\n"


def write_report(r: Report, path: str | os.PathLike, fmt: str = "json") -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(emit_report(r, fmt))
