"""Categorical transaction datasets: loading, encoding, discretization, splitting.

Every cell of a delimited text file becomes a value label of its column;
a dataset stores the per-attribute value index of each cell in an
``(n_transactions, n_attributes)`` integer matrix.
"""

from __future__ import annotations

import bisect
import csv
import io
import math
import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple, Sequence, TextIO

import numpy as np

from .errors import (
    ConversionError,
    EmptyInputError,
    ParameterError,
    ParseError,
    SchemaError,
)

CATEGORICAL = "categorical"
NUMERIC_RAW = "numeric-raw"
MISSING = "?"


class Item(NamedTuple):
    """An (attribute-index, value-index) pair."""

    attribute: int
    value: int


class Transaction(NamedTuple):
    id: int
    items: tuple[Item, ...]


@dataclass(frozen=True)
class Attribute:
    name: str
    index: int
    values: tuple[str, ...]
    kind: str = CATEGORICAL
    is_class: bool = False

    def __post_init__(self):
        if len(set(self.values)) != len(self.values):
            raise SchemaError(f"attribute {self.name!r} has duplicate value labels")
        if self.kind not in (CATEGORICAL, NUMERIC_RAW):
            raise SchemaError(f"unknown attribute kind {self.kind!r}")

    def value_index(self, label: str) -> int:
        try:
            return self.values.index(label)
        except ValueError:
            raise SchemaError(f"attribute {self.name!r} has no value {label!r}") from None


@dataclass(frozen=True, eq=False)
class Dataset:
    """Fixed-schema categorical transactions with one class attribute."""

    schema: tuple[Attribute, ...]
    codes: np.ndarray
    name: str = "dataset"
    class_index: int = field(init=False)

    def __post_init__(self):
        schema = tuple(self.schema)
        object.__setattr__(self, "schema", schema)
        flagged = [a.index for a in schema if a.is_class]
        if len(flagged) != 1:
            raise SchemaError(f"expected exactly one class attribute, found {len(flagged)}")
        if [a.index for a in schema] != list(range(len(schema))):
            raise SchemaError("attribute indices must be 0..m-1 in order")
        codes = np.array(self.codes, dtype=np.int64).reshape(-1, len(schema))
        for a in schema:
            col = codes[:, a.index]
            if col.size and (col.min() < 0 or col.max() >= len(a.values)):
                raise SchemaError(f"value index out of range in attribute {a.name!r}")
        codes.setflags(write=False)
        object.__setattr__(self, "codes", codes)
        object.__setattr__(self, "class_index", flagged[0])

    def __len__(self) -> int:
        return self.codes.shape[0]

    @property
    def n_attributes(self) -> int:
        return len(self.schema)

    @property
    def class_attribute(self) -> Attribute:
        return self.schema[self.class_index]

    @property
    def class_labels(self) -> tuple[str, ...]:
        return self.class_attribute.values

    @property
    def n_classes(self) -> int:
        return len(self.class_attribute.values)

    @property
    def class_codes(self) -> np.ndarray:
        return self.codes[:, self.class_index]

    @property
    def feature_indices(self) -> list[int]:
        return [a.index for a in self.schema if not a.is_class]

    def attribute(self, key: int | str) -> Attribute:
        if isinstance(key, str):
            for a in self.schema:
                if a.name == key:
                    return a
            raise SchemaError(f"no attribute named {key!r}")
        return self.schema[key]

    def transaction(self, i: int) -> Transaction:
        return Transaction(i, tuple(Item(a, int(v)) for a, v in enumerate(self.codes[i])))

    def transactions(self) -> Iterator[Transaction]:
        for i in range(len(self)):
            yield self.transaction(i)

    def item(self, attribute: int | str, label: str) -> Item:
        a = self.attribute(attribute)
        return Item(a.index, a.value_index(label))

    def decode(self, item: Item) -> str:
        return self.schema[item.attribute].values[item.value]

    def item_label(self, item: Item) -> str:
        return f"{self.schema[item.attribute].name}={self.decode(item)}"

    def items_present(self, include_class: bool = True) -> list[Item]:
        """Distinct items occurring in at least one transaction, sorted."""
        out = []
        for a in self.schema:
            if a.is_class and not include_class:
                continue
            for v in np.unique(self.codes[:, a.index]):
                out.append(Item(a.index, int(v)))
        return out

    def subset(self, rows: Sequence[int], name: str | None = None) -> "Dataset":
        rows = np.asarray(rows, dtype=np.int64)
        return Dataset(self.schema, self.codes[rows], name or self.name)

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.class_codes, minlength=self.n_classes)


def _looks_numeric(text: str) -> bool:
    try:
        value = float(text)
    except ValueError:
        return False
    return math.isfinite(value)


def load_dataset(
    source: TextIO | Iterable[str] | str,
    class_column: int | str = -1,
    missing_token: str = MISSING,
    delimiter: str = ",",
    name: str | None = None,
) -> Dataset:
    """Parse delimited text with a header row into a :class:`Dataset`.

    ``source`` is an open text stream, an iterable of lines, or the text
    itself. ``class_column`` is a column position (negative counts from the
    end) or a header name. Cells equal to ``missing_token`` become the value
    ``"?"``. Columns whose every non-missing cell parses as a finite number
    are tagged numeric-raw; :func:`discretize` turns them into intervals.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    rows = [r for r in csv.reader(source, delimiter=delimiter) if r]
    if not rows:
        raise EmptyInputError("input has no header row")
    header, body = rows[0], rows[1:]
    if not body:
        raise EmptyInputError("input has a header but no data rows")
    m = len(header)
    for lineno, row in enumerate(body, start=2):
        if len(row) != m:
            raise ParseError(f"expected {m} columns, got {len(row)}", row=lineno)

    if isinstance(class_column, str):
        if class_column not in header:
            raise SchemaError(f"class column {class_column!r} not in header")
        cls = header.index(class_column)
    else:
        if not -m <= class_column < m:
            raise SchemaError(f"class column {class_column} out of range for {m} columns")
        cls = class_column % m

    schema = []
    codes = np.empty((len(body), m), dtype=np.int64)
    for j in range(m):
        lookup: dict[str, int] = {}
        for i, row in enumerate(body):
            cell = MISSING if row[j] == missing_token else row[j]
            codes[i, j] = lookup.setdefault(cell, len(lookup))
        present = [v for v in lookup if v != MISSING]
        numeric = j != cls and bool(present) and all(_looks_numeric(v) for v in present)
        schema.append(
            Attribute(
                name=header[j],
                index=j,
                values=tuple(lookup),
                kind=NUMERIC_RAW if numeric else CATEGORICAL,
                is_class=j == cls,
            )
        )
    return Dataset(tuple(schema), codes, name or "dataset")


def load_csv(path: str | os.PathLike, **kwargs) -> Dataset:
    kwargs.setdefault("name", os.path.splitext(os.path.basename(path))[0])
    with open(path, newline="", encoding="utf-8") as fh:
        return load_dataset(fh, **kwargs)


def equal_frequency_cuts(values: Sequence[float], bins: int) -> list[float]:
    """Return the sorted lower boundaries of bins 2..k.

    Nominal cuts split the sorted values into ``bins`` groups of (nearly)
    equal size; a cut falling between two equal values moves right until
    the values differ, so fewer bins may result.
    """
    v = sorted(values)
    n = len(v)
    cuts = []
    prev = 0
    for k in range(1, bins):
        c = (2 * k * n + bins) // (2 * bins)
        c = max(c, prev + 1)
        while 0 < c < n and v[c - 1] == v[c]:
            c += 1
        if c >= n:
            break
        cuts.append(c)
        prev = c
    return [v[c] for c in cuts]


def discretize(d: Dataset, bins: int = 3) -> Dataset:
    """Replace numeric-raw attributes with equal-frequency interval labels.

    Labels take the form ``[lo,hi]`` using the source text of the smallest
    and largest values falling in the bin. Missing cells keep the ``"?"``
    value.
    """
    if bins < 2:
        raise ParameterError(f"bins must be >= 2, got {bins}")
    if not any(a.kind == NUMERIC_RAW for a in d.schema):
        return d

    schema = list(d.schema)
    codes = d.codes.copy()
    for a in d.schema:
        if a.kind != NUMERIC_RAW or a.is_class:
            continue
        numbers: dict[int, float] = {}
        for vi, text in enumerate(a.values):
            if text == MISSING:
                continue
            try:
                numbers[vi] = float(text)
            except ValueError:
                row = int(np.flatnonzero(d.codes[:, a.index] == vi)[0])
                raise ConversionError(
                    f"non-numeric cell {text!r} at row {row}, column {a.name!r}",
                    row=row,
                    column=a.name,
                ) from None
        col = d.codes[:, a.index]
        observed = [numbers[int(c)] for c in col if int(c) in numbers]
        cuts = equal_frequency_cuts(observed, bins)

        members: dict[int, list[int]] = {}
        for vi, x in numbers.items():
            members.setdefault(bisect.bisect_right(cuts, x), []).append(vi)
        remap = np.empty(len(a.values), dtype=np.int64)
        labels = []
        for b in sorted(members):
            vis = sorted(members[b], key=numbers.__getitem__)
            labels.append(f"[{a.values[vis[0]]},{a.values[vis[-1]]}]")
            remap[vis] = len(labels) - 1
        if MISSING in a.values:
            remap[a.values.index(MISSING)] = len(labels)
            labels.append(MISSING)
        codes[:, a.index] = remap[col]
        schema[a.index] = Attribute(a.name, a.index, tuple(labels), CATEGORICAL, False)
    return Dataset(tuple(schema), codes, d.name)


def holdout_split(
    d: Dataset, test_fraction: float = 1 / 3, seed: int = 0
) -> tuple[Dataset, Dataset]:
    """Randomly partition ``d`` into (train, test).

    ``ceil(test_fraction * |D|)`` shuffled transactions go to test, clamped
    so that neither side is empty.
    """
    if not 0.0 < test_fraction < 1.0:
        raise ParameterError(f"test_fraction must lie in (0, 1), got {test_fraction}")
    n = len(d)
    if n < 2:
        raise ParameterError("holdout split needs at least 2 transactions")
    perm = np.random.default_rng(seed).permutation(n)
    n_test = math.ceil(test_fraction * n - 1e-9)
    n_test = min(max(n_test, 1), n - 1)
    return d.subset(perm[n_test:], d.name), d.subset(perm[:n_test], d.name)
