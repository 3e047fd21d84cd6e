"""Typed tabular datasets: loading, schemas, normalization and distances.

Everything downstream (privacy metrics, similarity scores, utility
benchmarks, generators) operates on :class:`Dataset` objects built here.
A dataset is a fixed-width table whose columns are either numeric
(float64) or categorical (string labels).  Missing values are resolved
at load time: rows containing any missing cell are dropped and counted.
"""

from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

NUMERIC = "numeric"
CATEGORICAL = "categorical"

# Cell tokens treated as missing when reading CSV input (case-insensitive).
MISSING_TOKENS = frozenset({"", "na", "n/a", "nan", "null"})

DEFAULT_BINS = 20


def _is_missing(cell: str) -> bool:
    return cell.strip().lower() in MISSING_TOKENS


def _parse_number(cell: str) -> float | None:
    """Return the finite float value of ``cell``, or None if it has none."""
    try:
        value = float(cell)
    except ValueError:
        return None
    return value if math.isfinite(value) else None


@dataclass(frozen=True)
class ColumnSpec:
    """Declared type and domain of one column.

    Numeric columns carry the observed [min, max] range used to anchor
    normalization and binning; categorical columns carry the ordered
    tuple of admissible labels (sorted lexicographically at inference).
    """

    name: str
    kind: str
    min: float | None = None
    max: float | None = None
    categories: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.kind not in (NUMERIC, CATEGORICAL):
            raise ValueError(f"column {self.name!r}: unknown kind {self.kind!r}")
        if self.kind == NUMERIC:
            if self.min is None or self.max is None:
                raise ValueError(f"numeric column {self.name!r} needs min and max")
            if not (math.isfinite(self.min) and math.isfinite(self.max)):
                raise ValueError(f"numeric column {self.name!r}: range must be finite")
            if self.min > self.max:
                raise ValueError(f"numeric column {self.name!r}: min > max")
            if self.categories is not None:
                raise ValueError(f"numeric column {self.name!r} cannot list categories")
        else:
            if not self.categories:
                raise ValueError(f"categorical column {self.name!r} needs categories")
            if len(set(self.categories)) != len(self.categories):
                raise ValueError(f"categorical column {self.name!r}: duplicate categories")
            if self.min is not None or self.max is not None:
                raise ValueError(f"categorical column {self.name!r} cannot have a range")

    @property
    def is_numeric(self) -> bool:
        return self.kind == NUMERIC

    def to_dict(self) -> dict:
        out: dict = {"name": self.name, "kind": self.kind}
        if self.is_numeric:
            out["min"] = self.min
            out["max"] = self.max
        else:
            out["categories"] = list(self.categories or ())
        return out

    @classmethod
    def from_dict(cls, data: Mapping) -> "ColumnSpec":
        kind = data["kind"]
        if kind == NUMERIC:
            return cls(data["name"], NUMERIC, min=float(data["min"]), max=float(data["max"]))
        return cls(data["name"], CATEGORICAL, categories=tuple(data["categories"]))


@dataclass(frozen=True)
class Schema:
    """Ordered collection of column specs; the single source of column truth."""

    columns: tuple[ColumnSpec, ...]

    def __post_init__(self) -> None:
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names):
            raise ValueError("schema has duplicate column names")

    def __iter__(self):
        return iter(self.columns)

    def __len__(self) -> int:
        return len(self.columns)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)

    def __contains__(self, name: str) -> bool:
        return any(c.name == name for c in self.columns)

    def __getitem__(self, name: str) -> ColumnSpec:
        for c in self.columns:
            if c.name == name:
                return c
        raise KeyError(f"no column named {name!r}")

    def numeric_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns if c.is_numeric)

    def categorical_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns if not c.is_numeric)

    def select(self, names: Sequence[str]) -> "Schema":
        return Schema(tuple(self[n] for n in names))

    def to_dict(self) -> dict:
        return {"columns": [c.to_dict() for c in self.columns]}

    @classmethod
    def from_dict(cls, data: Mapping) -> "Schema":
        return cls(tuple(ColumnSpec.from_dict(c) for c in data["columns"]))

    @classmethod
    def from_json_file(cls, path: str | Path) -> "Schema":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


class Dataset:
    """Immutable typed table: numeric columns as float64, categorical as str.

    Parameters
    ----------
    schema:
        Column declarations, in column order.
    columns:
        Mapping from column name to a 1-D array (or sequence) of cell
        values.  All columns must have equal length.
    normalized:
        Marks datasets produced by :func:`normalize`; a second
        normalization pass is then the identity.
    """

    def __init__(
        self,
        schema: Schema,
        columns: Mapping[str, Sequence | np.ndarray],
        *,
        normalized: bool = False,
        validate: bool = True,
    ) -> None:
        self.schema = schema
        self.normalized = normalized
        store: dict[str, np.ndarray] = {}
        n_rows: int | None = None
        for spec in schema:
            if spec.name not in columns:
                raise ValueError(f"missing data for column {spec.name!r}")
            if spec.is_numeric:
                arr = np.asarray(columns[spec.name], dtype=np.float64).copy()
            else:
                arr = np.asarray([str(v) for v in columns[spec.name]], dtype=object)
            if arr.ndim != 1:
                raise ValueError(f"column {spec.name!r} must be one-dimensional")
            if n_rows is None:
                n_rows = arr.shape[0]
            elif arr.shape[0] != n_rows:
                raise ValueError("columns have unequal lengths")
            arr.setflags(write=False)
            store[spec.name] = arr
        extra = set(columns) - set(schema.names)
        if extra:
            raise ValueError(f"data for undeclared columns: {sorted(extra)}")
        self._columns = store
        self.n_rows = int(n_rows or 0)
        if validate:
            self._validate_cells()

    def _validate_cells(self) -> None:
        for spec in self.schema:
            arr = self._columns[spec.name]
            if spec.is_numeric:
                if arr.size and not np.all(np.isfinite(arr)):
                    raise ValueError(f"column {spec.name!r} contains non-finite cells")
            else:
                allowed = set(spec.categories or ())
                seen = set(arr.tolist())
                if not seen <= allowed:
                    raise ValueError(
                        f"column {spec.name!r} contains labels outside its "
                        f"categories: {sorted(seen - allowed)[:5]}"
                    )

    @property
    def n_columns(self) -> int:
        return len(self.schema)

    def column(self, name: str) -> np.ndarray:
        """Read-only view of one column."""
        return self._columns[name]

    def row(self, i: int) -> tuple:
        """One record as a tuple of cell values, in schema order."""
        return tuple(self._columns[name][i] for name in self.schema.names)

    def iter_rows(self) -> Iterable[tuple]:
        for i in range(self.n_rows):
            yield self.row(i)

    def take(self, indices: Sequence[int] | np.ndarray) -> "Dataset":
        idx = np.asarray(indices, dtype=np.intp)
        cols = {name: self._columns[name][idx] for name in self.schema.names}
        return Dataset(self.schema, cols, normalized=self.normalized, validate=False)

    def select(self, names: Sequence[str]) -> "Dataset":
        sub = self.schema.select(names)
        cols = {n: self._columns[n] for n in names}
        return Dataset(sub, cols, normalized=self.normalized, validate=False)

    def replace_column(self, name: str, spec: ColumnSpec, values: np.ndarray) -> "Dataset":
        """New dataset with one column (and its spec) swapped out."""
        if spec.name != name:
            raise ValueError("replacement spec must keep the column name")
        specs = tuple(spec if c.name == name else c for c in self.schema)
        cols = {n: (values if n == name else self._columns[n]) for n in self.schema.names}
        return Dataset(Schema(specs), cols, normalized=self.normalized)

    def equals(self, other: "Dataset") -> bool:
        if self.schema != other.schema or self.n_rows != other.n_rows:
            return False
        for spec in self.schema:
            a, b = self.column(spec.name), other.column(spec.name)
            same = np.array_equal(a, b)
            if not same:
                return False
        return True

    def validate_against(self, reference: Schema) -> None:
        """Check structural compatibility with a reference schema.

        Column names, order and kinds must match; categorical labels must
        be a subset of the reference categories.  Numeric ranges are not
        compared — generated data may lie outside the reference range.
        """
        if self.schema.names != reference.names:
            raise ValueError(
                f"column names differ: {self.schema.names} vs {reference.names}"
            )
        for mine, ref in zip(self.schema, reference):
            if mine.kind != ref.kind:
                raise ValueError(f"column {mine.name!r}: kind {mine.kind} != {ref.kind}")
            if not ref.is_numeric:
                mine_cats = set(mine.categories or ())
                if not mine_cats <= set(ref.categories or ()):
                    raise ValueError(
                        f"column {mine.name!r} has labels outside the reference categories"
                    )

    def to_csv(self, path: str | Path, *, delimiter: str = ",") -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, delimiter=delimiter)
            writer.writerow(self.schema.names)
            numeric = [spec.is_numeric for spec in self.schema]
            cols = [self._columns[n] for n in self.schema.names]
            for i in range(self.n_rows):
                writer.writerow(
                    [
                        repr(float(col[i])) if is_num else str(col[i])
                        for col, is_num in zip(cols, numeric)
                    ]
                )


def infer_schema(header: Sequence[str], rows: Sequence[Sequence[str]]) -> Schema:
    """Infer column kinds from string cells.

    A column is numeric iff every non-missing cell parses as a finite
    real number; otherwise it is categorical with sorted distinct labels.
    """
    if len(set(header)) != len(header):
        raise ValueError("duplicate column names in header")
    specs = []
    for j, name in enumerate(header):
        cells = [row[j] for row in rows if not _is_missing(row[j])]
        if not cells:
            raise ValueError(f"column {name!r} has no observed values")
        parsed = [_parse_number(c) for c in cells]
        if all(v is not None for v in parsed):
            values = np.asarray(parsed, dtype=np.float64)
            specs.append(
                ColumnSpec(name, NUMERIC, min=float(values.min()), max=float(values.max()))
            )
        else:
            specs.append(
                ColumnSpec(name, CATEGORICAL, categories=tuple(sorted(set(map(str, cells)))))
            )
    return Schema(tuple(specs))


def load_csv(
    path: str | Path,
    *,
    schema: Schema | None = None,
    delimiter: str = ",",
) -> Dataset:
    """Load an RFC-4180 CSV file (UTF-8, header row) into a Dataset.

    With ``schema=None`` the column types are inferred from the data.
    Rows containing missing cells are dropped; the count is reported via
    a warning.  Ragged rows and (under a declared schema) unparseable
    numeric cells raise ValueError.
    """
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: file is empty") from None
        width = len(header)
        rows: list[list[str]] = []
        dropped = 0
        for lineno, row in enumerate(reader, start=2):
            if len(row) != width:
                raise ValueError(
                    f"{path}: ragged row at line {lineno} "
                    f"({len(row)} cells, expected {width})"
                )
            if any(_is_missing(cell) for cell in row):
                dropped += 1
                continue
            rows.append(row)
    if dropped:
        warnings.warn(
            f"{path.name}: dropped {dropped} row(s) with missing values",
            stacklevel=2,
        )
    if not rows:
        raise ValueError(f"{path}: no complete rows")

    if schema is None:
        schema = infer_schema(header, rows)
    elif list(header) != list(schema.names):
        raise ValueError(
            f"{path}: header {header} does not match schema columns {list(schema.names)}"
        )

    columns: dict[str, list] = {name: [] for name in schema.names}
    for lineno_row, row in enumerate(rows):
        for spec, cell in zip(schema, row):
            if spec.is_numeric:
                value = _parse_number(cell)
                if value is None:
                    raise ValueError(
                        f"{path}: column {spec.name!r}: cannot parse {cell!r} as a number"
                    )
                columns[spec.name].append(value)
            else:
                columns[spec.name].append(cell)
    return Dataset(schema, columns)


def normalize(dataset: Dataset, reference: Schema) -> Dataset:
    """Min-max scale numeric columns to [0, 1] using the reference ranges.

    Values outside a reference range are clamped; a constant reference
    column (min == max) maps to 0.  Categorical columns pass through.
    Already-normalized datasets are returned unchanged, which makes the
    transform idempotent.
    """
    if dataset.normalized:
        return dataset
    if dataset.schema.names != reference.names:
        raise ValueError("dataset and reference schema list different columns")
    specs: list[ColumnSpec] = []
    columns: dict[str, np.ndarray] = {}
    for spec, ref in zip(dataset.schema, reference):
        if spec.kind != ref.kind:
            raise ValueError(f"column {spec.name!r}: kind mismatch with reference")
        values = dataset.column(spec.name)
        if spec.is_numeric:
            lo, hi = float(ref.min), float(ref.max)  # type: ignore[arg-type]
            if hi > lo:
                scaled = np.clip((values - lo) / (hi - lo), 0.0, 1.0)
            else:
                scaled = np.zeros_like(values)
            columns[spec.name] = scaled
            specs.append(ColumnSpec(spec.name, NUMERIC, min=0.0, max=1.0))
        else:
            columns[spec.name] = values
            specs.append(spec)
    return Dataset(Schema(tuple(specs)), columns, normalized=True, validate=False)


def mixed_distance(a: Sequence, b: Sequence, schema: Schema) -> float:
    """Euclidean-style distance over mixed records.

    Numeric columns contribute their (normalized-scale) difference,
    categorical columns a 0/1 mismatch indicator; the result is the
    square root of the summed squared contributions.
    """
    if len(a) != len(schema) or len(b) != len(schema):
        raise ValueError("record length does not match schema")
    total = 0.0
    for spec, x, y in zip(schema, a, b):
        if spec.is_numeric:
            x, y = float(x), float(y)
            if not (math.isfinite(x) and math.isfinite(y)):
                raise ValueError(f"column {spec.name!r}: non-finite cell in record")
            total += (x - y) ** 2
        else:
            total += 0.0 if str(x) == str(y) else 1.0
    return math.sqrt(total)


def encode_numeric(dataset: Dataset) -> tuple[np.ndarray, np.ndarray]:
    """Matrix view for vectorized mixed distances.

    Returns ``(matrix, is_categorical)``: numeric columns keep their
    values, categorical columns become category indices per the schema,
    and the boolean mask flags which columns need 0/1 mismatch handling.
    """
    n, d = dataset.n_rows, dataset.n_columns
    out = np.empty((n, d), dtype=np.float64)
    is_cat = np.zeros(d, dtype=bool)
    for j, spec in enumerate(dataset.schema):
        col = dataset.column(spec.name)
        if spec.is_numeric:
            out[:, j] = col
        else:
            is_cat[j] = True
            codes = {c: i for i, c in enumerate(spec.categories or ())}
            out[:, j] = [codes[v] for v in col]
    return out, is_cat


def pairwise_mixed_distances(
    rows_a: np.ndarray,
    rows_b: np.ndarray,
    is_cat: np.ndarray,
    *,
    chunk: int = 1024,
) -> np.ndarray:
    """Full |A| x |B| mixed-distance matrix from encoded row matrices.

    Accumulates per column to keep exact agreement with
    :func:`mixed_distance` (no dot-product shortcuts), chunking rows of A
    to bound peak memory.
    """
    n_a, n_b = rows_a.shape[0], rows_b.shape[0]
    out = np.empty((n_a, n_b), dtype=np.float64)
    num_idx = np.flatnonzero(~is_cat)
    cat_idx = np.flatnonzero(is_cat)
    for start in range(0, n_a, chunk):
        stop = min(start + chunk, n_a)
        acc = np.zeros((stop - start, n_b), dtype=np.float64)
        for j in num_idx:
            diff = rows_a[start:stop, j, None] - rows_b[None, :, j]
            acc += diff * diff
        for j in cat_idx:
            acc += rows_a[start:stop, j, None] != rows_b[None, :, j]
        out[start:stop] = np.sqrt(acc)
    return out


def encode_aligned(a: Dataset, b: Dataset) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Encode two datasets against one shared categorical vocabulary.

    Returns ``(mat_a, mat_b, is_categorical)`` ready for
    :func:`pairwise_mixed_distances`.
    """
    if a.schema.names != b.schema.names:
        raise ValueError("datasets list different columns")
    mat_a, is_cat = encode_numeric(a)
    mat_b, is_cat_b = encode_numeric(b)
    if not np.array_equal(is_cat, is_cat_b):
        raise ValueError("datasets disagree on column kinds")
    for j, (spec_a, spec_b) in enumerate(zip(a.schema, b.schema)):
        if not spec_a.is_numeric and spec_a.categories != spec_b.categories:
            union = tuple(sorted(set(spec_a.categories or ()) | set(spec_b.categories or ())))
            codes = {c: i for i, c in enumerate(union)}
            mat_a[:, j] = [codes[v] for v in a.column(spec_a.name)]
            mat_b[:, j] = [codes[v] for v in b.column(spec_b.name)]
    return mat_a, mat_b, is_cat


def cross_distances(a: Dataset, b: Dataset, *, chunk: int = 1024) -> np.ndarray:
    """Mixed-distance matrix between the records of two aligned datasets."""
    mat_a, mat_b, is_cat = encode_aligned(a, b)
    return pairwise_mixed_distances(mat_a, mat_b, is_cat, chunk=chunk)


def sample_rows(
    dataset: Dataset,
    n: int,
    *,
    with_replacement: bool = False,
    seed: int,
) -> Dataset:
    """Seeded row sample (verbatim records, no noise).

    Without replacement requires ``n <= n_rows``; drawing the full size
    without replacement yields a permutation of the dataset.
    """
    if n < 0:
        raise ValueError("sample size must be non-negative")
    if not with_replacement and n > dataset.n_rows:
        raise ValueError(
            f"cannot draw {n} rows from {dataset.n_rows} without replacement"
        )
    rng = np.random.default_rng(seed)
    idx = rng.choice(dataset.n_rows, size=n, replace=with_replacement)
    return dataset.take(idx)


@dataclass(frozen=True)
class SplitPair:
    """Train/test partition of one dataset."""

    train: Dataset
    test: Dataset
    train_indices: np.ndarray = field(repr=False, compare=False, default=None)  # type: ignore[assignment]
    test_indices: np.ndarray = field(repr=False, compare=False, default=None)  # type: ignore[assignment]


def _largest_remainder(counts: np.ndarray, fraction: float, total_target: int) -> np.ndarray:
    """Integer allocation of ``total_target`` across groups, proportional to counts."""
    raw = counts * fraction
    base = np.floor(raw).astype(int)
    shortfall = total_target - int(base.sum())
    if shortfall > 0:
        order = np.argsort(-(raw - base), kind="stable")
        for g in order[:shortfall]:
            base[g] += 1
    elif shortfall < 0:
        order = np.argsort(raw - base, kind="stable")
        take = -shortfall
        for g in order:
            if take == 0:
                break
            if base[g] > 0:
                base[g] -= 1
                take -= 1
    return base


def dynamic_train_test_split(
    dataset: Dataset,
    *,
    seed: int,
    stratify_on: str | None = None,
) -> SplitPair:
    """Deterministic train/test split with a size-dependent test share.

    Small tables (fewer than 2,000 rows) reserve 30% for testing, larger
    ones 20%.  With ``stratify_on`` set, class proportions are preserved
    via largest-remainder allocation.  Requires at least 10 rows, and
    both sides of the split are guaranteed non-empty.
    """
    n = dataset.n_rows
    if n < 10:
        raise ValueError(f"need at least 10 rows to split, got {n}")
    fraction = 0.3 if n < 2000 else 0.2
    n_test_total = int(round(n * fraction))
    n_test_total = min(max(n_test_total, 1), n - 1)
    rng = np.random.default_rng(seed)

    if stratify_on is None:
        perm = rng.permutation(n)
        test_idx = np.sort(perm[:n_test_total])
        train_idx = np.sort(perm[n_test_total:])
    else:
        labels = dataset.column(stratify_on)
        if dataset.schema[stratify_on].is_numeric:
            labels = labels.astype(np.float64)
        groups, inverse = np.unique(np.asarray(labels, dtype=object), return_inverse=True)
        counts = np.bincount(inverse, minlength=len(groups))
        per_group = _largest_remainder(counts.astype(float), fraction, n_test_total)
        test_parts = []
        for g in range(len(groups)):
            members = np.flatnonzero(inverse == g)
            take = min(per_group[g], len(members))
            if take:
                test_parts.append(rng.permutation(members)[:take])
        test_idx = np.sort(np.concatenate(test_parts)) if test_parts else np.empty(0, dtype=np.intp)
        mask = np.ones(n, dtype=bool)
        mask[test_idx] = False
        train_idx = np.flatnonzero(mask)
    if len(test_idx) == 0 or len(train_idx) == 0:
        raise ValueError("degenerate split: one side is empty")
    return SplitPair(
        train=dataset.take(train_idx),
        test=dataset.take(test_idx),
        train_indices=train_idx,
        test_indices=test_idx,
    )


def discretize(
    values: np.ndarray | Sequence[float],
    spec: ColumnSpec,
    bins: int = DEFAULT_BINS,
) -> np.ndarray:
    """Equal-width binning over the reference column range.

    Bins are left-closed/right-open with the final bin closed on the
    right; values outside the reference range fall into the edge bins.
    Labels are ``bin0`` .. ``bin{bins-1}`` and depend only on the
    reference spec, so the same spec yields comparable labels across
    datasets.
    """
    if not spec.is_numeric:
        raise ValueError(f"column {spec.name!r} is not numeric")
    if bins < 1:
        raise ValueError("bins must be >= 1")
    arr = np.asarray(values, dtype=np.float64)
    lo, hi = float(spec.min), float(spec.max)  # type: ignore[arg-type]
    if hi > lo:
        pos = (arr - lo) / (hi - lo) * bins
        idx = np.clip(np.floor(pos).astype(int), 0, bins - 1)
    else:
        idx = np.zeros(arr.shape, dtype=int)
    labels = np.array([f"bin{i}" for i in range(bins)], dtype=object)
    return labels[idx]


def bin_labels(bins: int = DEFAULT_BINS) -> tuple[str, ...]:
    return tuple(f"bin{i}" for i in range(bins))


def discretize_dataset(
    dataset: Dataset,
    reference: Schema,
    *,
    bins: int = DEFAULT_BINS,
    columns: Sequence[str] | None = None,
) -> Dataset:
    """Dataset with (selected) numeric columns replaced by bin labels."""
    target_cols = set(columns if columns is not None else dataset.schema.numeric_names())
    specs: list[ColumnSpec] = []
    data: dict[str, np.ndarray] = {}
    for spec in dataset.schema:
        values = dataset.column(spec.name)
        if spec.name in target_cols and spec.is_numeric:
            data[spec.name] = discretize(values, reference[spec.name], bins)
            specs.append(ColumnSpec(spec.name, CATEGORICAL, categories=bin_labels(bins)))
        else:
            data[spec.name] = values
            specs.append(spec)
    return Dataset(Schema(tuple(specs)), data, validate=False)
