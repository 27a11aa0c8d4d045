"""Sample matrices and their CSV dialect.

A :class:`Dataset` is an n x d matrix of finite reals plus unique column
names. The CSV dialect is deliberately strict: a single header row of
names, comma separated, every following cell a decimal numeric. Anything
else is a hard parse error that names the offending row and column.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import CsvFormatError


@dataclass(frozen=True)
class Dataset:
    """Immutable n x d sample matrix with column names (n >= 2, d >= 1)."""

    values: np.ndarray
    column_names: tuple[str, ...] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise ValueError(f"values must be 2-d, got shape {values.shape}")
        n, d = values.shape
        if n < 1 or d < 1:
            raise ValueError(f"need n >= 1 rows and d >= 1 columns, got {n} x {d}")
        if not np.all(np.isfinite(values)):
            bad = np.argwhere(~np.isfinite(values))[0]
            raise ValueError(f"non-finite entry at row {bad[0]}, column {bad[1]}")
        names = self.column_names
        if names is None:
            names = tuple(f"x{i}" for i in range(d))
        else:
            names = tuple(str(c) for c in names)
        if len(names) != d:
            raise ValueError(f"{len(names)} column names for {d} columns")
        if len(set(names)) != d:
            raise ValueError("column names must be unique")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "column_names", names)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def d(self) -> int:
        return self.values.shape[1]

    def column(self, i: int) -> np.ndarray:
        return self.values[:, i]

    def column_index(self, name_or_index) -> int:
        if isinstance(name_or_index, str):
            try:
                return self.column_names.index(name_or_index)
            except ValueError:
                raise KeyError(f"no column named {name_or_index!r}") from None
        i = int(name_or_index)
        if not 0 <= i < self.d:
            raise IndexError(f"column index {i} out of range for d={self.d}")
        return i


def read_csv(path) -> Dataset:
    """Load a Dataset from the strict numeric CSV dialect."""
    with open(path, "r", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CsvFormatError(f"{path}: empty file, expected a header row") from None
        names = [h.strip() for h in header]
        rows = []
        for r, row in enumerate(reader, start=2):  # header is line 1
            if len(row) != len(names):
                raise CsvFormatError(
                    f"{path}: row {r} has {len(row)} cells, expected {len(names)}"
                )
            parsed = []
            for c, cell in enumerate(row):
                try:
                    parsed.append(float(cell))
                except ValueError:
                    raise CsvFormatError(
                        f"{path}: non-numeric cell at row {r}, column {names[c]!r}: {cell!r}"
                    ) from None
            rows.append(parsed)
    if not rows:
        raise CsvFormatError(f"{path}: no data rows")
    try:
        return Dataset(np.array(rows, dtype=np.float64), tuple(names))
    except ValueError as exc:
        raise CsvFormatError(f"{path}: {exc}") from None


def write_csv(path, data: Dataset) -> None:
    """Write a Dataset in the same dialect read_csv accepts.

    Floats are formatted with shortest round-trip repr, so a write/read
    cycle reproduces the matrix bit-exactly.
    """
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(data.column_names)
        for row in data.values:
            writer.writerow([repr(float(v)) for v in row])
