"""Loading UCR 2018 archive splits (``<Name>_TRAIN.tsv`` / ``<Name>_TEST.tsv``)."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .core import TimeSeries
from .errors import InvalidInputError, MissingValuesError, VariableLengthError

__all__ = [
    "LabeledDataset",
    "DEFAULT_MAX_LEN",
    "parse_ucr_lines",
    "read_ucr_file",
    "load_ucr_split",
    "load_ucr_dataset",
    "discover_datasets",
    "write_ucr_file",
    "validate_for_length_policy",
    "znormalize",
]

DEFAULT_MAX_LEN = 900


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    name: str
    train: tuple[TimeSeries, ...]
    test: tuple[TimeSeries, ...]
    delimiter: str = "tab"
    classes: frozenset = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "train", tuple(self.train))
        object.__setattr__(self, "test", tuple(self.test))
        if not self.train:
            raise InvalidInputError(f"{self.name}: training split is empty")
        lengths = {len(s) for s in self.train + self.test}
        if len(lengths) != 1:
            raise VariableLengthError(f"{self.name}: series lengths vary ({sorted(lengths)})")
        if any(s.label is None for s in self.train + self.test):
            raise InvalidInputError(f"{self.name}: every series needs a label")
        object.__setattr__(self, "classes", frozenset(s.label for s in self.train + self.test))

    @property
    def d(self) -> int:
        return len(self.train[0])

    @cached_property
    def X_train(self) -> np.ndarray:
        return np.stack([s.values for s in self.train])

    @cached_property
    def X_test(self) -> np.ndarray:
        return np.stack([s.values for s in self.test]) if self.test else np.empty((0, self.d))

    @property
    def y_train(self) -> list[str]:
        return [s.label for s in self.train]

    @property
    def y_test(self) -> list[str]:
        return [s.label for s in self.test]


def _split_fields(line: str) -> tuple[list[str], str]:
    if "\t" in line:
        return line.split("\t"), "tab"
    if "," in line:
        return line.split(","), "comma"
    return line.split(), "whitespace"


def parse_ucr_lines(lines: Iterable[str], source: str = "<input>") -> tuple[list[TimeSeries], str]:
    """Parse label-first UCR rows. Returns the series and the delimiter mode used.

    Rows padded with trailing NaNs (how the archive stores variable-length
    datasets) raise :class:`VariableLengthError`; any other NaN raises
    :class:`MissingValuesError`.
    """
    rows: list[tuple[str, list[float]]] = []
    modes = set()
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line:
            continue
        fields, mode = _split_fields(line)
        modes.add(mode)
        label = fields[0].strip()
        try:
            values = [float(tok) for tok in fields[1:]]
        except ValueError as exc:
            raise InvalidInputError(f"{source}:{lineno}: {exc}") from None
        if not values:
            raise InvalidInputError(f"{source}:{lineno}: row has a label but no observations")
        if any(math.isinf(v) for v in values):
            raise InvalidInputError(f"{source}:{lineno}: infinite observation")
        rows.append((label, values))
    if not rows:
        raise InvalidInputError(f"{source}: no series found")

    effective = []
    for label, values in rows:
        n = len(values)
        while n and math.isnan(values[n - 1]):
            n -= 1
        effective.append(n)
    raw_lengths = {len(v) for _, v in rows}
    if len(raw_lengths) > 1 or len(set(effective)) > 1:
        lengths = sorted(set(effective) | raw_lengths)
        raise VariableLengthError(f"{source}: series lengths vary ({lengths[0]}..{lengths[-1]})")
    for lineno, (_, values) in enumerate(rows, 1):
        if any(math.isnan(v) for v in values):
            raise MissingValuesError(f"{source}: series {lineno} contains missing values")

    mode = "tab" if "tab" in modes else sorted(modes)[0]
    return [TimeSeries(np.asarray(v), label) for label, v in rows], mode


def read_ucr_file(path: str | Path) -> tuple[list[TimeSeries], str]:
    path = Path(path)
    with path.open() as fh:
        return parse_ucr_lines(fh, source=str(path))


def load_ucr_split(train_path: str | Path, test_path: str | Path, name: str) -> LabeledDataset:
    train, mode_train = read_ucr_file(train_path)
    test, mode_test = read_ucr_file(test_path)
    if len(train[0]) != len(test[0]):
        raise VariableLengthError(
            f"{name}: train length {len(train[0])} differs from test length {len(test[0])}"
        )
    mode = mode_train if mode_train == mode_test else f"{mode_train}/{mode_test}"
    return LabeledDataset(name, train, test, delimiter=mode)


def load_ucr_dataset(data_dir: str | Path, name: str) -> LabeledDataset:
    data_dir = Path(data_dir)
    for root in (data_dir / name, data_dir):
        train, test = root / f"{name}_TRAIN.tsv", root / f"{name}_TEST.tsv"
        if train.exists() and test.exists():
            return load_ucr_split(train, test, name)
    raise FileNotFoundError(f"no {name}_TRAIN.tsv / {name}_TEST.tsv under {data_dir}")


def discover_datasets(data_dir: str | Path) -> list[str]:
    """Names with a ``_TRAIN.tsv`` file, flat or one folder per dataset, sorted."""
    data_dir = Path(data_dir)
    if not data_dir.is_dir():
        return []
    names = set()
    for path in list(data_dir.glob("*_TRAIN.tsv")) + list(data_dir.glob("*/*_TRAIN.tsv")):
        names.add(path.name[: -len("_TRAIN.tsv")])
    return sorted(names)


def write_ucr_file(series: Sequence[TimeSeries], path: str | Path) -> None:
    # repr() round-trips doubles exactly
    with Path(path).open("w") as fh:
        for s in series:
            fh.write("\t".join([str(s.label)] + [repr(float(v)) for v in s.values]) + "\n")


def validate_for_length_policy(ds: LabeledDataset, max_len: int = DEFAULT_MAX_LEN) -> bool:
    return ds.d <= max_len


def znormalize(ds: LabeledDataset) -> LabeledDataset:
    """Per-series zero mean / unit variance; constant series are only centered."""

    def norm(s: TimeSeries) -> TimeSeries:
        v = s.values
        std = v.std()
        return TimeSeries((v - v.mean()) / (std if std > 0 else 1.0), s.label)

    return LabeledDataset(ds.name, [norm(s) for s in ds.train], [norm(s) for s in ds.test], ds.delimiter)
