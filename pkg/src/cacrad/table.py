"""Rectangular feature tables and their CSV round-trip.

Floats are written with repr() so a write/read cycle is bitwise exact.
Labels and contrast groups never live in the feature CSV; they are joined
back in from the cohort manifest by subject id.
"""

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import (
    DuplicateSubject,
    LengthMismatch,
    MissingFile,
    NonFiniteValue,
    SchemaMismatch,
    UnknownColumn,
)
from .manifest import CacLabel, CohortManifest, ContrastGroup


@dataclass(frozen=True)
class FeatureTable:
    subject_ids: tuple
    feature_names: tuple
    matrix: np.ndarray  # (n_subjects, n_features) float64
    labels: tuple       # CacLabel per row
    groups: tuple       # ContrastGroup per row

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.float64)
        if m.ndim != 2:
            raise LengthMismatch(f"matrix must be 2-D, got shape {m.shape}")
        n = len(self.subject_ids)
        if m.shape != (n, len(self.feature_names)):
            raise LengthMismatch(
                f"matrix {m.shape} does not match {n} ids x {len(self.feature_names)} columns")
        if len(self.labels) != n or len(self.groups) != n:
            raise LengthMismatch("labels/groups length must equal row count")
        if len(set(self.subject_ids)) != n:
            raise DuplicateSubject("subject ids must be unique")
        if len(set(self.feature_names)) != len(self.feature_names):
            raise SchemaMismatch("feature names must be unique")
        object.__setattr__(self, "matrix", m)

    @property
    def n_rows(self) -> int:
        return len(self.subject_ids)

    @property
    def n_cols(self) -> int:
        return len(self.feature_names)

    def column_index(self, names: Sequence[str]) -> np.ndarray:
        pos = {c: k for k, c in enumerate(self.feature_names)}
        missing = [c for c in names if c not in pos]
        if missing:
            raise UnknownColumn(f"columns not in table: {missing}")
        return np.array([pos[c] for c in names], dtype=np.int64)

    def select_columns(self, names: Sequence[str]) -> "FeatureTable":
        idx = self.column_index(names)
        return FeatureTable(self.subject_ids, tuple(names), self.matrix[:, idx],
                            self.labels, self.groups)

    def take_rows(self, rows: Sequence[int]) -> "FeatureTable":
        rows = list(rows)
        return FeatureTable(
            tuple(self.subject_ids[r] for r in rows),
            self.feature_names,
            self.matrix[rows, :],
            tuple(self.labels[r] for r in rows),
            tuple(self.groups[r] for r in rows),
        )

    def rows_in_group(self, group: ContrastGroup):
        return [k for k, g in enumerate(self.groups) if g == group]

    def label_array(self) -> np.ndarray:
        """Labels as 0/1 with NonZero = 1."""
        return np.array([1 if la == CacLabel.NONZERO else 0 for la in self.labels],
                        dtype=np.int64)


def write_features_csv(path, subject_ids, feature_names, matrix) -> None:
    matrix = np.asarray(matrix, dtype=np.float64)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["subject_id", *feature_names])
        for sid, row in zip(subject_ids, matrix):
            w.writerow([sid, *[repr(float(v)) for v in row]])


def read_features_csv(path):
    """Returns (subject_ids, feature_names, matrix); validates shape and finiteness."""
    path = Path(path)
    if not path.exists():
        raise MissingFile(f"feature csv not found: {path}")
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or not rows[0] or rows[0][0] != "subject_id":
        raise SchemaMismatch(f"feature csv must start with a subject_id header: {path}")
    names = tuple(rows[0][1:])
    if len(set(names)) != len(names):
        raise SchemaMismatch("duplicate feature columns")
    ids = []
    data = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(names) + 1:
            raise LengthMismatch(f"{path}:{lineno}: expected {len(names) + 1} cells, got {len(row)}")
        ids.append(row[0])
        try:
            vals = [float(v) for v in row[1:]]
        except ValueError as exc:
            raise NonFiniteValue(f"{path}:{lineno}: {exc}") from exc
        data.append(vals)
    if len(set(ids)) != len(ids):
        raise DuplicateSubject(f"duplicate subject ids in {path}")
    matrix = np.array(data, dtype=np.float64).reshape(len(ids), len(names))
    if not np.all(np.isfinite(matrix)):
        raise NonFiniteValue(f"non-finite value in {path}")
    return tuple(ids), names, matrix


def attach_cohort(subject_ids, feature_names, matrix, manifest: CohortManifest) -> FeatureTable:
    """Join labels and contrast groups from the manifest onto feature rows."""
    by_id = {e.subject_id: e for e in manifest.entries}
    missing = [s for s in subject_ids if s not in by_id]
    if missing:
        raise SchemaMismatch(f"feature rows without manifest entries: {missing[:5]}")
    labels = tuple(by_id[s].cac_label for s in subject_ids)
    groups = tuple(by_id[s].contrast for s in subject_ids)
    return FeatureTable(tuple(subject_ids), tuple(feature_names),
                        np.asarray(matrix, dtype=np.float64), labels, groups)
