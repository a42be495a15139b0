"""Feature matrices: CSV ingestion and synthetic two-class data."""

import csv
import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_labels, check_positive_int
from .exceptions import DataFormatError
from .streams import StreamKey, make_stream, stream_id


@dataclass(frozen=True, eq=False)
class DatasetMatrix:
    """``n x p`` feature matrix ``y`` with binary labels ``x``."""

    y: np.ndarray
    x: np.ndarray
    feature_names: tuple

    def __post_init__(self):
        y = np.asarray(self.y, dtype=np.float64)
        if y.ndim != 2:
            raise ValueError(f"y must be two-dimensional, got shape {y.shape}")
        x = check_labels(self.x, name="x")
        if x.size != y.shape[0]:
            raise ValueError(f"{x.size} labels for {y.shape[0]} rows")
        if not np.all(np.isfinite(y)):
            raise ValueError("feature matrix contains non-finite values")
        names = tuple(str(s) for s in self.feature_names)
        if len(names) != y.shape[1]:
            raise ValueError(f"{len(names)} feature names for {y.shape[1]} columns")
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "feature_names", names)

    @property
    def n(self):
        return self.y.shape[0]

    @property
    def p(self):
        return self.y.shape[1]

    def take_rows(self, rows):
        rows = np.asarray(rows)
        return DatasetMatrix(self.y[rows], self.x[rows], self.feature_names)


def ingest_csv(path, label_column="label", delimiter=","):
    """Read a CSV file with a header row into a :class:`DatasetMatrix`.

    Every column except ``label_column`` is a feature.  Labels must be the
    tokens ``0`` or ``1``; feature cells must parse as finite floats.

    Raises
    ------
    DataFormatError
        Naming the data row (1-based, header excluded) and column.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        try:
            header = next(reader)
        except StopIteration:
            raise DataFormatError("file is empty; a header row is required") from None
        header = [h.strip() for h in header]
        if label_column not in header:
            raise DataFormatError(f"label column {label_column!r} not found in header")
        if header.count(label_column) > 1:
            raise DataFormatError(f"label column {label_column!r} appears more than once")
        for j, name in enumerate(header):
            if not name:
                raise DataFormatError(f"empty column header at position {j + 1}")
        if len(set(header)) != len(header):
            raise DataFormatError("duplicate column names in header")
        label_idx = header.index(label_column)
        feat_idx = [j for j in range(len(header)) if j != label_idx]
        if not feat_idx:
            raise DataFormatError("no feature columns besides the label column")
        labels, rows = [], []
        for r, record in enumerate(reader, start=1):
            if not record or all(not c.strip() for c in record):
                continue
            if len(record) != len(header):
                raise DataFormatError(
                    f"expected {len(header)} fields, found {len(record)}", row=r)
            token = record[label_idx].strip()
            if token not in ("0", "1"):
                raise DataFormatError(f"label must be 0 or 1, got {token!r}",
                                      row=r, column=label_column)
            labels.append(int(token))
            row = []
            for j in feat_idx:
                cell = record[j].strip()
                try:
                    v = float(cell)
                except ValueError:
                    raise DataFormatError(f"non-numeric value {cell!r}",
                                          row=r, column=header[j]) from None
                if not math.isfinite(v):
                    raise DataFormatError(f"non-finite value {cell!r}",
                                          row=r, column=header[j])
                row.append(v)
            rows.append(row)
    if not rows:
        raise DataFormatError("no data rows")
    return DatasetMatrix(np.array(rows), np.array(labels, dtype=np.int8),
                         tuple(header[j] for j in feat_idx))


def write_csv(data, path, label_column="label", delimiter=","):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
        w.writerow([label_column, *data.feature_names])
        for lab, row in zip(data.x.tolist(), data.y.tolist()):
            w.writerow([lab, *(repr(v) for v in row)])


def generate_synthetic(n, p, n_nonnull=0, shift=0.0, rho=0.0, key=None, seed=0):
    """Two balanced classes of Gaussian features.

    Parameters
    ----------
    n, p : int
        Samples and features.
    n_nonnull : int
        The first ``n_nonnull`` features are shifted by ``shift`` standard
        deviations in class 1; the rest follow the null.
    rho : float in [0, 1)
        Equicorrelation shared by all features within a sample.
    key : StreamKey, optional
        Defaults to ``StreamKey(seed, stream_id("synthetic"))``.
    """
    n = check_positive_int(n, "n", minimum=2)
    p = check_positive_int(p, "p")
    n_nonnull = check_positive_int(n_nonnull, "n_nonnull", minimum=0)
    if n_nonnull > p:
        raise ValueError(f"n_nonnull={n_nonnull} exceeds p={p}")
    if not 0.0 <= rho < 1.0:
        raise ValueError(f"rho must lie in [0, 1), got {rho}")
    if key is None:
        key = StreamKey(seed, stream_id("synthetic"))
    rng = make_stream(key)
    labels = np.zeros(n, dtype=np.int8)
    labels[n - n // 2:] = 1
    labels = rng.permutation(labels)
    z = rng.standard_normal((n, p))
    if rho > 0:
        common = rng.standard_normal((n, 1))
        z = math.sqrt(1.0 - rho) * z + math.sqrt(rho) * common
    z[:, :n_nonnull] += float(shift) * labels[:, None]
    width = max(4, len(str(p - 1)))
    names = tuple(f"f{j:0{width}d}" for j in range(p))
    return DatasetMatrix(z, labels, names)
