"""Decision-stump hypothesis spaces.

The space holds one canonical-polarity stump per distinct prediction
pattern on the training data: no two stumps predict identically and no
stump is the pointwise negation of another.  Negated behavior stays
reachable through negative ensemble weights.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import EmptySpaceError


@dataclass
class Dataset:
    """Feature matrix, +/-1 labels, and optional ground-truth type flags.

    ``true_types[n]`` is 1 when label n was drawn from the instance-dependent
    log-odds and 0 when it came from the noise channel; it is only available
    for synthetic data.
    """

    features: np.ndarray
    labels: np.ndarray
    true_types: np.ndarray | None = None

    def __post_init__(self) -> None:
        self.features = np.asarray(self.features, dtype=float)
        self.labels = np.asarray(self.labels, dtype=int)
        if self.features.ndim != 2:
            raise ValueError("features must be an N x D matrix")
        n = self.features.shape[0]
        if n < 1:
            raise ValueError("a dataset needs at least one example")
        if self.labels.shape != (n,):
            raise ValueError("labels must have one entry per example")
        if not np.all(np.isin(self.labels, (-1, 1))):
            raise ValueError("labels must be -1 or +1")
        if self.true_types is not None:
            self.true_types = np.asarray(self.true_types, dtype=int)
            if self.true_types.shape != (n,):
                raise ValueError("true_types must have one entry per example")
            if not np.all(np.isin(self.true_types, (0, 1))):
                raise ValueError("true_types must be 0 or 1")

    @property
    def n_examples(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def subset(self, idx: np.ndarray) -> "Dataset":
        types = None if self.true_types is None else self.true_types[idx]
        return Dataset(self.features[idx], self.labels[idx], types)


@dataclass(frozen=True)
class Stump:
    """One-feature threshold classifier: predicts sign(x[j] - threshold),
    with sign(0) = +1.  Polarity is pinned to +1; negations are expressed
    through negative ensemble weights."""

    feature_index: int
    threshold: float
    polarity: int = 1

    def __post_init__(self) -> None:
        if self.polarity != 1:
            raise ValueError("stumps are canonical: polarity is always +1")

    def predict(self, features: np.ndarray) -> np.ndarray:
        return np.where(features[:, self.feature_index] >= self.threshold, 1, -1).astype(
            np.int8
        )


@dataclass
class StumpSpace:
    """Enumerated stump space with a cached M x N prediction table."""

    stumps: list[Stump]
    prediction_table: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.stumps)


def build_stumps(data: Dataset) -> StumpSpace:
    """Enumerate stumps at midpoints of consecutive distinct values plus one
    below-minimum threshold per non-constant feature, then drop any stump
    whose prediction row duplicates or negates an earlier one."""
    x = data.features
    seen: set[bytes] = set()
    stumps: list[Stump] = []
    rows: list[np.ndarray] = []
    for j in range(data.n_features):
        vals = np.unique(x[:, j])
        if vals.size < 2:
            continue
        thresholds = np.concatenate([[vals[0] - 1.0], 0.5 * (vals[:-1] + vals[1:])])
        for thr in thresholds:
            row = np.where(x[:, j] >= thr, 1, -1).astype(np.int8)
            if row.tobytes() in seen or (-row).tobytes() in seen:
                continue
            seen.add(row.tobytes())
            stumps.append(Stump(j, float(thr)))
            rows.append(row)
    if not stumps:
        raise EmptySpaceError("every feature is constant; no stump splits the data")
    return StumpSpace(stumps, np.vstack(rows))


def weighted_error(h: Stump, data: Dataset, d: np.ndarray) -> float:
    """Weighted misclassification rate of a stump under distribution d."""
    d = np.asarray(d, dtype=float)
    if d.shape != (data.n_examples,):
        raise ValueError("d must assign one weight per example")
    if np.any(d < 0):
        raise ValueError("d must be nonnegative")
    if abs(float(d.sum()) - 1.0) > 1e-9:
        raise ValueError("d must sum to 1")
    return float(d[h.predict(data.features) != data.labels].sum())


def ensemble_margin(
    stages: Sequence[tuple[float, int]], space: StumpSpace, n: int
) -> float:
    """Margin of the staged ensemble on training example n."""
    if not 0 <= n < space.prediction_table.shape[1]:
        raise IndexError(f"example index {n} out of range")
    return float(sum(alpha * space.prediction_table[idx, n] for alpha, idx in stages))


def ensemble_margins(stages: Sequence[tuple[float, int]], space: StumpSpace) -> np.ndarray:
    """Margins on every training example at once (prediction-table path)."""
    out = np.zeros(space.prediction_table.shape[1])
    for alpha, idx in stages:
        out += alpha * space.prediction_table[idx]
    return out


def ensemble_margins_on(
    stages: Sequence[tuple[float, int]], space: StumpSpace, features: np.ndarray
) -> np.ndarray:
    """Margins on arbitrary feature rows (e.g. held-out data)."""
    out = np.zeros(features.shape[0])
    for alpha, idx in stages:
        out += alpha * space.stumps[idx].predict(features)
    return out


def predict_sign(margins: np.ndarray) -> np.ndarray:
    """Classifier output sign(H), with sign(0) = +1."""
    return np.where(margins >= 0, 1, -1)
