"""Closed-form L2-regularized least squares per view, fused by averaging.

The solve works in standardized coordinates: columns are scaled to unit
population variance, targets are centered, and the regularized Gram system
(Z'Z + lambda*I) w = Z'(y - ybar) is factorized with a Cholesky
decomposition. The intercept is the target mean and is never penalized.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.linalg

from .errors import DataError, NumericalError
from .features import ALL_VIEWS, FeatureResources, FeatureVector, ViewKind
from .norms import LikertScale, NormDataset, PropertyKind

DEFAULT_LAMBDA = 1.0

MODEL_FORMAT = "psynorms-model-v1"


@dataclass(frozen=True)
class DesignMatrix:
    entries: np.ndarray
    targets: np.ndarray

    def __post_init__(self) -> None:
        entries = np.asarray(self.entries, dtype=np.float64)
        targets = np.asarray(self.targets, dtype=np.float64)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "targets", targets)
        if entries.ndim != 2:
            raise DataError("design matrix must be two-dimensional")
        n, _ = entries.shape
        if targets.shape != (n,):
            raise DataError(f"targets length {targets.shape} does not match {n} rows")
        if n < 2:
            raise DataError("at least 2 training rows required")
        if not np.all(np.isfinite(entries)) or not np.all(np.isfinite(targets)):
            raise NumericalError("non-finite value in design matrix or targets")

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def d(self) -> int:
        return self.entries.shape[1]


@dataclass(frozen=True)
class Standardizer:
    means: np.ndarray
    stds: np.ndarray

    def transform(self, values: np.ndarray) -> np.ndarray:
        return (values - self.means) / self.stds


@dataclass(frozen=True)
class RidgeModel:
    weights: np.ndarray
    intercept: float
    lam: float
    standardizer: Standardizer
    view: ViewKind
    rows: int


@dataclass(frozen=True)
class MultiViewModel:
    property: PropertyKind
    scale: LikertScale
    submodels: tuple[RidgeModel, ...]

    def __post_init__(self) -> None:
        views = [m.view for m in self.submodels]
        if not 1 <= len(views) <= 3 or len(set(views)) != len(views):
            raise DataError("a multi-view model needs 1 to 3 submodels with distinct views")


def standardize_columns(entries: np.ndarray) -> Standardizer:
    """Columnwise mean and population std; constant columns get std 1."""
    means = entries.mean(axis=0)
    stds = entries.std(axis=0)
    stds = np.where(stds == 0.0, 1.0, stds)
    return Standardizer(means=means, stds=stds)


def fit_standardizer(X: DesignMatrix) -> Standardizer:
    return standardize_columns(X.entries)


def train_ridge(X: DesignMatrix, lam: float, view: ViewKind) -> RidgeModel:
    """Fit one regularized least-squares model on standardized columns."""
    if lam < 0:
        raise DataError(f"lambda must be non-negative, got {lam}")
    standardizer = fit_standardizer(X)
    Z = standardizer.transform(X.entries)
    intercept = float(X.targets.mean())
    centered = X.targets - intercept
    gram = Z.T @ Z + lam * np.eye(X.d)
    rhs = Z.T @ centered
    try:
        factor = scipy.linalg.cho_factor(gram, lower=True)
        weights = scipy.linalg.cho_solve(factor, rhs)
    except np.linalg.LinAlgError as exc:
        if lam == 0:
            raise NumericalError(
                "rank-deficient system: the standardized Gram matrix is singular "
                "(set lambda > 0)"
            ) from None
        raise NumericalError(f"Cholesky factorization failed: {exc}") from None
    if not np.all(np.isfinite(weights)):
        raise NumericalError("non-finite weights from the ridge solve")
    return RidgeModel(
        weights=weights,
        intercept=intercept,
        lam=lam,
        standardizer=standardizer,
        view=view,
        rows=X.n,
    )


def predict_ridge(m: RidgeModel, x: FeatureVector) -> float:
    if x.view is not m.view:
        raise DataError(f"view mismatch: model {m.view.value}, vector {x.view.value}")
    if x.values.shape != m.weights.shape:
        raise DataError(
            f"dimension mismatch: model {m.weights.shape[0]}, vector {x.values.shape[0]}"
        )
    return float(m.intercept + m.weights @ m.standardizer.transform(x.values))


def design_for_view(
    data: NormDataset, view: ViewKind, resources: FeatureResources
) -> tuple[DesignMatrix, int]:
    """Per-view design matrix; rows whose word lacks the view are excluded."""
    rows = []
    targets = []
    skipped = 0
    for record in data.records:
        vector = resources.vector(record.word, view)
        if vector is None:
            skipped += 1
            continue
        rows.append(vector)
        targets.append(record.rating)
    if len(rows) < 2:
        raise DataError(
            f"view {view.value!r}: fewer than 2 usable training rows "
            f"({skipped} of {len(data)} words out of vocabulary)"
        )
    return DesignMatrix(entries=np.array(rows), targets=np.array(targets)), skipped


def train_multiview(
    property: PropertyKind,
    data: NormDataset,
    views: tuple[ViewKind, ...],
    resources: FeatureResources,
    lam: float = DEFAULT_LAMBDA,
) -> MultiViewModel:
    """One ridge model per requested view over the shared rating targets."""
    if not data.records:
        raise DataError("empty training dataset")
    if not views:
        raise DataError("at least one view is required")
    submodels = []
    for view in sorted(set(views), key=ALL_VIEWS.index):
        X, _ = design_for_view(data, view, resources)
        submodels.append(train_ridge(X, lam, view))
    return MultiViewModel(property=property, scale=data.scale, submodels=tuple(submodels))


def predict_multiview(
    m: MultiViewModel,
    word: str,
    resources: FeatureResources,
    clamp: bool = False,
) -> float:
    """Average the predictions of every submodel whose view covers the word.

    Clamping to the model's rating scale is opt-in: lexicon building clamps,
    evaluation scores the raw average.
    """
    predictions = []
    for submodel in m.submodels:
        vector = resources.vector(word, submodel.view)
        if vector is None:
            continue
        predictions.append(
            predict_ridge(submodel, FeatureVector(view=submodel.view, values=vector))
        )
    if not predictions:
        raise DataError(f"word {word!r} is out of vocabulary for every view of the model")
    value = sum(predictions) / len(predictions)
    return m.scale.clamp(value) if clamp else value


def save_model(m: MultiViewModel, path: str | Path) -> None:
    """Persist a model as a single JSON archive with full-precision floats."""
    document = {
        "format": MODEL_FORMAT,
        "property": m.property.value,
        "scale": {"min": m.scale.min, "max": m.scale.max},
        "views": [
            {
                "view": sub.view.value,
                "lambda": sub.lam,
                "rows": sub.rows,
                "means": sub.standardizer.means.tolist(),
                "stds": sub.standardizer.stds.tolist(),
                "weights": sub.weights.tolist(),
                "intercept": sub.intercept,
            }
            for sub in m.submodels
        ],
    }
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(document, handle, indent=2, sort_keys=True)
        handle.write("\n")


def load_model(path: str | Path) -> MultiViewModel:
    path = Path(path)
    if not path.exists():
        raise DataError(f"{path}: file not found")
    with open(path, encoding="utf-8") as handle:
        document = json.load(handle)
    if document.get("format") != MODEL_FORMAT:
        raise DataError(f"{path}: not a {MODEL_FORMAT} archive")
    submodels = tuple(
        RidgeModel(
            weights=np.array(entry["weights"], dtype=np.float64),
            intercept=float(entry["intercept"]),
            lam=float(entry["lambda"]),
            standardizer=Standardizer(
                means=np.array(entry["means"], dtype=np.float64),
                stds=np.array(entry["stds"], dtype=np.float64),
            ),
            view=ViewKind.from_slug(entry["view"]),
            rows=int(entry["rows"]),
        )
        for entry in document["views"]
    )
    return MultiViewModel(
        property=PropertyKind.from_slug(document["property"]),
        scale=LikertScale(float(document["scale"]["min"]), float(document["scale"]["max"])),
        submodels=submodels,
    )
