"""Text readability features and grade-level classification.

Covers six classic formulas (Flesch adapted to Brazilian Portuguese, Honore,
Brunet, Dale-Chall, Gunning Fog, MATTR) plus the mean and population std of
the inferred word properties over a text, and a one-vs-rest kernel
regularized least-squares classifier with a Gaussian kernel standing in for
an RBF-kernel SVM.
"""

from __future__ import annotations

import csv
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np
import scipy.linalg

from .errors import DataError, NumericalError
from .evaluation import PROPERTY_ORDER, make_folds
from .norms import PropertyKind
from .regression import Standardizer, standardize_columns

DEFAULT_MATTR_WINDOW = 50
SCALE_MIDPOINT = 4.0
# Honore's statistic diverges when every type is a hapax; cap the ratio.
MAX_HAPAX_RATIO = 0.9999

_SENTENCE_END = re.compile(r"[.!?…]+(?=\s|$)")
_TOKEN = re.compile(r"[^\W\d_]+(?:-+[^\W\d_]+)*", re.UNICODE)
_VOWELS = set("aáàâãeéêiíoóôõuúüy")


class GradeLabel(Enum):
    G3 = 3
    G4 = 4
    G5 = 5
    G6 = 6

    @classmethod
    def from_value(cls, value: int) -> "GradeLabel":
        for label in cls:
            if label.value == value:
                return label
        raise DataError(f"unknown grade {value!r} (expected 3..6)")


GRADE_ORDER = (GradeLabel.G3, GradeLabel.G4, GradeLabel.G5, GradeLabel.G6)


@dataclass(frozen=True)
class TextProfile:
    tokens: tuple[str, ...]
    sentences: int
    type_counts: Counter
    syllable_counts: tuple[int, ...]

    @property
    def word_count(self) -> int:
        return len(self.tokens)


@dataclass
class TextFeatures:
    values: dict[str, float]
    lexicon_tokens: int = 0  # token occurrences covered by the lexicon

    @property
    def no_lexicon_coverage(self) -> bool:
        return self.lexicon_tokens == 0


CLASSIC_FEATURES = ("flesch_bp", "honore", "brunet", "dale_chall", "gunning_fog", "mattr")
PSYCHOLINGUISTIC_FEATURES = tuple(
    f"{stat}_{kind.value}" for kind in PROPERTY_ORDER for stat in ("mean", "std")
)
FEATURE_ORDER = CLASSIC_FEATURES + PSYCHOLINGUISTIC_FEATURES


def count_syllables(token: str) -> int:
    """Estimate syllables as maximal vowel groups, at least one per token."""
    groups = 0
    in_group = False
    for ch in token:
        if ch in _VOWELS:
            if not in_group:
                groups += 1
            in_group = True
        else:
            in_group = False
    return max(groups, 1)


def profile_text(text: str) -> TextProfile:
    """Tokenize and count: sentences, lowercased letter-run tokens, syllables."""
    if not text.strip():
        raise DataError("empty text")
    segments = _SENTENCE_END.split(text)
    sentence_tokens = [
        [t.lower() for t in _TOKEN.findall(segment)] for segment in segments
    ]
    tokens = tuple(t for seg in sentence_tokens for t in seg)
    if not tokens:
        raise DataError("text contains no word tokens")
    sentences = sum(1 for seg in sentence_tokens if seg)
    return TextProfile(
        tokens=tokens,
        sentences=sentences,
        type_counts=Counter(tokens),
        syllable_counts=tuple(count_syllables(t) for t in tokens),
    )


def mattr(tokens, window: int = DEFAULT_MATTR_WINDOW) -> float:
    """Moving-average type-token ratio over all windows of the given length.

    The window shrinks to the text length for short texts, making the value
    equal the plain type-token ratio.
    """
    if window < 1:
        raise DataError(f"window must be positive, got {window}")
    n = len(tokens)
    if n == 0:
        raise DataError("no tokens")
    w = min(window, n)
    counts = Counter(tokens[:w])
    total = len(counts)
    for i in range(n - w):
        counts[tokens[i]] -= 1
        if counts[tokens[i]] == 0:
            del counts[tokens[i]]
        counts[tokens[i + w]] += 1
        total += len(counts)
    return total / ((n - w + 1) * w)


def classic_formulas(
    p: TextProfile,
    easy_words: frozenset[str],
    mattr_window: int = DEFAULT_MATTR_WINDOW,
) -> dict[str, float]:
    """The six classic readability statistics for one profiled text."""
    words = p.word_count
    sentences = p.sentences
    syllables = sum(p.syllable_counts)
    types = len(p.type_counts)
    hapaxes = sum(1 for count in p.type_counts.values() if count == 1)
    hard = sum(1 for t in p.tokens if t not in easy_words)
    complex_words = sum(1 for s in p.syllable_counts if s >= 3)

    flesch_bp = 248.835 - 1.015 * (words / sentences) - 84.6 * (syllables / words)
    hapax_ratio = min(hapaxes / types, MAX_HAPAX_RATIO)
    honore = 100.0 * math.log(words) / (1.0 - hapax_ratio)
    brunet = words ** (types ** -0.165)
    dale_chall = 0.1579 * (100.0 * hard / words) + 0.0496 * (words / sentences)
    gunning_fog = 0.4 * ((words / sentences) + 100.0 * complex_words / words)
    return {
        "flesch_bp": flesch_bp,
        "honore": honore,
        "brunet": brunet,
        "dale_chall": dale_chall,
        "gunning_fog": gunning_fog,
        "mattr": mattr(p.tokens, mattr_window),
    }


def psycholinguistic_features(
    p: TextProfile, lexicon_index: dict[str, dict[PropertyKind, float]]
) -> TextFeatures:
    """Mean and population std of each inferred property over covered tokens.

    Token occurrences are weighted by their counts. With no coverage at all,
    every statistic falls back to the scale midpoint and the coverage flag
    (``lexicon_tokens == 0``) is raised.
    """
    covered = {
        word: count for word, count in p.type_counts.items() if word in lexicon_index
    }
    total = sum(covered.values())
    values: dict[str, float] = {}
    for kind in PROPERTY_ORDER:
        if total == 0:
            values[f"mean_{kind.value}"] = SCALE_MIDPOINT
            values[f"std_{kind.value}"] = SCALE_MIDPOINT
            continue
        ratings = np.array([lexicon_index[w][kind] for w in covered], dtype=np.float64)
        weights = np.array([covered[w] for w in covered], dtype=np.float64)
        mean = float(np.average(ratings, weights=weights))
        variance = float(np.average((ratings - mean) ** 2, weights=weights))
        values[f"mean_{kind.value}"] = mean
        values[f"std_{kind.value}"] = math.sqrt(variance)
    return TextFeatures(values=values, lexicon_tokens=total)


def extract_features(
    text: str,
    easy_words: frozenset[str],
    lexicon_index: dict[str, dict[PropertyKind, float]],
    mattr_window: int = DEFAULT_MATTR_WINDOW,
) -> TextFeatures:
    """All text features: the six classic formulas plus the property statistics."""
    profile = profile_text(text)
    features = psycholinguistic_features(profile, lexicon_index)
    features.values.update(classic_formulas(profile, easy_words, mattr_window))
    return features


def feature_matrix(corpus, names) -> np.ndarray:
    try:
        return np.array(
            [[features.values[name] for name in names] for features, _ in corpus],
            dtype=np.float64,
        )
    except KeyError as exc:
        raise DataError(f"text features missing {exc.args[0]!r}") from None


@dataclass(frozen=True)
class GradeClassifier:
    """One-vs-rest kernel regularized least squares with a Gaussian kernel."""

    standardizer: Standardizer
    train_points: np.ndarray
    alphas: np.ndarray  # n_train x n_classes
    classes: tuple[GradeLabel, ...]
    gamma: float
    lam: float

    def scores(self, X: np.ndarray) -> np.ndarray:
        Z = self.standardizer.transform(np.asarray(X, dtype=np.float64))
        kernel = _gaussian_kernel(Z, self.train_points, self.gamma)
        return kernel @ self.alphas

    def predict(self, X: np.ndarray) -> list[GradeLabel]:
        scores = self.scores(X)
        # argmax returns the first maximum; classes are ordered by grade, so
        # ties resolve to the lower grade.
        return [self.classes[i] for i in np.argmax(scores, axis=1)]


def _gaussian_kernel(a: np.ndarray, b: np.ndarray, gamma: float) -> np.ndarray:
    sq_dists = (
        np.sum(a * a, axis=1)[:, None]
        + np.sum(b * b, axis=1)[None, :]
        - 2.0 * (a @ b.T)
    )
    return np.exp(-gamma * np.maximum(sq_dists, 0.0))


def fit_grade_classifier(
    X: np.ndarray,
    labels: list[GradeLabel],
    gamma: float | None = None,
    lam: float = 1.0,
) -> GradeClassifier:
    """Fit the kernel classifier on a feature matrix and grade labels."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] != len(labels):
        raise DataError("feature matrix and labels disagree")
    classes = tuple(c for c in GRADE_ORDER if c in set(labels))
    if len(classes) < 2:
        raise DataError("need at least 2 grade classes to train a classifier")
    if lam <= 0:
        raise DataError(f"lambda must be positive for the kernel solve, got {lam}")
    if gamma is None:
        gamma = 1.0 / X.shape[1]
    if gamma < 0:
        raise DataError(f"gamma must be non-negative, got {gamma}")
    standardizer = standardize_columns(X)
    Z = standardizer.transform(X)
    kernel = _gaussian_kernel(Z, Z, gamma)
    targets = np.full((len(labels), len(classes)), -1.0)
    for row, label in enumerate(labels):
        targets[row, classes.index(label)] = 1.0
    try:
        factor = scipy.linalg.cho_factor(
            kernel + lam * np.eye(len(labels)), lower=True
        )
        alphas = scipy.linalg.cho_solve(factor, targets)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"kernel system factorization failed: {exc}") from None
    return GradeClassifier(
        standardizer=standardizer,
        train_points=Z,
        alphas=alphas,
        classes=classes,
        gamma=gamma,
        lam=lam,
    )


def train_grade_classifier(
    corpus, gamma: float | None = None, lam: float = 1.0
) -> GradeClassifier:
    """Fit on a list of (TextFeatures, GradeLabel) using every feature."""
    if len(corpus) < 8:
        raise DataError(f"need at least 8 labeled texts, got {len(corpus)}")
    X = feature_matrix(corpus, FEATURE_ORDER)
    return fit_grade_classifier(X, [label for _, label in corpus], gamma, lam)


def macro_f1(gold: list[GradeLabel], pred: list[GradeLabel]) -> float:
    """Macro-averaged F1 over the classes present in gold or predictions."""
    if len(gold) != len(pred) or not gold:
        raise DataError("gold and predicted label lists must match")
    scores = []
    for label in GRADE_ORDER:
        tp = sum(1 for g, p in zip(gold, pred) if g is label and p is label)
        fp = sum(1 for g, p in zip(gold, pred) if g is not label and p is label)
        fn = sum(1 for g, p in zip(gold, pred) if g is label and p is not label)
        if tp + fp + fn == 0:
            continue
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        scores.append(f1)
    return float(np.mean(scores))


def default_feature_subsets() -> dict[str, tuple[str, ...]]:
    """Named subsets: each classic formula, each property pair, all properties."""
    subsets: dict[str, tuple[str, ...]] = {name: (name,) for name in CLASSIC_FEATURES}
    for kind in PROPERTY_ORDER:
        subsets[kind.value] = (f"mean_{kind.value}", f"std_{kind.value}")
    subsets["psycholinguistics"] = PSYCHOLINGUISTIC_FEATURES
    return subsets


@dataclass
class SubsetScore:
    name: str
    features: tuple[str, ...]
    f1: float
    fold_f1: list[float] = field(default_factory=list)


def evaluate_features(
    corpus,
    feature_subsets: dict[str, tuple[str, ...]] | None = None,
    folds: int = 10,
    gamma: float | None = None,
    lam: float = 1.0,
    seed: int = 0,
) -> list[SubsetScore]:
    """Cross-validated macro-F1 of the grade classifier per feature subset."""
    if feature_subsets is None:
        feature_subsets = default_feature_subsets()
    labels = [label for _, label in corpus]
    if len(set(labels)) < 2:
        raise DataError("corpus must contain at least 2 grade classes")
    plan = make_folds(len(corpus), folds, 1, seed)
    results = []
    for name, names in feature_subsets.items():
        X = feature_matrix(corpus, names)
        fold_scores = []
        for test_fold in plan.assignments[0]:
            test = set(test_fold)
            train_idx = [i for i in range(len(corpus)) if i not in test]
            test_idx = list(test_fold)
            classifier = fit_grade_classifier(
                X[train_idx], [labels[i] for i in train_idx], gamma, lam
            )
            predictions = classifier.predict(X[test_idx])
            fold_scores.append(macro_f1([labels[i] for i in test_idx], predictions))
        results.append(
            SubsetScore(
                name=name,
                features=names,
                f1=float(np.mean(fold_scores)),
                fold_f1=fold_scores,
            )
        )
    return results


def render_f1_table(scores: list[SubsetScore]) -> str:
    """One row of macro-F1 values, one column per feature subset."""
    width = max(len(s.name) for s in scores)
    lines = ["Feature subset".ljust(width + 2) + "F1"]
    for score in scores:
        lines.append(f"{score.name.ljust(width + 2)}{score.f1:.2f}")
    return "\n".join(lines) + "\n"


def load_labeled_corpus(
    manifest: str | Path,
    easy_words: frozenset[str],
    lexicon_index: dict[str, dict[PropertyKind, float]],
    mattr_window: int = DEFAULT_MATTR_WINDOW,
) -> list[tuple[TextFeatures, GradeLabel]]:
    """Load a ``file,grade`` manifest; file paths are relative to the manifest."""
    manifest = Path(manifest)
    if not manifest.exists():
        raise DataError(f"{manifest}: file not found")
    corpus = []
    with open(manifest, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{manifest}: empty manifest") from None
        if [cell.strip().lower() for cell in header] != ["file", "grade"]:
            raise DataError(f"{manifest}:1: expected header 'file,grade'")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise DataError(f"{manifest}:{lineno}: expected 2 fields")
            text_path = manifest.parent / row[0].strip()
            if not text_path.exists():
                raise DataError(f"{manifest}:{lineno}: text file {text_path} not found")
            try:
                grade = GradeLabel.from_value(int(row[1]))
            except (ValueError, DataError):
                raise DataError(f"{manifest}:{lineno}: bad grade {row[1]!r}") from None
            text = text_path.read_text(encoding="utf-8")
            try:
                features = extract_features(text, easy_words, lexicon_index, mattr_window)
            except DataError as exc:
                raise DataError(f"{text_path}: {exc}") from None
            corpus.append((features, grade))
    return corpus
