"""Per-word feature views: a 13-dimensional lexical view and two embedding views.

The lexical view packs six smoothed log counts, the word length and six
grade-level dictionary indicators. Embedding views are raw vectors looked up
in pre-trained plain-text embedding files; out-of-vocabulary words yield
``None`` rather than a fabricated zero vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import DataError
from .norms import normalize_word

LEXICAL_DIM = 13
GRADE_LEVELS = 6


class ViewKind(Enum):
    LEXICAL = "lexical"
    EMBEDDING_A = "embedding_a"
    EMBEDDING_B = "embedding_b"

    @classmethod
    def from_slug(cls, slug: str) -> "ViewKind":
        for kind in cls:
            if kind.value == slug:
                return kind
        known = ", ".join(k.value for k in cls)
        raise DataError(f"unknown view {slug!r} (expected one of: {known})")


EMBEDDING_VIEWS = (ViewKind.EMBEDDING_A, ViewKind.EMBEDDING_B)
ALL_VIEWS = (ViewKind.LEXICAL,) + EMBEDDING_VIEWS


@dataclass(frozen=True)
class FeatureVector:
    view: ViewKind
    values: np.ndarray


@dataclass(frozen=True)
class FrequencyList:
    """Corpus counts per word, with optional per-word document diversity."""

    counts: dict[str, int]
    total_tokens: int
    name: str
    diversity: dict[str, int] = field(default_factory=dict)

    def count(self, word: str) -> int:
        return self.counts.get(word, 0)


EMPTY_FREQUENCIES = FrequencyList(counts={}, total_tokens=0, name="empty")


@dataclass(frozen=True)
class GradeLexicons:
    """Word sets from six school dictionaries, ordered by grade level."""

    per_grade: tuple[frozenset[str], ...]

    def __post_init__(self) -> None:
        if len(self.per_grade) != GRADE_LEVELS:
            raise DataError(
                f"expected {GRADE_LEVELS} grade lexicons, got {len(self.per_grade)}"
            )


EMPTY_GRADES = GradeLexicons(per_grade=tuple(frozenset() for _ in range(GRADE_LEVELS)))


@dataclass(frozen=True)
class EmbeddingModel:
    dimension: int
    vectors: dict[str, np.ndarray]
    kind: ViewKind
    duplicates: int = 0

    def __contains__(self, word: str) -> bool:
        return word in self.vectors


@dataclass(frozen=True)
class LexicalResources:
    """The six count sources plus grade lexicons feeding the lexical view."""

    subtlex: FrequencyList = EMPTY_FREQUENCIES
    subimdb: FrequencyList = EMPTY_FREQUENCIES
    written: FrequencyList = EMPTY_FREQUENCIES
    spoken: FrequencyList = EMPTY_FREQUENCIES
    mixed: FrequencyList = EMPTY_FREQUENCIES
    grades: GradeLexicons = EMPTY_GRADES


@dataclass(frozen=True)
class FeatureResources:
    """Everything needed to featurize a word under any view."""

    lexical: LexicalResources = LexicalResources()
    embeddings: dict[ViewKind, EmbeddingModel] = field(default_factory=dict)

    def vector(self, word: str, view: ViewKind) -> np.ndarray | None:
        """The feature vector of ``word`` under ``view``; None when out of vocabulary."""
        if view is ViewKind.LEXICAL:
            return lexical_view(word, self.lexical).values
        model = self.embeddings.get(view)
        if model is None:
            raise DataError(f"no embedding model configured for view {view.value!r}")
        hit = embedding_view(word, model)
        return None if hit is None else hit.values

    def dimension(self, view: ViewKind) -> int:
        if view is ViewKind.LEXICAL:
            return LEXICAL_DIM
        model = self.embeddings.get(view)
        if model is None:
            raise DataError(f"no embedding model configured for view {view.value!r}")
        return model.dimension


def load_frequency_list(path: str | Path, name: str) -> FrequencyList:
    """Load a ``word<TAB>count[<TAB>diversity]`` list.

    An optional ``#total=N`` header supplies the corpus token total; without
    it the total is the sum of counts. Repeated words accumulate.
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"{path}: file not found")
    counts: dict[str, int] = {}
    diversity: dict[str, int] = {}
    declared_total: int | None = None
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("total="):
                    try:
                        declared_total = int(body[len("total="):])
                    except ValueError:
                        raise DataError(f"{path}:{lineno}: malformed total header") from None
                    if declared_total < 0:
                        raise DataError(f"{path}:{lineno}: negative total")
                continue
            fields = line.split("\t")
            if len(fields) not in (2, 3):
                raise DataError(
                    f"{path}:{lineno}: expected word<TAB>count[<TAB>diversity]"
                )
            word = normalize_word(fields[0])
            if not word:
                raise DataError(f"{path}:{lineno}: empty word")
            try:
                count = int(fields[1])
                docs = int(fields[2]) if len(fields) == 3 else 0
            except ValueError:
                raise DataError(f"{path}:{lineno}: malformed count") from None
            if count < 0 or docs < 0:
                raise DataError(f"{path}:{lineno}: negative count")
            if count > 0:
                counts[word] = counts.get(word, 0) + count
            if docs > 0:
                diversity[word] = diversity.get(word, 0) + docs
    total = declared_total if declared_total is not None else sum(counts.values())
    largest = max(counts.values(), default=0)
    if total < largest:
        raise DataError(
            f"{path}: declared total {total} is below the largest single count {largest}"
        )
    return FrequencyList(counts=counts, total_tokens=total, name=name, diversity=diversity)


def log_frequency(fl: FrequencyList, word: str) -> float:
    """ln(count + 1); zero for absent words, monotone in the count."""
    return math.log(fl.count(word) + 1)


def _log_diversity(fl: FrequencyList, word: str) -> float:
    return math.log(fl.diversity.get(word, 0) + 1)


def lexical_view(word: str, sources: LexicalResources) -> FeatureVector:
    """The 13-dimensional lexical feature vector, defined for every word."""
    values = np.empty(LEXICAL_DIM, dtype=np.float64)
    values[0] = log_frequency(sources.subtlex, word)
    values[1] = _log_diversity(sources.subtlex, word)
    values[2] = log_frequency(sources.subimdb, word)
    values[3] = log_frequency(sources.written, word)
    values[4] = log_frequency(sources.spoken, word)
    values[5] = log_frequency(sources.mixed, word)
    values[6] = float(len(word))
    for grade, lexicon in enumerate(sources.grades.per_grade):
        values[7 + grade] = 1.0 if word in lexicon else 0.0
    return FeatureVector(view=ViewKind.LEXICAL, values=values)


def load_embeddings(path: str | Path, kind: ViewKind) -> EmbeddingModel:
    """Load a plain-text embedding table: one ``word v1 .. vd`` row per line.

    A leading ``vocab_size dimension`` line is honored when present, otherwise
    the dimension is inferred from the first row. Duplicate words keep their
    first vector; the number of dropped duplicates is recorded on the model.
    """
    if kind is ViewKind.LEXICAL:
        raise DataError("the lexical view is computed, not loaded from an embedding file")
    path = Path(path)
    if not path.exists():
        raise DataError(f"{path}: file not found")
    vectors: dict[str, np.ndarray] = {}
    dimension: int | None = None
    duplicates = 0
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            parts = line.split()
            if not parts:
                continue
            if lineno == 1 and len(parts) == 2:
                try:
                    int(parts[0])
                    dimension = int(parts[1])
                    if dimension <= 0:
                        raise DataError(f"{path}:1: non-positive dimension in header")
                    continue
                except ValueError:
                    pass  # not a header; fall through and parse as a data row
            word = parts[0]
            if dimension is None:
                dimension = len(parts) - 1
                if dimension <= 0:
                    raise DataError(f"{path}:{lineno}: row has no vector components")
            if len(parts) - 1 != dimension:
                raise DataError(
                    f"{path}:{lineno}: expected {dimension} components, got {len(parts) - 1}"
                )
            try:
                vector = np.array([float(p) for p in parts[1:]], dtype=np.float64)
            except ValueError:
                raise DataError(f"{path}:{lineno}: malformed vector component") from None
            if not np.all(np.isfinite(vector)):
                raise DataError(f"{path}:{lineno}: non-finite vector component")
            if word in vectors:
                duplicates += 1
                continue
            vectors[word] = vector
    if dimension is None:
        raise DataError(f"{path}: no vectors found")
    return EmbeddingModel(dimension=dimension, vectors=vectors, kind=kind, duplicates=duplicates)


def write_embeddings(model: EmbeddingModel, path: str | Path) -> None:
    """Write a model back to the plain-text format (with a header line)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(f"{len(model.vectors)} {model.dimension}\n")
        for word, vector in model.vectors.items():
            handle.write(word + " " + " ".join(repr(float(v)) for v in vector) + "\n")


def embedding_view(word: str, model: EmbeddingModel) -> FeatureVector | None:
    """The stored vector verbatim, or None when the word is out of vocabulary."""
    vector = model.vectors.get(word)
    if vector is None:
        return None
    return FeatureVector(view=model.kind, values=vector)


def load_word_list(path: str | Path) -> frozenset[str]:
    """Load a one-word-per-line list, normalized like norm words."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"{path}: file not found")
    words = set()
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            word = normalize_word(line)
            if word:
                words.add(word)
    return frozenset(words)


def load_grade_lexicons(paths: list[str | Path]) -> GradeLexicons:
    """Load the six grade-level word lists, supplied in grade order."""
    if len(paths) != GRADE_LEVELS:
        raise DataError(f"expected {GRADE_LEVELS} grade lexicon files, got {len(paths)}")
    return GradeLexicons(per_grade=tuple(load_word_list(p) for p in paths))
