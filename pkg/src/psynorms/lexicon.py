"""Build and serialize the published lexicon of inferred word properties.

Dictionary entries are filtered by part of speech, loanword status and a
minimum corpus count, then annotated with the four clamped multi-view
predictions.
"""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .errors import DataError
from .evaluation import PROPERTY_ORDER
from .features import FeatureResources, FrequencyList
from .norms import SEVEN_POINT, PropertyKind, normalize_word
from .regression import MultiViewModel, predict_multiview

RATING_DECIMALS = 3

CONTENT_POS = ("noun", "verb", "adjective", "adverb")


class PosTag(Enum):
    NOUN = "noun"
    VERB = "verb"
    ADJECTIVE = "adjective"
    ADVERB = "adverb"
    OTHER = "other"

    @classmethod
    def from_slug(cls, slug: str) -> "PosTag":
        for tag in cls:
            if tag.value == slug:
                return tag
        known = ", ".join(t.value for t in cls)
        raise DataError(f"unknown part of speech {slug!r} (expected one of: {known})")


@dataclass(frozen=True)
class DictionaryEntry:
    word: str
    pos: PosTag


@dataclass(frozen=True)
class LexiconEntry:
    word: str
    pos: PosTag
    corpus_count: int
    ratings: dict[PropertyKind, float]


def load_dictionary(path: str | Path) -> list[DictionaryEntry]:
    """Load a ``word,pos`` CSV; a repeated word keeps its first entry."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"{path}: file not found")
    entries: list[DictionaryEntry] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file, expected header word,pos") from None
        if [cell.strip().lower() for cell in header] != ["word", "pos"]:
            raise DataError(f"{path}:1: expected header 'word,pos'")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise DataError(f"{path}:{lineno}: expected 2 fields, got {len(row)}")
            word = normalize_word(row[0])
            if not word or any(ch.isspace() for ch in word):
                raise DataError(f"{path}:{lineno}: invalid word {row[0]!r}")
            try:
                pos = PosTag.from_slug(row[1].strip().lower())
            except DataError as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from None
            if word in seen:
                continue
            seen.add(word)
            entries.append(DictionaryEntry(word=word, pos=pos))
    return entries


def build_lexicon(
    entries: list[DictionaryEntry],
    loanwords: frozenset[str],
    freq: FrequencyList,
    min_count: int,
    models: dict[PropertyKind, MultiViewModel],
    resources: FeatureResources,
) -> list[LexiconEntry]:
    """Filter dictionary entries and annotate survivors with inferred ratings.

    Keeps content words (noun, verb, adjective, adverb) that are not
    loanwords and reach ``min_count`` occurrences. Words that no model can
    score (out of vocabulary for every view of some model) are dropped;
    ratings are clamped to the models' common 1..7 scale.
    """
    if min_count < 0:
        raise DataError(f"min_count must be non-negative, got {min_count}")
    for kind in PROPERTY_ORDER:
        model = models.get(kind)
        if model is None:
            raise DataError(f"no trained model for property {kind.value!r}")
        if model.scale != SEVEN_POINT:
            raise DataError(
                f"model for {kind.value!r} is on scale "
                f"({model.scale.min}, {model.scale.max}); the lexicon needs (1, 7)"
            )
    lexicon: list[LexiconEntry] = []
    for entry in sorted(entries, key=lambda e: e.word):
        if entry.pos is PosTag.OTHER:
            continue
        if entry.word in loanwords:
            continue
        count = freq.count(entry.word)
        if count < min_count:
            continue
        ratings: dict[PropertyKind, float] = {}
        try:
            for kind in PROPERTY_ORDER:
                ratings[kind] = predict_multiview(
                    models[kind], entry.word, resources, clamp=True
                )
        except DataError:
            continue
        lexicon.append(
            LexiconEntry(
                word=entry.word, pos=entry.pos, corpus_count=count, ratings=ratings
            )
        )
    return lexicon


def pos_counts(lexicon: list[LexiconEntry]) -> dict[str, int]:
    counter = Counter(entry.pos.value for entry in lexicon)
    return {pos: counter.get(pos, 0) for pos in CONTENT_POS}


LEXICON_HEADER = [
    "word",
    "pos",
    "count",
    "concreteness",
    "aoa",
    "imageability",
    "subj_frequency",
]


def write_lexicon(lexicon: list[LexiconEntry], path: str | Path) -> None:
    """Write the lexicon CSV: ratings at 3 decimals, rows sorted by word."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(LEXICON_HEADER)
        for entry in sorted(lexicon, key=lambda e: e.word):
            writer.writerow(
                [entry.word, entry.pos.value, entry.corpus_count]
                + [
                    f"{entry.ratings[kind]:.{RATING_DECIMALS}f}"
                    for kind in PROPERTY_ORDER
                ]
            )


def read_lexicon(path: str | Path) -> list[LexiconEntry]:
    path = Path(path)
    if not path.exists():
        raise DataError(f"{path}: file not found")
    entries: list[LexiconEntry] = []
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty lexicon file") from None
        if [cell.strip().lower() for cell in header] != LEXICON_HEADER:
            raise DataError(f"{path}:1: unexpected lexicon header")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(LEXICON_HEADER):
                raise DataError(f"{path}:{lineno}: expected {len(LEXICON_HEADER)} fields")
            try:
                entries.append(
                    LexiconEntry(
                        word=row[0],
                        pos=PosTag.from_slug(row[1]),
                        corpus_count=int(row[2]),
                        ratings={
                            kind: float(row[3 + i])
                            for i, kind in enumerate(PROPERTY_ORDER)
                        },
                    )
                )
            except (ValueError, DataError) as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from None
    return entries


def rating_index(lexicon: list[LexiconEntry]) -> dict[str, dict[PropertyKind, float]]:
    """word -> ratings lookup used by the readability features."""
    return {entry.word: entry.ratings for entry in lexicon}
