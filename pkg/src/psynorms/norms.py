"""Human-rated word norms: loading, rescaling, orthographic adaptation, merging.

Rated word lists arrive as UTF-8 CSV files with a ``word,rating`` header.
European Portuguese sources are adapted to Brazilian Portuguese through an
explicit replacement/discard table before they are merged with native lists.
"""

from __future__ import annotations

import csv
import math
import unicodedata
from dataclasses import dataclass, replace
from enum import Enum
from importlib import resources
from pathlib import Path

from .errors import DataError


class PropertyKind(Enum):
    """The four subjective word properties handled by this package."""

    CONCRETENESS = "concreteness"
    AGE_OF_ACQUISITION = "aoa"
    IMAGEABILITY = "imageability"
    SUBJECTIVE_FREQUENCY = "subj_frequency"

    @classmethod
    def from_slug(cls, slug: str) -> "PropertyKind":
        for kind in cls:
            if kind.value == slug:
                return kind
        known = ", ".join(k.value for k in cls)
        raise DataError(f"unknown property {slug!r} (expected one of: {known})")


@dataclass(frozen=True)
class LikertScale:
    min: float
    max: float

    def __post_init__(self) -> None:
        if not (self.min < self.max):
            raise DataError(f"degenerate Likert scale ({self.min}, {self.max})")

    def contains(self, rating: float) -> bool:
        return self.min <= rating <= self.max

    def clamp(self, value: float) -> float:
        return min(self.max, max(self.min, value))


SEVEN_POINT = LikertScale(1.0, 7.0)
NINE_POINT = LikertScale(1.0, 9.0)


@dataclass(frozen=True)
class NormRecord:
    word: str
    rating: float
    source: str


@dataclass(frozen=True)
class NormDataset:
    property: PropertyKind
    scale: LikertScale
    records: tuple[NormRecord, ...]

    def __len__(self) -> int:
        return len(self.records)

    def words(self) -> list[str]:
        return [r.word for r in self.records]

    def ratings(self) -> list[float]:
        return [r.rating for r in self.records]


@dataclass(frozen=True)
class OrthographyMap:
    """EP -> BP word adaptations: rewrites plus words to drop entirely."""

    replacements: dict[str, str]
    discards: frozenset[str]

    def __post_init__(self) -> None:
        overlap = set(self.replacements) & set(self.discards)
        if overlap:
            raise DataError(
                "words listed both as replacement and discard: "
                + ", ".join(sorted(overlap))
            )
        for source, target in self.replacements.items():
            _check_word(target, context=f"replacement target for {source!r}")


EMPTY_ORTHOGRAPHY = OrthographyMap(replacements={}, discards=frozenset())


def normalize_word(raw: str) -> str:
    """NFC-normalize, trim and lowercase a word form."""
    return unicodedata.normalize("NFC", raw).strip().lower()


def _check_word(word: str, context: str = "word") -> None:
    if not word:
        raise DataError(f"empty {context}")
    if any(ch.isspace() for ch in word):
        raise DataError(f"{context} {word!r} contains whitespace")


def _read_csv_rows(path: str | Path, expected_header: list[str]):
    """Yield (line_number, row) for a two-column CSV, validating the header."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"{path}: file not found")
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file, expected header {expected_header}")
        if [cell.strip().lower() for cell in header] != expected_header:
            raise DataError(
                f"{path}:1: expected header {','.join(expected_header)!r}, "
                f"got {','.join(header)!r}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(expected_header):
                raise DataError(
                    f"{path}:{lineno}: expected {len(expected_header)} fields, got {len(row)}"
                )
            yield lineno, row


def load_norms(path: str | Path, property: PropertyKind, scale: LikertScale) -> NormDataset:
    """Load a rated word list, validating ratings against the declared scale.

    Words are NFC-normalized, trimmed and lowercased. A single file must not
    rate the same word twice.
    """
    path = Path(path)
    source = str(path)
    records: list[NormRecord] = []
    seen: set[str] = set()
    for lineno, (raw_word, raw_rating) in _read_csv_rows(path, ["word", "rating"]):
        word = normalize_word(raw_word)
        try:
            _check_word(word)
        except DataError as exc:
            raise DataError(f"{path}:{lineno}: {exc}") from None
        try:
            rating = float(raw_rating)
        except ValueError:
            raise DataError(
                f"{path}:{lineno}: malformed rating {raw_rating!r} "
                "(use a period decimal separator)"
            ) from None
        if not math.isfinite(rating) or not scale.contains(rating):
            raise DataError(
                f"{path}:{lineno}: rating {raw_rating} outside scale "
                f"[{scale.min}, {scale.max}]"
            )
        if word in seen:
            raise DataError(f"{path}:{lineno}: duplicate word {word!r}")
        seen.add(word)
        records.append(NormRecord(word=word, rating=rating, source=source))
    return NormDataset(property=property, scale=scale, records=tuple(records))


def write_norms(ds: NormDataset, path: str | Path) -> None:
    """Write a dataset as canonical ``word,rating`` CSV, sorted by word."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["word", "rating"])
        for record in sorted(ds.records, key=lambda r: r.word):
            writer.writerow([record.word, repr(float(record.rating))])


def convert_scale(ds: NormDataset, target: LikertScale) -> NormDataset:
    """Affinely remap every rating onto ``target``, preserving relative spacing."""
    if not ds.records:
        raise DataError("cannot convert the scale of an empty dataset")
    src = ds.scale
    factor = (target.max - target.min) / (src.max - src.min)
    records = tuple(
        replace(r, rating=target.min + (r.rating - src.min) * factor)
        for r in ds.records
    )
    return NormDataset(property=ds.property, scale=target, records=records)


def _combine_duplicates(records: list[NormRecord]) -> tuple[NormRecord, ...]:
    """Collapse repeated words to a single record with the mean rating."""
    by_word: dict[str, list[NormRecord]] = {}
    order: list[str] = []
    for record in records:
        if record.word not in by_word:
            by_word[record.word] = []
            order.append(record.word)
        by_word[record.word].append(record)
    combined = []
    for word in order:
        group = by_word[word]
        if len(group) == 1:
            combined.append(group[0])
        else:
            rating = sum(r.rating for r in group) / len(group)
            source = "+".join(sorted({r.source for r in group}))
            combined.append(NormRecord(word=word, rating=rating, source=source))
    return tuple(combined)


def apply_orthography(ds: NormDataset, m: OrthographyMap) -> NormDataset:
    """Rewrite EP forms to BP, drop discarded words, merge rewrite collisions."""
    kept: list[NormRecord] = []
    for record in ds.records:
        if record.word in m.discards:
            continue
        target = m.replacements.get(record.word)
        if target is not None:
            record = replace(record, word=target)
        kept.append(record)
    return NormDataset(
        property=ds.property, scale=ds.scale, records=_combine_duplicates(kept)
    )


def merge_datasets(a: NormDataset, b: NormDataset) -> NormDataset:
    """Union two same-property, same-scale datasets; shared words get the mean rating."""
    if a.property is not b.property:
        raise DataError(
            f"property mismatch: {a.property.value} vs {b.property.value}"
        )
    if a.scale != b.scale:
        raise DataError(
            f"scale mismatch: ({a.scale.min}, {a.scale.max}) vs "
            f"({b.scale.min}, {b.scale.max}); convert_scale first"
        )
    merged = _combine_duplicates(list(a.records) + list(b.records))
    records = tuple(sorted(merged, key=lambda r: r.word))
    return NormDataset(property=a.property, scale=a.scale, records=records)


def load_orthography_map(path: str | Path) -> OrthographyMap:
    """Load an ``ep_form,bp_form`` CSV; an empty bp_form marks a discard."""
    path = Path(path)
    replacements: dict[str, str] = {}
    discards: set[str] = set()
    for lineno, (raw_ep, raw_bp) in _read_csv_rows(path, ["ep_form", "bp_form"]):
        ep = normalize_word(raw_ep)
        try:
            _check_word(ep, context="ep_form")
        except DataError as exc:
            raise DataError(f"{path}:{lineno}: {exc}") from None
        if ep in replacements or ep in discards:
            raise DataError(f"{path}:{lineno}: duplicate ep_form {ep!r}")
        bp = normalize_word(raw_bp)
        if not bp:
            discards.add(ep)
        else:
            replacements[ep] = bp
    return OrthographyMap(replacements=replacements, discards=frozenset(discards))


def starter_orthography() -> OrthographyMap:
    """The small EP -> BP adaptation table bundled with the package."""
    with resources.as_file(
        resources.files("psynorms.data").joinpath("ep_bp_starter.csv")
    ) as path:
        return load_orthography_map(path)
