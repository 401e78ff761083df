"""Run configuration: an INI file with one section per pipeline stage.

Relative paths in the file are resolved against the config file's directory.
Command-line flags override environment variables (prefix ``PSYNORMS_``),
which override the file, which overrides built-in defaults.
"""

from __future__ import annotations

import configparser
import shlex
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError
from .features import GRADE_LEVELS, ViewKind
from .norms import SEVEN_POINT, LikertScale, PropertyKind
from .readability import DEFAULT_MATTR_WINDOW
from .regression import DEFAULT_LAMBDA

FREQUENCY_SOURCES = ("subtlex", "subimdb", "written", "spoken", "mixed")

DEFAULT_SEED = 20
DEFAULT_CV_K = 5
DEFAULT_CV_REPS = 20
DEFAULT_MIN_COUNT = 8
DEFAULT_READABILITY_FOLDS = 10


@dataclass(frozen=True)
class SourceSpec:
    path: Path
    scale: LikertScale
    orthography: bool


@dataclass
class RunConfig:
    out_dir: Path = Path("out")
    prepared_dir: Path | None = None  # defaults to out_dir / "prepared"
    models_dir: Path | None = None  # defaults to out_dir / "models"
    target_scale: LikertScale = SEVEN_POINT
    orthography_path: Path | None = None  # None -> bundled starter map
    sources: dict[PropertyKind, list[SourceSpec]] = field(default_factory=dict)
    frequency_paths: dict[str, Path] = field(default_factory=dict)
    grade_lexicon_paths: tuple[Path, ...] | None = None
    embedding_paths: dict[ViewKind, Path] = field(default_factory=dict)
    lam: float = DEFAULT_LAMBDA
    default_views: tuple[ViewKind, ...] = tuple(ViewKind)
    property_views: dict[PropertyKind, tuple[ViewKind, ...]] = field(default_factory=dict)
    seed: int = DEFAULT_SEED
    cv_k: int = DEFAULT_CV_K
    cv_reps: int = DEFAULT_CV_REPS
    dictionary_path: Path | None = None
    loanwords_path: Path | None = None
    min_count: int = DEFAULT_MIN_COUNT
    lexicon_frequency: str = "mixed"
    manifest_path: Path | None = None
    easy_words_path: Path | None = None
    lexicon_path: Path | None = None
    mattr_window: int = DEFAULT_MATTR_WINDOW
    gamma: float | None = None
    readability_lambda: float = 1.0
    readability_folds: int = DEFAULT_READABILITY_FOLDS

    def views_for(self, property: PropertyKind) -> tuple[ViewKind, ...]:
        return self.property_views.get(property, self.default_views)

    @property
    def prepared(self) -> Path:
        return self.prepared_dir if self.prepared_dir is not None else self.out_dir / "prepared"

    @property
    def models(self) -> Path:
        return self.models_dir if self.models_dir is not None else self.out_dir / "models"

    def prepared_file(self, property: PropertyKind) -> Path:
        return self.prepared / f"{property.value}.csv"

    def model_file(self, property: PropertyKind) -> Path:
        return self.models / f"{property.value}.model.json"

    def echo(self) -> dict:
        """The resolved numeric knobs, embedded in every report."""
        return {
            "seed": self.seed,
            "lambda": self.lam,
            "cv_k": self.cv_k,
            "cv_reps": self.cv_reps,
            "min_count": self.min_count,
            "mattr_window": self.mattr_window,
            "gamma": self.gamma,
        }


def _parse_scale(text: str, context: str) -> LikertScale:
    parts = [p.strip() for p in text.replace(":", ",").split(",")]
    if len(parts) != 2:
        raise ConfigError(f"{context}: expected scale as 'min,max', got {text!r}")
    try:
        return LikertScale(float(parts[0]), float(parts[1]))
    except ValueError:
        raise ConfigError(f"{context}: malformed scale {text!r}") from None


def parse_views(text: str, context: str = "views") -> tuple[ViewKind, ...]:
    names = [part.strip() for part in text.split(",") if part.strip()]
    if not names:
        raise ConfigError(f"{context}: empty view list")
    try:
        views = tuple(ViewKind.from_slug(name) for name in names)
    except Exception as exc:
        raise ConfigError(f"{context}: {exc}") from None
    if len(set(views)) != len(views):
        raise ConfigError(f"{context}: repeated view in {text!r}")
    return views


def _parse_source_line(line: str, base: Path, target: LikertScale, context: str) -> SourceSpec:
    parts = shlex.split(line)
    if not parts:
        raise ConfigError(f"{context}: empty source line")
    path = base / parts[0]
    scale = target
    orthography = False
    for option in parts[1:]:
        key, _, value = option.partition("=")
        if key == "scale":
            scale = _parse_scale(value, context)
        elif key == "orthography":
            if value not in ("yes", "no"):
                raise ConfigError(f"{context}: orthography must be yes or no, got {value!r}")
            orthography = value == "yes"
        else:
            raise ConfigError(f"{context}: unknown source option {key!r}")
    return SourceSpec(path=path, scale=scale, orthography=orthography)


def _get_float(section, key: str, default: float, context: str) -> float:
    raw = section.get(key)
    if raw is None or raw.strip() == "":
        return default
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"{context}: {key} must be a number, got {raw!r}") from None


def _get_int(section, key: str, default: int, context: str) -> int:
    raw = section.get(key)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{context}: {key} must be an integer, got {raw!r}") from None


def load_run_config(path: str | Path) -> RunConfig:
    """Parse and validate a run configuration file."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file {path} not found")
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, encoding="utf-8") as handle:
            parser.read_file(handle)
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    base = path.parent
    cfg = RunConfig()

    if parser.has_section("output"):
        out = parser["output"].get("dir")
        if out:
            cfg.out_dir = base / out

    if parser.has_section("norms"):
        section = parser["norms"]
        if section.get("scale"):
            cfg.target_scale = _parse_scale(section["scale"], f"{path} [norms]")
        ortho = section.get("orthography", "").strip()
        if ortho and ortho != "builtin":
            cfg.orthography_path = base / ortho
        if section.get("prepared"):
            cfg.prepared_dir = base / section["prepared"]

    for kind in PropertyKind:
        section_name = f"norms.{kind.value}"
        if not parser.has_section(section_name):
            continue
        raw = parser[section_name].get("sources", "")
        specs = [
            _parse_source_line(line, base, cfg.target_scale, f"{path} [{section_name}]")
            for line in raw.splitlines()
            if line.strip()
        ]
        if specs:
            cfg.sources[kind] = specs

    if parser.has_section("features"):
        section = parser["features"]
        for name in FREQUENCY_SOURCES:
            if section.get(name):
                cfg.frequency_paths[name] = base / section[name].strip()
        if section.get("grade_lexicons"):
            paths = tuple(
                base / part.strip()
                for part in section["grade_lexicons"].split(",")
                if part.strip()
            )
            if len(paths) != GRADE_LEVELS:
                raise ConfigError(
                    f"{path} [features]: grade_lexicons needs {GRADE_LEVELS} "
                    f"comma-separated paths, got {len(paths)}"
                )
            cfg.grade_lexicon_paths = paths
        for view in (ViewKind.EMBEDDING_A, ViewKind.EMBEDDING_B):
            if section.get(view.value):
                cfg.embedding_paths[view] = base / section[view.value].strip()

    if parser.has_section("regression"):
        section = parser["regression"]
        cfg.lam = _get_float(section, "lambda", cfg.lam, f"{path} [regression]")
        if section.get("views"):
            cfg.default_views = parse_views(section["views"], f"{path} [regression] views")
        for kind in PropertyKind:
            key = f"views.{kind.value}"
            if section.get(key):
                cfg.property_views[kind] = parse_views(section[key], f"{path} [regression] {key}")

    if parser.has_section("evaluation"):
        section = parser["evaluation"]
        cfg.cv_k = _get_int(section, "k", cfg.cv_k, f"{path} [evaluation]")
        cfg.cv_reps = _get_int(section, "reps", cfg.cv_reps, f"{path} [evaluation]")
        cfg.seed = _get_int(section, "seed", cfg.seed, f"{path} [evaluation]")

    if parser.has_section("lexicon"):
        section = parser["lexicon"]
        if section.get("dictionary"):
            cfg.dictionary_path = base / section["dictionary"].strip()
        if section.get("loanwords"):
            cfg.loanwords_path = base / section["loanwords"].strip()
        cfg.min_count = _get_int(section, "min_count", cfg.min_count, f"{path} [lexicon]")
        if section.get("frequency"):
            name = section["frequency"].strip()
            if name not in FREQUENCY_SOURCES:
                raise ConfigError(
                    f"{path} [lexicon]: frequency must be one of {FREQUENCY_SOURCES}"
                )
            cfg.lexicon_frequency = name
        if section.get("models"):
            cfg.models_dir = base / section["models"].strip()

    if parser.has_section("readability"):
        section = parser["readability"]
        if section.get("manifest"):
            cfg.manifest_path = base / section["manifest"].strip()
        if section.get("easy_words"):
            cfg.easy_words_path = base / section["easy_words"].strip()
        if section.get("lexicon"):
            cfg.lexicon_path = base / section["lexicon"].strip()
        cfg.mattr_window = _get_int(
            section, "mattr_window", cfg.mattr_window, f"{path} [readability]"
        )
        if section.get("gamma"):
            cfg.gamma = _get_float(section, "gamma", 0.0, f"{path} [readability]")
        cfg.readability_lambda = _get_float(
            section, "lambda", cfg.readability_lambda, f"{path} [readability]"
        )
        cfg.readability_folds = _get_int(
            section, "folds", cfg.readability_folds, f"{path} [readability]"
        )

    known = {"output", "norms", "features", "regression", "evaluation", "lexicon", "readability"}
    known |= {f"norms.{kind.value}" for kind in PropertyKind}
    unknown = set(parser.sections()) - known
    if unknown:
        raise ConfigError(f"{path}: unknown sections: {', '.join(sorted(unknown))}")
    return cfg
