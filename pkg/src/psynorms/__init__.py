"""psynorms: infer subjective psycholinguistic word properties for Brazilian
Portuguese from small human-rated seed lists, and derive text readability
features from the inferred lexicon."""

from .errors import ConfigError, DataError, NumericalError, PsynormsError
from .features import FeatureResources, ViewKind
from .norms import LikertScale, NormDataset, PropertyKind
from .regression import MultiViewModel, predict_multiview, train_multiview

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DataError",
    "FeatureResources",
    "LikertScale",
    "MultiViewModel",
    "NormDataset",
    "NumericalError",
    "PropertyKind",
    "PsynormsError",
    "ViewKind",
    "predict_multiview",
    "train_multiview",
    "__version__",
]
