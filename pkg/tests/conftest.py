import numpy as np
import pytest

from psynorms.norms import SEVEN_POINT, NormDataset, NormRecord, PropertyKind


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


def dataset_from_pairs(pairs, property=PropertyKind.CONCRETENESS, scale=SEVEN_POINT,
                       source="test"):
    records = tuple(NormRecord(word=w, rating=float(r), source=source) for w, r in pairs)
    return NormDataset(property=property, scale=scale, records=records)


@pytest.fixture
def small_dataset():
    return dataset_from_pairs([("sol", 6.0), ("lua", 5.0), ("ideia", 2.0), ("paz", 3.0)])
