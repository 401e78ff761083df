"""Independent oracles and synthetic-data builders shared across tests.

The oracles deliberately avoid the package's own numerical paths: the ridge
oracle standardizes and solves its normal equations with hand-rolled
Gaussian elimination, and the rank-correlation oracle computes average ranks
by scanning sorted positions.
"""

from __future__ import annotations

import math

import numpy as np

from psynorms.features import EmbeddingModel, FeatureResources, ViewKind


def gauss_solve(A, b):
    """Solve A x = b by Gaussian elimination with partial pivoting."""
    A = [list(map(float, row)) for row in np.asarray(A)]
    b = [float(v) for v in np.asarray(b)]
    n = len(A)
    for col in range(n):
        pivot = max(range(col, n), key=lambda r: abs(A[r][col]))
        if abs(A[pivot][col]) == 0.0:
            raise ZeroDivisionError("singular matrix")
        A[col], A[pivot] = A[pivot], A[col]
        b[col], b[pivot] = b[pivot], b[col]
        for row in range(col + 1, n):
            factor = A[row][col] / A[col][col]
            if factor == 0.0:
                continue
            for k in range(col, n):
                A[row][k] -= factor * A[col][k]
            b[row] -= factor * b[col]
    x = [0.0] * n
    for row in range(n - 1, -1, -1):
        acc = b[row]
        for k in range(row + 1, n):
            acc -= A[row][k] * x[k]
        x[row] = acc / A[row][row]
    return np.array(x)


def ridge_oracle(X, y, lam):
    """Expected ridge weights/intercept: standardize, center, normal equations."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n, d = X.shape
    means = [sum(X[:, j]) / n for j in range(d)]
    stds = []
    for j in range(d):
        var = sum((X[i, j] - means[j]) ** 2 for i in range(n)) / n
        stds.append(math.sqrt(var) if var > 0 else 1.0)
    Z = np.array([[(X[i, j] - means[j]) / stds[j] for j in range(d)] for i in range(n)])
    intercept = sum(y) / n
    centered = y - intercept
    gram = [[sum(Z[i, a] * Z[i, b] for i in range(n)) for b in range(d)] for a in range(d)]
    for j in range(d):
        gram[j][j] += lam
    rhs = [sum(Z[i, j] * centered[i] for i in range(n)) for j in range(d)]
    return gauss_solve(gram, rhs), intercept


def brute_ranks(values):
    """Average ranks computed from first/last positions in the sorted list."""
    ordered = list(sorted(float(v) for v in values))
    n = len(ordered)
    ranks = []
    for v in values:
        first = ordered.index(v)
        last = n - 1 - ordered[::-1].index(v)
        ranks.append((first + last) / 2.0 + 1.0)
    return ranks


def brute_pearson(a, b):
    n = len(a)
    mean_a = sum(a) / n
    mean_b = sum(b) / n
    cov = sum((x - mean_a) * (y - mean_b) for x, y in zip(a, b))
    var_a = sum((x - mean_a) ** 2 for x in a)
    var_b = sum((y - mean_b) ** 2 for y in b)
    return cov / math.sqrt(var_a * var_b)


def brute_spearman(a, b):
    return brute_pearson(brute_ranks(a), brute_ranks(b))


def synthetic_words(n, prefix="w"):
    return [f"{prefix}{i:05d}" for i in range(n)]


def make_embedding(words, dim, rng, kind=ViewKind.EMBEDDING_A, scale=1.0):
    vectors = {
        word: rng.uniform(-scale, scale, size=dim).astype(np.float64) for word in words
    }
    return EmbeddingModel(dimension=dim, vectors=vectors, kind=kind)


def embedding_resources(model, extra=None):
    embeddings = {model.kind: model}
    if extra is not None:
        embeddings[extra.kind] = extra
    return FeatureResources(embeddings=embeddings)
