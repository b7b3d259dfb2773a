"""Shared test oracles, independent of the library code paths they check."""

import numpy as np
import pytest


def oracle_gram(t, leg):
    """Gram matrix of the leg slices by explicit loops and sums."""
    t = np.asarray(t, dtype=complex)
    d = t.shape[leg]
    g = np.zeros((d, d), dtype=complex)
    for i in range(d):
        for j in range(d):
            si = np.take(t, i, axis=leg)
            sj = np.take(t, j, axis=leg)
            g[i, j] = np.sum(si * np.conj(sj))
    return g


def oracle_spectrum(mat):
    """Nonincreasing eigenvalues via numpy, clamped at zero."""
    eig = np.linalg.eigvalsh(np.asarray(mat))[::-1]
    return np.where(np.abs(eig) < 1e-12, 0.0, eig)


def hyperdet_222(t):
    """Degree-4 invariant of a 2x2x2 tensor whose vanishing locus is the
    null cone of that format (Cayley's formula)."""
    t = np.asarray(t, dtype=complex)
    a = t[0, 0, 0] ** 2 * t[1, 1, 1] ** 2
    a += t[0, 0, 1] ** 2 * t[1, 1, 0] ** 2
    a += t[0, 1, 0] ** 2 * t[1, 0, 1] ** 2
    a += t[1, 0, 0] ** 2 * t[0, 1, 1] ** 2
    b = t[0, 0, 0] * t[0, 0, 1] * t[1, 1, 0] * t[1, 1, 1]
    b += t[0, 0, 0] * t[0, 1, 0] * t[1, 0, 1] * t[1, 1, 1]
    b += t[0, 0, 0] * t[1, 0, 0] * t[0, 1, 1] * t[1, 1, 1]
    b += t[0, 0, 1] * t[0, 1, 0] * t[1, 0, 1] * t[1, 1, 0]
    b += t[0, 0, 1] * t[1, 0, 0] * t[0, 1, 1] * t[1, 1, 0]
    b += t[0, 1, 0] * t[1, 0, 0] * t[0, 1, 1] * t[1, 0, 1]
    c = t[0, 0, 0] * t[0, 1, 1] * t[1, 0, 1] * t[1, 1, 0]
    c += t[0, 0, 1] * t[0, 1, 0] * t[1, 0, 0] * t[1, 1, 1]
    return a - 2 * b + 4 * c


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
