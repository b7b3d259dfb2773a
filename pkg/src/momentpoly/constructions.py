"""Generators for the structured tensor families used across the package.

Every construction with integer data (unit, matrix multiplication, iterated
matrix multiplication, polynomial multiplication, pencils, the wedge
tensor) is exactly representable and bit-reproducible.  The only inexact
generator is :func:`bci_tensor`, whose entries carry roots of unity.

Basis bookkeeping: a standard basis matrix ``e_{i,j}`` is flattened to a
vector along its rows, so the pair ``(i, j)`` becomes the row-major index
``i * ncols + j`` (0-based).
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .core import as_tensor

__all__ = [
    "unit_tensor",
    "matmul_tensor",
    "imm_tensor",
    "poly_mult_tensor",
    "pencil_tensor",
    "balanced_pencil",
    "bci_tensor",
    "wedge3",
    "zero_tensor",
    "unit_to_poly_mult_maps",
    "matmul_outer_embedding_maps",
    "matmul_a1b_completion_map",
    "imm_collapse_map",
]


def unit_tensor(r: int, k: int = 3) -> np.ndarray:
    """Diagonal rank-``r`` tensor of order ``k``: ones at ``(j, ..., j)``."""
    if r < 1 or k < 2:
        raise ValueError(f"need r >= 1 and k >= 2, got r={r}, k={k}")
    t = np.zeros((r,) * k, dtype=np.complex128)
    idx = np.arange(r)
    t[(idx,) * k] = 1.0
    return t


def matmul_tensor(n1: int, n2: int, n3: int) -> np.ndarray:
    """Structure tensor of ``(n1 x n2) @ (n2 x n3)`` matrix multiplication.

    Shape ``(n1*n2, n2*n3, n3*n1)`` with a unit entry at every triple
    ``(e_{i,j}, e_{j,k}, e_{k,i})``.
    """
    if min(n1, n2, n3) < 1:
        raise ValueError(f"matrix sizes must be >= 1, got {(n1, n2, n3)}")
    t = np.zeros((n1 * n2, n2 * n3, n3 * n1), dtype=np.complex128)
    for i in range(n1):
        for j in range(n2):
            for k in range(n3):
                t[i * n2 + j, j * n3 + k, k * n1 + i] = 1.0
    return t


def imm_tensor(n: int, k: int) -> np.ndarray:
    """Iterated matrix multiplication tensor: order ``k``, each leg of
    dimension ``n^2``, one unit entry per cyclic index tuple.

    Leg ``l`` carries ``e_{i_l, i_{l+1}}`` with the convention that the
    index sequence wraps around (``i_{k+1} = i_1``).
    """
    if n < 1 or k < 3:
        raise ValueError(f"need n >= 1 and k >= 3, got n={n}, k={k}")
    t = np.zeros((n * n,) * k, dtype=np.complex128)
    for path in np.ndindex(*(n,) * k):
        idx = tuple(path[l] * n + path[(l + 1) % k] for l in range(k))
        t[idx] = 1.0
    return t


def poly_mult_tensor(a: int, b: int) -> np.ndarray:
    """Structure tensor of univariate polynomial multiplication,
    ``degree (a-1) x degree (b-1)``: shape ``(a, b, a+b-1)`` with unit
    entries at ``(i, j, i+j)`` (0-based)."""
    if a < 1 or b < 1:
        raise ValueError(f"need a, b >= 1, got a={a}, b={b}")
    t = np.zeros((a, b, a + b - 1), dtype=np.complex128)
    for i in range(a):
        for j in range(b):
            t[i, j, i + j] = 1.0
    return t


def pencil_tensor(c: int) -> np.ndarray:
    """The ``2 x (c-1) x c`` matrix pencil ``([I | 0], [0 | I])``, i.e.
    polynomial multiplication with a degree-1 factor."""
    if c < 2:
        raise ValueError(f"need c >= 2, got c={c}")
    return poly_mult_tensor(2, c - 1)


def balanced_pencil(c: int) -> np.ndarray:
    """Diagonal rescaling of the ``2 x (c-1) x c`` pencil whose marginals
    are exactly uniform on every leg.

    Slice 1 is ``diag(sqrt(c-1), ..., sqrt(1))`` next to a zero column,
    slice 2 a zero column next to ``diag(sqrt(1), ..., sqrt(c-1))``.
    """
    if c < 2:
        raise ValueError(f"need c >= 2, got c={c}")
    t = np.zeros((2, c - 1, c), dtype=np.complex128)
    for j in range(c - 1):
        t[0, j, j] = np.sqrt(c - 1 - j)
        t[1, j, j + 1] = np.sqrt(j + 1)
    return t


def bci_tensor(q: Sequence[float], n: int | None = None) -> np.ndarray:
    """Rank <= n diagonal-slice tensor realizing the marginal spectra
    ``(q | u_n | u_n)``.

    ``q`` must be a nonincreasing probability vector of length ``n``; the
    entry at ``(j, k, k)`` is ``sqrt(q_j) * zeta^(j k)`` with ``zeta`` the
    primitive ``n``-th root of unity ``exp(2 pi i / n)`` (1-based ``j, k``).
    """
    q = np.asarray(q, dtype=np.float64)
    if q.ndim != 1 or q.size == 0:
        raise ValueError("q must be a nonempty probability vector")
    if n is not None and n != q.size:
        raise ValueError(f"q has length {q.size}, expected n={n}")
    n = q.size
    if np.any(q < -1e-12):
        raise ValueError("q must be entrywise nonnegative")
    if np.any(np.diff(q) > 1e-12):
        raise ValueError("q must be nonincreasing")
    if abs(q.sum() - 1.0) > 1e-10:
        raise ValueError("q must sum to 1")
    q = np.sort(np.clip(q, 0.0, None))[::-1]
    j = np.arange(1, n + 1)
    k = np.arange(1, n + 1)
    phases = np.exp(2j * np.pi * np.outer(j, k) / n)
    t = np.zeros((n, n, n), dtype=np.complex128)
    rows = np.repeat(np.arange(n), n)
    cols = np.tile(np.arange(n), n)
    t[rows, cols, cols] = (np.sqrt(q)[:, None] * phases).ravel()
    return t


def wedge3() -> np.ndarray:
    """The alternating 3x3x3 tensor: signed unit entries on the six
    permutations of ``(1, 2, 3)``."""
    t = np.zeros((3, 3, 3), dtype=np.complex128)
    t[0, 1, 2] = t[1, 2, 0] = t[2, 0, 1] = 1.0
    t[0, 2, 1] = t[1, 0, 2] = t[2, 1, 0] = -1.0
    return t


def zero_tensor(shape: Sequence[int]) -> np.ndarray:
    """All-zero tensor of the given shape."""
    shape = tuple(int(d) for d in shape)
    if len(shape) < 2 or any(d < 1 for d in shape):
        raise ValueError(f"invalid shape {shape}")
    return np.zeros(shape, dtype=np.complex128)


# ---------------------------------------------------------------------------
# Explicit restriction maps between the families above.
# ---------------------------------------------------------------------------


def unit_to_poly_mult_maps(a: int, b: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Maps ``(A, B, C)`` with ``restrict(unit_tensor(a+b-1), (A, B, C))``
    equal to ``poly_mult_tensor(a, b)``.

    Evaluation/interpolation at the ``(a+b-1)``-th roots of unity: ``A``
    and ``B`` evaluate the two factors at the nodes, ``C`` interpolates
    the product coefficients (inverse DFT), so the composite is exact up
    to roundoff.
    """
    if a < 1 or b < 1:
        raise ValueError(f"need a, b >= 1, got a={a}, b={b}")
    r = a + b - 1
    nodes = np.exp(2j * np.pi * np.arange(r) / r)
    vand = nodes[:, None] ** np.arange(r)[None, :]
    A = (nodes[None, :] ** np.arange(a)[:, None]).astype(np.complex128)
    B = (nodes[None, :] ** np.arange(b)[:, None]).astype(np.complex128)
    C = vand.conj().T / r
    return A, B, C


def matmul_outer_embedding_maps(a: int, b: int, n: int):
    """Maps ``(A, B, C)`` with ``restrict(matmul_tensor(n, n, n), (A, B, C))``
    equal to ``matmul_tensor(a, 1, b)``, for ``a, b <= n``.

    The outer product ``u v^T`` is computed by multiplying the matrix with
    ``u`` as first column by the matrix with ``v`` as first row; ``A`` and
    ``B`` select those entries and ``C`` keeps the relevant output block.
    """
    if not (1 <= a <= n and 1 <= b <= n):
        raise ValueError(f"need 1 <= a, b <= n, got a={a}, b={b}, n={n}")
    A = np.zeros((a, n * n), dtype=np.complex128)
    for i in range(a):
        A[i, i * n] = 1.0
    B = np.zeros((b, n * n), dtype=np.complex128)
    for k in range(b):
        B[k, k] = 1.0
    C = np.zeros((a * b, n * n), dtype=np.complex128)
    for k in range(b):
        for i in range(a):
            C[k * a + i, k * n + i] = 1.0
    return A, B, C


def matmul_a1b_completion_map(s) -> np.ndarray:
    """The ``ab x ab`` matrix ``N`` with
    ``restrict(matmul_tensor(a, 1, b), (I, I, N)) == s`` for any tensor
    ``s`` of shape ``(a, b, a*b)``.

    Column ``k*a + i`` of ``N`` is the fiber ``s[i, k, :]``; this realizes
    every tensor of that format as a restriction of ``matmul_tensor(a, 1, b)``.
    """
    s = as_tensor(s)
    if s.ndim != 3 or s.shape[2] != s.shape[0] * s.shape[1]:
        raise ValueError(f"expected shape (a, b, a*b), got {s.shape}")
    a, b, ab = s.shape
    n = np.zeros((ab, ab), dtype=np.complex128)
    for i in range(a):
        for k in range(b):
            n[:, k * a + i] = s[i, k, :]
    return n


def imm_collapse_map(n: int, weight: float = 1.0) -> np.ndarray:
    """The ``n^2 x n^2`` map sending every diagonal basis matrix
    ``e_{i,i}`` to ``weight * e_1`` and off-diagonal ones to zero.

    Applied to the last leg of ``imm_tensor(n, k)`` it produces
    ``weight * (imm_tensor(n, k-1) x e_1)``; with the default weight the
    equality is exact.  Any nonzero weight gives the same tensor up to
    scale, so the choice is immaterial for restriction statements.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got n={n}")
    d = np.zeros((n * n, n * n), dtype=np.complex128)
    for i in range(n):
        d[0, i * n + i] = weight
    return d
