"""Dense complex tensors of arbitrary order.

Tensors are plain ``numpy`` arrays of ``complex128`` entries with at least
two legs.  This module provides the flattenings, quantum marginals and
marginal spectra attached to a tensor, the action of tuples of linear maps
on the legs (restriction), direct sums, Kronecker products and padding,
plus a sparse JSON interchange format.

Conventions used throughout the package:

* indices are row-major (lexicographic), matching ``numpy``'s C order;
* the marginal on leg ``i`` is the trace-normalized Gram matrix
  ``F F* / ||T||^2`` of the leg-``i`` flattening ``F`` (rows are the
  leg-``i`` slices), a Hermitian PSD matrix with unit trace;
* spectra are real eigenvalue vectors sorted in nonincreasing order, with
  eigenvalues in ``[-1e-10, 0]`` clamped to zero.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import IO, Iterable, Sequence

import numpy as np

__all__ = [
    "ZeroTensorError",
    "TensorFormatError",
    "SpectrumPoint",
    "as_tensor",
    "flatten",
    "gram_matrix",
    "marginal",
    "moment_map",
    "spectrum",
    "spec_point",
    "l1_delta",
    "restrict",
    "direct_sum",
    "kron_product",
    "pad",
    "numerical_rank",
    "conciseness_profile",
    "is_concise",
    "random_tensor",
    "tensor_support",
    "tensor_to_dict",
    "tensor_from_dict",
    "dumps_tensor",
    "loads_tensor",
    "dump_tensor",
    "load_tensor",
]

# Shared numerical tolerances.  Rank and clamping cutoffs are relative to the
# largest singular value / eigenvalue of the matrix at hand.
TOL_HERMITIAN = 1e-10
TOL_EIG_CLAMP = 1e-10
TOL_RANK = 1e-10
TOL_SUPPORT = 1e-14


class ZeroTensorError(ValueError):
    """The operation needs a nonzero tensor."""


class TensorFormatError(ValueError):
    """Malformed tensor data in the JSON interchange format."""


def as_tensor(data) -> np.ndarray:
    """Coerce ``data`` to a complex tensor of order >= 2."""
    t = np.asarray(data, dtype=np.complex128)
    if t.ndim < 2:
        raise ValueError(f"tensors must have at least 2 legs, got order {t.ndim}")
    if any(d < 1 for d in t.shape):
        raise ValueError(f"every leg dimension must be >= 1, got shape {t.shape}")
    if not np.all(np.isfinite(t)):
        raise ValueError("tensor entries must be finite")
    return t


def _check_leg(t: np.ndarray, leg: int) -> None:
    if not 0 <= leg < t.ndim:
        raise ValueError(f"leg {leg} out of range for order-{t.ndim} tensor")


def flatten(t, leg: int) -> np.ndarray:
    """Matricize ``t`` along ``leg``.

    Row ``i`` of the result is the slice of ``t`` with index ``i`` on
    ``leg``, the remaining legs flattened lexicographically in increasing
    leg order.  Shape: ``dims[leg] x prod(other dims)``.
    """
    t = as_tensor(t)
    _check_leg(t, leg)
    return np.moveaxis(t, leg, 0).reshape(t.shape[leg], -1)


def gram_matrix(t, leg: int) -> np.ndarray:
    """Unnormalized leg Gram matrix ``F F*`` of the leg flattening ``F``.

    Exactly-zero columns of ``F`` are dropped before the product.  They
    contribute nothing, and skipping them makes the Gram of a zero-padded
    tensor bitwise equal to the embedded Gram of the original, so padding
    identities hold exactly rather than to roundoff.
    """
    f = flatten(t, leg)
    live_rows = np.any(f != 0, axis=1)
    live_cols = np.any(f != 0, axis=0)
    if live_rows.all() and live_cols.all():
        g = f @ f.conj().T
        return (g + g.conj().T) / 2.0
    sub = f[np.ix_(live_rows, live_cols)]
    gs = sub @ sub.conj().T
    gs = (gs + gs.conj().T) / 2.0
    g = np.zeros((f.shape[0], f.shape[0]), dtype=np.complex128)
    g[np.ix_(live_rows, live_rows)] = gs
    return g


def marginal(t, leg: int) -> np.ndarray:
    """Quantum marginal of ``t`` on ``leg``: trace-one PSD Gram matrix.

    Normalized by the Gram trace (equal to the squared norm of ``t``), so
    marginals of zero-padded tensors embed the unpadded ones exactly.
    """
    t = as_tensor(t)
    _check_leg(t, leg)
    g = gram_matrix(t, leg)
    nsq = float(np.trace(g).real)
    if nsq == 0.0:
        raise ZeroTensorError("marginal of the zero tensor is undefined")
    return g / nsq


def moment_map(t) -> tuple[np.ndarray, ...]:
    """All leg marginals of ``t``, one trace-one PSD matrix per leg."""
    t = as_tensor(t)
    if not t.any():
        raise ZeroTensorError("moment map of the zero tensor is undefined")
    return tuple(marginal(t, leg) for leg in range(t.ndim))


def spectrum(mat) -> np.ndarray:
    """Eigenvalues of a Hermitian PSD matrix, sorted nonincreasingly.

    Eigenvalues in ``[-1e-10, 0]`` are clamped to zero (numerical noise on
    PSD-by-construction matrices); anything more negative is an error, as
    is a non-Hermitian input.
    """
    mat = np.asarray(mat, dtype=np.complex128)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {mat.shape}")
    dev = np.max(np.abs(mat - mat.conj().T)) if mat.size else 0.0
    if dev > TOL_HERMITIAN:
        raise ValueError(f"matrix is not Hermitian (max deviation {dev:.3e})")
    # Deflate exactly-zero rows/columns: their eigenvalues are exact zeros,
    # and solving only the live block keeps spectra of padded matrices
    # bitwise consistent with the unpadded ones.
    live = np.any(mat != 0, axis=0) | np.any(mat != 0, axis=1)
    if live.all():
        eig = np.linalg.eigvalsh(mat)[::-1]
    else:
        sub = mat[np.ix_(live, live)]
        eig_live = np.linalg.eigvalsh(sub)[::-1] if sub.size else np.empty(0)
        eig = np.concatenate([eig_live, np.zeros(int((~live).sum()))])
    low = eig.min() if eig.size else 0.0
    if low < -TOL_EIG_CLAMP:
        raise ValueError(f"matrix is not PSD (eigenvalue {low:.3e})")
    return np.where(eig < 0.0, 0.0, eig)


@dataclass(frozen=True)
class SpectrumPoint:
    """A tuple of nonincreasing probability vectors, one block per leg.

    These are the points of the space in which marginal-spectra polytopes
    live: block ``i`` is a candidate spectrum for the leg-``i`` marginal.
    """

    blocks: tuple[np.ndarray, ...]

    def __post_init__(self):
        blocks = tuple(np.asarray(b, dtype=np.float64) for b in self.blocks)
        if len(blocks) < 2:
            raise ValueError("a spectrum point needs at least 2 blocks")
        for b in blocks:
            if b.ndim != 1 or b.size == 0:
                raise ValueError("each block must be a nonempty vector")
            if np.any(np.diff(b) > 1e-12):
                raise ValueError(f"block {b} is not nonincreasing")
            if np.any(b < -1e-12):
                raise ValueError(f"block {b} has a negative entry")
            if abs(b.sum() - 1.0) > 1e-10:
                raise ValueError(f"block {b} does not sum to 1")
            b.setflags(write=False)
        object.__setattr__(self, "blocks", blocks)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(b.size for b in self.blocks)

    @staticmethod
    def uniform(dims: Sequence[int]) -> "SpectrumPoint":
        """The point with the uniform vector ``(1/d, ..., 1/d)`` per block."""
        return SpectrumPoint(tuple(np.full(d, 1.0 / d) for d in dims))

    def support_sizes(self, tol: float = TOL_SUPPORT) -> tuple[int, ...]:
        """Number of entries above ``tol`` in each block."""
        return tuple(int(np.count_nonzero(b > tol)) for b in self.blocks)

    def padded(self, dims: Sequence[int]) -> "SpectrumPoint":
        """Adjust block lengths to ``dims`` by adding or removing zeros.

        Removing a nonzero entry is an error: the point would not fit the
        target format.
        """
        dims = tuple(dims)
        if len(dims) != len(self.blocks):
            raise ValueError("block count does not match the target format")
        out = []
        for b, d in zip(self.blocks, dims):
            if b.size <= d:
                out.append(np.concatenate([b, np.zeros(d - b.size)]))
            else:
                if np.any(b[d:] > TOL_SUPPORT):
                    raise ValueError(
                        f"block of support {int(np.count_nonzero(b > TOL_SUPPORT))} "
                        f"does not fit in dimension {d}"
                    )
                out.append(b[:d].copy())
        return SpectrumPoint(tuple(out))

    def __eq__(self, other) -> bool:
        if not isinstance(other, SpectrumPoint):
            return NotImplemented
        return self.dims == other.dims and all(
            np.array_equal(a, b) for a, b in zip(self.blocks, other.blocks)
        )


def spec_point(t) -> SpectrumPoint:
    """Marginal spectra of ``t``, one nonincreasing block per leg."""
    return SpectrumPoint(tuple(spectrum(m) for m in moment_map(t)))


def l1_delta(a, b) -> float:
    """Distance between two spectrum points: max over legs of the block
    l1 distances.  Blocks must have matching lengths."""
    blocks_a = a.blocks if isinstance(a, SpectrumPoint) else tuple(a)
    blocks_b = b.blocks if isinstance(b, SpectrumPoint) else tuple(b)
    if len(blocks_a) != len(blocks_b):
        raise ValueError("spectrum points have different block counts")
    delta = 0.0
    for x, y in zip(blocks_a, blocks_b):
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        if x.shape != y.shape:
            raise ValueError("spectrum blocks have different lengths")
        delta = max(delta, float(np.abs(x - y).sum()))
    return delta


def restrict(t, maps: Sequence[np.ndarray]) -> np.ndarray:
    """Apply one linear map per leg: ``(A_1 x ... x A_k) T``.

    ``maps[i]`` must have ``dims[i]`` columns; the result has leg ``i``
    dimension ``maps[i].shape[0]``.
    """
    t = as_tensor(t)
    if len(maps) != t.ndim:
        raise ValueError(f"expected {t.ndim} maps, got {len(maps)}")
    out = t
    for leg, m in enumerate(maps):
        m = np.asarray(m, dtype=np.complex128)
        if m.ndim != 2 or m.shape[1] != t.shape[leg]:
            raise ValueError(
                f"map {leg} has shape {m.shape}, expected (*, {t.shape[leg]})"
            )
        out = np.moveaxis(np.tensordot(m, out, axes=(1, leg)), 0, leg)
    return out


def direct_sum(t1, t2) -> np.ndarray:
    """Block-diagonal sum: leg dimensions add, the summands sit in
    complementary corners."""
    t1, t2 = as_tensor(t1), as_tensor(t2)
    if t1.ndim != t2.ndim:
        raise ValueError(f"order mismatch: {t1.ndim} vs {t2.ndim}")
    shape = tuple(a + b for a, b in zip(t1.shape, t2.shape))
    out = np.zeros(shape, dtype=np.complex128)
    out[tuple(slice(0, d) for d in t1.shape)] = t1
    out[tuple(slice(d1, d1 + d2) for d1, d2 in zip(t1.shape, t2.shape))] = t2
    return out


def kron_product(t1, t2) -> np.ndarray:
    """Legwise Kronecker product; leg dimensions multiply."""
    t1, t2 = as_tensor(t1), as_tensor(t2)
    if t1.ndim != t2.ndim:
        raise ValueError(f"order mismatch: {t1.ndim} vs {t2.ndim}")
    return np.kron(t1, t2)


def pad(t, newshape: Sequence[int]) -> np.ndarray:
    """Embed ``t`` in the leading corner of a tensor of shape ``newshape``."""
    t = as_tensor(t)
    newshape = tuple(int(d) for d in newshape)
    if len(newshape) != t.ndim:
        raise ValueError(f"order mismatch: {t.ndim} vs {len(newshape)}")
    if any(n < d for n, d in zip(newshape, t.shape)):
        raise ValueError(f"cannot shrink shape {t.shape} to {newshape}")
    out = np.zeros(newshape, dtype=np.complex128)
    out[tuple(slice(0, d) for d in t.shape)] = t
    return out


def numerical_rank(mat, tol: float = TOL_RANK) -> int:
    """Rank by singular values: count sigma > tol * sigma_max."""
    mat = np.asarray(mat, dtype=np.complex128)
    if mat.size == 0:
        return 0
    s = np.linalg.svd(mat, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol * s[0]))


def conciseness_profile(t) -> tuple[int, ...]:
    """Numerical rank of every leg flattening."""
    t = as_tensor(t)
    return tuple(numerical_rank(flatten(t, leg)) for leg in range(t.ndim))


def is_concise(t) -> bool:
    """True iff every flattening has full row rank (no smaller format
    carries an equivalent tensor)."""
    t = as_tensor(t)
    return conciseness_profile(t) == t.shape


def random_tensor(shape: Sequence[int], rng) -> np.ndarray:
    """I.i.d. standard complex Gaussian tensor (variance 1 per entry)."""
    rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    shape = tuple(shape)
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def tensor_support(t, tol: float = TOL_SUPPORT) -> tuple[tuple[int, ...], ...]:
    """Sorted 0-based indices of the entries with modulus above ``tol``."""
    t = as_tensor(t)
    idx = np.argwhere(np.abs(t) > tol)
    return tuple(sorted(tuple(int(i) for i in row) for row in idx))


# ---------------------------------------------------------------------------
# JSON interchange format
#
# { "dims": [d1, ..., dk],
#   "entries": [ {"idx": [i1, ..., ik], "re": x, "im": y}, ... ] }
#
# Sparse with 1-based indices; omitted entries are zero.  The writer emits
# entries in lexicographic index order, the reader rejects out-of-range and
# duplicate indices.
# ---------------------------------------------------------------------------


def tensor_to_dict(t) -> dict:
    """Serialize ``t`` to the sparse JSON structure (exact zeros omitted)."""
    t = as_tensor(t)
    entries = []
    for idx, v in np.ndenumerate(t):
        if v != 0:
            entries.append(
                {
                    "idx": [i + 1 for i in idx],
                    "re": float(v.real),
                    "im": float(v.imag),
                }
            )
    return {"dims": list(t.shape), "entries": entries}


def tensor_from_dict(data) -> np.ndarray:
    """Parse the sparse JSON structure back into a dense tensor."""
    if not isinstance(data, dict):
        raise TensorFormatError("tensor document must be a JSON object")
    dims = data.get("dims")
    if (
        not isinstance(dims, list)
        or len(dims) < 2
        or not all(isinstance(d, int) and d >= 1 for d in dims)
    ):
        raise TensorFormatError("'dims' must be a list of >= 2 positive integers")
    entries = data.get("entries", [])
    if not isinstance(entries, list):
        raise TensorFormatError("'entries' must be a list")
    t = np.zeros(tuple(dims), dtype=np.complex128)
    seen = set()
    for e in entries:
        if not isinstance(e, dict) or "idx" not in e:
            raise TensorFormatError(f"malformed entry {e!r}")
        idx = e["idx"]
        if not isinstance(idx, list) or len(idx) != len(dims):
            raise TensorFormatError(f"index {idx!r} does not match dims {dims}")
        if not all(isinstance(i, int) and 1 <= i <= d for i, d in zip(idx, dims)):
            raise TensorFormatError(f"index {idx!r} out of range for dims {dims}")
        key = tuple(idx)
        if key in seen:
            raise TensorFormatError(f"duplicate index {idx!r}")
        seen.add(key)
        try:
            re, im = float(e.get("re", 0.0)), float(e.get("im", 0.0))
        except (TypeError, ValueError) as exc:
            raise TensorFormatError(f"non-numeric value in entry {e!r}") from exc
        t[tuple(i - 1 for i in idx)] = complex(re, im)
    return t


def dumps_tensor(t, indent: int | None = None) -> str:
    return json.dumps(tensor_to_dict(t), indent=indent)


def loads_tensor(text: str) -> np.ndarray:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TensorFormatError(f"invalid JSON: {exc}") from exc
    return tensor_from_dict(data)


def dump_tensor(t, fp: IO[str], indent: int | None = None) -> None:
    json.dump(tensor_to_dict(t), fp, indent=indent)


def load_tensor(fp: IO[str]) -> np.ndarray:
    try:
        data = json.load(fp)
    except json.JSONDecodeError as exc:
        raise TensorFormatError(f"invalid JSON: {exc}") from exc
    return tensor_from_dict(data)
