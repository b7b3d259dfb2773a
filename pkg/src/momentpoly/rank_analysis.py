"""Rank analysis of the span of a tensor's slices.

For an order-3 tensor sliced along one leg, the linear span of the slices
is a matrix subspace.  This module estimates the smallest and largest
nonzero matrix rank in that span by seeded direction sampling (with stored
witnesses), proves the exact minrank of polynomial multiplication tensors
from their support structure, evaluates the arithmetic consequences
(degeneration bounds for matrix multiplication, the separation region of
unit-tensor spectra, border-subrank bounds), and checks tight-support
certificates with their entropy rates.

Exact minimization over the span is NP-hard in general; sampled values are
certified upper bounds (minrank) or generic estimates (maxrank), never
claimed exact unless a structural certificate applies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, NamedTuple, Sequence

import numpy as np

from .core import ZeroTensorError, as_tensor, flatten, numerical_rank, TOL_RANK

__all__ = [
    "DirectionSamples",
    "RankProfile",
    "MinrankCertificate",
    "SeparationReport",
    "BorderSubrankBound",
    "TightnessCheck",
    "slice_combination",
    "minrank_upper",
    "minrank_poly_mult_exact",
    "maxrank",
    "subspace_low_rank_bound",
    "matmul_degeneration_bound",
    "separation_check",
    "border_subrank_bound",
    "rank1_factor_check",
    "tight_certificate_check",
    "support_entropy_rate",
    "support_entropy_rate_search",
]


@dataclass(frozen=True)
class DirectionSamples:
    """Direction-sampling plan for slice-span searches: all standard basis
    vectors, all pairwise basis sums and differences, plus ``samples``
    seeded complex Gaussian directions.

    For two-dimensional spans (matrix pencils) the minimum-rank directions
    are isolated roots that random sampling cannot hit, so the search also
    tries the roots of seeded submatrix determinant polynomials of the
    pencil (``include_pencil_roots``).
    """

    samples: int = 200
    seed: int = 0
    include_basis: bool = True
    include_pair_sums: bool = True
    include_pencil_roots: bool = True

    def __post_init__(self):
        if self.samples < 0:
            raise ValueError("samples must be >= 0")


@dataclass(frozen=True)
class RankProfile:
    """Sampled rank summary of a slice span with a minrank witness."""

    minrank_upper: int
    minrank_witness: np.ndarray
    maxrank_estimate: int
    samples: int
    seed: int
    exact: bool = False


def slice_combination(t, leg: int, beta) -> np.ndarray:
    """Linear combination ``sum_i beta_i * slice_i`` of the leg slices.

    For an order-3 tensor this is a matrix; higher orders give the
    corresponding order-(k-1) array.
    """
    t = as_tensor(t)
    beta = np.asarray(beta, dtype=np.complex128)
    if beta.ndim != 1 or beta.size != t.shape[leg]:
        raise ValueError(
            f"direction has length {beta.size}, leg {leg} has dimension {t.shape[leg]}"
        )
    if not np.any(beta):
        raise ValueError("direction must be nonzero")
    return np.tensordot(beta, np.moveaxis(t, leg, 0), axes=(0, 0))


def _direction_matrix(d: int, cfg: DirectionSamples) -> np.ndarray:
    rows = []
    if cfg.include_basis:
        rows.append(np.eye(d, dtype=np.complex128))
    if cfg.include_pair_sums and d >= 2:
        pairs = list(combinations(range(d), 2))
        plus = np.zeros((len(pairs), d), dtype=np.complex128)
        minus = np.zeros((len(pairs), d), dtype=np.complex128)
        for r, (i, j) in enumerate(pairs):
            plus[r, i] = plus[r, j] = 1.0
            minus[r, i] = 1.0
            minus[r, j] = -1.0
        rows.extend([plus, minus])
    if cfg.samples > 0:
        rng = np.random.default_rng(cfg.seed)
        rows.append(
            (rng.standard_normal((cfg.samples, d)) + 1j * rng.standard_normal((cfg.samples, d)))
            / np.sqrt(2.0)
        )
    if not rows:
        raise ValueError("empty direction set")
    return np.concatenate(rows, axis=0)


def _pencil_root_directions(slices: np.ndarray, seed: int) -> np.ndarray:
    """Candidate minimum-rank directions ``(1, t)`` for a two-slice span:
    ``t`` ranges over the roots of determinant polynomials of seeded
    square submatrices of ``S_1 + t S_2``, one size at a time.  Any value
    where the full pencil drops below rank ``s`` is a root of every
    ``s x s`` minor, so these candidates cover all rank-drop levels."""
    s1, s2 = slices[0], slices[1]
    b, c = s1.shape
    rng = np.random.default_rng((seed, 1729))
    dirs = []
    for s in range(2, min(b, c) + 1):
        for _ in range(2):
            rows = rng.permutation(b)[:s]
            cols = rng.permutation(c)[:s]
            a = s1[np.ix_(rows, cols)]
            d = s2[np.ix_(rows, cols)]
            nodes = np.exp(2j * np.pi * np.arange(s + 1) / (s + 1))
            vals = np.array([np.linalg.det(a + t * d) for t in nodes])
            coeffs = np.fft.fft(vals) / (s + 1)  # c_0 .. c_s of det(a + t d)
            mags = np.abs(coeffs)
            if mags.max() <= 1e-13 * max(np.abs(vals).max(), 1.0):
                continue
            trimmed = coeffs[: np.max(np.nonzero(mags > 1e-13 * mags.max())) + 1]
            if trimmed.size < 2:
                continue
            for t in np.roots(trimmed[::-1]):
                if np.isfinite(t):
                    dirs.append((1.0, complex(t)))
    if not dirs:
        return np.empty((0, 2), dtype=np.complex128)
    arr = np.array(dirs, dtype=np.complex128)
    return arr / np.linalg.norm(arr, axis=1)[:, None]


def _batched_ranks(slices: np.ndarray, directions: np.ndarray, norm_scale: float):
    """Ranks of all direction combinations; rank -1 marks a numerically
    zero combination (excluded from the nonzero-rank minimum)."""
    combos = np.tensordot(directions, slices, axes=(1, 0))
    svals = np.linalg.svd(combos, compute_uv=False)
    top = svals[:, 0]
    zero = top <= 1e-12 * norm_scale * np.linalg.norm(directions, axis=1).real
    ranks = (svals > TOL_RANK * np.maximum(top, 1e-300)[:, None]).sum(axis=1)
    ranks = np.where(zero, -1, ranks)
    return ranks


def minrank_upper(t, cfg: DirectionSamples | None = None) -> RankProfile:
    """Certified upper bound on the smallest nonzero rank in the leg-1
    slice span, by sampling basis directions, pairwise basis sums and
    differences, and seeded Gaussian directions.

    The returned witness direction reproduces ``minrank_upper``; the true
    minrank can only be smaller.
    """
    cfg = cfg if cfg is not None else DirectionSamples()
    t = as_tensor(t)
    if t.ndim != 3:
        raise ValueError("slice rank analysis expects an order-3 tensor")
    scale = np.linalg.norm(t)
    if scale == 0.0:
        raise ZeroTensorError("the zero tensor has no slice span")
    directions = _direction_matrix(t.shape[0], cfg)
    if cfg.include_pencil_roots and t.shape[0] == 2:
        roots = _pencil_root_directions(np.asarray(t), cfg.seed)
        if roots.size:
            directions = np.concatenate([directions, roots], axis=0)
    ranks = _batched_ranks(np.asarray(t), directions, float(scale))
    nonzero = ranks >= 1
    if not np.any(nonzero):
        raise ZeroTensorError("all sampled slice combinations vanish")
    idx = np.where(nonzero, ranks, np.iinfo(np.int64).max).argmin()
    witness = directions[idx] / np.linalg.norm(directions[idx])
    return RankProfile(
        minrank_upper=int(ranks[idx]),
        minrank_witness=witness,
        maxrank_estimate=int(ranks.max()),
        samples=directions.shape[0],
        seed=cfg.seed,
        exact=False,
    )


def maxrank(t, cfg: DirectionSamples | None = None) -> int:
    """Largest rank among sampled generic directions of the leg-1 slice
    span.  A generic direction attains the true maximum almost surely, but
    the value is reported as an estimate."""
    cfg = cfg if cfg is not None else DirectionSamples()
    t = as_tensor(t)
    if t.ndim != 3:
        raise ValueError("slice rank analysis expects an order-3 tensor")
    scale = np.linalg.norm(t)
    if scale == 0.0:
        raise ZeroTensorError("the zero tensor has no slice span")
    rng = np.random.default_rng(cfg.seed)
    n = max(cfg.samples, 1)
    directions = (
        rng.standard_normal((n, t.shape[0])) + 1j * rng.standard_normal((n, t.shape[0]))
    ) / np.sqrt(2.0)
    ranks = _batched_ranks(np.asarray(t), directions, float(scale))
    return int(ranks.max())


@dataclass(frozen=True)
class TriangularBlock:
    """Location of the upper-triangular submatrix certifying full row rank
    of a slice combination whose leading nonzero coefficient is ``lead``:
    rows ``0..b-1``, columns ``lead..lead+b-1`` (0-based)."""

    lead: int
    col_start: int
    col_stop: int


@dataclass(frozen=True)
class MinrankCertificate:
    """Exact minrank of a polynomial multiplication tensor with the
    structural reason: for every leading coefficient position the
    combination contains a ``b x b`` upper-triangular block with that
    coefficient on the whole diagonal."""

    value: int
    a: int
    b: int
    blocks: tuple[TriangularBlock, ...]


def minrank_poly_mult_exact(a: int, b: int) -> MinrankCertificate:
    """Exact minrank (= ``b``) of the polynomial multiplication tensor of
    shape ``(a, b, a+b-1)``, certified from the support pattern.

    For a direction whose first nonzero coordinate is ``lead``, columns
    ``lead..lead+b-1`` of the slice combination form an upper-triangular
    block whose diagonal entries all equal that leading coordinate, so
    every nonzero combination has rank exactly ``b``.  The block structure
    is verified combinatorially (not numerically) from the support.
    """
    if a < 1 or b < 1:
        raise ValueError(f"need a, b >= 1, got a={a}, b={b}")
    support = {(i, j, i + j) for i in range(a) for j in range(b)}
    cols = a + b - 1
    # deps[j][m] = slice coordinates feeding entry (row j, column m)
    deps = {
        (j, m): {s for s in range(a) if (s, j, m) in support}
        for j in range(b)
        for m in range(cols)
    }
    blocks = []
    for lead in range(a):
        for jp in range(b):
            m = lead + jp
            if deps[(jp, m)] != {lead}:
                raise RuntimeError(
                    f"support structure violated at diagonal ({jp}, {m}), lead {lead}"
                )
            for j in range(jp + 1, b):
                if any(s >= lead for s in deps[(j, m)]):
                    raise RuntimeError(
                        f"support structure violated below diagonal at ({j}, {m})"
                    )
        blocks.append(TriangularBlock(lead=lead, col_start=lead, col_stop=lead + b))
    return MinrankCertificate(value=b, a=a, b=b, blocks=tuple(blocks))


def subspace_low_rank_bound(n: int, d: int) -> int:
    """Every ``d``-dimensional subspace of ``n x n`` matrices contains a
    nonzero matrix of rank at most ``n - floor(sqrt(d-1))``."""
    if n < 1 or not 1 <= d <= n * n:
        raise ValueError(f"need n >= 1 and 1 <= d <= n^2, got n={n}, d={d}")
    return n - math.isqrt(d - 1)


def matmul_degeneration_bound(n: int, a: int) -> int:
    """Upper bound ``n (n - floor(sqrt(a-1)))`` on the minrank of any
    concise degeneration of the ``n x n`` matrix multiplication tensor to
    a format with first leg dimension ``a``."""
    if n < 1 or a < 1:
        raise ValueError(f"need n, a >= 1, got n={n}, a={a}")
    return n * (n - math.isqrt(a - 1))


@dataclass(frozen=True)
class SeparationReport:
    """Arithmetic comparison deciding whether the uniform point of the
    ``2 x (c-1) x c`` format is out of reach for the ``n x n`` matrix
    multiplication tensor: the pencil minrank ``c-1`` must exceed the
    degeneration bound ``n(n-1)``."""

    n: int
    c: int
    pencil_minrank: int
    degeneration_bound: int
    separated: bool


def separation_check(n: int, c: int) -> SeparationReport:
    """Compare ``minrank`` of the balanced pencil format against the
    degeneration bound for the ``n x n`` matrix multiplication tensor."""
    if n < 1 or c < 2:
        raise ValueError(f"need n >= 1 and c >= 2, got n={n}, c={c}")
    pencil_minrank = minrank_poly_mult_exact(2, c - 1).value
    bound = matmul_degeneration_bound(n, 2)
    return SeparationReport(
        n=n,
        c=c,
        pencil_minrank=pencil_minrank,
        degeneration_bound=bound,
        separated=pencil_minrank > bound,
    )


class BorderSubrankBound(NamedTuple):
    bound: int
    a: int
    b: int


def border_subrank_bound(n: int) -> BorderSubrankBound:
    """Border subrank bound ``ceil(3 n^2 / 4)`` for ``n x n`` matrix
    multiplication, with the polynomial-multiplication shape ``(a, b)``
    realizing it.

    Internally asserts the two facts the bound rests on:
    ``b > n (n - floor(sqrt(a-1)))`` and ``a + b - 2 = ceil(3 n^2 / 4)``.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got n={n}")
    if n % 2 == 0:
        a = n * n // 4 + 1
        b = n * n // 2 + 1
    else:
        a = (n - 1) * (n - 1) // 4 + 1
        b = n * (n + 1) // 2 + 1
    bound = -((-3 * n * n) // 4)
    if b <= matmul_degeneration_bound(n, a):
        raise AssertionError(f"degeneration bound not exceeded at n={n}: a={a}, b={b}")
    if a + b - 2 != bound:
        raise AssertionError(f"shape arithmetic off at n={n}: a={a}, b={b}, bound={bound}")
    return BorderSubrankBound(bound=bound, a=a, b=b)


def rank1_factor_check(t, leg: int):
    """Split off a rank-one leg: if the leg flattening has numerical rank
    one, return ``(s, w)`` with ``t = s (x) w`` (``w`` inserted at ``leg``)
    and relative residual below ``1e-10``; otherwise ``None``."""
    t = as_tensor(t)
    if t.ndim < 3:
        raise ValueError("rank-one factor split expects order >= 3")
    scale = np.linalg.norm(t)
    if scale == 0.0:
        raise ZeroTensorError("the zero tensor has no rank-one factor")
    f = flatten(t, leg)
    if numerical_rank(f) != 1:
        return None
    u, sv, vh = np.linalg.svd(f, full_matrices=False)
    w = sv[0] * u[:, 0]
    other_dims = t.shape[:leg] + t.shape[leg + 1 :]
    s = vh[0].reshape(other_dims)
    rebuilt = np.moveaxis(np.multiply.outer(s, w), -1, leg)
    if np.linalg.norm(t - rebuilt) > 1e-10 * scale:
        return None
    return s, w


@dataclass(frozen=True)
class TightnessCheck:
    """Outcome of a tight-support certificate: whether the integer leg
    labelings sum to zero on every support triple, and whether each
    labeling is injective.  Both are reported separately; some useful
    certificates satisfy the zero-sum condition with non-injective maps."""

    zero_sum: bool
    injective: bool

    @property
    def tight(self) -> bool:
        return self.zero_sum and self.injective


def tight_certificate_check(support, maps: Sequence[Sequence[int]]) -> TightnessCheck:
    """Check integer leg labelings against a support set (0-based index
    tuples): zero sum on every support element, injectivity per leg."""
    support = [tuple(int(i) for i in idx) for idx in support]
    labelings = [list(m) for m in maps]
    for idx in support:
        if len(idx) != len(labelings):
            raise ValueError(f"support tuple {idx} does not match {len(labelings)} legs")
        for l, i in enumerate(idx):
            if not 0 <= i < len(labelings[l]):
                raise ValueError(f"index {i} outside labeling {l} of size {len(labelings[l])}")
    zero_sum = all(sum(labelings[l][i] for l, i in enumerate(idx)) == 0 for idx in support)
    injective = all(len(set(m)) == len(m) for m in labelings)
    return TightnessCheck(zero_sum=zero_sum, injective=injective)


def _leg_entropies(support, weights) -> list[float]:
    k = len(support[0])
    rates = []
    for l in range(k):
        acc: dict[int, float] = {}
        for idx, w in zip(support, weights):
            acc[idx[l]] = acc.get(idx[l], 0.0) + w
        h = -sum(q * math.log2(q) for q in acc.values() if q > 0.0)
        rates.append(h)
    return rates


def support_entropy_rate(support, p) -> float:
    """Entropy rate of a probability assignment on a support set: the
    minimum over legs of ``2 ** H(marginal)`` with base-2 entropy.

    ``p`` maps support tuples to weights (or lists weights in the order of
    ``support``); weights must be nonnegative and sum to one.
    """
    support = [tuple(int(i) for i in idx) for idx in support]
    if not support:
        raise ValueError("empty support")
    if isinstance(p, Mapping):
        keys = {tuple(int(i) for i in k) for k in p.keys()}
        if not keys <= set(support):
            raise ValueError("probability assigned outside the support")
        weights = [float(p.get(idx, 0.0)) for idx in support]
    else:
        weights = [float(w) for w in p]
        if len(weights) != len(support):
            raise ValueError("weight list does not match the support size")
    if any(w < -1e-12 for w in weights):
        raise ValueError("weights must be nonnegative")
    if abs(sum(weights) - 1.0) > 1e-10:
        raise ValueError("weights must sum to 1")
    weights = [max(w, 0.0) for w in weights]
    return float(2.0 ** min(_leg_entropies(support, weights)))


def support_entropy_rate_search(support, resolution: int = 8):
    """Coarse grid maximization of :func:`support_entropy_rate` over the
    probability simplex on a small support.  Returns the best rate and the
    maximizing weights (as a list aligned with ``support``)."""
    support = [tuple(int(i) for i in idx) for idx in support]
    m = len(support)
    if m == 0:
        raise ValueError("empty support")
    if resolution < 1:
        raise ValueError("resolution must be >= 1")
    if math.comb(resolution + m - 1, m - 1) > 2_000_000:
        raise ValueError("support too large for a grid search at this resolution")
    best_rate = -1.0
    best = None

    def compositions(total, parts):
        if parts == 1:
            yield (total,)
            return
        for first in range(total + 1):
            for rest in compositions(total - first, parts - 1):
                yield (first,) + rest

    for comp in compositions(resolution, m):
        weights = [c / resolution for c in comp]
        rate = 2.0 ** min(_leg_entropies(support, weights))
        if rate > best_rate:
            best_rate = rate
            best = weights
    return float(best_rate), best
