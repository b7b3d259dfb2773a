"""Alternating tensor-scaling algorithms.

Two flavors:

* :func:`scale_uniform` drives all marginals toward the uniform matrix
  ``I/d`` with determinant-one leg maps, tracking the norm along the way.
  Convergence is evidence that the scaled tensor's orbit reaches uniform
  marginals; norm collapse is evidence that it cannot (null-cone behavior).
  :func:`semistability_test` wraps this into a verdict.

* :func:`membership_test` asks whether a given tuple of marginal spectra is
  achievable in the orbit closure of a tensor.  Zero target entries are
  handled by projecting onto the support after a seeded generic invertible
  map on each leg; the remaining positive targets are then chased by
  alternating single-leg updates that each fix one marginal exactly.
  Success yields an explicit witness; running out of budget yields only
  ``inconclusive``, never a non-membership certificate.

All scaling runs are deterministic functions of the input and the config
seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    SpectrumPoint,
    ZeroTensorError,
    as_tensor,
    is_concise,
    l1_delta,
    spec_point,
)

__all__ = [
    "MEMBER_EVIDENCE",
    "INCONCLUSIVE",
    "SEMISTABLE_EVIDENCE",
    "UNSTABLE_EVIDENCE",
    "ScalingConfig",
    "ScalingReport",
    "SemistabilityVerdict",
    "MembershipVerdict",
    "scale_uniform",
    "semistability_test",
    "membership_test",
    "uniform_point_test",
    "kempf_ness_value",
]

MEMBER_EVIDENCE = "member-evidence"
INCONCLUSIVE = "inconclusive"
SEMISTABLE_EVIDENCE = "semistable-evidence"
UNSTABLE_EVIDENCE = "unstable-evidence"

# Eigenvalues below this fraction of the largest are treated as zero when
# inverting a marginal (support deficiency).
PINV_CUTOFF = 1e-12
# Condition-number bound for accepting a random invertible leg map.
COND_LIMIT = 1e8
# A membership iterate is only trusted while the composed leg maps applied
# to the original tensor reproduce it to this relative accuracy.
DRIFT_TOL = 1e-8
# How often (in iterations) the drift check runs.
DRIFT_CHECK_EVERY = 32


@dataclass(frozen=True)
class ScalingConfig:
    """Parameters shared by all scaling runs.

    ``epsilon`` bounds the Frobenius marginal residual for uniform scaling,
    ``epsilon_member`` the per-leg l1 spectrum distance for membership.
    ``norm_floor`` is the relative norm below which a determinant-one
    scaling run is declared unstable.
    """

    epsilon: float = 1e-8
    epsilon_member: float = 1e-6
    max_iter: int = 10000
    seed: int = 0
    restarts: int = 5
    norm_floor: float = 1e-12

    def __post_init__(self):
        if self.epsilon <= 0 or self.epsilon_member <= 0:
            raise ValueError("tolerances must be positive")
        if not 0 < self.norm_floor < 1:
            raise ValueError("norm_floor must lie in (0, 1)")
        if self.max_iter < 0 or self.restarts < 1:
            raise ValueError("need max_iter >= 0 and restarts >= 1")


@dataclass(frozen=True)
class ScalingReport:
    """Transcript of one uniform-scaling run.

    ``residual_history`` holds per-leg Frobenius residuals, one row per
    visited state (including the initial one).  Norms are relative to the
    unit-normalized input; ``final_tensor`` is the reached element of the
    determinant-one orbit of that normalized input.
    """

    iterations: int
    residual_history: np.ndarray
    final_tensor: np.ndarray
    converged: bool
    final_norm_sl: float
    seed: int
    min_norm_sl: float
    norm_history: np.ndarray
    support_deficient: bool = False


@dataclass(frozen=True)
class SemistabilityVerdict:
    status: str
    residual: float
    min_norm: float
    reason: str = ""
    report: ScalingReport | None = None


@dataclass(frozen=True)
class MembershipVerdict:
    """Outcome of a membership run.

    ``member-evidence`` comes with a witness: the marginal spectra of an
    explicitly reached tensor (``final_tensor``) in the orbit of a
    restriction of the input, at per-leg l1 distance ``delta`` from the
    target.  ``inconclusive`` is not a non-membership certificate.
    """

    status: str
    delta: float
    witness: SpectrumPoint | None
    best_delta: float
    runs: int
    iterations: int
    seed: int
    final_tensor: np.ndarray | None = None
    maps: tuple[np.ndarray, ...] | None = None
    delta_histories: tuple[np.ndarray, ...] = ()
    drifted: tuple[bool, ...] = ()


def _apply_leg(t: np.ndarray, g: np.ndarray, leg: int) -> np.ndarray:
    return np.moveaxis(np.tensordot(g, t, axes=(1, leg)), 0, leg)


def _leg_gram(t: np.ndarray, leg: int) -> np.ndarray:
    f = np.moveaxis(t, leg, 0).reshape(t.shape[leg], -1)
    g = f @ f.conj().T
    return (g + g.conj().T) / 2.0


def kempf_ness_value(t) -> float:
    """``log ||T||^2``, the quantity that decreases along determinant-one
    uniform scaling."""
    t = as_tensor(t)
    n = np.linalg.norm(t)
    if n == 0.0:
        raise ZeroTensorError("Kempf-Ness value of the zero tensor is undefined")
    return float(2.0 * np.log(n))


def scale_uniform(t, cfg: ScalingConfig | None = None) -> ScalingReport:
    """Scale toward uniform marginals with determinant-one leg maps.

    Greedy alternating scheme: repeatedly pick the leg with the largest
    Frobenius residual ``||mu_i - I/d_i||`` and apply
    ``det(mu_i)^(1/(2 d_i)) mu_i^(-1/2)``, which makes that marginal exactly
    uniform and never increases the tracked norm.  A unit-norm copy drives
    the marginal computations; the determinant-one norm is tracked
    separately and never renormalized.  Stops at residual below
    ``cfg.epsilon``, at ``cfg.max_iter``, or when the tracked norm falls
    below ``cfg.norm_floor`` (instability).

    Singular marginals are inverted on their support (eigenvalue cutoff
    ``1e-12`` relative) and flagged via ``support_deficient``.
    """
    cfg = cfg if cfg is not None else ScalingConfig()
    t = as_tensor(t)
    norm0 = np.linalg.norm(t)
    if norm0 == 0.0:
        raise ZeroTensorError("cannot scale the zero tensor")
    dims = t.shape
    k = t.ndim
    work = t / norm0
    norm_sl = 1.0
    support_deficient = False

    def current_state(w):
        mus = [_leg_gram(w, i) for i in range(k)]
        res = np.array(
            [np.linalg.norm(mu - np.eye(d) / d) for mu, d in zip(mus, dims)]
        )
        return mus, res

    mus, res = current_state(work)
    history = [res]
    norm_history = [norm_sl]
    iters = 0
    while res.max() >= cfg.epsilon and iters < cfg.max_iter and norm_sl >= cfg.norm_floor:
        i = int(res.argmax())
        lam, u = np.linalg.eigh(mus[i])
        cutoff = PINV_CUTOFF * max(lam[-1], 0.0)
        keep = lam > cutoff
        if not keep.all():
            support_deficient = True
        inv_sqrt = np.zeros_like(lam)
        inv_sqrt[keep] = lam[keep] ** -0.5
        # determinant-one normalization (pseudo-determinant on the support)
        scale = np.exp(np.log(lam[keep]).sum() / (2.0 * dims[i]))
        g = scale * ((u * inv_sqrt[None, :]) @ u.conj().T)
        w = _apply_leg(work, g, i)
        f = np.linalg.norm(w)
        if f == 0.0 or not np.isfinite(f):
            break
        norm_sl *= f
        work = w / f
        iters += 1
        mus, res = current_state(work)
        history.append(res)
        norm_history.append(norm_sl)
    return ScalingReport(
        iterations=iters,
        residual_history=np.array(history),
        final_tensor=work * norm_sl,
        converged=bool(res.max() < cfg.epsilon),
        final_norm_sl=float(norm_sl),
        seed=cfg.seed,
        min_norm_sl=float(min(norm_history)),
        norm_history=np.array(norm_history),
        support_deficient=support_deficient,
    )


def semistability_test(t, cfg: ScalingConfig | None = None) -> SemistabilityVerdict:
    """Evidence verdict on whether ``t`` avoids the null cone of its format.

    Non-concise tensors are immediately unstable (the orbit closure of a
    tensor supported on a proper subformat contains zero).  Otherwise the
    verdict reads off a uniform-scaling run: convergence is semistable
    evidence, norm collapse below ``cfg.norm_floor`` is unstable evidence,
    and an exhausted budget is inconclusive.
    """
    cfg = cfg if cfg is not None else ScalingConfig()
    t = as_tensor(t)
    if np.linalg.norm(t) == 0.0:
        raise ZeroTensorError("the zero tensor has no semistability verdict")
    if not is_concise(t):
        return SemistabilityVerdict(
            status=UNSTABLE_EVIDENCE,
            residual=float("inf"),
            min_norm=0.0,
            reason="not concise: a proper subformat carries the tensor",
        )
    rep = scale_uniform(t, cfg)
    final_res = float(rep.residual_history[-1].max())
    if rep.converged:
        return SemistabilityVerdict(
            SEMISTABLE_EVIDENCE, final_res, rep.min_norm_sl, "scaling converged", rep
        )
    if rep.min_norm_sl < cfg.norm_floor:
        return SemistabilityVerdict(
            UNSTABLE_EVIDENCE, final_res, rep.min_norm_sl, "norm collapse", rep
        )
    return SemistabilityVerdict(
        INCONCLUSIVE, final_res, rep.min_norm_sl, "budget exhausted", rep
    )


def _draw_invertible_maps(rng, dims, support):
    """Seeded i.i.d. complex Gaussian maps, condition-checked, cut down to
    the support rows (projection after a generic invertible map)."""
    maps = []
    for d, s in zip(dims, support):
        for _ in range(64):
            g = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
            if np.linalg.cond(g) < COND_LIMIT:
                break
        else:
            raise RuntimeError("could not draw a well-conditioned map")
        maps.append(g[:s, :])
    return maps


def _target_update(work: np.ndarray, leg: int, target: np.ndarray):
    """One membership step: map ``leg`` so its marginal becomes exactly
    ``diag(target)``, eigenvectors aligned by decreasing eigenvalue.

    Returns the new unit-norm tensor and the effective leg map (scalar
    renormalization folded in).
    """
    mu = _leg_gram(work, leg)
    lam, u = np.linalg.eigh(mu)
    lam = lam[::-1]
    u = u[:, ::-1]
    cutoff = PINV_CUTOFF * max(lam[0], 0.0)
    inv_sqrt = np.where(lam > cutoff, np.maximum(lam, cutoff) ** -0.5, 0.0)
    g = (np.sqrt(target)[:, None] * (u * inv_sqrt[None, :])) @ u.conj().T
    w = _apply_leg(work, g, leg)
    f = np.linalg.norm(w)
    if f == 0.0 or not np.isfinite(f):
        return None, None
    return w / f, g / f


def membership_test(t, p, cfg: ScalingConfig | None = None) -> MembershipVerdict:
    """Scaling test for membership of the spectrum point ``p`` in the set
    of marginal spectra reachable from ``t``.

    Steps: pad/trim ``p`` to the tensor's format by its zero pattern;
    accept immediately if ``t`` itself realizes the point; otherwise, per
    restart, restrict ``t`` to the support of ``p`` through a seeded
    generic invertible map on each leg (rejecting non-concise draws) and
    alternate single-leg updates (largest Frobenius deviation from the
    diagonal target first) until every leg's marginal spectrum is within
    ``cfg.epsilon_member`` in l1 distance, the budget runs out, or the
    update degenerates.

    Soundness guard: the composed leg maps are tracked alongside the
    iterate, and the iterate only counts while applying them to the
    original tensor reproduces it to relative accuracy ``1e-8``.  When a
    trajectory approaches a degenerate limit, the maps become so
    ill-conditioned that floating-point iterates silently leave the orbit
    and can reach spectra the orbit itself cannot; such runs are truncated
    at the last verified iterate and never produce ``member-evidence``.

    ``member-evidence`` verdicts carry the witness spectra, the reached
    tensor, and the composed leg maps such that ``restrict(t, maps)``
    reproduces the reached tensor.  ``delta_histories`` holds the trusted
    per-iteration distance records of every run; ``drifted`` marks runs
    that were cut short by the guard.
    """
    cfg = cfg if cfg is not None else ScalingConfig()
    t = as_tensor(t)
    norm0 = np.linalg.norm(t)
    if norm0 == 0.0:
        raise ZeroTensorError("the zero tensor has no marginal spectra")
    if not isinstance(p, SpectrumPoint):
        p = SpectrumPoint(tuple(np.asarray(b, dtype=np.float64) for b in p))
    if len(p.blocks) != t.ndim:
        raise ValueError(f"point has {len(p.blocks)} blocks, tensor has {t.ndim} legs")
    target = p.padded(t.shape)
    k = t.ndim

    sp0 = spec_point(t)
    delta0 = l1_delta(sp0, target)
    if delta0 < cfg.epsilon_member:
        maps = [np.eye(d, dtype=np.complex128) for d in t.shape]
        maps[0] = maps[0] / norm0
        return MembershipVerdict(
            status=MEMBER_EVIDENCE,
            delta=delta0,
            witness=sp0,
            best_delta=delta0,
            runs=0,
            iterations=0,
            seed=cfg.seed,
            final_tensor=t / norm0,
            maps=tuple(maps),
            delta_histories=(np.array([delta0]),),
        )

    support = target.support_sizes()
    sub_target = [b[:s].copy() for b, s in zip(target.blocks, support)]
    best_delta = delta0
    histories: list[np.ndarray] = []
    drift_flags: list[bool] = []
    runs = 0
    total_iters = 0

    def off_orbit(maps_now, work) -> bool:
        if not all(np.all(np.isfinite(m)) for m in maps_now):
            return True
        s = np.asarray(t)
        for leg, m in enumerate(maps_now):
            s = _apply_leg(s, m, leg)
        ns = np.linalg.norm(s)
        if ns == 0.0 or not np.isfinite(ns):
            return True
        return np.linalg.norm(s / ns - work) > DRIFT_TOL

    for run in range(cfg.restarts):
        rng = np.random.default_rng((cfg.seed, run))
        runs += 1
        try:
            maps0 = _draw_invertible_maps(rng, t.shape, support)
        except RuntimeError:
            histories.append(np.empty(0))
            drift_flags.append(False)
            continue
        s = np.asarray(t)
        for leg, m in enumerate(maps0):
            s = _apply_leg(s, m, leg)
        ns = np.linalg.norm(s)
        if ns == 0.0:
            histories.append(np.empty(0))
            drift_flags.append(False)
            continue
        work = s / ns
        maps_now = [m.astype(np.complex128) for m in maps0]
        maps_now[0] = maps_now[0] / ns
        if not is_concise(work):
            histories.append(np.empty(0))
            drift_flags.append(False)
            continue

        hist = np.empty(cfg.max_iter + 1)
        verified_upto = 0  # iterations confirmed on-orbit (history index bound)
        drifted = False
        for it in range(cfg.max_iter + 1):
            mus = [_leg_gram(work, i) for i in range(k)]
            specs = [np.linalg.eigvalsh(mu)[::-1] for mu in mus]
            d = max(
                float(np.abs(sp - tb).sum()) for sp, tb in zip(specs, sub_target)
            )
            hist[it] = d
            if d < cfg.epsilon_member:
                if off_orbit(maps_now, work):
                    drifted = True
                    break
                witness = SpectrumPoint(
                    tuple(np.where(sp < 0.0, 0.0, sp) for sp in specs)
                )
                best_delta = min(best_delta, float(hist[: it + 1].min()))
                histories.append(hist[: it + 1].copy())
                drift_flags.append(False)
                total_iters += it
                return MembershipVerdict(
                    status=MEMBER_EVIDENCE,
                    delta=d,
                    witness=witness,
                    best_delta=best_delta,
                    runs=runs,
                    iterations=total_iters,
                    seed=cfg.seed,
                    final_tensor=work,
                    maps=tuple(maps_now),
                    delta_histories=tuple(histories),
                    drifted=tuple(drift_flags),
                )
            if it % DRIFT_CHECK_EVERY == 0:
                if off_orbit(maps_now, work):
                    drifted = True
                    break
                verified_upto = it + 1
            if it == cfg.max_iter:
                break
            fro = [
                np.linalg.norm(mu - np.diag(tb)) for mu, tb in zip(mus, sub_target)
            ]
            i = int(np.argmax(fro))
            new_work, g_eff = _target_update(work, i, sub_target[i])
            if new_work is None:
                drifted = True
                break
            work = new_work
            maps_now[i] = g_eff @ maps_now[i]
        if not drifted and off_orbit(maps_now, work):
            drifted = True
        if not drifted:
            verified_upto = it + 1
        hist = hist[:verified_upto]
        total_iters += max(verified_upto - 1, 0)
        if hist.size:
            best_delta = min(best_delta, float(hist.min()))
        histories.append(hist.copy())
        drift_flags.append(drifted)

    return MembershipVerdict(
        status=INCONCLUSIVE,
        delta=best_delta,
        witness=None,
        best_delta=best_delta,
        runs=runs,
        iterations=total_iters,
        seed=cfg.seed,
        final_tensor=None,
        maps=None,
        delta_histories=tuple(histories),
        drifted=tuple(drift_flags),
    )


def uniform_point_test(t, dims, cfg: ScalingConfig | None = None) -> MembershipVerdict:
    """Membership test for the uniform point ``(u_a | u_b | ...)`` on the
    given block sizes.

    On success ``final_tensor`` is a reached tensor of format ``dims``
    whose marginals are uniform to within tolerance, i.e. a numerically
    semistable restriction witness.
    """
    t = as_tensor(t)
    dims = tuple(int(d) for d in dims)
    if len(dims) != t.ndim:
        raise ValueError(f"expected {t.ndim} block sizes, got {len(dims)}")
    if any(a > d for a, d in zip(dims, t.shape)):
        raise ValueError(f"block sizes {dims} exceed tensor format {t.shape}")
    return membership_test(t, SpectrumPoint.uniform(dims).padded(t.shape), cfg)
