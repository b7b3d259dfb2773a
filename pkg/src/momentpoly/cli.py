"""Command-line front end.

Tensors travel between commands as the sparse JSON interchange format on
stdin/stdout, so calls compose under shell pipes::

    momentpoly construct --kind matmul --params 2 2 2 | momentpoly info

Exit codes: 0 success, 1 failing verification claim, 2 malformed input
JSON, 3 numerical failure (zero tensors, invalid parameters, linear
algebra breakdown).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import constructions as cons
from .core import (
    SpectrumPoint,
    TensorFormatError,
    ZeroTensorError,
    conciseness_profile,
    dumps_tensor,
    loads_tensor,
    moment_map,
    spec_point,
    tensor_to_dict,
)
from .rank_analysis import (
    DirectionSamples,
    border_subrank_bound,
    maxrank,
    minrank_upper,
    separation_check,
)
from .scaling import (
    ScalingConfig,
    membership_test,
    scale_uniform,
    semistability_test,
)
from .verify import has_failures, run_verify

_CONSTRUCT_KINDS = (
    "unit",
    "matmul",
    "imm",
    "polymul",
    "pencil",
    "balanced-pencil",
    "bci",
    "wedge3",
    "zero",
)


def _complex_list(vec) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(vec).ravel()]


def _matrix_list(mat) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(mat)]


def _read_tensor(args) -> np.ndarray:
    if getattr(args, "input", None):
        text = Path(args.input).read_text()
    else:
        text = sys.stdin.read()
    return loads_tensor(text)


def _emit(args, doc: dict | str) -> None:
    text = doc if isinstance(doc, str) else json.dumps(doc, indent=2)
    if getattr(args, "json_out", None):
        Path(args.json_out).write_text(text + "\n")
    else:
        print(text)


def _scaling_config(args) -> ScalingConfig:
    kw = {}
    if getattr(args, "eps", None) is not None:
        kw["epsilon"] = args.eps
        kw["epsilon_member"] = args.eps
    if getattr(args, "max_iter", None) is not None:
        kw["max_iter"] = args.max_iter
    if getattr(args, "seed", None) is not None:
        kw["seed"] = args.seed
    if getattr(args, "restarts", None) is not None:
        kw["restarts"] = args.restarts
    return ScalingConfig(**kw)


def _cmd_construct(args) -> int:
    params = args.params or []
    kind = args.kind
    if kind == "unit":
        t = cons.unit_tensor(*params) if params else cons.unit_tensor(1)
    elif kind == "matmul":
        t = cons.matmul_tensor(*params)
    elif kind == "imm":
        t = cons.imm_tensor(*params)
    elif kind == "polymul":
        t = cons.poly_mult_tensor(*params)
    elif kind == "pencil":
        t = cons.pencil_tensor(*params)
    elif kind == "balanced-pencil":
        t = cons.balanced_pencil(*params)
    elif kind == "bci":
        if not args.q:
            raise ValueError("--q is required for kind 'bci'")
        t = cons.bci_tensor(args.q)
    elif kind == "wedge3":
        t = cons.wedge3()
    elif kind == "zero":
        t = cons.zero_tensor(params)
    else:
        raise ValueError(f"unknown construction kind {kind!r}")
    _emit(args, dumps_tensor(t, indent=2))
    return 0


def _cmd_info(args) -> int:
    t = _read_tensor(args)
    sp = spec_point(t)
    marginals = moment_map(t)
    print(f"dims: {list(t.shape)}")
    print(f"norm: {np.linalg.norm(t):.12g}")
    print(f"conciseness profile: {conciseness_profile(t)}")
    for i, (mu, block) in enumerate(zip(marginals, sp.blocks), start=1):
        print(f"marginal {i} spectrum: {np.round(block, 10).tolist()}")
        print(f"marginal {i}:")
        with np.printoptions(precision=6, suppress=True, linewidth=120):
            print(mu)
    if args.json_out:
        doc = {
            "dims": list(t.shape),
            "norm": float(np.linalg.norm(t)),
            "conciseness_profile": list(conciseness_profile(t)),
            "marginals": [_matrix_list(mu) for mu in marginals],
            "spectra": [block.tolist() for block in sp.blocks],
        }
        Path(args.json_out).write_text(json.dumps(doc, indent=2) + "\n")
    return 0


def _cmd_scale_uniform(args) -> int:
    t = _read_tensor(args)
    rep = scale_uniform(t, _scaling_config(args))
    doc = {
        "converged": rep.converged,
        "iterations": rep.iterations,
        "final_residual": float(rep.residual_history[-1].max()),
        "final_norm_sl": rep.final_norm_sl,
        "min_norm_sl": rep.min_norm_sl,
        "support_deficient": rep.support_deficient,
        "seed": rep.seed,
        "final_tensor": tensor_to_dict(rep.final_tensor),
    }
    _emit(args, doc)
    return 0


def _cmd_semistable(args) -> int:
    t = _read_tensor(args)
    v = semistability_test(t, _scaling_config(args))
    doc = {
        "status": v.status,
        "residual": v.residual,
        "min_norm": v.min_norm,
        "reason": v.reason,
    }
    _emit(args, doc)
    return 0


def _parse_point(text: str) -> SpectrumPoint:
    candidate = Path(text)
    try:
        if candidate.is_file():
            text = candidate.read_text()
    except OSError:
        pass
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TensorFormatError(f"invalid point JSON: {exc}") from exc
    blocks = data.get("blocks") if isinstance(data, dict) else data
    if not isinstance(blocks, list):
        raise TensorFormatError("point must be {'blocks': [[...], ...]} or a list of blocks")
    return SpectrumPoint(tuple(np.asarray(b, dtype=np.float64) for b in blocks))


def _cmd_member(args) -> int:
    t = _read_tensor(args)
    p = _parse_point(args.point)
    v = membership_test(t, p, _scaling_config(args))
    doc = {
        "status": v.status,
        "delta": v.delta,
        "best_delta": v.best_delta,
        "runs": v.runs,
        "iterations": v.iterations,
        "seed": v.seed,
        "witness": [b.tolist() for b in v.witness.blocks] if v.witness else None,
    }
    if v.final_tensor is not None:
        doc["final_tensor"] = tensor_to_dict(v.final_tensor)
    _emit(args, doc)
    return 0


def _cmd_minrank(args) -> int:
    t = _read_tensor(args)
    prof = minrank_upper(t, DirectionSamples(samples=args.samples, seed=args.seed or 0))
    doc = {
        "minrank_upper": prof.minrank_upper,
        "maxrank_estimate": prof.maxrank_estimate,
        "samples": prof.samples,
        "seed": prof.seed,
        "exact": prof.exact,
        "witness": _complex_list(prof.minrank_witness),
    }
    _emit(args, doc)
    return 0


def _cmd_maxrank(args) -> int:
    t = _read_tensor(args)
    value = maxrank(t, DirectionSamples(samples=args.samples, seed=args.seed or 0))
    _emit(args, {"maxrank_estimate": value, "samples": args.samples, "seed": args.seed or 0})
    return 0


def _cmd_separation(args) -> int:
    rep = separation_check(args.n, args.c)
    _emit(
        args,
        {
            "n": rep.n,
            "c": rep.c,
            "pencil_minrank": rep.pencil_minrank,
            "degeneration_bound": rep.degeneration_bound,
            "separated": rep.separated,
        },
    )
    return 0


def _cmd_border_subrank(args) -> int:
    res = border_subrank_bound(args.n)
    print(res.bound)
    if args.json_out:
        Path(args.json_out).write_text(
            json.dumps({"n": args.n, "bound": res.bound, "a": res.a, "b": res.b}, indent=2)
            + "\n"
        )
    return 0


def _cmd_verify(args) -> int:
    results = run_verify(args.filter, seed=args.seed or 0)
    width = max(len(r.claim_id) for r in results)
    for r in results:
        print(
            f"[{r.status:>13s}] {r.claim_id:<{width}s} "
            f"metric={r.metric:.3e} tol={r.tolerance:.1e} ({r.runtime_ms} ms)"
        )
        if r.detail:
            print(f"{'':16s}{r.detail}")
    if args.json_out:
        doc = [
            {
                "claim_id": r.claim_id,
                "anchor": r.anchor,
                "status": r.status,
                "metric": r.metric,
                "tolerance": r.tolerance,
                "runtime_ms": r.runtime_ms,
                "detail": r.detail,
            }
            for r in results
        ]
        Path(args.json_out).write_text(json.dumps(doc, indent=2) + "\n")
    failed = has_failures(results)
    print(
        f"{sum(r.status == 'pass' for r in results)} pass, "
        f"{sum(r.status == 'fail' for r in results)} fail, "
        f"{sum(r.status == 'evidence-only' for r in results)} evidence-only"
    )
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="momentpoly",
        description="Tensor marginals, scaling tests and slice-rank analysis",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common_io = argparse.ArgumentParser(add_help=False)
    common_io.add_argument("--input", help="tensor JSON file (default: stdin)")
    common_io.add_argument("--json-out", help="write the JSON result to this file")

    common_scaling = argparse.ArgumentParser(add_help=False)
    common_scaling.add_argument("--eps", type=float, help="convergence tolerance")
    common_scaling.add_argument("--max-iter", type=int, help="iteration budget")
    common_scaling.add_argument("--seed", type=int, help="random seed")
    common_scaling.add_argument("--restarts", type=int, help="random restarts")

    p = sub.add_parser("construct", help="emit a structured tensor as JSON")
    p.add_argument("--kind", required=True, choices=_CONSTRUCT_KINDS)
    p.add_argument("--params", type=int, nargs="*", help="integer parameters")
    p.add_argument("--q", type=float, nargs="*", help="probability vector (bci)")
    p.add_argument("--json-out", help="write the JSON result to this file")
    p.set_defaults(fn=_cmd_construct)

    p = sub.add_parser("info", parents=[common_io], help="marginals and spectra of a tensor")
    p.set_defaults(fn=_cmd_info)

    p = sub.add_parser(
        "scale-uniform", parents=[common_io, common_scaling], help="scale toward uniform marginals"
    )
    p.set_defaults(fn=_cmd_scale_uniform)

    p = sub.add_parser(
        "semistable", parents=[common_io, common_scaling], help="semistability evidence verdict"
    )
    p.set_defaults(fn=_cmd_semistable)

    p = sub.add_parser(
        "member", parents=[common_io, common_scaling], help="spectrum point membership test"
    )
    p.add_argument("--point", required=True, help="point JSON (inline or a file path)")
    p.set_defaults(fn=_cmd_member)

    p = sub.add_parser("minrank", parents=[common_io], help="sampled minrank upper bound")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_minrank)

    p = sub.add_parser("maxrank", parents=[common_io], help="sampled maxrank estimate")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_maxrank)

    p = sub.add_parser("separation", help="minrank separation arithmetic")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--json-out")
    p.set_defaults(fn=_cmd_separation)

    p = sub.add_parser("border-subrank", help="border subrank bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--json-out")
    p.set_defaults(fn=_cmd_border_subrank)

    p = sub.add_parser("verify", help="run the verification claim suite")
    p.add_argument("--filter", help="claim id pattern, e.g. 'marginals/*'")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json-out")
    p.set_defaults(fn=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (TensorFormatError, json.JSONDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except (ZeroTensorError, ValueError, np.linalg.LinAlgError, RuntimeError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
