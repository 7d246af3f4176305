"""Command-line front end.

Commands: check, mixed-norm, opnorm, gen, scan.  Exponents may be written
as exact rationals ("18/10") anywhere they appear, so boundary tuples are
classified exactly.  Every random quantity takes an explicit --seed; the
same invocation always produces byte-identical output.  Exit codes: 0
success, 2 invalid input, 3 capacity/overflow.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .errors import CapacityError, NormOverflowError
from .exponents import (
    ExponentTuple,
    classical_bh_tuple,
    is_admissible_bruteforce,
    is_admissible_fast,
    reciprocal_sum,
)
from .opnorm import ascent_lower, bilinear_upper, exact_real
from .randforms import KszSpec, lift, littlewood_tensor, sample_sign_tensor
from .scaling import ExperimentSpec, run_experiment, write_outputs
from .tensor import CoefTensor, Partition, block_restrict, mixed_norm

__all__ = ["main", "build_parser"]


def _fmt(v) -> str:
    return str(v) if isinstance(v, Fraction) else f"{float(v):.12g}"


def _emit_json(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _load_tensor(path: str) -> CoefTensor:
    with open(path) as fh:
        return CoefTensor.from_dict(json.load(fh))


def _dump_tensor(t: CoefTensor, path: str | None) -> None:
    text = json.dumps(t.to_dict(), sort_keys=True)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _parse_ints(text: str) -> tuple[int, ...]:
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if ".." in tok:
            lo, hi = tok.split("..", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif tok:
            out.append(int(tok))
    if not out:
        raise ValueError(f"empty integer list {text!r}")
    return tuple(out)


def _threads(args) -> int:
    if getattr(args, "threads", None):
        return args.threads
    env = os.environ.get("BHLAB_THREADS", "")
    return int(env) if env.isdigit() and int(env) > 0 else 1


# ------------------------------- check -------------------------------------

def _cmd_check(args) -> int:
    if args.bh is not None:
        q = classical_bh_tuple(args.bh)
    elif args.q:
        q = ExponentTuple.parse(args.q)
    else:
        raise ValueError("give exponents or --bh M")
    if args.partition:
        p = Partition.parse(args.partition)
        if p.k != q.k:
            raise ValueError(f"partition has {p.k} blocks for {q.k} exponents")
    else:
        p = None

    report = is_admissible_bruteforce(q) if args.brute else is_admissible_fast(q)
    full_sum = reciprocal_sum(q)
    threshold = Fraction(q.k + 1, 2)

    if args.json:
        payload = report.as_dict()
        payload.update(
            k=q.k,
            q=q.to_json(),
            reciprocal_sum=float(full_sum),
            reciprocal_sum_exact=str(full_sum) if isinstance(full_sum, Fraction) else None,
            threshold=float(threshold),
            mode="brute" if args.brute else "fast",
            partition=list(p.blocks) if p else None,
        )
        _emit_json(payload)
        return 0

    if args.bh is not None:
        print("q = (" + ", ".join(_fmt(v) for v in q.values) + ")")
    if p is not None:
        print(f"partition {p.blocks} -> m = {p.m}")
    if report.admissible:
        print(f"ADMISSIBLE deficit={_fmt(report.max_deficit)}")
    else:
        wit = "{" + ",".join(str(j) for j in sorted(report.witness)) + "}"
        print(f"INADMISSIBLE witness={wit} deficit={_fmt(report.max_deficit)}")
    rel = "<=" if full_sum <= threshold else ">"
    print(f"  sum 1/q_j (all j)  = {_fmt(full_sum)} {rel} (k+1)/2 = {_fmt(threshold)}")
    rel = "<=" if report.reduced_sum <= threshold else ">"
    print(f"  sum 1/min(q_j, 2)  = {_fmt(report.reduced_sum)} {rel} (k+1)/2 = {_fmt(threshold)}")
    return 0


# ----------------------------- mixed-norm ----------------------------------

def _cmd_mixed_norm(args) -> int:
    t = _load_tensor(args.infile)
    q = ExponentTuple.parse(args.q)
    p = Partition.parse(args.partition) if args.partition else Partition.trivial(t.m)
    restricted = block_restrict(t, p)
    value = mixed_norm(restricted, q)
    if args.json:
        _emit_json({
            "value": value,
            "q": q.to_json(),
            "partition": list(p.blocks),
            "m": t.m,
            "n": t.n,
        })
    else:
        print(f"{value!r}")
    return 0


# ------------------------------- opnorm ------------------------------------

def _cmd_opnorm(args) -> int:
    t = _load_tensor(args.infile)
    if args.mode == "exact":
        est = exact_real(t, budget_bits=args.budget_bits)
    elif args.mode == "ascent":
        est = ascent_lower(t, restarts=args.restarts, seed=args.seed)
    else:
        low = ascent_lower(t, restarts=args.restarts, seed=args.seed)
        upper = bilinear_upper(t)
        est = type(low)(low.lower, upper, False, low.certificate)
    _emit_json(est.as_dict(include_certificate=args.certificate))
    return 0


# -------------------------------- gen --------------------------------------

def _cmd_gen(args) -> int:
    if args.family == "littlewood":
        t = littlewood_tensor(args.field)
    else:
        if args.k is None or args.n is None:
            raise ValueError("--k and --n are required for random families")
        t = sample_sign_tensor(KszSpec(k=args.k, n=args.n, seed=args.seed, field=args.field))
        if args.family == "ksz-lifted":
            if args.m is None:
                raise ValueError("--m (target arity) is required for ksz-lifted")
            t = lift(t, args.m)
    _dump_tensor(t, args.out)
    return 0


# -------------------------------- scan -------------------------------------

def _cmd_scan(args) -> int:
    q = ExponentTuple.parse(args.q)
    partition = Partition.parse(args.partition) if args.partition else Partition.trivial(q.k)
    spec = ExperimentSpec(
        q=q,
        partition=partition,
        family=args.family.replace("-", "_"),
        n_grid=_parse_ints(args.n_grid),
        seeds=_parse_ints(args.seeds),
        norm_mode=args.norm_mode,
        lift_base=args.lift_base,
        source=args.infile,
        field=args.field,
        restarts=args.restarts,
    )
    result = run_experiment(spec, threads=_threads(args))
    csv_path, json_path = write_outputs(result, args.out)
    s = result.fitted_slope
    print(
        f"verdict={result.verdict}"
        f" fitted_slope={'none' if s is None else f'{s:.6g}'}"
        f" stderr={'none' if s is None else f'{result.slope_stderr:.3g}'}"
        f" predicted_slope={result.predicted_slope:.6g}"
        f" rows={len(result.rows)}"
    )
    print(f"wrote {csv_path} {json_path}")
    return 0


# ------------------------------- parser ------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bhlab",
        description="Mixed-norm inequality laboratory: admissible exponents, "
        "nested lq norms, sign-vertex operator norms, growth experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="decide admissibility of an exponent tuple")
    c.add_argument("q", nargs="*", help="exponents: numbers or rationals like 18/10")
    c.add_argument("--bh", type=int, metavar="M", help="use the m-fold tuple 2m/(m+1)")
    c.add_argument("--brute", action="store_true", help="force the 2^k subset enumeration")
    c.add_argument("--partition", help="block sizes n_1,...,n_k (validated against k)")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=_cmd_check)

    mn = sub.add_parser("mixed-norm", help="nested lq norm of a tensor file")
    mn.add_argument("--in", dest="infile", required=True, metavar="TENSOR.json")
    mn.add_argument("--q", nargs="+", required=True, help="one exponent per restricted index")
    mn.add_argument("--partition", help="block restriction before the norm (default trivial)")
    mn.add_argument("--json", action="store_true")
    mn.set_defaults(func=_cmd_mixed_norm)

    on = sub.add_parser("opnorm", help="operator norm estimate of a tensor file")
    on.add_argument("--in", dest="infile", required=True, metavar="TENSOR.json")
    on.add_argument("--mode", choices=("exact", "ascent", "sandwich"), default="exact")
    on.add_argument("--restarts", type=int, default=32)
    on.add_argument("--seed", type=int, default=0)
    on.add_argument("--budget-bits", type=int, default=26, help="cap on (m-1)*n for exact mode")
    on.add_argument("--certificate", action="store_true", help="include the attaining vectors")
    on.set_defaults(func=_cmd_opnorm)

    g = sub.add_parser("gen", help="generate a tensor file")
    g.add_argument("--family", choices=("ksz", "ksz-lifted", "littlewood"), required=True)
    g.add_argument("--k", type=int, help="arity (base arity for ksz-lifted)")
    g.add_argument("--m", type=int, help="target arity for ksz-lifted")
    g.add_argument("--n", type=int, help="side length")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--field", choices=("real", "complex"), default="real")
    g.add_argument("--out", help="output path (stdout if omitted)")
    g.set_defaults(func=_cmd_gen)

    s = sub.add_parser("scan", help="growth-rate experiment over a grid of sides")
    s.add_argument("--q", nargs="+", required=True)
    s.add_argument("--family", choices=("ksz", "ksz-lifted", "ksz_lifted", "littlewood", "file"),
                   default="ksz")
    s.add_argument("--n-grid", required=True, help="sides, e.g. 4,8,12,16")
    s.add_argument("--seeds", default="0", help="seed list, e.g. 0..19 or 1,5,7")
    s.add_argument("--norm-mode", choices=("exact", "sandwich"), default="exact")
    s.add_argument("--partition", help="block sizes (default all ones)")
    s.add_argument("--lift-base", type=int, help="base arity for ksz-lifted")
    s.add_argument("--in", dest="infile", help="tensor file for --family file")
    s.add_argument("--field", choices=("real", "complex"), default="real")
    s.add_argument("--restarts", type=int, default=32, help="ascent restarts in sandwich mode")
    s.add_argument("--out", required=True, help="output prefix for .csv and .json")
    s.add_argument("--threads", type=int, help="cell parallelism (default $BHLAB_THREADS or 1)")
    s.set_defaults(func=_cmd_scan)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CapacityError, NormOverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, IndexError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
