"""Command-line front end.

Exit codes: 0 certified / ok, 1 usage or parse error, 2 unknown or
inconclusive, 3 falsified, 4 infeasible parameters.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

from .builders import (BuildSpec, ConstructionError, InfeasibleSpec, balanced_k_vec, build, plan_parameters,
                       skewed_k_vec)
from .packings import AssignmentError, PackingError, build_packing, validate_packing
from .ramsey import RamseyTarget, bounds_report, exhaustive_nonexistence, search_coloring
from .verify import (VerifierCapExceeded, sample_falsify, verify_condition_ii, verify_exact, verify_necessary,
                     verify_shallow)
from .witness import dump_witness, load_array

EXIT_OK, EXIT_USAGE, EXIT_UNKNOWN, EXIT_FALSIFIED, EXIT_INFEASIBLE = 0, 1, 2, 3, 4
STATUS_EXIT = {"certified": EXIT_OK, "unknown": EXIT_UNKNOWN, "falsified": EXIT_FALSIFIED}

log = logging.getLogger("suitcore")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _emit(obj, out: str | None) -> None:
    text = json.dumps(obj, indent=1)
    if out:
        Path(out).write_text(text + "\n")
    print(text)


# ---------------------------------------------------------------------------
# construct
# ---------------------------------------------------------------------------

def _spec_from_args(args) -> BuildSpec:
    if args.t is not None and args.v is not None:
        s, delta = divmod(args.t, 2)
        alpha = args.v - s
    elif None not in (args.s, args.delta, args.alpha):
        s, delta, alpha = args.s, args.delta, args.alpha
    else:
        raise InfeasibleSpec("give either --t and --v, or --s, --delta and --alpha")
    if alpha < 3 or delta not in (0, 1):
        raise InfeasibleSpec(f"alpha={alpha}, delta={delta}: routes need alpha >= 3, delta in {{0,1}}")
    t, v = 2 * s + delta, s + alpha
    plan = plan_parameters(t, v) if t >= 3 and v <= t else None
    l, k_vec = args.l, args.k
    if args.route == "packing":
        if l is None:
            l = plan.packing["min_l"] if plan else None
            if l is None:
                raise InfeasibleSpec(f"no feasible l for the packing route at t={t}, v={v}")
        if not args.force and (plan is None or l not in plan.feasible_packing_l()):
            window = plan.feasible_packing_l() if plan else []
            raise InfeasibleSpec(f"l={l} outside the packing window {window} for t={t}, v={v}")
        return BuildSpec(s, delta, alpha, l, "packing", None, args.seed)
    r = 2 * alpha - delta - 2
    if k_vec is None:
        if args.preset == "skewed":
            if r != 3:
                raise InfeasibleSpec("the theorem3 split is for three heavy symbols (alpha=3, delta=1)")
            k_vec = list(skewed_k_vec(l if l is not None else 0))
        else:
            l = l if l is not None else r * r
            k_vec = list(balanced_k_vec(l, r))
    return BuildSpec(s, delta, alpha, l, "ramsey", tuple(k_vec), args.seed)


def cmd_construct(args) -> int:
    try:
        spec = _spec_from_args(args)
        kw = {"budget": args.budget} if spec.route == "ramsey" else {"restarts": args.restarts}
        kw["jobs"] = args.jobs
        witness = build(spec, **kw)
    except InfeasibleSpec as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ConstructionError, PackingError, AssignmentError) as exc:
        print(f"construction failed: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN
    cert = witness.certificate
    if args.out:
        dump_witness(witness, args.out)
    print(f"({witness.n},{witness.v},{witness.t}) core via {spec.route} route: {cert.status} [{cert.tier}]")
    if cert.witness is not None:
        print(f"violation: {json.dumps(cert.witness.to_json())}")
    return STATUS_EXIT[cert.status]


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def run_verifier(core, t: int, mode: str, trials: int = 10_000, seed: int = 0, jobs: int = 1):
    if mode == "exact":
        return verify_exact(core, t, jobs=jobs)
    if mode == "shallow":
        return verify_shallow(core, t)
    if mode == "necessary":
        return verify_necessary(core, t)
    if mode == "condition-ii":
        return verify_condition_ii(core, t)
    if mode == "sample":
        return sample_falsify(core, t, trials, seed)
    raise ValueError(f"unknown mode {mode!r}")


def cmd_verify(args) -> int:
    try:
        core, t, _ = load_array(args.path)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"cannot parse {args.path}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.t is not None:
        t = args.t
    if args.mode == "sample" and args.trials < 1:
        print("--trials must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        verdict = run_verifier(core, t, args.mode, args.trials, args.seed, args.jobs)
    except VerifierCapExceeded as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    print(f"({core.n_rows},{core.n_symbols},{t}) {verdict.tier}: {verdict.status}")
    if verdict.witness is not None:
        w = verdict.witness
        print(f"violation: sigma={w.sigma} T={list(w.t_set)} count={w.count} < {t + 1 - core.n_symbols + len(w.t_set)}")
    if args.json:
        print(json.dumps(verdict.to_json()))
    return STATUS_EXIT[verdict.status]


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------

_BOUND_ARGS = {
    "erdos": ("k",),
    "robertson": ("k", "l", "r_prev"),
    "lemma9": ("m", "r", "k"),
    "corollary1": ("m", "k"),
    "lemma10-recurrence": ("m", "k"),
    "johnson-d43": ("l",),
}


def cmd_bounds(args) -> int:
    missing = [f"--{a.replace('_', '-')}" for a in _BOUND_ARGS[args.formula] if getattr(args, a) is None]
    if missing:
        print(f"{args.formula} needs {' '.join(missing)}", file=sys.stderr)
        return EXIT_USAGE
    k = args.k
    scalar_k = k[0] if k and len(k) == 1 else None
    try:
        if args.formula in ("corollary1", "lemma10-recurrence"):
            rep = bounds_report(args.formula, m=args.m, k_vec=k)
        elif args.formula == "robertson":
            rep = bounds_report("robertson", k=scalar_k, l=args.l, r_k_l2=args.r_prev)
        elif args.formula == "lemma9":
            rep = bounds_report("lemma9", m=args.m, r=args.r, k=scalar_k)
        elif args.formula == "erdos":
            rep = bounds_report("erdos", k=scalar_k)
        else:
            rep = bounds_report("johnson-d43", l=args.l)
    except (ValueError, TypeError) as exc:
        print(f"bad arguments: {exc}", file=sys.stderr)
        return EXIT_USAGE
    d = rep.to_json()
    width = max(len(key) for key in d)
    for key, val in d.items():
        print(f"{key:<{width}}  {val}")
    print(json.dumps(d))
    if not rep.valid:
        print("side condition fails; bound not applicable", file=sys.stderr)
        return EXIT_UNKNOWN
    return EXIT_OK


# ---------------------------------------------------------------------------
# ingredients
# ---------------------------------------------------------------------------

def cmd_packing(args) -> int:
    try:
        p = build_packing(args.l, args.k, args.target, args.seed, args.restarts)
    except PackingError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_UNKNOWN
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    ok, clash = validate_packing(p)
    if not ok:
        print(f"internal error: triple {clash[0]} covered twice", file=sys.stderr)
        return EXIT_UNKNOWN
    _emit(p.to_json(), args.out)
    return EXIT_OK


def cmd_coloring(args) -> int:
    try:
        target = RamseyTarget(args.k)
        if args.exhaustive:
            none = exhaustive_nonexistence(args.n, target, args.m)
            print(json.dumps({"n": args.n, "k": list(target.k_vec), "m": args.m, "nonexistent": none}))
            return EXIT_OK
        col = search_coloring(args.n, target, args.m, args.seed, args.budget)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    if col is None:
        print(f"no coloring found within budget {args.budget}", file=sys.stderr)
        return EXIT_UNKNOWN
    _emit(col.to_json(), args.out)
    return EXIT_OK


def cmd_plan(args) -> int:
    try:
        plan = plan_parameters(args.t, args.v)
    except InfeasibleSpec as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    print(json.dumps(plan.to_json(), indent=1))
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="suitcore", description="Construct and certify suitable cores.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a core and write a witness file")
    c.add_argument("--route", choices=["packing", "ramsey"], default="packing")
    c.add_argument("--t", type=int)
    c.add_argument("--v", type=int)
    c.add_argument("--s", type=int)
    c.add_argument("--delta", type=int)
    c.add_argument("--alpha", type=int)
    c.add_argument("--l", type=int)
    c.add_argument("--k", type=_ints, help="clique budgets k_1,...,k_r (ramsey route)")
    c.add_argument("--preset", choices=["balanced", "skewed"], default="balanced")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--budget", type=int, default=200_000)
    c.add_argument("--restarts", type=int, default=64)
    c.add_argument("--force", action="store_true", help="build even outside the planner's window")
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("-o", "--out")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="verify a witness JSON or text array file")
    v.add_argument("path")
    v.add_argument("--mode", choices=["exact", "shallow", "necessary", "sample", "condition-ii"], default="exact")
    v.add_argument("--t", type=int, help="override the strength stored in the file")
    v.add_argument("--trials", type=int, default=10_000)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bounds", help="evaluate a Ramsey or packing bound")
    b.add_argument("formula", choices=sorted(_BOUND_ARGS))
    b.add_argument("--k", type=_ints)
    b.add_argument("--l", type=int)
    b.add_argument("--m", type=int)
    b.add_argument("--r", type=int)
    b.add_argument("--r-prev", dest="r_prev", type=int, help="known value of R(k, l-2) for robertson")
    b.set_defaults(func=cmd_bounds)

    pk = sub.add_parser("packing", help="greedy 3-(l,k,1) packing")
    pk.add_argument("--l", type=int, required=True)
    pk.add_argument("--k", type=int, required=True)
    pk.add_argument("--target", type=int, required=True)
    pk.add_argument("--seed", type=int, default=0)
    pk.add_argument("--restarts", type=int, default=64)
    pk.add_argument("-o", "--out")
    pk.set_defaults(func=cmd_packing)

    co = sub.add_parser("coloring", help="search for a Ramsey (r;m)-coloring of K_n")
    co.add_argument("--n", type=int, required=True)
    co.add_argument("--k", type=_ints, required=True)
    co.add_argument("--m", type=int, default=1)
    co.add_argument("--seed", type=int, default=0)
    co.add_argument("--budget", type=int, default=200_000)
    co.add_argument("--exhaustive", action="store_true", help="decide nonexistence by enumeration instead")
    co.add_argument("-o", "--out")
    co.set_defaults(func=cmd_coloring)

    pl = sub.add_parser("plan", help="feasible parameters for (t, v)")
    pl.add_argument("--t", type=int, required=True)
    pl.add_argument("--v", type=int, required=True)
    pl.set_defaults(func=cmd_plan)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
