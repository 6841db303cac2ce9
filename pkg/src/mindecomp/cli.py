"""Command-line front end.

Exit codes: 0 success, 1 domain failure (generator did not converge,
verification failed), 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import designs
from .designs import canonicalize, known_state
from .ensemble import QUANTITIES, SOURCES, EnsembleSpec, export, report_to_csv, report_to_json, run_ensemble
from .entropy import ipr, renyi_entropy, support
from .generate import GenConfig, generate_kuniform
from .minentropy import DEFAULT_SEED, MinEntropyConfig, entropy_vs_q_sweep, minimize_entropy
from .seesaw import s_infinity_min
from .states import read_state, state_to_dict, write_state
from .uniformity import k_uniformity_deviation


class UsageError(Exception):
    pass


def _q(text: str) -> float:
    if text.lower() in ("inf", "infinity"):
        return math.inf
    try:
        q = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if q < 0:
        raise argparse.ArgumentTypeError("q must be non-negative")
    return q


def _q_list(text: str) -> list[float]:
    return [_q(t) for t in text.split(",") if t.strip()]


def _load(args):
    if getattr(args, "known", None):
        try:
            return known_state(args.known)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if getattr(args, "input", None):
        try:
            return read_state(args.input)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read {args.input}: {exc}") from None
    raise UsageError("give --in FILE or --known NAME")


def _jsonable(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return x


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        json.dump(payload, sys.stdout, indent=1, default=_jsonable)
        sys.stdout.write("\n")
    else:
        print(text)


def _write_json(path, payload):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")


def _log_config(args):
    cfg = {k: v for k, v in vars(args).items() if k != "func"}
    print(f"[mindecomp] seed={args.seed} config={json.dumps(cfg, default=str, sort_keys=True)}",
          file=sys.stderr)


# --- subcommands --------------------------------------------------------------

def cmd_entropy(args) -> int:
    state = _load(args)
    values = {}
    for q in args.q:
        values["inf" if math.isinf(q) else f"{q:g}"] = renyi_entropy(state, q, args.support_tol)
    payload = {
        "n_parties": state.n_parties,
        "local_dim": state.local_dim,
        "entropies": values,
        "support": support(state, args.support_tol),
        "ipr2": ipr(state, 2),
    }
    lines = [f"S_{k} = {v:.12g}" for k, v in values.items()]
    lines.append(f"support = {payload['support']}")
    _emit(args, payload, "\n".join(lines))
    return 0


def _min_config(args, q) -> MinEntropyConfig:
    return MinEntropyConfig(q=q, restarts=args.restarts, rng_seed=args.seed,
                            sweep_tol=args.sweep_tol, max_sweeps=args.max_sweeps)


def cmd_minimize(args) -> int:
    state = _load(args)
    res = minimize_entropy(state, _min_config(args, args.q))
    payload = {**res.to_dict(), "seed": args.seed}
    if args.out:
        _write_json(args.out, payload)
    if args.state_out:
        write_state(res.optimized_state, args.state_out, entropy=res.entropy, q=args.q)
    _emit(args, payload, f"S_{args.q:g}^min = {res.entropy:.12g} (best restart {res.best_restart})")
    return 0


def cmd_sparsify(args) -> int:
    state = _load(args)
    res = minimize_entropy(state, _min_config(args, args.q))
    canon = canonicalize(res.optimized_state, args.tol)
    payload = {
        "entropy_before": renyi_entropy(state, args.q),
        "entropy_after": res.entropy,
        "support_before": support(state, args.tol),
        "support_after": support(canon, args.tol),
        "tol": args.tol,
        "units": res.to_dict()["units"],
        "state": state_to_dict(canon),
        "seed": args.seed,
    }
    if args.out:
        write_state(canon, args.out, entropy=res.entropy, q=args.q,
                    support_before=payload["support_before"], support_after=payload["support_after"])
    _emit(args, payload,
          f"S_{args.q:g}: {payload['entropy_before']:.6f} -> {payload['entropy_after']:.6f}\n"
          f"support: {payload['support_before']} -> {payload['support_after']} (tol {args.tol:g})")
    return 0


def cmd_gme(args) -> int:
    state = _load(args)
    res = s_infinity_min(state, restarts=args.restarts, rng_seed=args.seed)
    payload = {**res.to_dict(), "seed": args.seed}
    if args.out:
        _write_json(args.out, payload)
    _emit(args, payload,
          f"lambda = {res.lambda_:.12g}\nS_inf^min = {res.s_inf_min:.12g}\nGME = {res.gme:.12g}")
    return 0


def cmd_generate(args) -> int:
    try:
        cfg = GenConfig(args.n, args.d, args.k, max_iters=args.max_iters, restarts=args.restarts,
                        rng_seed=args.seed, f_tol=args.f_tol, verify_tol=args.verify_tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    res = generate_kuniform(cfg)
    payload = res.metadata()
    if res.success and args.out:
        write_state(res.state, args.out, **payload)
    if res.success:
        text = f"generated {cfg.k}-uniform state, f = {res.f_final!r} after {res.iterations} iterations"
    else:
        text = (f"no {cfg.k}-uniform state found in {cfg.restarts} restarts; "
                f"best f = {res.f_final!r} (1 - f = {1 - res.f_final:.3e})")
    _emit(args, payload, text)
    return 0 if res.success else 1


def cmd_verify(args) -> int:
    state = _load(args)
    k = state.n_parties // 2 if args.k is None else args.k
    try:
        report = k_uniformity_deviation(state, k, tol=args.tol, reduce_complements=not args.all)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    verdict = "uniform" if report.is_uniform else "NOT uniform"
    _emit(args, report.to_dict(),
          f"{k}-uniformity: {verdict}, max deviation {report.max_deviation:.3e} (tol {args.tol:g})")
    return 0 if report.is_uniform else 1


def cmd_construct(args) -> int:
    try:
        if args.known:
            state = known_state(args.known)
        elif args.design == "ls":
            state = designs.state_from_oa(designs.oa_from_ls(designs.latin_square(args.d)))
        elif args.design in ("ols", "oa"):
            state = designs.state_from_oa(designs.oa_from_mols(*designs.mols_pair(args.d)))
        else:
            raise UsageError("give --design {ls,ols,oa} with --d, or --known NAME")
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    payload = state_to_dict(state)
    if args.out:
        write_state(state, args.out)
    _emit(args, payload, f"state with N={state.n_parties}, d={state.local_dim}, "
                         f"support {support(state)}")
    return 0


def cmd_ensemble(args) -> int:
    try:
        spec = EnsembleSpec(
            source=args.source, n=args.n, d=args.d, size=args.size,
            quantities=tuple(q.strip() for q in args.quantities.split(",")),
            restarts=args.restarts, seesaw_restarts=args.seesaw_restarts,
            rng_seed=args.seed, bins=args.bins, files=tuple(args.files or ()),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = run_ensemble(spec, n_jobs=args.threads)
    if args.out:
        export(report, args.format, args.out)
    if args.json:
        sys.stdout.write(report_to_json(report))
    elif not args.out:
        sys.stdout.write(report_to_csv(report))
    else:
        for q, st in report.stats.items():
            print(f"{q}: mean {st['mean']:.4f} +- {st['stderr']:.4f}  "
                  f"[{st['min']:.4f}, {st['max']:.4f}]  n={st['count']}")
    return 0 if report.records else 1


def cmd_sweep_q(args) -> int:
    state = _load(args)
    cfg = MinEntropyConfig(restarts=args.restarts, rng_seed=args.seed)
    rows = entropy_vs_q_sweep(state, args.q_grid, cfg)
    payload = {"rows": [{"q": q, "S_q": s, "S_q_min": m} for q, s, m in rows], "seed": args.seed}
    if args.seesaw:
        res = s_infinity_min(state, restarts=args.seesaw_restarts, rng_seed=args.seed)
        payload["S_inf"] = renyi_entropy(state, math.inf)
        payload["S_inf_min"] = res.s_inf_min
    lines = [f"{q:8.3f}  {s:.8f}  {m:.8f}" for q, s, m in rows]
    if args.seesaw:
        lines.append(f"     inf  {payload['S_inf']:.8f}  {payload['S_inf_min']:.8f}")
    _emit(args, payload, "\n".join(lines))
    return 0


# --- parser -------------------------------------------------------------------

def _add_input(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--in", dest="input", metavar="FILE", help="state JSON file")
    g.add_argument("--known", choices=sorted(designs.KNOWN_STATES), help="built-in state")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--json", action="store_true", help="machine-readable output on stdout")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)

    parser = argparse.ArgumentParser(prog="mindecomp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("entropy", parents=[common], help="decomposition entropies of a state")
    _add_input(p)
    p.add_argument("--q", type=_q_list, default=[2.0], help="comma-separated orders, 'inf' allowed")
    p.add_argument("--support-tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_entropy)

    for name, func, helptext in (("minimize", cmd_minimize, "minimal entropy S_q^min"),
                                 ("sparsify", cmd_sparsify, "minimize then canonicalize")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        _add_input(p)
        p.add_argument("--q", type=float, default=2.0)
        p.add_argument("--restarts", type=int, default=20)
        p.add_argument("--sweep-tol", type=float, default=1e-10)
        p.add_argument("--max-sweeps", type=int, default=10_000)
        p.add_argument("--out", help="write result JSON here")
        if name == "minimize":
            p.add_argument("--state-out", help="write the optimized state here")
        else:
            p.add_argument("--tol", type=float, default=1e-4, help="support threshold")
        p.set_defaults(func=func)

    p = sub.add_parser("gme", parents=[common], help="S_inf^min and geometric entanglement by seesaw")
    _add_input(p)
    p.add_argument("--restarts", type=int, default=50)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gme)

    p = sub.add_parser("generate", parents=[common], help="random k-uniform / AME state")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--restarts", type=int, default=10)
    p.add_argument("--max-iters", type=int, default=5000)
    p.add_argument("--f-tol", type=float, default=1e-10)
    p.add_argument("--verify-tol", type=float, default=1e-6)
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", parents=[common], help="k-uniformity check")
    _add_input(p)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--all", action="store_true", help="check all C(N,k) subsets, no complement reduction")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("construct", parents=[common], help="states from designs or the built-in library")
    p.add_argument("--design", choices=("ls", "ols", "oa"))
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--known", choices=sorted(designs.KNOWN_STATES))
    p.add_argument("--out")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("ensemble", parents=[common], help="entropy statistics over an ensemble")
    p.add_argument("--source", choices=SOURCES, default="haar")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--size", type=int, default=1000)
    p.add_argument("--quantities", default="S2", help=f"comma-separated subset of {','.join(QUANTITIES)}")
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--seesaw-restarts", type=int, default=50)
    p.add_argument("--bins", type=int, default=60)
    p.add_argument("--files", nargs="*")
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_ensemble)

    p = sub.add_parser("sweep-q", parents=[common], help="S_q and S_q^min over a grid of q")
    _add_input(p)
    p.add_argument("--q-grid", type=_q_list, default=[1.5, 2.0, 3.0, 5.0, 10.0, 20.0, 50.0])
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--seesaw", action="store_true", help="also report S_inf^min")
    p.add_argument("--seesaw-restarts", type=int, default=50)
    p.set_defaults(func=cmd_sweep_q)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _log_config(args)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"mindecomp {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
