"""Command line front end.

Subcommands: solve, two-stage, house-sweep, perturb-compare, sharpness.
Instances are .mps paths or builtin tokens like
builtin:house?kappa=0.5,delta=0.01 / builtin:appendix-b?kappa=1e-2 /
builtin:random?m=20,n=40,degenerate=1,seed=3.

Exit codes: 0 solved to tolerance, 2 iteration limit, 3 stagnation on a
perturbed run, 1 anything else.  PDHG_LOG_EVERY overrides the logging
(and termination-check) cadence, default 1.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import instances, mps, scaling
from .identification import (identification_bound, identification_moment,
                             local_rate_per_iter, r_delta_metric,
                             radius_bound)
from .kernels import BACKEND
from .model import (PrimalDualPoint, StandardLP, delta_metric, matrix_norm,
                    objective_value, partition, to_standard)
from .sharpness import (empirical_sharpness, hoffman_brute_force,
                        homogeneous_sharpness_report,
                        identification_cone_system, kkt_polyhedron,
                        local_cone_system)
from .solver import SolverConfig, solve
from .svg import PALETTE, LinePlot

_STATUS_EXIT = {"optimal_tol": 0, "iter_limit": 2}


def _log_every():
    raw = os.environ.get("PDHG_LOG_EVERY")
    if raw is None:
        return 1
    value = int(raw)
    if value < 1:
        raise ValueError("PDHG_LOG_EVERY must be a positive integer")
    return value


def _parse_params(query):
    params = {}
    if query:
        for item in query.replace("&", ",").split(","):
            if not item:
                continue
            key, sep, val = item.partition("=")
            if not sep:
                raise ValueError(f"malformed instance parameter {item!r}")
            params[key.strip()] = val.strip()
    return params


def load_instance(token):
    """Resolve an instance token to a problem (builtin:... or a .mps path)."""
    if token.startswith("builtin:"):
        name, _, query = token[len("builtin:"):].partition("?")
        params = _parse_params(query)
        if name == "house":
            return instances.house(float(params.get("kappa", 0.5)),
                                   float(params.get("delta", 0.1)))
        if name in ("appendix-b", "wedge"):
            return instances.wedge(float(params.get("kappa", 1e-2)))
        if name == "random":
            lp, _ = instances.random_planted_lp(
                int(params.get("m", 20)), int(params.get("n", 40)),
                degenerate=bool(int(params.get("degenerate", 0))),
                seed=int(params.get("seed", 0)))
            return lp
        raise ValueError(f"unknown builtin instance {name!r}")
    with open(token) as fh:
        return mps.parse_mps(fh.read())


def _config(args, record_iterates=False):
    return SolverConfig(step_scale=args.step_scale, max_iters=args.max_iters,
                        kkt_tol=args.tol, log_every=_log_every(),
                        seed=args.seed, record_iterates=record_iterates)


def _run(problem, args, precondition=True, record_iterates=False):
    cfg = _config(args, record_iterates)
    if precondition:
        scaled, record = scaling.precondition(problem)
        return solve(scaled, cfg, original=(problem, record))
    return solve(problem, cfg)


def _print_result(res, problem):
    print(f"status: {res.status}")
    print(f"iterations: {res.iterations}")
    print(f"kkt: {res.kkt_final!r}")
    print(f"objective: {objective_value(problem, res.z_final.x)!r}")
    print(f"step_size: {res.step_size!r}")
    print(f"sigma_hat: {res.sigma_hat!r}")
    print(f"backend: {BACKEND}")


def cmd_solve(args):
    problem = load_instance(args.instance)
    res = _run(problem, args, precondition=not args.no_precondition)
    _print_result(res, problem)
    if args.log:
        res.log.write_csv(args.log)
        print(f"log: {args.log}")
    return _STATUS_EXIT.get(res.status, 1)


def _standardized(problem):
    if isinstance(problem, StandardLP):
        return problem
    return to_standard(problem)[0]


def _two_stage_analysis(lp, res, samples=40, seed=0):
    """Partition, delta, cone sharpness, and the predicted/observed
    identification data for a finished (unscaled) standard-form solve."""
    z_star = res.z_final
    A_norm = matrix_norm(lp.A)
    part = partition(lp, z_star, A_norm=A_norm)
    delta = delta_metric(lp, z_star, part, A_norm)
    z0 = PrimalDualPoint(np.zeros(lp.n), np.zeros(lp.m))
    out = {
        "partition": {"N": [int(i) for i in part.N],
                      "B1": [int(i) for i in part.B1],
                      "B2": [int(i) for i in part.B2]},
        "delta": delta.value,
        "delta_argmin_kind": delta.argmin_kind,
        "delta_argmin_index": delta.argmin_index,
        "A_norm": A_norm,
        "step_size": res.step_size,
        "empirical_identification_iter": identification_moment(res.log, part),
        "theoretical_K": None,
        "local_rate_per_iter": None,
        "R": None,
        "R_local": None,
        "alpha_L1": None,
        "alpha_L2": None,
    }
    if not (np.isfinite(delta.value) and delta.value > 0.0):
        return out, part
    R = radius_bound(z0, z_star)
    R2 = r_delta_metric(z0, z_star, delta.value)
    out["R"] = R
    out["R_local"] = R2
    sys1 = identification_cone_system(lp, part, R)
    rep1 = homogeneous_sharpness_report(sys1.F, sys1.F_ineq, samples=samples,
                                        seed=seed)
    sys2 = local_cone_system(lp, part, R2)
    rep2 = homogeneous_sharpness_report(sys2.F, sys2.F_ineq, samples=samples,
                                        seed=seed)
    out["alpha_L1"] = rep1.to_json_dict()
    out["alpha_L2"] = rep2.to_json_dict()
    a1, a2 = rep1.alpha_lower, rep2.alpha_lower
    if np.isfinite(a1) and a1 > 0.0:
        out["theoretical_K"] = identification_bound(R, delta.value,
                                                    res.step_size, a1, A_norm)
    if np.isfinite(a2) and a2 > 0.0:
        out["local_rate_per_iter"] = local_rate_per_iter(delta.value,
                                                         res.step_size, a2)
    return out, part


def _two_stage_plot(path, res, analysis, timestamp=True):
    plot = LinePlot(title="two-stage convergence", xlabel="iteration",
                    ylabel="residual / step norm", logy=True)
    plot.add_series(res.log.iters, res.log.kkt, label="kkt")
    plot.add_series(res.log.iters, res.log.ps_step_norm, label="ps step norm")
    moment = analysis["empirical_identification_iter"]
    if moment is not None:
        plot.add_vline(moment, label="identified", color="#2ca02c")
    K = analysis["theoretical_K"]
    if K is not None and res.log.iters and K <= 1.5 * res.log.iters[-1]:
        plot.add_vline(K, label="K bound", color="#d62728")
    plot.write(path, timestamp=timestamp)


def cmd_two_stage(args):
    lp = _standardized(load_instance(args.instance))
    res = _run(lp, args, precondition=False)
    analysis, _ = _two_stage_analysis(lp, res, seed=args.seed)
    payload = {
        "instance": args.instance,
        "status": res.status,
        "iterations": res.iterations,
        "kkt_final": res.kkt_final,
        "objective": objective_value(lp, res.z_final.x),
    }
    payload.update(analysis)
    text = json.dumps(payload, indent=2)
    with open(args.report, "w") as fh:
        fh.write(text + "\n")
    print(text)
    if args.plot:
        _two_stage_plot(args.plot, res, analysis,
                        timestamp=not args.no_timestamp)
        print(f"plot: {args.plot}")
    if args.log:
        res.log.write_csv(args.log)
        print(f"log: {args.log}")
    return _STATUS_EXIT.get(res.status, 1)


def cmd_house_sweep(args):
    kappas = [float(t) for t in args.kappas.split(",") if t]
    deltas = [float(t) for t in args.deltas.split(",") if t]
    os.makedirs(args.out, exist_ok=True)
    worst = 0
    for kappa in kappas:
        plot = LinePlot(title=f"house kappa={kappa:g}", xlabel="iteration",
                        ylabel="kkt residual", logy=True)
        for di, delta in enumerate(deltas):
            lp = _standardized(instances.house(kappa, delta))
            res = _run(lp, args, precondition=False)
            csv_path = os.path.join(args.out,
                                    f"house_k{kappa:g}_d{delta:g}.csv")
            res.log.write_csv(csv_path)
            part = partition(lp, res.z_final)
            moment = identification_moment(res.log, part)
            color = PALETTE[di % len(PALETTE)]
            plot.add_series(res.log.iters, res.log.kkt,
                            label=f"delta={delta:g}", color=color)
            if moment is not None:
                plot.add_vline(moment, color=color)
            print(f"kappa={kappa:g} delta={delta:g}: {res.status} after "
                  f"{res.iterations} iters, identified at {moment}")
            worst = max(worst, _STATUS_EXIT.get(res.status, 1))
        svg_path = os.path.join(args.out, f"house_k{kappa:g}.svg")
        plot.write(svg_path, timestamp=not args.no_timestamp)
        print(f"plot: {svg_path}")
    return worst


def _stagnated(res):
    """iter_limit with kkt still above 1e-4 and under 10% improvement over
    the last half of the log."""
    if res.status != "iter_limit" or res.kkt_final <= 1e-4:
        return False
    kk = res.log.kkt
    if len(kk) < 4:
        return True
    base = kk[len(kk) // 2]
    if base <= 0.0:
        return False
    return (1.0 - kk[-1] / base) < 0.1


def cmd_perturb_compare(args):
    problem = load_instance(args.instance)
    perturbed = instances.perturb(problem, args.sigma, seed=args.seed)
    os.makedirs(args.out, exist_ok=True)
    res_orig = _run(problem, args, precondition=not args.no_precondition)
    res_pert = _run(perturbed, args, precondition=not args.no_precondition)
    res_orig.log.write_csv(os.path.join(args.out, "original.csv"))
    res_pert.log.write_csv(os.path.join(args.out, "perturbed.csv"))
    plot = LinePlot(title=f"perturbation sigma={args.sigma:g}",
                    xlabel="iteration", ylabel="kkt residual", logy=True)
    plot.add_series(res_orig.log.iters, res_orig.log.kkt, label="original")
    plot.add_series(res_pert.log.iters, res_pert.log.kkt, label="perturbed")
    plot.write(os.path.join(args.out, "compare.svg"),
               timestamp=not args.no_timestamp)
    print(f"original: {res_orig.status} after {res_orig.iterations} iters, "
          f"kkt {res_orig.kkt_final!r}")
    print(f"perturbed: {res_pert.status} after {res_pert.iterations} iters, "
          f"kkt {res_pert.kkt_final!r}")
    if _stagnated(res_pert):
        print("perturbed run stagnated: instance is likely infeasible")
        return 3
    return max(_STATUS_EXIT.get(res_orig.status, 1),
               _STATUS_EXIT.get(res_pert.status, 1))


def cmd_sharpness(args):
    lp = _standardized(load_instance(args.instance))
    res = _run(lp, args, precondition=True)
    z_star = res.z_final
    z0 = PrimalDualPoint(np.zeros(lp.n), np.zeros(lp.m))
    R = radius_bound(z0, z_star)
    sys = kkt_polyhedron(lp, R)
    d = lp.n + lp.m
    zs = z_star.as_vector()
    probes = []
    for t in (1.0, 10.0, 100.0, 1000.0, 10000.0):
        for i in range(d):
            for sgn in (1.0, -1.0):
                p = zs.copy()
                p[i] += sgn * t
                probes.append(p)
    rng = np.random.default_rng(args.seed)
    probes.extend(zs + rng.standard_normal(d) for _ in range(20))
    emp = empirical_sharpness(sys, probes)
    brute = None
    note = None
    if sys.F.n_rows + sys.F_ineq.n_rows + sys.n <= args.brute_force_limit:
        brute = hoffman_brute_force(sys, dim_limit=args.brute_force_limit)
    else:
        note = "system larger than --brute-force-limit; skipped"
    payload = {
        "instance": args.instance,
        "solve_status": res.status,
        "empirical_sharpness": emp,
        "hoffman_brute_force": brute,
        "brute_force_note": note,
        "probes": len(probes),
    }
    print(json.dumps(payload, indent=2))
    return _STATUS_EXIT.get(res.status, 1)


def _add_solver_flags(p, tol_default):
    p.add_argument("--tol", type=float, default=tol_default,
                   help="KKT residual tolerance")
    p.add_argument("--max-iters", type=int, default=300000)
    p.add_argument("--step-scale", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pdhglp",
        description="Matrix-free PDHG LP solver with active-set "
                    "identification and sharpness diagnostics")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve an instance")
    p.add_argument("instance")
    _add_solver_flags(p, 1e-8)
    p.add_argument("--no-precondition", action="store_true")
    p.add_argument("--log", help="write the iterate log CSV here")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("two-stage",
                       help="solve unpreconditioned and report the "
                            "identification/local-rate diagnostics")
    p.add_argument("instance")
    _add_solver_flags(p, 1e-10)
    p.add_argument("--report", required=True)
    p.add_argument("--plot")
    p.add_argument("--log")
    p.add_argument("--no-timestamp", action="store_true")
    p.set_defaults(func=cmd_two_stage)

    p = sub.add_parser("house-sweep",
                       help="sweep house instances over kappa and delta")
    _add_solver_flags(p, 1e-10)
    p.add_argument("--kappas", default="0.9,0.5")
    p.add_argument("--deltas", default="0.1,0.01,0.001,0")
    p.add_argument("--out", required=True)
    p.add_argument("--no-timestamp", action="store_true")
    p.set_defaults(func=cmd_house_sweep)

    p = sub.add_parser("perturb-compare",
                       help="solve an instance and a perturbed copy")
    p.add_argument("instance")
    _add_solver_flags(p, 1e-8)
    p.add_argument("--sigma", type=float, default=1e-6)
    p.add_argument("--out", required=True)
    p.add_argument("--no-precondition", action="store_true")
    p.add_argument("--no-timestamp", action="store_true")
    p.set_defaults(func=cmd_perturb_compare)

    p = sub.add_parser("sharpness",
                       help="empirical sharpness of the optimal-set "
                            "polyhedron, with brute force when tiny")
    p.add_argument("instance")
    _add_solver_flags(p, 1e-10)
    p.add_argument("--brute-force-limit", type=int, default=10)
    p.set_defaults(func=cmd_sharpness)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # CLI boundary: fold everything into exit 1
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
