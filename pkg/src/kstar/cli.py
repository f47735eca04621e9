"""Command-line entry point: ``kstar <subcommand> ...`` or ``python -m kstar``.

Exit codes: 0 success, 1 domain error (bad parameters for the mathematics),
2 usage error (argparse).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import mpmath

from . import decompose, experiments, laplace, moments, pairing, thresholds


class DomainError(Exception):
    pass


def _emit(text: str, out: str | None = None):
    if out:
        experiments.write_text(out, text)
    else:
        sys.stdout.write(text)


def _seed(args) -> int:
    if args.seed is None:
        print("note: --seed not given, using seed 0", file=sys.stderr)
        return 0
    return args.seed


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _num(x) -> str:
    return mpmath.nstr(x, 20) if isinstance(x, mpmath.mpf) else str(x)


def _rows(header, rows, fmt) -> str:
    if fmt == "json":
        return json.dumps([dict(zip(header, r)) for r in rows], indent=2) + "\n"
    sep = "," if fmt == "csv" else " "
    return "".join(sep.join(map(str, r)) + "\n" for r in [header, *rows])


# --------------------------------------------------------------------------
# subcommands


def cmd_thresholds(args):
    rep = thresholds.threshold_report(args.d)
    if args.format == "json":
        body = {"d": rep.d, "ksscm": rep.ksscm, "kplus": rep.kplus,
                "c_value": {str(k): v for k, v in rep.c_value.items()},
                "c_gt_one": {str(k): v for k, v in rep.c_gt_one.items()}}
        _emit(json.dumps(body, indent=2) + "\n")
    else:
        _emit(f"ksscm={rep.ksscm} kplus={rep.kplus}\n")


def cmd_table1(args):
    rows = thresholds.table1(args.dmax)
    _emit(_rows(["d", "ksscm", "kplus"], rows, args.format))


def cmd_scan(args):
    rows = thresholds.scan(args.dmax, workers=args.threads)
    rows = [(d, s, p, int(s in (p - 1, p))) for d, s, p in rows]
    _emit(_rows(["d", "ksscm", "kplus", "within_one"], rows, args.format))


def cmd_fhat(args):
    params = thresholds.Params(args.d, args.k)
    params.require_above_half()
    series = thresholds.plot_fhat(params, thresholds.default_grid(params, args.points))
    _emit(thresholds.fhat_csv(series), args.out)
    p2 = thresholds.check_P2(params)
    changes = thresholds.sign_changes(series)
    line = f"p2={p2} sign_changes={len(changes)}"
    if p2:
        det = thresholds.check_P1_detail(params)
        line += f" surviving_roots={len(det.surviving)} p1={det.holds}"
    print(line, file=sys.stderr if not args.out else sys.stdout)


def cmd_moments(args):
    d, k = args.d, args.k
    out = {}
    gap = 4 * k - d - 2 - (2 * k - d) ** 2
    if gap > 0 and 2 * k > d:
        out["sum_lambda_delta_sq"] = _num(moments.sum_lambda_delta_sq(d, k))
        out["variance_ratio_limit"] = _num(moments.variance_ratio_limit(d, k))
    if 2 * k > d:
        c, gt = thresholds.c_value((d, k))
        out["c"] = _num(c)
        out["c_gt_one"] = gt
    if args.n is not None:
        n = args.n
        ey = moments.exact_EY(n, d, k)
        out["exact_EY"] = str(ey)
        out["exact_EY_decimal"] = _num(mpmath.mpf(ey.numerator) / ey.denominator)
        if 2 * k > d:
            out["asympt_EY"] = _num(moments.asympt_EY(n, d, k))
            if moments.domain_size(n, d, k) <= moments.DOMAIN_CAP:
                ey2 = moments.exact_EY2(n, d, k)
                out["exact_EY2"] = str(ey2)
                if ey:
                    out["EY2_over_EY_sq"] = _num(mpmath.mpf((ey2 / ey**2).numerator) / (ey2 / ey**2).denominator)
    _kv(out, args.format)


def _kv(out: dict, fmt: str):
    if fmt == "json":
        _emit(json.dumps(out, indent=2) + "\n")
    elif fmt == "csv":
        _emit("key,value\n" + "".join(f"{k},{v}\n" for k, v in out.items()))
    else:
        _emit("".join(f"{k}={v}\n" for k, v in out.items()))


def cmd_landscape(args):
    d, k = args.d, args.k
    if not (2 * k > d and k < d):
        raise DomainError("landscape needs d/2 < k < d")
    bs = laplace.bstar(d, k)
    out = {
        "bstar": " ".join(str(x) for x in bs.b),
        "phi_bstar": _num(laplace.phi_bstar_closed(d, k)),
        "psi_bstar": _num(laplace.psi_bstar_closed(d, k)),
        "phi_boundary_a": _num(laplace.phi_boundary_closed(d, k)),
        "det_negH": _num(laplace.det_negH_closed(d, k)),
        "negH_positive_definite": laplace.negH_is_positive_definite(d, k),
    }
    if args.maximize:
        res = laplace.maximize_phi(d, k, laplace.MaximizeOptions(starts=args.starts, seed=_seed(args)))
        out.update(max_value=repr(float(res.value)), max_distance=repr(float(res.distance)), matches_bstar=res.matches_bstar)
        if args.runs_out:
            experiments.write_text(args.runs_out, laplace.runs_csv(res))
    _kv(out, args.format)


def cmd_sample(args):
    seed = _seed(args)
    if args.simple:
        g, tries = pairing.sample_simple_graph(args.n, args.d, seed, args.max_tries)
        print(f"tries={tries}", file=sys.stderr)
    else:
        g = pairing.sample_pairing(args.n, args.d, seed).multigraph()
    _emit(pairing.format_graph(g), args.out)


def cmd_decompose(args):
    g = pairing.read_graph(args.graph)
    opts = decompose.SolveOptions(mode=args.mode, time_limit=args.time_limit, seed=_seed(args) if args.mode != "exact" else 0)
    res = decompose.solve(g, args.k, opts)
    if args.format == "json":
        body = {"status": res.status, "stats": res.stats,
                "stars": [[c, list(es)] for c, es in res.decomposition.stars] if res.found else None}
        _emit(json.dumps(body, indent=2, default=str) + "\n")
        return
    sys.stdout.write(res.status + "\n")
    if res.found:
        _emit(res.decomposition.format(), args.out)


def cmd_existence(args):
    cfg = experiments.TrialConfig(
        d=args.d, k=args.k, n_list=args.n, trials=args.trials, seed=_seed(args),
        solver=decompose.SolveOptions(mode=args.mode, time_limit=args.time_limit),
        workers=args.threads, timing=args.timing,
    )
    res = experiments.run_existence(cfg)
    if args.csv:
        experiments.write_text(args.csv, res.csv())
    if args.json:
        experiments.write_text(args.json, res.json())
    if args.format == "json":
        _emit(res.json())
    elif args.format == "csv":
        _emit(res.csv())
    else:
        for n, s in res.summary.items():
            _emit(f"n={n} found={s['found']}/{s['trials']} freq={s['frequency']:.4f} "
                  f"ci=[{s['wilson_lo']:.4f},{s['wilson_hi']:.4f}] unknown={s['unknown']}\n")


def cmd_cycles(args):
    res = experiments.run_cycle_poisson(args.d, args.n, args.trials, args.m, _seed(args), workers=args.threads)
    if args.json:
        experiments.write_text(args.json, res.json())
    if args.format == "json":
        _emit(res.json())
    elif args.format == "csv":
        _emit(res.csv())
    else:
        for r in res.rows:
            _emit(f"j={r.j} mean={r.mean:.5f} var={r.var:.5f} lambda={r.lam:.5f} z={r.z:+.3f}\n")
        _emit(f"simple={res.simple_freq:.5f} expected={res.simple_expected:.5f} z={res.simple_z:+.3f}\n")


def cmd_leaf(args):
    res = experiments.run_leaf_condition(args.d, args.k, args.n, args.trials, _seed(args),
                                         decompose.SolveOptions(mode=args.mode), workers=args.threads)
    if args.csv:
        experiments.write_text(args.csv, res.csv())
    if args.format == "json":
        _emit(res.json())
    elif args.format == "csv":
        _emit(res.csv())
    else:
        lo, hi = res.condition_interval
        _emit(f"condition_freq={res.condition_freq:.4f} ci=[{lo:.4f},{hi:.4f}] "
              f"found_freq={res.found_freq:.4f} implication_holds={res.implication_holds}\n")


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "csv", "json"], default="text")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)

    seeded = argparse.ArgumentParser(add_help=False)
    seeded.add_argument("--seed", type=int, default=None)

    p = argparse.ArgumentParser(prog="kstar", description="k-star decompositions of random regular graphs")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("thresholds", parents=[common], help="k_SSCM(d) and k_+(d)")
    s.add_argument("--d", type=int, required=True)
    s.set_defaults(func=cmd_thresholds)

    s = sub.add_parser("table1", parents=[common], help="thresholds for d = 3..dmax")
    s.add_argument("--dmax", type=int, default=20)
    s.set_defaults(func=cmd_table1)

    s = sub.add_parser("scan", parents=[common], help="check k_SSCM in {k_+ - 1, k_+} up to dmax")
    s.add_argument("--dmax", type=int, default=100)
    s.set_defaults(func=cmd_scan)

    s = sub.add_parser("fhat", parents=[common], help="plot data for f-hat on the P1 interval")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--points", type=int, default=400)
    s.add_argument("--out")
    s.set_defaults(func=cmd_fhat)

    s = sub.add_parser("moments", parents=[common], help="first/second moments and limits")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--n", type=int)
    s.set_defaults(func=cmd_moments)

    s = sub.add_parser("landscape", parents=[common, seeded], help="second-moment landscape at b*")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--maximize", action="store_true")
    s.add_argument("--starts", type=int, default=200)
    s.add_argument("--runs-out")
    s.set_defaults(func=cmd_landscape)

    s = sub.add_parser("sample", parents=[common, seeded], help="sample a pairing / simple regular graph")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--simple", action="store_true")
    s.add_argument("--max-tries", type=int, default=2_000_000)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("decompose", parents=[common, seeded], help="find or refute a k-star decomposition")
    s.add_argument("--graph", required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--mode", choices=["exact", "heuristic", "auto"], default="auto")
    s.add_argument("--time-limit", type=float, default=60.0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("experiment", help="Monte Carlo campaigns")
    esub = s.add_subparsers(dest="experiment", required=True)

    e = esub.add_parser("existence", parents=[common, seeded])
    e.add_argument("--d", type=int, required=True)
    e.add_argument("--k", type=int, required=True)
    e.add_argument("--n", type=_int_list, required=True, help="comma-separated n values")
    e.add_argument("--trials", type=int, default=100)
    e.add_argument("--mode", choices=["exact", "heuristic", "auto"], default="auto")
    e.add_argument("--time-limit", type=float, default=60.0)
    e.add_argument("--timing", action="store_true", help="record wall time in the ms column")
    e.add_argument("--csv")
    e.add_argument("--json")
    e.set_defaults(func=cmd_existence)

    e = esub.add_parser("cycles", parents=[common, seeded])
    e.add_argument("--d", type=int, required=True)
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--trials", type=int, default=10_000)
    e.add_argument("--m", type=int, default=4)
    e.add_argument("--json")
    e.set_defaults(func=cmd_cycles)

    e = esub.add_parser("leaf", parents=[common, seeded])
    e.add_argument("--d", type=int, required=True)
    e.add_argument("--k", type=int, required=True)
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--trials", type=int, default=100)
    e.add_argument("--mode", choices=["exact", "heuristic", "auto"], default="auto")
    e.add_argument("--csv")
    e.set_defaults(func=cmd_leaf)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (DomainError, ValueError, ArithmeticError, pairing.SamplingExhausted) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
