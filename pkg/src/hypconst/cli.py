"""Command-line front end: constant tables, finite-instance verification and curtain experiments.

Exit codes: 0 when every certified check passes, 1 when a violation is
found, 2 on bad input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from .constants import (
    HypothesisError,
    QuasiParams,
    bounds_from_kappa,
    curtain_model_params,
    kappa_n,
    kappa_table,
    sci3,
    solve_kappa,
    theorem_b_bounds,
)
from .curtain import (
    CurtainModelConfig,
    DensityError,
    EuclideanBackend,
    backend_from_dict,
    curtain_distance_bounds,
    curtain_oracle,
    exact_oracle,
    four_point_defect_lower,
    bound_matrices,
    reparametrize_samples,
    sample_points,
)
from .metric import FiniteMetricSpace, MetricError, PathError, PathSystem, certify

OK, VIOLATION, INPUT_ERROR = 0, 1, 2


class InputError(ValueError):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(text, path):
    if path:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}") from e


# ---------------------------------------------------------------- constants

def constants_report(q1, q2, D, mode, tolerance=1e-9):
    params = QuasiParams(q1, q2, D)
    kappa = method = None
    if mode == "theorem-b":
        if not params.rough:
            raise HypothesisError("theorem-b route needs q1 = 1")
        bounds = theorem_b_bounds(q2, D)
    else:
        if mode == "fixed-point":
            cert = solve_kappa(params, tolerance)
        elif mode.startswith("n:"):
            try:
                n = int(mode[2:])
            except ValueError:
                raise InputError(f"bad mode {mode!r}; expected n:<int>") from None
            cert = kappa_n(params, n)
        else:
            raise InputError(f"unknown mode {mode!r}")
        kappa, method = cert.kappa, cert.method
        bounds = bounds_from_kappa(params, cert, mode)
    return {
        "params": params.as_dict(),
        "mode": mode,
        "kappa": kappa,
        "method": method,
        "delta_prime": bounds.delta_prime,
        "delta": bounds.delta,
        "provenance": bounds.provenance,
    }


def cmd_constants(args):
    rep = constants_report(args.q1, args.q2, args.D, args.mode, args.tolerance)
    lines = []
    if rep["kappa"] is not None:
        lines.append(f"kappa = {sci3(rep['kappa'])} ({rep['method']})")
    lines.append(f"delta' = {sci3(rep['delta_prime'])}")
    lines.append("delta = " + (sci3(rep["delta"]) if rep["delta"] is not None else "n/a (needs q1 = 1)"))
    print("\n".join(lines), file=sys.stderr)
    _emit(_dump(rep), args.output)
    return OK


# ---------------------------------------------------------------- kappa table

def kappa_table_csv(q, D, n_max) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "K_n", "eps_n", "kappa_n", "running_min", "running_argmin"])
    for n, K, eps, k, best, arg in kappa_table(q, D, n_max):
        w.writerow([n, repr(K), repr(eps), repr(k), repr(best), arg])
    return buf.getvalue()


def cmd_kappa_table(args):
    _emit(kappa_table_csv(args.q, args.D, args.n_max), args.output)
    return OK


# ---------------------------------------------------------------- verify

def load_space(obj):
    try:
        return FiniteMetricSpace(obj["labels"], obj["dist"])
    except (KeyError, TypeError) as e:
        raise InputError(f'space needs "labels" and "dist": {e}') from e


def load_paths(obj, space):
    try:
        raw = obj["paths"]
        paths = {}
        for key, seq in raw.items():
            x, y = key.split("|")
            paths[(space.index[x], space.index[y])] = [space.index[p] for p in seq]
    except (KeyError, TypeError, AttributeError, ValueError) as e:
        raise InputError(f'paths must map "x|y" to label lists over known labels: {e!r}') from e
    return PathSystem(len(space), paths)


def cmd_verify(args):
    space = load_space(_load_json(args.space))
    system = load_paths(_load_json(args.paths), space)
    report = certify(system, space, args.q)
    _emit(_dump(report.as_dict()), args.output)
    return OK if report.consistent else VIOLATION


# ---------------------------------------------------------------- curtain

def _encode_point(p):
    if isinstance(p, str):
        return p
    return [v if isinstance(v, str) else float(v) for v in p]


def load_pairs(obj, backend):
    try:
        raw = obj["pairs"]
        return [(backend.point(a), backend.point(b)) for a, b in raw]
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f'pairs must be {{"pairs": [[p, q], ...]}} of backend points: {e}') from e


def _line_samples(backend, x, y, step):
    seg = backend.segment(x, y)
    ts = [*np.arange(0.0, seg.length, step).tolist(), seg.length]
    return [seg.at(t) for t in ts]


def curtain_report(backend, pairs, L_max=20, grid_step=0.25, seed=0, n_samples=200, exact_metric=False, region=None, sample_step=None):
    config = CurtainModelConfig(L_max=L_max).check()
    qpar = curtain_model_params(config.Lambda)
    rows = []
    for x, y in pairs:
        b = curtain_distance_bounds(x, y, config, backend, step=grid_step)
        row = {"x": _encode_point(x), "y": _encode_point(y), "d": backend.dist(x, y), **b.as_dict()}
        try:
            g = reparametrize_samples(_line_samples(backend, x, y, sample_step or grid_step), curtain_oracle(backend, config, grid_step), qpar.q2, config.Lambda)
            row["rough_geodesic"] = g.as_dict()
        except DensityError as e:
            row["rough_geodesic"] = {"error": str(e), "unreachable_t": e.t}
        rows.append(row)
    oracle = exact_oracle(backend) if exact_metric else curtain_oracle(backend, config, grid_step)
    pts = sample_points(backend, n_samples, seed, region)
    empirical = four_point_defect_lower(*bound_matrices(pts, oracle))
    fixed = bounds_from_kappa(qpar, solve_kappa(qpar), "fixed-point")
    thm_b = theorem_b_bounds(qpar.q2, qpar.D)
    return {
        "backend": backend.as_dict(),
        "config": {
            "L_max": L_max,
            "grid_step": grid_step,
            "sample_step": sample_step or grid_step,
            "seed": seed,
            "n_samples": n_samples,
            "metric": "exact" if exact_metric else "curtain",
        },
        "pairs": rows,
        "empirical_four_point_defect": empirical,
        "ceilings": {
            "theorem_b": {"delta_prime": thm_b.delta_prime, "delta": thm_b.delta},
            "fixed_point": {"delta_prime": fixed.delta_prime, "delta": fixed.delta},
        },
        "margin": fixed.delta - empirical,
        "within_ceiling": empirical <= fixed.delta,
    }


def _parse_region(text, backend):
    if text is None:
        return None
    if not isinstance(backend, EuclideanBackend):
        raise InputError("--region applies to euclidean backends only")
    try:
        lo, hi = (float(v) for v in text.split(","))
    except ValueError:
        raise InputError(f"--region expects lo,hi, got {text!r}") from None
    if not lo < hi:
        raise InputError("--region needs lo < hi")
    return [[lo, hi]] * backend.dim


def cmd_curtain(args):
    if not 0 <= args.seed < 2**64:
        raise InputError("seed must be a 64-bit unsigned integer")
    if args.n_samples < 4:
        raise InputError("--n-samples must be at least 4")
    if args.grid_step <= 0 or (args.sample_step is not None and args.sample_step <= 0):
        raise InputError("--grid-step and --sample-step must be positive")
    backend = backend_from_dict(_load_json(args.backend))
    pairs = load_pairs(_load_json(args.pairs), backend)
    rep = curtain_report(
        backend,
        pairs,
        args.L_max,
        args.grid_step,
        args.seed,
        args.n_samples,
        args.exact_metric,
        _parse_region(args.region, backend),
        args.sample_step,
    )
    print(
        f"empirical four-point defect {sci3(rep['empirical_four_point_defect'])}; "
        f"ceilings {sci3(rep['ceilings']['theorem_b']['delta_prime'])} (closed-form delta') and "
        f"{sci3(rep['ceilings']['fixed_point']['delta'])} (fixed-point delta); margin {sci3(rep['margin'])}",
        file=sys.stderr,
    )
    _emit(_dump(rep), args.output)
    return OK if rep["within_ceiling"] else VIOLATION


# ---------------------------------------------------------------- entry point

class _Help(argparse.ArgumentDefaultsHelpFormatter):
    # show defaults only where there is a real value
    def _get_help_string(self, action):
        if action.default is None or action.default is False or action.default == argparse.SUPPRESS:
            return action.help
        return super()._get_help_string(action)


def build_parser():
    p = argparse.ArgumentParser(prog="hypconst", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    fmt = _Help

    c = sub.add_parser("constants", help="kappa, delta' and delta for given quasi-geodesic constants", formatter_class=fmt)
    c.add_argument("--q1", type=float, default=1.0, help="multiplicative constant")
    c.add_argument("--q2", type=float, required=True, help="additive constant")
    c.add_argument("--D", type=float, required=True, help="guessing-geodesics constant")
    c.add_argument("--mode", default="fixed-point", help="fixed-point, theorem-b or n:<int>")
    c.add_argument("--tolerance", type=float, default=1e-9, help="relative bisection tolerance")
    c.add_argument("-o", "--output", help="write JSON here instead of stdout")
    c.set_defaults(func=cmd_constants)

    k = sub.add_parser("kappa-table", help="CSV of kappa_n for n = 1..n_max", formatter_class=fmt)
    k.add_argument("--q", type=float, required=True, help="quasi-geodesic constant, at least 1")
    k.add_argument("--D", type=float, required=True, help="guessing-geodesics constant, at least 1")
    k.add_argument("--n-max", type=int, default=2000, help="last n in the table")
    k.add_argument("-o", "--output", help="write CSV here instead of stdout")
    k.set_defaults(func=cmd_kappa_table)

    v = sub.add_parser("verify", help="certify a finite metric space with a path system", formatter_class=fmt)
    v.add_argument("space", help='JSON {"labels": [...], "dist": [[...]]}')
    v.add_argument("paths", help='JSON {"paths": {"x|y": [labels]}}')
    v.add_argument("--q", type=float, default=1.0, help="rough-geodesic constant")
    v.add_argument("-o", "--output", help="write JSON here instead of stdout")
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("curtain", help="curtain-metric bounds and the empirical four-point defect", formatter_class=fmt)
    m.add_argument("backend", help='JSON {"type": "euclidean", "dim": n} or {"type": "tree", ...}')
    m.add_argument("pairs", help='JSON {"pairs": [[p, q], ...]}')
    m.add_argument("--L-max", type=int, default=20, help="truncation level of the weighted sum")
    m.add_argument("--grid-step", type=float, default=0.25, help="pole spacing of the candidate curtains")
    m.add_argument("--sample-step", type=float, help="spacing of the points fed to the reparametrisation (default: grid step)")
    m.add_argument("--seed", type=int, default=0, help="64-bit unsigned sampling seed")
    m.add_argument("--n-samples", type=int, default=200, help="points sampled for the four-point defect")
    m.add_argument("--region", help="sampling box lo,hi per coordinate (euclidean; default 0,4)")
    m.add_argument("--exact-metric", action="store_true", help="sample with the base metric instead of curtain bounds")
    m.add_argument("-o", "--output", help="write JSON here instead of stdout")
    m.set_defaults(func=cmd_curtain)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MetricError as e:
        msg = str(e) if e.triple is None else f"{e} (triple {e.triple})"
        print(f"error: {msg}", file=sys.stderr)
    except (InputError, HypothesisError, PathError, ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
    return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
