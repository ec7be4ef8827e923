"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 usage or input error,
3 degenerate covariance detected, 4 estimate unresolved.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import covariance as cov
from . import csvio, verify
from .errors import Ar1CharError
from .estimation import Status, Tolerances, resolve_phi, sample_autocovariance, tolerances_for
from .simulation import (
    ARNoise,
    Law,
    MovingAverage,
    WhiteGaussian,
    noise_sequence,
    simulate_ar1,
    simulate_degenerate_rank2,
)

EXIT_OK, EXIT_VERIFY_FAIL, EXIT_USAGE, EXIT_DEGENERATE, EXIT_UNRESOLVED = 0, 1, 2, 3, 4

FIGURES = {
    "fig1a_k1_l3": (1, 3),
    "fig1b_k5_l7": (5, 7),
    "fig2a_k1_l3371": (1, 3371),
    "fig2b_k3367_l3371": (3367, 3371),
    "fig3a_b0.6": 0.6,
    "fig3b_b1.7": 1.7,
}


class UsageError(Exception):
    pass


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _uint64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {text}")
    return v


def _add_param_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--b", type=float, help="recursion coefficient in [0, 2]")
    p.add_argument("--k", type=int, help="numerator of the rational angle k/l")
    p.add_argument("--l", type=int, help="denominator of the rational angle k/l")


def _param(args) -> cov.DegenerateParam:
    has_kl = args.k is not None or args.l is not None
    if args.b is not None and has_kl:
        raise UsageError("give either --b or --k/--l, not both")
    if has_kl:
        if args.k is None or args.l is None:
            raise UsageError("--k and --l must be given together")
        return cov.DegenerateParam.from_rational(args.k, args.l)
    if args.b is None:
        raise UsageError("one of --b or --k/--l is required")
    return cov.DegenerateParam(args.b)


def _add_noise_flags(p: argparse.ArgumentParser, default_white: bool) -> None:
    p.add_argument("--noise", choices=["white", "ma", "ar"], default="white" if default_white else None)
    p.add_argument("--sigma2", type=float, default=1.0, help="innovation variance")
    p.add_argument("--theta", type=_floats, help="MA coefficients theta_1,...,theta_q")
    p.add_argument("--rho", type=float, help="AR(1) noise coefficient")


def _noise(args):
    if args.noise == "white":
        return WhiteGaussian(args.sigma2)
    if args.noise == "ma":
        if not args.theta:
            raise UsageError("--noise ma requires --theta")
        return MovingAverage(tuple(args.theta), args.sigma2)
    if args.rho is None:
        raise UsageError("--noise ar requires --rho")
    return ARNoise(args.rho, args.sigma2)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ar1char", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen-cov", help="write the degenerate covariance sequence as lag,gamma CSV")
    _add_param_flags(g)
    g.add_argument("--max-lag", type=int, default=100)
    g.add_argument("--lags", type=_ints, help="explicit lags instead of 0..max-lag")
    g.add_argument("--out", default="-")

    f = sub.add_parser("figures", help="write CSV data for every figure's covariance sequence")
    f.add_argument("--out-dir", required=True)
    f.add_argument("--max-lag", type=int, default=100)

    s = sub.add_parser("simulate", help="simulate a sample path as t,x CSV")
    ssub = s.add_subparsers(dest="model", required=True)
    a = ssub.add_parser("ar1")
    a.add_argument("--phi", type=float, required=True)
    _add_noise_flags(a, default_white=True)
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--seed", type=_uint64, default=0)
    a.add_argument("--out", default="-")
    r = ssub.add_parser("rank2")
    _add_param_flags(r)
    r.add_argument("--law", choices=[x.value for x in Law], default=Law.GAUSSIAN_PAIR.value)
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--seed", type=_uint64, default=0)
    r.add_argument("--out", default="-")

    e = sub.add_parser("estimate", help="estimate phi from a path or a covariance sequence")
    src = e.add_mutually_exclusive_group(required=True)
    src.add_argument("--path", help="t,x CSV sample path")
    src.add_argument("--gamma", help="lag,gamma CSV autocovariance of X")
    e.add_argument("--r", dest="r_csv", help="lag,gamma CSV autocovariance of the noise Z")
    _add_noise_flags(e, default_white=False)
    e.add_argument("--lags", type=_ints, default=[1, 2, 3])
    e.add_argument("--mode", choices=["exact", "sample"])
    e.add_argument("--max-lag", type=int, help="lags of the sample autocovariance (default max(lags)+1, at least 3)")
    e.add_argument("--resolve-tol", type=float, help="override the clustering width")

    v = sub.add_parser("verify", help="run a numerical verification suite")
    vsub = v.add_subparsers(dest="suite", required=True)
    sp = vsub.add_parser("spectrum")
    sp.add_argument("--k", type=int)
    sp.add_argument("--l", type=int)
    sp.add_argument("--max-l", type=int, default=12)
    sp.add_argument("--out", help="index,eigenvalue CSV (single (k, l) only)")
    ps = vsub.add_parser("psd")
    ps.add_argument("--b", type=_floats, default=verify.default_psd_bs())
    ps.add_argument("--n", type=int, default=100)
    sc = vsub.add_parser("sumcos")
    sc.add_argument("--max-l", type=int, default=50)
    pe = vsub.add_parser("period")
    pe.add_argument("--max-l", type=int, default=25)
    pe.add_argument("--max-m", type=int, default=200)
    de = vsub.add_parser("density")
    de.add_argument("--b", type=float, required=True)
    de.add_argument("--target", type=_floats, required=True)
    de.add_argument("--tol", type=float, default=1e-2)
    de.add_argument("--start", type=int, default=0)
    de.add_argument("--cap", type=int, default=cov.DENSITY_CAP)
    t2 = vsub.add_parser("theorem2")
    t2.add_argument("--phi", type=_floats, default=[0.2, 0.5, 0.9])
    t2.add_argument("--epsilon", type=float, default=0.19)
    t2.add_argument("--M", type=int, default=1)
    t2.add_argument("--max-lag", type=int, default=60)
    return parser


def cmd_gen_cov(args) -> int:
    p = _param(args)
    if args.lags is not None:
        lags = args.lags
        if any(m < 0 for m in lags):
            raise UsageError("lags must be non-negative")
    else:
        if args.max_lag < 0:
            raise UsageError("--max-lag must be non-negative")
        lags = range(args.max_lag + 1)
    csvio.write_covariance(args.out, lags, [cov.gamma_closed_form(p, m) for m in lags])
    return EXIT_OK


def cmd_figures(args) -> int:
    if args.max_lag < 0:
        raise UsageError("--max-lag must be non-negative")
    os.makedirs(args.out_dir, exist_ok=True)
    lags = range(args.max_lag + 1)
    for name, spec in FIGURES.items():
        p = cov.DegenerateParam.from_rational(*spec) if isinstance(spec, tuple) else cov.DegenerateParam(spec)
        csvio.write_covariance(os.path.join(args.out_dir, name + ".csv"), lags,
                               [cov.gamma_closed_form(p, m) for m in lags])
    return EXIT_OK


def cmd_simulate(args) -> int:
    if args.n < 1:
        raise UsageError("--n must be positive")
    if args.model == "ar1":
        if not 0.0 < args.phi < 1.0:
            raise UsageError(f"--phi must lie in (0, 1), got {args.phi}")
        path = simulate_ar1(args.phi, _noise(args), args.n, args.seed)
    else:
        path = simulate_degenerate_rank2(_param(args), args.n, args.seed, args.law)
    csvio.write_path(args.out, path.values)
    return EXIT_OK


def cmd_estimate(args) -> int:
    if not args.lags:
        raise UsageError("--lags must not be empty")
    mode = args.mode or ("sample" if args.path else "exact")
    if args.path:
        max_lag = args.max_lag if args.max_lag is not None else max(max(args.lags) + 1, 3)
        gamma = sample_autocovariance(csvio.read_path(args.path), max_lag)
    else:
        gamma = csvio.read_covariance(args.gamma)
    if args.r_csv and args.noise:
        raise UsageError("give either --r or --noise, not both")
    if args.r_csv:
        r = csvio.read_covariance(args.r_csv)
    elif args.noise:
        r = noise_sequence(_noise(args), gamma.M)
    else:
        raise UsageError("the noise autocovariance is required: pass --r or --noise")

    tol = tolerances_for(mode)
    if args.resolve_tol is not None:
        tol = Tolerances(**{**tol.__dict__, "resolve": args.resolve_tol})
    est = resolve_phi(gamma, r, args.lags, tol)
    print(f"status={est.status.value}")
    print(f"phi={csvio.fmt(est.phi)}")
    print(f"lags_used={','.join(str(m) for m in est.lags_used)}")
    print(f"cluster_spread={csvio.fmt(est.cluster_spread)}")
    print(f"mode={mode}")
    if est.status is Status.RESOLVED:
        return EXIT_OK
    if est.status is Status.DEGENERATE:
        return EXIT_DEGENERATE
    return EXIT_UNRESOLVED


def cmd_verify(args) -> int:
    suite = args.suite
    if suite == "spectrum":
        if (args.k is None) != (args.l is None):
            raise UsageError("--k and --l must be given together")
        if args.k is not None:
            pairs = [(args.k, args.l)]
        else:
            if args.out:
                raise UsageError("--out needs a single --k/--l case")
            pairs = list(cov.q_members(args.max_l))
        cases, reports = verify.spectrum(pairs)
        if args.out:
            csvio.write_spectrum(args.out, reports[pairs[0]].eigenvalues)
    elif suite == "psd":
        if args.n < 1:
            raise UsageError("--n must be positive")
        cases = verify.psd(args.b, args.n)
    elif suite == "sumcos":
        cases = verify.sumcos(args.max_l)
    elif suite == "period":
        cases = verify.period(args.max_l, args.max_m)
    elif suite == "density":
        if not (args.tol >= 0 and 0 <= args.start <= args.cap):
            raise UsageError("need --tol >= 0 and 0 <= --start <= --cap")
        cases = verify.density(args.b, args.target, args.tol, args.start, args.cap)
    else:
        cases = verify.damping_guard(args.phi, args.epsilon, args.M, args.max_lag)
    sys.stdout.write(verify.format_table(cases))
    return EXIT_OK if verify.all_passed(cases) else EXIT_VERIFY_FAIL


COMMANDS = {
    "gen-cov": cmd_gen_cov,
    "figures": cmd_figures,
    "simulate": cmd_simulate,
    "estimate": cmd_estimate,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except (UsageError, Ar1CharError, ValueError, OSError) as exc:
        print(f"ar1char {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
