"""Command-line front end: run, trace, verify, mob-demo.

Everything is deterministic (probabilities are exact, no sampling), so an
identical invocation always produces a byte-identical report. Exit codes:
0 success, 1 usage error, 2 verification failure, 3 numerical failure.
"""

import argparse
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import __version__, kernels, verify
from .dynamics import (
    NonlinearParams,
    NoOscillationError,
    NormDriftError,
    closed_form_trajectory,
    decide_s,
    default_alpha,
    default_dt,
    hold_time,
    omega,
    rk4_evolve,
    sigma3_closed_form,
)
from .locality import no_signaling_check, signaling_check_mob
from .pipeline import OracleSpec, PipelineError, measure_flag, post_step3, run_pairwise
from .qstate import DENSE_CAP, QStateError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2
EXIT_NUMERICAL = 3


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the contract here is 1
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _parse_marked(text, n):
    """Comma-separated marked inputs: decimal, or binary when n digits long."""
    marked = set()
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        if len(token) == n and set(token) <= {"0", "1"}:
            marked.add(int(token, 2))
        else:
            try:
                marked.add(int(token))
            except ValueError:
                raise UsageError(f"cannot parse marked value {token!r}") from None
    return frozenset(marked)


def _resolve_params(args, n):
    if args.alpha == "auto":
        alpha = default_alpha(n, args.eta)
    else:
        try:
            alpha = float(args.alpha)
        except ValueError:
            raise UsageError(f"--alpha must be a number or 'auto', got {args.alpha!r}")
    return NonlinearParams(epsilon=args.eps, alpha=alpha, eta=args.eta)


def _resolve_oracle(args):
    """Returns (oracle_or_None, s). Analytic s only has a marked count."""
    if (args.marked is None) == (args.s is None):
        raise UsageError("exactly one of --marked / --s must be given")
    if args.s is not None:
        if args.algo != "local":
            raise UsageError("--s (analytic path) is only valid with --algo local")
        if args.s < 0:
            raise UsageError("--s must be non-negative")
        return None, args.s
    if args.n > DENSE_CAP:
        raise UsageError(
            f"n={args.n} exceeds the dense cap {DENSE_CAP}; "
            "use --s with --algo local for the analytic path"
        )
    oracle = OracleSpec(args.n, _parse_marked(args.marked, args.n))
    return oracle, oracle.s


def _atomic_write(path, text):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".nlsearch-")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _write_report(path, report):
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if path:
        _atomic_write(path, text)
    else:
        sys.stdout.write(text)


def _diagnostics():
    return {"backend": kernels.BACKEND, "frequency_sign_note": verify.SIGN_NOTE}


def _local_results(n, s, p, t_max, dt):
    traj = closed_form_trajectory(n, s, p, t_max, dt)
    decision = decide_s(traj, n)
    w = omega(n, s, p)
    imin = int(np.argmin(traj.sigma3))
    results = {
        "omega": w,
        "decision": decision,
        "sigma3_initial": sigma3_closed_form(0.0, n, s, p),
        "sigma3_min": float(traj.sigma3[imin]),
        "t_at_min": float(traj.times[imin]),
        "samples": int(traj.times.size),
    }
    try:
        results["hold_time"] = hold_time(n, s, p)
    except NoOscillationError:
        results["hold_time"] = None
    return results, traj


def cmd_run(args):
    oracle, s = _resolve_oracle(args)
    p = _resolve_params(args, args.n)
    t_max = args.t_max if args.t_max is not None else 2.0 * math.pi / p.epsilon
    dt = args.dt if args.dt is not None else default_dt(p)

    results = {}
    if args.algo in ("pairwise", "both"):
        if oracle is None:
            raise UsageError("--algo pairwise needs an explicit --marked set")
        final = run_pairwise(oracle)
        prob = measure_flag(final.state)
        results["pairwise"] = {
            "flag_probability": prob,
            "decision": "nonzero" if prob > 0.5 else "zero",
            "step4_pass_count": final.pass_count,
            "op_count": final.op_count,
            "enumeration_baseline": 2**args.n,
        }
    if args.algo in ("local", "both"):
        results["local"], _ = _local_results(args.n, s, p, t_max, dt)

    report = {
        "config": {
            "command": "run",
            "n": args.n,
            "marked": sorted(oracle.marked) if oracle else None,
            "s": s,
            "algo": args.algo,
            "eps": p.epsilon,
            "eta": p.eta,
            "alpha": p.alpha,
            "t_max": t_max,
            "dt": dt,
        },
        "results": results,
        "diagnostics": _diagnostics(),
        "version": __version__,
    }
    _write_report(args.out, report)
    return EXIT_OK


def cmd_trace(args):
    if args.algo != "local":
        raise UsageError("trace requires --algo local")
    oracle, s = _resolve_oracle(args)
    p = _resolve_params(args, args.n)
    t_max = args.t_max if args.t_max is not None else 2.0 * math.pi / p.epsilon
    dt = args.dt if args.dt is not None else default_dt(p)

    traj = closed_form_trajectory(args.n, s, p, t_max, dt)
    rows = [(float(t), float(z), traj.source) for t, z in zip(traj.times, traj.sigma3)]

    sup_gap = None
    if args.oracle == "rk4":
        if args.n > DENSE_CAP:
            raise UsageError(
                f"--oracle rk4 needs a dense state vector (n <= {DENSE_CAP})"
            )
        if oracle is None:
            oracle = OracleSpec(args.n, frozenset(range(s)))
        rk4 = rk4_evolve(post_step3(oracle), t_max, dt, p, s=s)
        exact = sigma3_closed_form(rk4.trajectory.times, args.n, s, p)
        sup_gap = float(np.max(np.abs(rk4.trajectory.sigma3 - exact)))
        rows += [
            (float(t), float(z), "rk4")
            for t, z in zip(rk4.trajectory.times, rk4.trajectory.sigma3)
        ]
        print(f"closed-form vs rk4 sup-norm gap: {sup_gap:.3e}")

    if args.format == "csv":
        lines = ["t,sigma3,source"]
        lines += [f"{t!r},{z!r},{src}" for t, z, src in rows]
        text = "\n".join(lines) + "\n"
        if args.out:
            _atomic_write(args.out, text)
        else:
            sys.stdout.write(text)
    else:
        report = {
            "config": {
                "command": "trace",
                "n": args.n,
                "marked": sorted(oracle.marked) if oracle else None,
                "s": s,
                "algo": args.algo,
                "eps": p.epsilon,
                "eta": p.eta,
                "alpha": p.alpha,
                "t_max": t_max,
                "dt": dt,
                "oracle": args.oracle,
            },
            "results": {
                "samples": [{"t": t, "sigma3": z, "source": src} for t, z, src in rows],
                "sup_gap": sup_gap,
            },
            "diagnostics": _diagnostics(),
            "version": __version__,
        }
        _write_report(args.out, report)
    return EXIT_OK


def cmd_verify(args):
    ok = verify.run_all()
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_mob_demo(args):
    mob = signaling_check_mob()
    p = _resolve_params(args, args.n)
    oracle = OracleSpec(args.n, frozenset([max(0, 2**args.n - 2)]))
    t_star = hold_time(args.n, 1, p)
    local = no_signaling_check(args.n, oracle, p, times=[0.1, t_star, 2.0 * t_star])
    report = {
        "config": {
            "command": "mob-demo",
            "n": args.n,
            "eps": p.epsilon,
            "eta": p.eta,
            "alpha": p.alpha,
        },
        "results": {"pairwise_bell": mob.to_dict(), "flag_local": local.to_dict()},
        "diagnostics": _diagnostics(),
        "version": __version__,
    }
    _write_report(args.out, report)
    return EXIT_OK


def _add_common(sub):
    sub.add_argument("--n", type=int, required=True, help="number of input qubits")
    sub.add_argument("--marked", help="comma-separated marked inputs (decimal, or binary with n digits)")
    sub.add_argument("--s", type=int, help="marked count for the analytic path (local only)")
    sub.add_argument("--algo", choices=["pairwise", "local", "both"], default="both")
    sub.add_argument("--eps", type=float, default=1.0, help="nonlinearity magnitude")
    sub.add_argument("--eta", type=float, default=0.01, help="flag-operator tilt")
    sub.add_argument("--alpha", default="auto", help="gain, or 'auto' for the default formula")
    sub.add_argument("--t-max", type=float, default=None)
    sub.add_argument("--dt", type=float, default=None)
    sub.add_argument("--oracle", choices=["rk4"], default=None, help="also run the RK4 oracle")
    sub.add_argument("--out", default=None, help="output file (stdout if omitted)")
    sub.add_argument("--format", choices=["json", "csv"], default=None)


def build_parser():
    parser = _Parser(prog="nlsearch", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    run = subs.add_parser("run", help="run the pipeline(s) and write a JSON report")
    _add_common(run)
    run.set_defaults(func=cmd_run, format="json")

    trace = subs.add_parser("trace", help="write a <sigma3>(t) trajectory")
    _add_common(trace)
    trace.set_defaults(func=cmd_trace, algo="local")

    ver = subs.add_parser("verify", help="run all property suites")
    ver.set_defaults(func=cmd_verify)

    mob = subs.add_parser("mob-demo", help="signaling vs no-signaling reports")
    mob.add_argument("--n", type=int, default=3)
    mob.add_argument("--eps", type=float, default=1.0)
    mob.add_argument("--eta", type=float, default=0.01)
    mob.add_argument("--alpha", default="auto")
    mob.add_argument("--out", default=None)
    mob.set_defaults(func=cmd_mob_demo)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "format", None) is None:
            args.format = "csv" if args.command == "trace" else "json"
        return args.func(args)
    except (UsageError, PipelineError, QStateError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NormDriftError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
