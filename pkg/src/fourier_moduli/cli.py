"""Command-line front end.

Exit status is 0 on success, 1 when a verification or demo fails and 2 for
usage errors, including arguments outside the domain of a computation.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__, analysis
from .errors import FitError, FourierModuliError
from .field import SampledField
from .fitting import ZeroTail, fit_exponent
from .io import atomic_write_text, resolve_field, resolve_spectrum
from .kernel import g_alpha, kernel_bracket
from .moduli import omega_profile, sphere_rule
from .profiles import DecayProfile, as_grid
from .tails import TailKind, tail_profile

__all__ = ["main", "build_parser"]

CASES = ("thm11", "cor12", "thm13", "thm14", "cor15")
DEMOS = ("d1-counterexample", "gamma2-failure")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _number(text: str) -> float:
    t = text.strip().lower()
    if t in ("inf", "infinity"):
        return math.inf
    try:
        return float(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be positive, got {n}")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fourier-moduli", description="Moduli of continuity and Fourier-tail integrals.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", metavar="{gfn,mc,tail,fit,verify,demo}", parser_class=_Parser)
    sub.required = True

    g = sub.add_parser("gfn", help="tabulate the averaged kernel G_alpha(v) with its bracket")
    g.add_argument("--dim", type=_positive_int, required=True, help="dimension d >= 2")
    g.add_argument("--alpha", type=_number, required=True, help="kernel exponent alpha > 0")
    g.add_argument("--v-max", type=_number, required=True, help="largest v; v runs from 0")
    g.add_argument("--v-samples", type=_positive_int, default=2048, help="number of equispaced v values")
    g.add_argument("--caption-normalization", action="store_true", help="divide G_alpha by 2^alpha")
    g.add_argument("--out", default="-", help="output CSV path ('-' for stdout)")

    m = sub.add_parser("mc", help="modulus of continuity profile")
    m.add_argument("--field", required=True, help="corpus:<name>?... or file:<descriptor.json>")
    m.add_argument("--p", type=_number, required=True, help="norm exponent p in [1, inf]")
    m.add_argument("--m", type=_number, required=True, help="difference order m > 0")
    m.add_argument("--q", type=_number, required=True, help="sphere exponent q in [1, inf] or 'inf'")
    m.add_argument("--h", required=True, help="step grid, e.g. dyadic:2^-6..1:7")
    m.add_argument("--rule-order", type=_positive_int, help="sphere rule order")
    m.add_argument("--out", default="-", help="output CSV path ('-' for stdout)")

    t = sub.add_parser("tail", help="Fourier tail profile")
    t.add_argument("--spectrum", required=True, help="corpus:<name>?... or file:<descriptor.json>")
    t.add_argument("--pprime", type=_number, required=True, help="exponent p' in [1, inf] or 'inf'")
    t.add_argument("--mode", choices=("true", "modified", "bessel"), required=True)
    t.add_argument("--m", type=_number, default=1.0, help="order m for modified and Bessel tails")
    t.add_argument("--t", required=True, help="threshold grid, e.g. dyadic:1..2^10:11")
    t.add_argument("--out", default="-", help="output CSV path ('-' for stdout)")

    f = sub.add_parser("fit", help="fit a decay law to a profile CSV")
    f.add_argument("--profile", required=True, help="CSV with header t,value or h,value")
    f.add_argument("--model", choices=("auto", "power", "powerlog"), default="auto")
    f.add_argument("--no-trim", action="store_true", help="keep the lowest and highest octave")

    v = sub.add_parser("verify", help="run a verification case and write a JSON report")
    v.add_argument("--case", choices=CASES, required=True)
    src = v.add_mutually_exclusive_group(required=True)
    src.add_argument("--field", help="corpus:<name>?... or file:<descriptor.json>")
    src.add_argument("--spectrum", help="corpus:<name>?... or file:<descriptor.json>")
    v.add_argument("--gamma", type=_number, help="smoothness index for cor15")
    v.add_argument("--alpha", type=_number, help="true-tail exponent for thm14")
    v.add_argument("--m", type=_number, default=1.0, help="difference order (default 1)")
    v.add_argument("--p", type=_number, default=2.0, help="norm exponent for thm11 (default 2)")
    v.add_argument("--pprime", type=_number, default=2.0, help="tail exponent p' (default 2)")
    v.add_argument("--t", help="threshold grid; defaults depend on the case")
    v.add_argument("--report", default="-", help="output JSON path ('-' for stdout)")

    d = sub.add_parser("demo", help="run a demonstration of a failing estimate")
    d.add_argument("--case", choices=DEMOS, required=True)
    d.add_argument("--report", default="-", help="output JSON path ('-' for stdout)")
    return p


def _emit(path: str, text: str, stdout) -> None:
    if path == "-":
        stdout.write(text)
    else:
        atomic_write_text(Path(path), text)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _gfn_bounds(d: int, alpha: float, scale: float, v: np.ndarray):
    """Bracket constants: the closed-form pair for d = 3, alpha = 1, else the measured extremes."""
    if d == 3 and alpha == 1.0:
        # in the halved normalization G_1 = 4 pi (1 - sin v / v) lies between these
        lo, hi = math.pi / 3, 6 * math.pi
        lo, hi = lo * 2 * scale, hi * 2 * scale
    else:
        lo, hi = kernel_bracket(d, alpha, np.geomspace(1e-4, max(float(v.max()), 1.0) * 4, 2001))
        lo, hi = lo * scale, hi * scale
    base = np.minimum(1.0, v) ** (2 * alpha)
    return lo * base, hi * base


def _cmd_gfn(args, stdout) -> int:
    if args.dim < 2:
        raise UsageError("--dim must be at least 2")
    if not args.alpha > 0:
        raise UsageError(f"--alpha must be positive, got {args.alpha:g}")
    if not (args.v_max > 0 and math.isfinite(args.v_max)):
        raise UsageError(f"--v-max must be positive and finite, got {args.v_max:g}")
    v = np.linspace(0.0, args.v_max, args.v_samples)
    scale = 2.0 ** (-args.alpha) if args.caption_normalization else 1.0
    vals = g_alpha(args.dim, args.alpha, v) * scale
    lo, hi = _gfn_bounds(args.dim, args.alpha, scale, v)
    buf = io.StringIO()
    buf.write("v,value,lower_bound,upper_bound\n")
    for row in zip(v, vals, lo, hi):
        buf.write(",".join(_fmt(x) for x in row) + "\n")
    _emit(args.out, buf.getvalue(), stdout)
    return 0


def _cmd_mc(args, stdout) -> int:
    field = resolve_field(args.field)
    rule = sphere_rule(field.grid.dim, args.rule_order) if args.rule_order else None
    prof = omega_profile(field, args.p, args.m, args.q, as_grid(args.h), rule)
    _emit(args.out, prof.to_csv(), stdout)
    return 0


def _cmd_tail(args, stdout) -> int:
    spec = resolve_spectrum(args.spectrum)
    kind = TailKind.of(args.mode, args.pprime, args.m)
    prof = tail_profile(spec, kind, as_grid(args.t))
    _emit(args.out, prof.to_csv(), stdout)
    return 0


def _cmd_fit(args, stdout) -> int:
    try:
        text = Path(args.profile).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {args.profile}: {exc.strerror}") from None
    prof = DecayProfile.from_csv(text)
    res = fit_exponent(prof, args.model, trim=not args.no_trim)
    if isinstance(res, ZeroTail):
        kind = "exactly zero" if res.exact else "below the numerical floor"
        stdout.write(f"model=ZeroTail onset={_short(res.onset)} ({kind})\n")
        return 0
    d = res.to_dict()
    stdout.write(
        f"gamma={_short(d['gamma'])} log_power={_short(d['log_power'])} amplitude={_short(d['amplitude'])} "
        f"max_rel_residual={d['max_rel_residual']:.3g} model={d['model']}\n"
    )
    return 0


def _short(x: float) -> str:
    # clean values print clean; 0.5000000000000002 prints as 0.5
    return f"{float(f'{x:.12g}'):.12g}"


def _verify_target(args):
    if args.case in ("thm13", "thm14"):
        return resolve_spectrum(args.spectrum or args.field)
    uri = args.field or args.spectrum
    obj = resolve_field(uri)
    return obj


def _cmd_verify(args, stdout) -> int:
    obj = _verify_target(args)
    ts = as_grid(args.t) if args.t else None
    if args.case == "thm11":
        rep = analysis.verify_tail_bound(obj, args.p, args.m, ts)
    elif args.case == "cor12":
        rep = analysis.verify_two_sided_l2(obj, args.m, ts)
    elif args.case == "thm13":
        rep = analysis.verify_bessel_comparability(obj, args.pprime, args.m, ts)
    elif args.case == "thm14":
        if args.alpha is None:
            raise UsageError("--alpha is required for thm14")
        rep = analysis.verify_transfer(obj, args.alpha, args.m, args.pprime, ts)
    else:
        if args.gamma is None:
            raise UsageError("--gamma is required for cor15")
        if not isinstance(obj, SampledField):
            from .field import idft

            obj = idft(obj)
        rep = analysis.verify_smoothness_equivalence(obj, args.gamma, t_grid=ts)
    return _report(rep, args.report, stdout)


def _cmd_demo(args, stdout) -> int:
    if args.case == "d1-counterexample":
        rep = analysis.demo_one_dimensional_counterexample()
    else:
        rep = analysis.demo_gamma_two_failure()
    return _report(rep, args.report, stdout)


def _report(rep, path: str, stdout) -> int:
    text = json.dumps(rep.to_dict(), indent=2) + "\n"
    _emit(path, text, stdout)
    if path != "-":
        stdout.write(f"{rep.case}: {'passed' if rep.passed else 'FAILED'}\n")
    return 0 if rep.passed else 1


_COMMANDS = {
    "gfn": _cmd_gfn,
    "mc": _cmd_mc,
    "tail": _cmd_tail,
    "fit": _cmd_fit,
    "verify": _cmd_verify,
    "demo": _cmd_demo,
}


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return _COMMANDS[args.command](args, stdout)
    except (UsageError, FitError, FourierModuliError) as exc:
        stderr.write(f"fourier-moduli {args.command}: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
