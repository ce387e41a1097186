"""``mftr`` command-line front end.

Every subcommand writes CSV (header row, comma separated, LF line endings,
12 significant digits) or JSON to standard output or ``--output``.  Errors
are a single JSON line on standard error with a stable ``code`` field and a
nonzero exit status.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import metrics, montecarlo, stats
from .fit import MODELS, FitConfig, fit as fit_model, load_empirical_csv, result_to_json
from .model import DegenerateModelError, MftrParams, ParameterError, UnsupportedCombination, is_integer_m, mgf, validate

EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_NUMERIC = 4


class CliError(Exception):
    def __init__(self, code, message, status=EXIT_INPUT, **extra):
        super().__init__(message)
        self.code, self.status, self.extra = code, status, extra


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError("usage", f"{self.prog}: {message}", EXIT_USAGE)


def _fmt(v, digits):
    return format(float(v), f".{digits}g")


def _scalar(v, digits):
    s = _fmt(v, digits)
    return s if any(c in s for c in ".eEn") else s + ".0"


def _csv(header, rows, digits):
    lines = [",".join(header)]
    lines += [",".join(_fmt(v, digits) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def _params(a) -> MftrParams:
    return validate(MftrParams(a.k, a.delta, a.m, a.mu, a.gamma_bar))


def _model_flags(p, required=True):
    g = p.add_argument_group("model")
    g.add_argument("--k", type=float, required=required, help="ratio of specular to diffuse power K >= 0")
    g.add_argument("--delta", type=float, required=required, help="specular power imbalance, 0 <= Delta <= 1")
    g.add_argument("--m", type=float, required=required, help="shadowing severity m > 0")
    g.add_argument("--mu", type=float, required=required, help="number of clusters mu > 0")
    g.add_argument("--gamma-bar", type=float, default=1.0,
                   help="mean SNR (snr domain) or Omega = E{R^2} (envelope domain); default 1")


def _common(p):
    p.add_argument("--output", "-o", help="write to this file instead of standard output")
    p.add_argument("--precision", type=int, default=12, help="significant digits in CSV output (default 12)")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

_METHOD = {"auto": "auto", "mgf-inversion": "mgf_inversion", "theta-integral": "theta_integral",
           "gamma-series": "gamma_series"}


def _grid(a, p):
    xmax = a.xmax
    if xmax is None:
        xmax = 5.0 * p.gamma_bar if a.domain == "snr" else 3.0 * math.sqrt(p.gamma_bar)
    if a.points < 1:
        raise CliError("invalid_grid", "--points must be >= 1")
    if a.points == 1:
        return np.array([a.xmin])
    if a.log_x:
        if a.xmin <= 0:
            raise CliError("invalid_grid", "--log-x needs --xmin > 0")
        return np.geomspace(a.xmin, xmax, a.points)
    if xmax <= a.xmin:
        raise CliError("invalid_grid", "--xmax must exceed --xmin")
    return np.linspace(a.xmin, xmax, a.points)


def _curve(p, x, kind, domain, method):
    if domain == "snr":
        fn = stats.pdf if kind == "pdf" else stats.cdf
    else:
        fn = stats.envelope_pdf if kind == "pdf" else stats.envelope_cdf
    return np.asarray(fn(p, x, method=method), dtype=float)


def cmd_density(a, kind):
    p = _params(a)
    x = _grid(a, p)
    method = _METHOD[a.method]
    if method == "auto":
        method = "mgf_inversion" if is_integer_m(p) else "gamma_series"
    if method == "mgf_inversion" and not is_integer_m(p):
        raise CliError("unsupported", "mgf-inversion needs an integer --m; use theta-integral or gamma-series")
    y = _curve(p, x, kind, a.domain, method)
    if a.verify:
        ref = _curve(p, x, kind, a.domain, "theta_integral")
        both = np.isfinite(y) & np.isfinite(ref)
        disc = float(np.max(np.abs(y[both] - ref[both]))) if both.any() else 0.0
        sys.stderr.write(json.dumps({"verify": {"method": method, "reference": "theta_integral",
                                                "max_abs_discrepancy": disc}}) + "\n")
    return _csv(["x", "value"], zip(x, y), a.precision)


def _sweep(a):
    if a.linear:
        lo, hi, step = a.snr_min, a.snr_max, a.snr_step
    else:
        lo, hi, step = a.snr_db_min, a.snr_db_max, a.snr_db_step
    if step <= 0 or hi < lo:
        raise CliError("invalid_grid", "sweep needs step > 0 and max >= min")
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    pts = lo + step * np.arange(n)
    lin = pts if a.linear else 10.0 ** (pts / 10.0)
    return pts, lin


def _metric_sweep(a, value_fn, asym_fn=None):
    base = _params(a)
    pts, lin = _sweep(a)
    rows = []
    for x, g in zip(pts, lin):
        p = base.replace(gamma_bar=float(g))
        row = [x, value_fn(p)]
        if asym_fn is not None and a.asymptotic:
            row.append(asym_fn(p))
        rows.append(row)
    header = ["snr" if a.linear else "snr_db", "value"] + (["asymptotic"] if asym_fn and a.asymptotic else [])
    return _csv(header, rows, a.precision)


def cmd_outage(a):
    if a.rth <= 0:
        raise CliError("invalid_parameters", "--rth must be > 0")
    return _metric_sweep(a, lambda p: metrics.outage_probability(p, a.rth, method=_METHOD[a.method]),
                         lambda p: metrics.outage_asymptotic(p, a.rth))


_MODULATIONS = {"bpsk": metrics.BPSK}


def cmd_ber(a):
    mod = _MODULATIONS[a.modulation]
    method = a.method.replace("-", "_")
    return _metric_sweep(a, lambda p: metrics.avg_ber(p, mod, method=method),
                         lambda p: metrics.avg_ber_asymptotic(p, mod))


def cmd_capacity(a):
    return _metric_sweep(a, lambda p: metrics.ergodic_capacity(p, method=a.method))


def cmd_sample(a):
    p = _params(a)
    if a.n < 1:
        raise CliError("invalid_parameters", "--n must be >= 1")
    if a.route == "physical":
        if not float(p.mu).is_integer():
            raise CliError("unsupported", f"physical route needs an integer --mu (got {p.mu}); "
                                          "use --route mixture for real mu")
        batch = montecarlo.sample_physical(p, a.n, seed=a.seed, shards=a.shards, domain=a.domain)
    else:
        batch = montecarlo.sample_mixture(p, a.n, seed=a.seed, shards=a.shards, domain=a.domain)
    name = "gamma" if a.domain == "snr" else "r"
    fmt = f"{{:.{a.precision}g}}".format
    return name + "\n" + "\n".join(map(fmt, batch.values.tolist())) + "\n"


def cmd_fit(a):
    try:
        data = load_empirical_csv(a.input)
    except OSError as exc:
        raise CliError("invalid_input", str(exc)) from None
    cfg = FitConfig(restarts=a.restarts, seed=a.seed, normalize=a.normalize,
                    competitors=not a.no_competitors)
    res = fit_model(data, a.model, cfg)
    return result_to_json(res) + "\n"


def cmd_aof(a):
    return _scalar(stats.aof(_params(a)), a.precision) + "\n"


def cmd_mgf(a):
    p = _params(a)
    vals = [float(mgf(p, s, method=a.method.replace("-", "_"))) for s in a.s]
    if len(vals) == 1:
        return _scalar(vals[0], a.precision) + "\n"
    return _csv(["s", "value"], zip(a.s, vals), a.precision)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser():
    ap = _Parser(prog="mftr", description="MFTR fading: densities, link metrics, sampling and fitting.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for kind in ("pdf", "cdf"):
        p = sub.add_parser(kind, help=f"{kind.upper()} of the SNR or envelope on a grid")
        _model_flags(p)
        p.add_argument("--domain", choices=("snr", "envelope"), default="snr")
        p.add_argument("--method", choices=tuple(_METHOD), default="auto",
                       help="auto = mgf-inversion for integer m, gamma-series otherwise")
        p.add_argument("--xmin", type=float, default=0.0)
        p.add_argument("--xmax", type=float, default=None,
                       help="default 5*gamma_bar (snr) or 3*sqrt(Omega) (envelope)")
        p.add_argument("--points", type=int, default=200)
        p.add_argument("--log-x", action="store_true", help="logarithmically spaced grid")
        p.add_argument("--verify", action="store_true",
                       help="cross-check against the theta-integral route; discrepancy goes to stderr")
        _common(p)
        p.set_defaults(func=lambda a, kind=kind: cmd_density(a, kind))

    def sweep_flags(p):
        p.add_argument("--snr-db-min", type=float, default=0.0)
        p.add_argument("--snr-db-max", type=float, default=40.0)
        p.add_argument("--snr-db-step", type=float, default=1.0)
        p.add_argument("--linear", action="store_true", help="sweep linear SNR with --snr-min/--snr-max/--snr-step")
        p.add_argument("--snr-min", type=float, default=1.0)
        p.add_argument("--snr-max", type=float, default=100.0)
        p.add_argument("--snr-step", type=float, default=1.0)
        _common(p)

    p = sub.add_parser("outage", help="outage probability versus mean SNR")
    _model_flags(p)
    p.add_argument("--rth", type=float, required=True, help="target rate in bits/s/Hz")
    p.add_argument("--method", choices=tuple(_METHOD), default="auto")
    p.add_argument("--asymptotic", action="store_true", help="append the high-SNR asymptote column")
    sweep_flags(p)
    p.set_defaults(func=cmd_outage)

    p = sub.add_parser("ber", help="average bit error rate versus mean SNR")
    _model_flags(p)
    p.add_argument("--modulation", choices=tuple(_MODULATIONS), default="bpsk")
    p.add_argument("--method", choices=("auto", "closed-form", "quadrature"), default="auto")
    p.add_argument("--asymptotic", action="store_true", help="append the high-SNR asymptote column")
    sweep_flags(p)
    p.set_defaults(func=cmd_ber)

    p = sub.add_parser("capacity", help="ergodic capacity versus mean SNR")
    _model_flags(p)
    p.add_argument("--method", choices=("series", "quadrature"), default="series")
    sweep_flags(p)
    p.set_defaults(func=cmd_capacity, asymptotic=False)

    p = sub.add_parser("sample", help="Monte Carlo samples, one per line")
    _model_flags(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--route", choices=("physical", "mixture"), default="mixture")
    p.add_argument("--domain", choices=("snr", "envelope"), default="snr")
    p.add_argument("--shards", type=int, default=1, help="worker threads; output does not depend on it")
    _common(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("fit", help="fit a model to an empirical envelope density (JSON out)")
    p.add_argument("--input", required=True, help="CSV: 'r,density' with header, or one column of samples")
    p.add_argument("--model", choices=MODELS, default="mftr")
    p.add_argument("--restarts", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--normalize", action="store_true", help="fit on r / sqrt(second moment) and map back")
    p.add_argument("--no-competitors", action="store_true", help="skip the FTR and kappa-mu shadowed fits")
    _common(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("aof", help="amount of fading")
    _model_flags(p)
    _common(p)
    p.set_defaults(func=cmd_aof)

    p = sub.add_parser("mgf", help="moment generating function E{exp(s gamma)}")
    _model_flags(p)
    p.add_argument("--s", type=float, nargs="+", required=True)
    p.add_argument("--method", choices=("auto", "closed-form", "theta-quadrature"), default="auto")
    _common(p)
    p.set_defaults(func=cmd_mgf)
    return ap


def _emit_error(code, message, **extra):
    rec = {"code": code, "message": message}
    rec.update(extra)
    sys.stderr.write(json.dumps(rec, default=str) + "\n")


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        text = args.func(args)
    except CliError as exc:
        _emit_error(exc.code, str(exc), **exc.extra)
        return exc.status
    except ParameterError as exc:
        _emit_error("invalid_parameters", str(exc),
                    violations=[{"field": f, "value": v, "reason": r} for f, v, r in exc.violations])
        return EXIT_INPUT
    except UnsupportedCombination as exc:
        _emit_error("unsupported", str(exc))
        return EXIT_INPUT
    except (DegenerateModelError, ArithmeticError) as exc:
        _emit_error("numerical_failure", str(exc))
        return EXIT_NUMERIC
    except (ValueError, OSError) as exc:
        _emit_error("invalid_input", str(exc))
        return EXIT_INPUT
    if args.output:
        with open(args.output, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
