"""Command-line entry point.

Subcommands: eval (closed-form tail intensity and normings),
estimate-constant (Monte Carlo constants), simulate (dump paths/fields),
tail and gumbel (simulation-versus-theory experiments), probe (model
assumption diagnostics).  Exit codes: 0 success, 2 validation error,
3 numerical error.  Output on stdout is byte-reproducible for a fixed
seed; --json echoes machine-readable records.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from .errors import (ConfigError, GxtrError, NumericalError, ParameterError)
from .model import (FbmMixture, GridSpec, IntegratedStationary, RegimeParams,
                    StationaryCovariance, Storage, classify_regime,
                    mapped_regime_params, parse_config_text,
                    parse_model_config, validate_local_expansion,
                    weak_dependence_probe)
from .simulate import (RngStream, derive_shepp_field, sample_fbm_mixture,
                       sample_field_cholesky, sample_integrated_process,
                       sample_stationary_path, sample_storage_path,
                       write_path_csv, write_path_gxtr)
from .constants import (estimate_pickands, estimate_pickands_piterbarg,
                        estimate_piterbarg)
from .asymptotics import (ConstantProvider, eval_mu, eval_norming)
from .harness import (_jsonable, parse_run_config, report_to_json,
                      run_gumbel_experiment, run_tail_experiment,
                      write_report)


def _resolve_seed(ns, config_seed=None):
    if getattr(ns, "seed", None) is not None:
        return ns.seed
    if config_seed is not None:
        return config_seed
    env = os.environ.get("GXTR_SEED")
    if env is not None:
        try:
            seed = int(env)
        except ValueError:
            raise ConfigError(f"GXTR_SEED must be an integer, got {env!r}") \
                from None
        if seed < 0:
            raise ConfigError(f"GXTR_SEED must be nonnegative, got {seed}")
        return seed
    return 0


def _provider_from_flags(ns) -> ConstantProvider:
    provider = ConstantProvider()
    for item in getattr(ns, "inject", None) or []:
        key, sep, value = item.rpartition("=")
        if not sep or not key:
            raise ConfigError(
                f"--inject needs key=value with a constant key such as "
                f"'pickands(alpha=1.5)', got {item!r}")
        try:
            provider.inject(key.strip(), float(value))
        except ValueError:
            raise ConfigError(f"--inject value must be a number, "
                              f"got {value!r}") from None
    return provider


def _print_json(obj):
    sys.stdout.write(json.dumps(_jsonable(obj), sort_keys=True,
                                separators=(",", ":"), allow_nan=False) + "\n")


def _regime_params_from_flags(ns) -> RegimeParams:
    return RegimeParams(alpha1=ns.alpha1, alpha2=ns.alpha2, beta=ns.beta,
                        a1=ns.a1, a2=ns.a2, a3=ns.a3, b=ns.b)


def _read_config(path):
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as e:
        raise ConfigError(f"cannot read config {path!r}: {e}") from None


def _model_only_config(text):
    flat = parse_config_text(text)
    model_keys = {k[len("model."):]: v for k, v in flat.items()
                  if k.startswith("model.")}
    extra = sorted(k for k in flat if not k.startswith("model."))
    if extra:
        raise ConfigError(f"only model.* keys are allowed here; "
                          f"unknown: {', '.join(extra)}")
    if not model_keys:
        raise ConfigError("config needs model.* keys (at least model.kind)")
    return parse_model_config("\n".join(f"{k} = {v}"
                                        for k, v in model_keys.items()))


# ---------------------------------------------------------------------------
# subcommands


def _cmd_eval(ns):
    p = _regime_params_from_flags(ns)
    provider = _provider_from_flags(ns)
    variant = "two_sided" if ns.two_sided else "one_sided"
    out = {"regime": classify_regime(p).value,
           "mu": eval_mu(p, ns.u, provider, variant)}
    if ns.S is not None:
        pair = eval_norming(ns.S, p, provider, variant)
        out.update(a_S=pair.a_S, omega_S=pair.omega_S, b_S=pair.b_S)
    _print_json(out)
    return 0


def _cmd_estimate_constant(ns):
    stream = RngStream(master_seed=_resolve_seed(ns))
    if ns.kind == "pickands":
        est = estimate_pickands(ns.alpha, T=ns.window, a=ns.step,
                                reps=ns.reps, stream=stream,
                                workers=ns.workers)
        params = {"alpha": ns.alpha}
    elif ns.kind == "piterbarg":
        if ns.b is None:
            raise ParameterError("piterbarg needs --b (drift coefficient)")
        est = estimate_piterbarg(ns.alpha, ns.b, T=ns.window, a=ns.step,
                                 reps=ns.reps, two_sided=ns.two_sided,
                                 stream=stream, workers=ns.workers)
        params = {"alpha": ns.alpha, "b": ns.b}
    else:  # pp
        for flag in ("a1", "a2", "a3", "b", "beta"):
            if getattr(ns, flag) is None:
                raise ParameterError(f"pp needs --{flag}")
        p = RegimeParams(alpha1=ns.alpha, alpha2=ns.alpha, beta=ns.beta,
                         a1=ns.a1, a2=ns.a2, a3=ns.a3, b=ns.b)
        try:
            s_window = float(ns.S)
        except ValueError:
            raise ParameterError(f"--S must be a number or 'inf', "
                                 f"got {ns.S!r}") from None
        est = estimate_pickands_piterbarg(p, s_window, ns.window, a=ns.step,
                                          reps=ns.reps,
                                          two_sided=ns.two_sided,
                                          stream=stream, workers=ns.workers)
        params = {"alpha": ns.alpha, "a1": ns.a1, "a2": ns.a2, "a3": ns.a3,
                  "b": ns.b, "beta": ns.beta, "S": s_window}
    if ns.two_sided:
        params["variant"] = "two_sided"
    record = {"kind": ns.kind, "params": params, "value": est.value,
              "std_error": est.std_error, "grid_step": est.grid_step,
              "window": est.window, "reps": est.replications,
              "seed": _resolve_seed(ns)}
    _print_json(record)
    return 0


def _parse_grid(ns):
    def _nums(text):
        return [float(x) for x in str(text).split(",") if x.strip() != ""]

    origin = _nums(ns.grid_origin)
    step = _nums(ns.grid_step)
    count = _nums(ns.grid_count)
    if not (len(origin) == len(step) == len(count)):
        raise ParameterError("grid origin, step, and count must have the "
                             "same number of components")
    for c in count:
        if c != int(c):
            raise ParameterError(f"grid counts must be integers, got {c!r}")
    if len(origin) == 1:
        return GridSpec(origin=origin[0], step=step[0], count=int(count[0]))
    if len(origin) == 2:
        return GridSpec(origin=tuple(origin), step=tuple(step),
                        count=(int(count[0]), int(count[1])))
    raise ParameterError("grids are 1-D or 2-D")


def _cmd_simulate(ns):
    model = _model_only_config(_read_config(ns.config))
    grid = _parse_grid(ns)
    stream = RngStream(master_seed=_resolve_seed(ns))
    if ns.shepp_window is not None:
        if grid.ndim != 2:
            raise ParameterError("--shepp-window needs a 2-D grid")
        cov = derive_shepp_field(model, ns.shepp_window)
        sample = sample_field_cholesky(cov, grid, stream)
    elif isinstance(model, Storage):
        sample = sample_storage_path(model.hurst, model.c, grid, stream)
    else:
        if isinstance(model, StationaryCovariance):
            sample = sample_stationary_path(model.r, grid, stream)
        elif isinstance(model, FbmMixture):
            sample = sample_fbm_mixture(model, grid, stream)
        elif isinstance(model, IntegratedStationary):
            sample = sample_integrated_process(model, grid, stream)
        else:
            raise ParameterError(f"no path sampler for "
                                 f"{type(model).__name__}; use --shepp-window "
                                 f"for increment fields")
    if ns.out is None:
        if ns.format == "gxtr":
            raise ParameterError("binary gxtr output needs --out PATH")
        write_path_csv(sample, sys.stdout)
        return 0
    mode = "wb" if ns.format == "gxtr" else "w"
    with open(ns.out, mode) as fh:
        if ns.format == "gxtr":
            write_path_gxtr(sample, fh)
        else:
            write_path_csv(sample, fh)
    n = sample.values.size
    sys.stdout.write(f"wrote {n} samples to {ns.out} ({ns.format})\n")
    return 0


def _cmd_tail(ns):
    cfg = parse_run_config(_read_config(ns.config))
    if cfg.experiment != "tail":
        raise ConfigError(f"config is for experiment {cfg.experiment!r}, "
                          f"expected 'tail'")
    if cfg.u is None:
        raise ConfigError("tail config needs u (comma-separated thresholds)")
    seed = _resolve_seed(ns, cfg.seed)
    reps = ns.reps if ns.reps is not None else cfg.reps
    stream = RngStream(master_seed=seed)
    provider = _provider_from_flags(ns)
    if cfg.S is None:
        raise ConfigError("tail config needs S (horizon length)")
    if isinstance(cfg.model, Storage):
        step = cfg.step if cfg.step is not None else 1e-3
        region = GridSpec(origin=0.0, step=step,
                          count=int(round(cfg.S / step)) + 1)
    else:
        step = cfg.step if cfg.step is not None else 0.01
        n_s = int(round(cfg.S / step)) + 1
        n_t = int(round(cfg.T / step)) + 1
        region = GridSpec(origin=(0.0, 0.0), step=(step, step),
                          count=(n_s, n_t))
    report = run_tail_experiment(cfg.model, region, cfg.u, reps, stream,
                                 provider=provider,
                                 horizon_mult=cfg.horizon_mult)
    lines = [f"tail experiment: {report.model_kind}, S={report.S:g}, "
             f"T={report.T:g}, sigma_T={report.sigma_T:.6g}, "
             f"reps={report.reps}, seed={seed}"]
    lines.append(f"{'u':>8} {'count':>8} {'empirical':>12} {'theory':>12} "
                 f"{'ratio':>8}  95% CI")
    for row in report.rows:
        lines.append(f"{row.u:>8g} {row.count:>8d} {row.empirical:>12.6g} "
                     f"{row.theory:>12.6g} {row.ratio:>8.4g}  "
                     f"[{row.ci_low:.6g}, {row.ci_high:.6g}]")
    sys.stdout.write("\n".join(lines) + "\n")
    if ns.json:
        sys.stdout.write(report_to_json(report))
    if ns.out is not None:
        write_report(report, ns.out, format=ns.format)
    return 0


def _cmd_gumbel(ns):
    cfg = parse_run_config(_read_config(ns.config))
    if cfg.experiment != "gumbel":
        raise ConfigError(f"config is for experiment {cfg.experiment!r}, "
                          f"expected 'gumbel'")
    if cfg.s_ladder is None:
        raise ConfigError("gumbel config needs s_ladder (comma-separated "
                          "horizons)")
    seed = _resolve_seed(ns, cfg.seed)
    reps = ns.reps if ns.reps is not None else cfg.reps
    stream = RngStream(master_seed=seed)
    provider = _provider_from_flags(ns)
    report = run_gumbel_experiment(cfg.model, cfg.s_ladder, cfg.T, reps,
                                   cfg.norming_source, stream,
                                   provider=provider, d0=cfg.d0,
                                   inject_bs_shift=ns.inject_bs_shift)
    lines = [f"gumbel experiment: {report.model_kind}, T={report.T:g}, "
             f"d0={report.d0:g}, norming={report.norming_source}, "
             f"reps/S={reps}, seed={seed}"
             + (f", b_S shift={report.bs_shift:g}" if report.bs_shift else "")]
    lines.append(f"{'S':>8} {'step':>10} {'a_S':>8} {'b_S':>8} "
                 f"{'omega_S':>9} {'KS':>8}")
    for row in report.rows:
        lines.append(f"{row.S:>8g} {row.step:>10.4g} {row.a_S:>8.5g} "
                     f"{row.b_S:>8.5g} {row.omega_S:>9.5g} {row.ks:>8.4g}")
    if report.fitted_log_k is not None:
        lines.append(f"fitted constant K = {math.exp(report.fitted_log_k):.6g}")
    sys.stdout.write("\n".join(lines) + "\n")
    if ns.json:
        sys.stdout.write(report_to_json(report))
    if ns.out is not None:
        write_report(report, ns.out, format=ns.format)
    return 0


def _cmd_probe(ns):
    model = _model_only_config(_read_config(ns.config))
    p, _ = mapped_regime_params(model, ns.window)
    if ns.kind == "local":
        scales = [float(x) for x in ns.scales.split(",") if x.strip()]
        report = validate_local_expansion(model, p, scales, T=ns.window)
        lines = [f"local expansion probe: converged={report.converged}"]
        lines.append(f"{'scale':>10} {'direction':>10} {'ratio':>10}")
        for row in report.rows:
            lines.append(f"{row.scale:>10.4g} {row.direction:>10} "
                         f"{row.ratio:>10.6g}")
        sys.stdout.write("\n".join(lines) + "\n")
        if ns.json:
            _print_json({"kind": "local", "converged": report.converged,
                         "rows": [_jsonable(r) for r in report.rows]})
        return 0
    lags = [float(x) for x in ns.lags.split(",") if x.strip()]
    rows = weak_dependence_probe(model, p, lags)
    lines = ["weak dependence probe", f"{'lag':>10} {'weighted_corr':>14}"]
    for lag, val in rows:
        lines.append(f"{lag:>10g} {val:>14.6g}")
    sys.stdout.write("\n".join(lines) + "\n")
    if ns.json:
        _print_json({"kind": "weak",
                     "rows": [{"lag": l, "weighted_corr": v}
                              for l, v in rows]})
    return 0


# ---------------------------------------------------------------------------
# parser


def _add_seed(sp):
    sp.add_argument("--seed", type=int, default=None,
                    help="master seed (integer; default: GXTR_SEED env "
                         "var, else 0)")


def _add_inject(sp):
    sp.add_argument("--inject", action="append", metavar="KEY=VALUE",
                    help="inject a constant estimate, e.g. "
                         "'pickands(alpha=1.5)=0.8'; repeatable")


def _build_parser():
    ap = argparse.ArgumentParser(
        prog="gxtr",
        description="Tail asymptotics and Gumbel limits for supremum "
                    "statistics of Gaussian increment fields")
    sub = ap.add_subparsers(dest="command", metavar="COMMAND")

    sp = sub.add_parser("eval", help="closed-form tail intensity mu(u) and "
                                     "Gumbel normings")
    for flag, doc in (("alpha1", "s-direction variance exponent in (0,2]"),
                      ("alpha2", "t-direction variance exponent in (0,2]"),
                      ("beta", "drift exponent (positive)"),
                      ("a1", "s-direction variance coefficient (positive)"),
                      ("a2", "t-direction variance coefficient (positive)"),
                      ("a3", "cross-term coefficient (nonzero)"),
                      ("b", "drift coefficient (positive)")):
        sp.add_argument(f"--{flag}", type=float, required=True, help=doc)
    sp.add_argument("--u", type=float, required=True,
                    help="threshold in standard-deviation units (positive)")
    sp.add_argument("--S", type=float, default=None,
                    help="horizon length for norming output (optional, > 1)")
    sp.add_argument("--two-sided", action="store_true",
                    help="two-sided t-window variant")
    _add_inject(sp)
    sp.set_defaults(func=_cmd_eval)

    sp = sub.add_parser("estimate-constant",
                        help="Monte Carlo estimate of a Pickands, Piterbarg, "
                             "or mixed constant")
    sp.add_argument("--kind", choices=("pickands", "piterbarg", "pp"),
                    required=True, help="constant family")
    sp.add_argument("--alpha", type=float, required=True,
                    help="variance exponent in (0,2]")
    sp.add_argument("--b", type=float, default=None,
                    help="drift coefficient (piterbarg, pp)")
    sp.add_argument("--beta", type=float, default=None,
                    help="drift exponent (pp)")
    sp.add_argument("--a1", type=float, default=None,
                    help="s-coefficient (pp)")
    sp.add_argument("--a2", type=float, default=None,
                    help="t-coefficient (pp)")
    sp.add_argument("--a3", type=float, default=None,
                    help="cross-coefficient (pp)")
    sp.add_argument("--S", default="inf",
                    help="s-window length for pp (number or 'inf'; default "
                         "inf)")
    sp.add_argument("--window", type=float, default=8.0,
                    help="t-window half-length T in field time units "
                         "(default 8)")
    sp.add_argument("--step", type=float, default=0.005,
                    help="coarsest lattice step (default 0.005; pp uses "
                         "0.05-scale steps)")
    sp.add_argument("--reps", type=int, default=100000,
                    help="Monte Carlo replications (default 100000)")
    sp.add_argument("--two-sided", action="store_true",
                    help="two-sided window variant")
    sp.add_argument("--workers", type=int, default=None,
                    help="parallel replication workers (default: "
                         "sequential)")
    _add_seed(sp)
    sp.set_defaults(func=_cmd_estimate_constant)

    sp = sub.add_parser("simulate", help="sample one path or field and dump "
                                         "it")
    sp.add_argument("--config", required=True,
                    help="model config file (model.* keys only)")
    sp.add_argument("--grid-origin", default="0",
                    help="grid origin in time units; comma pair for 2-D "
                         "(default 0)")
    sp.add_argument("--grid-step", required=True,
                    help="grid step in time units; comma pair for 2-D")
    sp.add_argument("--grid-count", required=True,
                    help="number of grid points; comma pair for 2-D")
    sp.add_argument("--shepp-window", type=float, default=None,
                    help="derive the increment field with this t-window "
                         "(time units) and sample it on the 2-D grid")
    sp.add_argument("--out", default=None,
                    help="output file (default: CSV to stdout)")
    sp.add_argument("--format", choices=("csv", "gxtr"), default="csv",
                    help="output format: csv text or gxtr binary "
                         "(default csv)")
    _add_seed(sp)
    sp.set_defaults(func=_cmd_simulate)

    for name, fn, doc in (
            ("tail", _cmd_tail,
             "exceedance counts of the grid supremum versus theory"),
            ("gumbel", _cmd_gumbel,
             "KS distance of normalized maxima from the Gumbel limit")):
        sp = sub.add_parser(name, help=doc)
        sp.add_argument("config", help="experiment config file "
                                       "(model.* keys + experiment keys)")
        sp.add_argument("--reps", type=int, default=None,
                        help="override config replications")
        sp.add_argument("--out", default=None, help="write the report here")
        sp.add_argument("--format", choices=("json", "csv"), default="json",
                        help="report file format (default json)")
        sp.add_argument("--json", action="store_true",
                        help="echo the full report as JSON on stdout")
        _add_inject(sp)
        _add_seed(sp)
        if name == "gumbel":
            sp.add_argument("--inject-bs-shift", type=float, default=0.0,
                            help="fault knob: displace every centering b_S "
                                 "by this amount (default 0)")
        sp.set_defaults(func=fn)

    sp = sub.add_parser("probe", help="diagnostics for the local-expansion "
                                      "and weak-dependence assumptions")
    sp.add_argument("--kind", choices=("local", "weak"), required=True,
                    help="which assumption to probe")
    sp.add_argument("--config", required=True,
                    help="model config file (model.* keys only)")
    sp.add_argument("--window", type=float, default=1.0,
                    help="t-window T in time units (default 1)")
    sp.add_argument("--scales", default="0.1,0.03,0.01,0.003,0.001",
                    help="probe scales for --kind local (comma list, time "
                         "units)")
    sp.add_argument("--lags", default="10,100,1000",
                    help="separation lags for --kind weak (comma list, time "
                         "units)")
    sp.add_argument("--json", action="store_true",
                    help="echo the probe rows as JSON on stdout")
    sp.set_defaults(func=_cmd_probe)
    return ap


def dispatch(argv) -> int:
    parser = _build_parser()
    if not argv:
        parser.print_usage(sys.stderr)
        return 2
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if not hasattr(ns, "func"):
        parser.print_usage(sys.stderr)
        return 2
    try:
        return ns.func(ns)
    except NumericalError as e:
        print(f"numerical error: {e}", file=sys.stderr)
        return 3
    except GxtrError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def main():
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
