"""Command-line front end.

Exit codes: 0 success, 1 domain error, 2 input/parse error. Reports are
``key: value`` lines on stdout; tables are CSV.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace

import numpy as np

from . import metrics
from .config import load_config
from .errors import DomainError, ParseError
from .estimation import (FitOptions, FitSetup, bootstrap, fit, jitter_from_error_rms,
                         load_measurements)
from .model import (OperatingPoint, QuadraturePair, predict, sweep, threshold_power,
                    total_efficiency)
from .traces import (ZeroSpanConfig, shot_trace, synth_locked_trace, synth_scan_trace,
                     write_trace_csv)

EXIT_OK, EXIT_DOMAIN, EXIT_INPUT = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ParseError(message)


def _emit(out, key, value):
    if isinstance(value, float):
        value = f"{value:.6g}"
    print(f"{key}: {value}", file=out)


def _open_out(path, out):
    return out if path in (None, "-") else open(path, "w", newline="")


def _detection(cfg, theta_deg):
    det = cfg.detection
    if theta_deg is not None:
        det = replace(det, phase_jitter=math.radians(theta_deg))
    return det


def cmd_predict(args, out):
    cfg = load_config(args.config)
    det = _detection(cfg, args.theta_deg)
    pump_mw = cfg.operating_point.pump_power * 1e3 if args.pump_mw is None else args.pump_mw
    op = OperatingPoint(pump_mw * 1e-3, cfg.operating_point.sideband_frequency)
    pred = predict(cfg.cavity, det, op, include_circuit_noise=not args.no_circuit_noise)
    _emit(out, "threshold_mw", pred.threshold * 1e3)
    _emit(out, "pump_mw", pump_mw)
    _emit(out, "pump_ratio", pred.x)
    _emit(out, "omega_over_gamma", pred.omega_norm)
    _emit(out, "eta_tot", pred.eta_tot)
    _emit(out, "theta_deg", det.phase_jitter_deg)
    _emit(out, "ideal_squeezed_db", pred.ideal.squeezed_db)
    _emit(out, "ideal_antisqueezed_db", pred.ideal.anti_squeezed_db)
    _emit(out, "jittered_squeezed_db", pred.jittered.squeezed_db)
    _emit(out, "jittered_antisqueezed_db", pred.jittered.anti_squeezed_db)
    _emit(out, "observed_squeezed_db", pred.observed.squeezed_db)
    _emit(out, "observed_antisqueezed_db", pred.observed.anti_squeezed_db)
    _emit(out, "purity", pred.purity)
    return EXIT_OK


def parse_range(text):
    """``START:STOP:STEP`` in mW, STOP inclusive."""
    try:
        start, stop, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise ParseError(f"range must be START:STOP:STEP, got {text!r}") from None
    if step <= 0 or stop < start:
        raise ParseError("range needs STEP > 0 and STOP >= START")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(n)


def cmd_sweep(args, out):
    cfg = load_config(args.config)
    powers_mw = parse_range(args.pump_mw_range)
    det = _detection(cfg, args.theta_deg)
    p_th = threshold_power(cfg.cavity)
    bad = powers_mw[powers_mw * 1e-3 >= p_th]
    if bad.size:
        raise DomainError(f"pump power {bad[0]:g} mW is at or above threshold "
                          f"{p_th * 1e3:.6g} mW")
    rows = sweep(cfg.cavity, det, powers_mw * 1e-3, cfg.operating_point.sideband_frequency,
                 include_circuit_noise=not args.no_circuit_noise)
    fh = _open_out(args.out, out)
    try:
        fh.write("pump_mw,squeezed_db,antisqueezed_db,purity\n")
        for row in rows:
            fh.write(f"{row.pump_power * 1e3:.9g},{row.squeezed_db:.9g},"
                     f"{row.anti_squeezed_db:.9g},{row.purity:.9g}\n")
    finally:
        if fh is not out:
            fh.close()
    return EXIT_OK


def cmd_metrics(args, out):
    pair = QuadraturePair.from_db(args.squeezed_db, args.antisqueezed_db)
    if args.antisqueezed_db < 0:
        raise DomainError("anti-squeezed level must be >= 0 dB")
    r = metrics.squeezing_parameter(args.squeezed_db)
    _emit(out, "r", r)
    for n in range(1, args.hops + 1):
        _emit(out, f"fidelity_{n}", metrics.teleport_fidelity(n, r))
    info = metrics.dense_coding_capacity(args.ns, r)
    _emit(out, "dense_coding_ns", args.ns)
    _emit(out, "dense_coding_nats", info)
    _emit(out, "dense_coding_bits", info / math.log(2))
    verdict = metrics.holevo_assessment(pair)
    _emit(out, "purity", verdict["purity"])
    _emit(out, "holevo", "exceeded" if verdict["exceeded"] else "not exceeded")
    if verdict["purity_limited"]:
        _emit(out, "holevo_advisory", "state is mixed; purity must improve to beat the limit")
    return EXIT_OK


def cmd_trace(args, out):
    cfg = load_config(args.config)
    averages = args.averages
    if averages is None:
        averages = 1 if args.mode == "scan" else 20
    zs = ZeroSpanConfig(resolution_bandwidth=args.rbw_hz, video_bandwidth=args.vbw_hz,
                        sweep_duration=args.sweep_s, points=args.points,
                        averages=averages, seed=args.seed,
                        center_frequency=cfg.operating_point.sideband_frequency)
    if args.squeezed_db is not None or args.antisqueezed_db is not None:
        if args.squeezed_db is None or args.antisqueezed_db is None:
            raise ParseError("--squeezed-db and --antisqueezed-db go together")
        pair = QuadraturePair.from_db(args.squeezed_db, args.antisqueezed_db)
    else:
        pump_mw = cfg.operating_point.pump_power * 1e3 if args.pump_mw is None else args.pump_mw
        op = OperatingPoint(pump_mw * 1e-3, cfg.operating_point.sideband_frequency)
        pair = predict(cfg.cavity, cfg.detection, op).observed
    if args.mode == "shot":
        trace = shot_trace(zs)
    elif args.mode == "squeezed":
        trace = synth_locked_trace(pair.squeezed_db, zs, "squeezed")
    elif args.mode == "antisqueezed":
        trace = synth_locked_trace(pair.anti_squeezed_db, zs, "anti_squeezed")
    else:
        period = args.scan_period_s or args.sweep_s / 4
        trace = synth_scan_trace(pair, period, zs)
    if args.out in (None, "-"):
        write_trace_csv(trace, out)
    else:
        write_trace_csv(trace, args.out)
    return EXIT_OK


def _parse_init(text):
    try:
        p_mw, eta, theta_deg = (float(v) for v in text.split(","))
    except ValueError:
        raise ParseError(f"--init must be PTH_MW,ETA,THETA_DEG, got {text!r}") from None
    return np.array([p_mw * 1e-3, eta, math.radians(theta_deg)])


def cmd_fit(args, out):
    cfg = load_config(args.config)
    data = load_measurements(args.data)
    setup = FitSetup(cfg.cavity, cfg.operating_point.sideband_frequency,
                     cfg.detection.circuit_noise_db)
    if args.init:
        init = _parse_init(args.init)
    else:
        p_th = threshold_power(cfg.cavity)
        if p_th <= data.pump_power.max():
            p_th = 1.2 * data.pump_power.max()
        init = np.array([p_th, total_efficiency(cfg.cavity, cfg.detection),
                         cfg.detection.phase_jitter])
    result = fit(data, init, setup, FitOptions(max_iterations=args.max_iterations))
    _emit(out, "p_th_mw", result.p_th * 1e3)
    _emit(out, "eta_tot", result.eta_tot)
    _emit(out, "theta_deg", result.theta_deg)
    _emit(out, "e_nl_per_w", result.nonlinear_coefficient(cfg.cavity))
    _emit(out, "residual_norm", result.residual_norm)
    _emit(out, "initial_residual_norm", result.initial_residual_norm)
    _emit(out, "iterations", result.iterations)
    _emit(out, "converged", str(result.converged).lower())
    _emit(out, "underdetermined", str(result.underdetermined).lower())
    if args.bootstrap and result.converged:
        boot = bootstrap(data, result, setup, args.bootstrap, args.seed,
                         FitOptions(max_iterations=args.max_iterations))
        lo_hi = boot.interval(0.95)
        _emit(out, "bootstrap_replicates", args.bootstrap)
        _emit(out, "bootstrap_converged", int(boot.converged.sum()))
        _emit(out, "p_th_mw_95ci", f"{lo_hi[0, 0] * 1e3:.6g},{lo_hi[0, 1] * 1e3:.6g}")
        _emit(out, "eta_tot_95ci", f"{lo_hi[1, 0]:.6g},{lo_hi[1, 1]:.6g}")
        _emit(out, "theta_deg_95ci",
              f"{math.degrees(lo_hi[2, 0]):.6g},{math.degrees(lo_hi[2, 1]):.6g}")
        if args.bootstrap_out:
            boot.write_csv(args.bootstrap_out)
    if args.strict and not result.converged:
        print("error: fit did not converge", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


def cmd_jitter(args, out):
    theta = jitter_from_error_rms(args.rms, args.slope)
    _emit(out, "theta_rad", theta)
    _emit(out, "theta_deg", math.degrees(theta))
    return EXIT_OK


def build_parser():
    p = _Parser(prog="oposqueeze", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("predict", help="forward-model prediction at one pump power")
    s.add_argument("--config", required=True)
    s.add_argument("--pump-mw", type=float)
    s.add_argument("--theta-deg", type=float)
    s.add_argument("--no-circuit-noise", action="store_true")
    s.set_defaults(func=cmd_predict)

    s = sub.add_parser("sweep", help="levels versus pump power as CSV")
    s.add_argument("--config", required=True)
    s.add_argument("--pump-mw-range", required=True, metavar="START:STOP:STEP")
    s.add_argument("--out", default="-")
    s.add_argument("--theta-deg", type=float)
    s.add_argument("--no-circuit-noise", action="store_true")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("metrics", help="figures of merit for a measured pair")
    s.add_argument("--squeezed-db", type=float, required=True)
    s.add_argument("--antisqueezed-db", type=float, required=True)
    s.add_argument("--hops", type=int, default=1)
    s.add_argument("--ns", type=float, default=1.0)
    s.set_defaults(func=cmd_metrics)

    s = sub.add_parser("trace", help="synthesize a zero-span analyzer trace")
    s.add_argument("--config", required=True)
    s.add_argument("--mode", required=True,
                   choices=("shot", "squeezed", "antisqueezed", "scan"))
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--out", default="-")
    s.add_argument("--pump-mw", type=float)
    s.add_argument("--squeezed-db", type=float)
    s.add_argument("--antisqueezed-db", type=float)
    s.add_argument("--rbw-hz", type=float, default=30e3)
    s.add_argument("--vbw-hz", type=float, default=300.0)
    s.add_argument("--averages", type=int)
    s.add_argument("--points", type=int, default=401)
    s.add_argument("--sweep-s", type=float, default=0.2)
    s.add_argument("--scan-period-s", type=float)
    s.set_defaults(func=cmd_trace)

    s = sub.add_parser("fit", help="fit P_th, eta_tot and theta to measured levels")
    s.add_argument("--data", required=True)
    s.add_argument("--config", required=True)
    s.add_argument("--init", metavar="PTH_MW,ETA,THETA_DEG")
    s.add_argument("--bootstrap", type=int, default=0)
    s.add_argument("--bootstrap-out")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-iterations", type=int, default=2000)
    s.add_argument("--strict", action="store_true")
    s.set_defaults(func=cmd_fit)

    s = sub.add_parser("jitter", help="phase jitter from lock error-signal rms")
    s.add_argument("--rms", type=float, required=True, help="error-signal rms (V)")
    s.add_argument("--slope", type=float, required=True, help="discriminant slope (V/rad)")
    s.set_defaults(func=cmd_jitter)
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
