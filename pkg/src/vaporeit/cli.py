"""
Command-line interface.

    vaporeit spectrum|fwm|pulse|store|optimize|sweep [--config PATH] [--out DIR]
             [--set key=value ...] [--workers N] [--prominence X]

Each subcommand writes ``<out>/<subcommand>.csv`` and ``<out>/<subcommand>.json``
(with the fully resolved configuration) and prints a one-line summary.
Exit status: 0 success, 2 configuration error, 3 numerical failure.

Spectra are computed in physical units. Pulse, storage and optimization
runs use the compressed problem of :func:`vaporeit.storage.desk_scale`;
their times are reported both in compressed units (1/gamma) and converted
to physical seconds for the spin-wave dynamics.
"""

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import analysis, io
from .config import DESK_OMEGA, ScenarioConfig, load_config
from .lindblad import ConfigError, NumericalError
from .propagation import (control_only_state, default_detuning_grid, fwm_spectrum,
                          max_time_step, propagate_pulse, pumped_state, resolve_medium,
                          transmission_spectrum)
from .storage import (desk_scale, desk_time_scale, efficiency_vs_depth, gaussian_envelope,
                      iterate_optimal, run_storage, storage_samples, storage_window)
from .trapping import rabi_from_power

SUBCOMMANDS = ("spectrum", "fwm", "pulse", "store", "optimize", "sweep")


def _spectrum(cfg: ScenarioConfig, fwm: bool = False, omega_c: float = None):
    if omega_c is None:
        fields = cfg.fields
    else:
        fields = cfg.fields.replace(omega_c=omega_c, omega_p=cfg.data["probe_ratio"] * omega_c)
    cell = cfg.cell
    relax = cell.relaxation(fields.omega_c, cfg.data["radiation_trapping"])
    d, relax = resolve_medium(cell, fields, relax)
    sp = cfg.data["spectrum"]
    deltas = default_detuning_grid(fields, relax, d, int(sp["n_points"]), float(sp["span"]))
    scheme = cfg.scheme()
    if fwm:
        return fwm_spectrum(d, scheme, fields, relax, deltas, int(sp["n_slices"]),
                            seed_ratio=float(sp["seed_ratio"])), relax
    return transmission_spectrum(d, scheme, fields, relax, deltas, int(sp["n_slices"]),
                                 method=sp["method"]), relax


def _desk(cfg: ScenarioConfig):
    cell = cfg.cell
    fields, relax, tau = desk_scale(cell, cfg.omega_c, cfg.data["storage"]["tau"],
                                    cfg.data["radiation_trapping"], DESK_OMEGA)
    scale = desk_time_scale(cell, cfg.omega_c, DESK_OMEGA)
    scheme = cfg.scheme(cell.gamma)
    return cell, scheme, fields, relax, tau, scale


def cmd_spectrum(cfg, out):
    spec, relax = _spectrum(cfg)
    F, A, C = analysis.extract_contrast(spec)
    io.write_spectrum(out / "spectrum.csv", spec)
    obs = {"F": F, "A": A, "C": C, "optical_depth": cfg.cell.optical_depth,
           "gamma_rt": relax.gamma_rt}
    return obs, f"spectrum: d={cfg.cell.optical_depth:.3g} F={F:.4f} A={A:.4f} C={C:.4f}"


def cmd_fwm(cfg, out):
    spec, _ = _spectrum(cfg, fwm=True)
    fs = analysis.fringe_stats(spec, cfg.data["prominence"])
    F, A, C = analysis.extract_contrast(spec)
    io.write_spectrum(out / "fwm.csv", spec)
    obs = {"F": F, "A": A, "C": C, "fringe_period": fs.period, "fringe_count": fs.count,
           "fringe_contrast": fs.contrast, "max_transmission": float(spec.transmission.max())}
    return obs, (f"fwm: d={cfg.cell.optical_depth:.3g} fringes={fs.count} "
                 f"period={fs.period:.4g} rad/s max T={spec.transmission.max():.4f}")


def cmd_pulse(cfg, out):
    cell, scheme, fields, relax, _, scale = _desk(cfg)
    d = cell.optical_depth
    p = cfg.data["pulse"]
    delay0 = d * relax.gamma / (2 * fields.omega_c ** 2)
    span = 4.0 * delay0 + 80.0 / relax.gamma
    n = max(int(p["n_points"]), int(np.ceil(span / (0.9 * max_time_step(d, relax)))))
    times = np.linspace(0.0, span, n)
    env = 1e-3 * fields.omega_c * gaussian_envelope(n, p["center"], p["width"])
    rho0 = control_only_state(scheme, fields, relax)
    rec = propagate_pulse(d, scheme, fields, relax, times, env, rho0=rho0)
    rec.meta.pop("absorbed", None)
    delay = analysis.slow_light_delay(rec)
    io.write_pulse(out / "pulse.csv", rec, time_unit="1/gamma", rate_unit="gamma")
    obs = {"delay": delay, "delay_seconds": delay * scale, "group_delay_estimate": delay0,
           "transmitted_energy": float(np.sum(np.abs(rec.output) ** 2) / np.sum(np.abs(env) ** 2)),
           "time_scale_seconds": scale}
    return obs, f"pulse: d={d:.3g} delay={delay:.4g}/gamma ({delay * scale:.4g} s)"


def _store_setup(cfg):
    cell, scheme, fields, relax, tau, scale = _desk(cfg)
    d = cell.optical_depth
    n = storage_samples(d, fields, relax)
    return cell, scheme, fields, relax, tau, scale, d, n


def cmd_store(cfg, out):
    cell, scheme, fields, relax, tau, scale, d, n = _store_setup(cfg)
    p = cfg.data["pulse"]
    env = gaussian_envelope(n, 1.0 - p["center"], 0.1)
    run = run_storage(d, scheme, fields, env, tau, relax=relax, rho0=pumped_state(scheme))
    io.write_pulse(out / "store.csv", run.record, time_unit="1/gamma", rate_unit="gamma")
    obs = {"efficiency": run.efficiency, "leakage": run.leakage, "retrieved": run.retrieved,
           "absorbed": run.absorbed, "tau_seconds": cfg.data["storage"]["tau"],
           "tau_compressed": tau, "time_scale_seconds": scale}
    return obs, (f"store: d={d:.3g} tau={cfg.data['storage']['tau']:.3g} s "
                 f"efficiency={run.efficiency:.4f} leakage={run.leakage:.4f}")


def cmd_optimize(cfg, out):
    cell, scheme, fields, relax, tau, scale, d, n = _store_setup(cfg)
    st = cfg.data["storage"]
    traj = iterate_optimal(d, scheme, fields, gaussian_envelope(n, 0.5, 0.15), tau,
                           n_iter=int(st["n_iter"]), relax=relax, tol=float(st["tol"]),
                           rho0=pumped_state(scheme))
    rows = [{"iteration": k, "efficiency": e} for k, _, e in traj]
    io.write_table(out / "optimize.csv", rows)
    best = traj[-1]
    env = best[1]
    io.write_csv(out / "optimize_envelope.csv", ["time [1/gamma]", "envelope_re [1]", "envelope_im [1]"],
                 [np.arange(n) * (storage_window(d, fields, relax) / n), env.real, env.imag])
    obs = {"efficiencies": [e for _, _, e in traj], "final_efficiency": best[2],
           "iterations": len(traj)}
    return obs, f"optimize: d={d:.3g} iterations={len(traj)} efficiency={best[2]:.4f}"


def cmd_sweep(cfg, out):
    sw = cfg.data["sweep"]
    values = [float(v) for v in sw["values"]]
    workers = int(cfg.data["workers"])
    if sw["axis"] == "d":
        cell = cfg.cell
        st = cfg.data["storage"]
        rows = efficiency_vs_depth(cell, values, st["tau"], cfg.data["laser_power_mw"],
                                   cfg.data["radiation_trapping"], int(st["n_iter"]),
                                   float(st["tol"]), workers)
        units = {"d": "1", "d_T": "1", "gamma_rt": "rad/s"}
        best = max(rows, key=lambda r: r["efficiency"])
        summary = f"sweep d: best efficiency {best['efficiency']:.4f} at d={best['d']:.3g}"
    elif sw["axis"] == "intensity":
        cell = cfg.cell

        def one(power):
            oc = rabi_from_power(power, cell.beam_diameter, cell.gamma_nat)
            spec, relax = _spectrum(cfg, omega_c=oc)
            F, A, C = analysis.extract_contrast(spec)
            return {"power": power, "omega_c": oc, "gamma_rt": relax.gamma_rt,
                    "F": F, "A": A, "C": C}

        rows = _map(one, values, workers)
        units = {"power": "mW", "omega_c": "rad/s", "gamma_rt": "rad/s"}
        summary = (f"sweep intensity: F from {rows[0]['F']:.4f} to {rows[-1]['F']:.4f} "
                   f"over {values[0]:.3g}-{values[-1]:.3g} mW")
    else:
        cell, scheme, fields, relax, _, scale, d, n = _store_setup(cfg)
        env = gaussian_envelope(n, 1.0 - cfg.data["pulse"]["center"], 0.1)

        def one(tau):
            run = run_storage(d, scheme, fields, env, tau / scale, relax=relax,
                              rho0=pumped_state(scheme))
            return {"tau": tau, "efficiency": run.efficiency, "leakage": run.leakage}

        rows = _map(one, values, workers)
        units = {"tau": "s"}
        summary = "sweep tau"
        if len(rows) >= 4:
            fit = analysis.fit_decay([r["tau"] for r in rows], [r["efficiency"] for r in rows])
            summary += f": 1/e time {fit.time:.4g} s"
            rows_fit = {"decay_time": fit.time, "decay_rate": fit.rate, "residual": fit.residual,
                        "monotone": fit.monotone}
            io.write_table(out / "sweep.csv", rows, units)
            return {"rows": rows, "fit": rows_fit}, summary
    io.write_table(out / "sweep.csv", rows, units)
    return {"rows": rows}, summary


def _map(fn, values, workers):
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(fn, values))
    return [fn(v) for v in values]


COMMANDS = {"spectrum": cmd_spectrum, "fwm": cmd_fwm, "pulse": cmd_pulse, "store": cmd_store,
            "optimize": cmd_optimize, "sweep": cmd_sweep}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vaporeit", description=__doc__.split("\n\n")[0])
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--config", type=Path, help="JSON scenario file")
    parser.add_argument("--out", type=Path, help="output directory (default: config 'out')")
    parser.add_argument("--set", dest="overrides", action="append", default=[],
                        metavar="KEY=VALUE", help="dotted-path override, repeatable")
    parser.add_argument("--workers", type=int, help="parallel sweep workers")
    parser.add_argument("--prominence", type=float, help="fringe prominence threshold (fraction of max)")
    return parser


def run(subcommand: str, cfg: ScenarioConfig, out: Path):
    """Run one subcommand; returns (observables, summary line)."""
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    obs, summary = COMMANDS[subcommand](cfg, out)
    io.write_json(out / f"{subcommand}.json",
                  {"subcommand": subcommand, "config": cfg.resolved(), "observables": obs})
    return obs, summary


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    overrides = list(args.overrides)
    if args.workers is not None:
        overrides.append(f"workers={args.workers}")
    if args.prominence is not None:
        overrides.append(f"prominence={args.prominence}")
    try:
        cfg = load_config(args.config, overrides)
        np.random.seed(int(cfg.data["seed"]))
        out = args.out if args.out is not None else Path(cfg.data["out"])
        _, summary = run(args.subcommand, cfg, out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (NumericalError, analysis.AnalysisError) as exc:
        print(f"numerical failure in {args.subcommand}: {exc}", file=sys.stderr)
        return 3
    print(summary)
    return 0


if __name__ == "__main__":
    sys.exit(main())
