"""
Stored light: store/retrieve sequences, efficiency and pulse optimization.

A storage run lights the control for an input window, switches it off for a
dark interval ``tau``, and switches it back on for a readout window of the
same length (forward retrieval). Efficiency is the readout energy divided by
the input energy; light leaving during the input window is leakage.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .atoms import GROUND_SPLITTING, LevelScheme, build_lambda3
from .lindblad import ConfigError, FieldConfig, NumericalError, RelaxationConfig
from .propagation import (PulseRecord, control_only_state, max_time_step, propagate_pulse,
                          pumped_state, resolve_medium)
from .trapping import CellConfig, preset, rabi_from_power

#: Peak probe amplitude, relative to the control, used inside the solver.
PROBE_SCALE = 1e-3


@dataclass
class StorageRun:
    """One store/retrieve cycle; energies are fractions of the input energy."""

    record: PulseRecord
    tau: float
    leakage: float
    retrieved: float
    absorbed: float = float("nan")

    def __post_init__(self):
        if self.leakage < -1e-9 or self.retrieved < -1e-9:
            raise ValueError("energy fractions must be non-negative")

    @property
    def efficiency(self) -> float:
        return self.retrieved

    @property
    def n_in(self) -> int:
        return self.record.dark_index


def storage_window(d: float, fields: FieldConfig, relax: RelaxationConfig) -> float:
    """Length of the input (and readout) window: three group delays plus 40/gamma."""
    if fields.omega_c <= 0:
        raise ConfigError("storage needs a control field")
    return 3.0 * d * relax.gamma / (2.0 * fields.omega_c ** 2) + 40.0 / relax.gamma


def storage_grid(d: float, fields: FieldConfig, relax: RelaxationConfig,
                 n_points: int = 4096, window: float = None):
    """(times, n_in): uniform grid covering the input and readout windows."""
    if n_points < 8 or n_points % 2:
        raise ValueError("n_points must be an even number >= 8")
    W = storage_window(d, fields, relax) if window is None else float(window)
    n_in = n_points // 2
    return np.arange(n_points) * (W / n_in), n_in


def storage_samples(d: float, fields: FieldConfig, relax: RelaxationConfig,
                    minimum: int = 2048, window: float = None) -> int:
    """Samples per window: ``minimum``, raised when the optical depth demands a finer step."""
    W = storage_window(d, fields, relax) if window is None else float(window)
    need = int(np.ceil(W / (0.9 * max_time_step(d, relax)))) if d > 0 else 0
    return max(minimum, need)


def gaussian_envelope(n: int, center: float = 0.5, width: float = 0.15) -> np.ndarray:
    """Gaussian on ``n`` samples; center and 1/e half-width as window fractions."""
    x = (np.arange(n) + 0.5) / n
    return np.exp(-((x - center) / width) ** 2).astype(complex)


def _energy(x, dt):
    return float(np.sum(np.abs(x) ** 2) * dt)


def run_storage(cell, scheme: LevelScheme, fields: FieldConfig, input_envelope, tau: float,
                relax: RelaxationConfig = None, window: float = None,
                n_slices: int = 64, rho0=None) -> StorageRun:
    """Store ``input_envelope`` (samples of the input window), wait ``tau``, retrieve.

    The envelope is rescaled internally to a weak probe; energies are
    reported as fractions of the input energy, so any nonzero amplitude
    gives the same result.
    """
    if tau < 0:
        raise ConfigError("storage time must be non-negative")
    d, relax = resolve_medium(cell, fields, relax)
    env = np.asarray(input_envelope, dtype=complex)
    n_in = env.size
    if window is None:
        window = storage_window(d, fields, relax)
    times = np.arange(2 * n_in) * (window / n_in)
    dt = times[1] - times[0]
    peak = np.max(np.abs(env))
    if peak == 0:
        raise ValueError("input envelope has zero area")
    scale = PROBE_SCALE * fields.omega_c / peak
    e_in = np.concatenate([env * scale, np.zeros(n_in, dtype=complex)])
    ctrl = np.full(times.size, float(fields.omega_c))
    if rho0 is None:
        rho0 = control_only_state(scheme, fields, relax)
    rec = propagate_pulse(d, scheme, fields.replace(omega_p=0.0), relax, times, e_in,
                          control=ctrl, n_slices=n_slices, dark=(n_in, tau), rho0=rho0)
    rec.input = rec.input / scale
    rec.output = rec.output / scale
    rec.reference = rec.reference / scale
    e0 = _energy(rec.input, dt)
    leak = _energy(rec.output[:n_in], dt) / e0
    ret = _energy(rec.output[n_in:], dt) / e0
    absorbed = float(np.sum(rec.meta.pop("absorbed")) * dt / scale ** 2 / e0)
    rec.meta.update(scheme=scheme.name, d=d, tau=tau)
    return StorageRun(rec, tau, leak, ret, absorbed)


def efficiency(run) -> float:
    """Readout-window output energy over input energy (leakage excluded)."""
    rec = run.record if isinstance(run, StorageRun) else run
    k = rec.dark_index
    if k is None:
        raise ValueError("record has no storage interval")
    e_in = np.sum(np.abs(rec.input) ** 2)
    if e_in == 0:
        raise ValueError("input pulse has zero area")
    return float(np.sum(np.abs(rec.output[k:]) ** 2) / e_in)


def iterate_optimal(cell, scheme: LevelScheme, fields: FieldConfig, seed_envelope, tau: float,
                    n_iter: int = 20, relax: RelaxationConfig = None, tol: float = 1e-3,
                    stop_early: bool = False, **kw):
    """Time-reversal optimization of the input pulse shape.

    Each iteration stores the current input, retrieves it, and feeds the
    time-reversed, conjugated readout (energy renormalized) back as the next
    input. Returns ``[(k, envelope, efficiency), ...]`` starting at k = 1.
    With ``stop_early`` the loop ends once successive envelopes differ by
    less than ``tol`` in relative norm, up to a global phase.
    """
    if n_iter < 1:
        raise ValueError("n_iter must be >= 1")
    env = np.asarray(seed_envelope, dtype=complex)
    norm = np.linalg.norm(env)
    if norm == 0:
        raise ValueError("seed envelope must be nonzero")
    env = env / norm
    out = []
    for k in range(1, n_iter + 1):
        run = run_storage(cell, scheme, fields, env, tau, relax=relax, **kw)
        out.append((k, env, run.efficiency))
        readout = run.record.output[run.n_in:]
        nxt = np.conj(readout[::-1])
        nn = np.linalg.norm(nxt)
        if not nn > 0 or not np.isfinite(nn):
            raise NumericalError(f"zero-energy retrieval at iteration {k}")
        nxt = nxt / nn
        change = _shape_distance(env, nxt)
        env = nxt
        if stop_early and change < tol:
            break
    return out


def _shape_distance(a, b) -> float:
    """Distance between two envelopes after normalization, ignoring a global phase."""
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    return float(np.sqrt(max(2.0 - 2.0 * abs(np.vdot(a, b)), 0.0)))


def envelope_change(trajectory) -> np.ndarray:
    """Relative change (up to a global phase) between successive envelopes of a run."""
    envs = [e for _, e, _ in trajectory]
    return np.array([_shape_distance(a, b) for a, b in zip(envs, envs[1:])])


def desk_time_scale(cell: CellConfig, omega_c: float, omega_desk: float = 0.5) -> float:
    """Physical seconds per unit of compressed time for slow (spin-wave) dynamics."""
    return (cell.gamma / omega_c ** 2) * omega_desk ** 2


def desk_scale(cell: CellConfig, omega_c: float, tau: float, radiation_trapping: bool = True,
               omega_desk: float = 0.5):
    """Map a physical cell onto a compressed problem with gamma = 1.

    Optical rates are divided by the optical linewidth, slow rates (gamma0,
    the trapping rate) are scaled so that gamma0 gamma / Omega_C^2 and the
    trapping analogue are preserved, and ``tau`` is rescaled so that the
    dark-interval decay gamma0 tau is unchanged. Returns
    ``(fields, relax, tau_desk)``.
    """
    phys = cell.relaxation(omega_c, radiation_trapping)
    g = phys.gamma
    slow = desk_time_scale(cell, omega_c, omega_desk)
    relax = RelaxationConfig(
        gamma_nat=phys.gamma_nat / g, gamma=1.0, gamma0=phys.gamma0 * slow,
        gamma_quench=phys.gamma_quench / g, gamma_mix=phys.gamma_mix / g,
        gamma_rt=phys.gamma_rt * slow, ground_reset_fraction=phys.ground_reset_fraction)
    fields = FieldConfig(omega_c=omega_desk, omega_p=0.0, omega_as=0.0,
                         delta_one=0.0, delta_two=0.0)
    return fields, relax, tau / slow


def _depth_point(cell, d, omega_c, tau, radiation_trapping, n_iter, tol, kw):
    c = cell.with_optical_depth(d)
    fields, relax, tau_d = desk_scale(c, omega_c, tau, radiation_trapping)
    scheme = build_lambda3(splitting=GROUND_SPLITTING / c.gamma)
    kw = dict(kw)
    n = storage_samples(d, fields, relax, kw.pop("n_points", 4096) // 2, kw.get("window"))
    traj = iterate_optimal(d, scheme, fields, gaussian_envelope(n), tau_d, n_iter=n_iter,
                           relax=relax, tol=tol, stop_early=True, rho0=pumped_state(scheme), **kw)
    best = max(traj, key=lambda t: t[2])
    run = run_storage(d, scheme, fields, best[1], tau_d, relax=relax, rho0=pumped_state(scheme), **kw)
    return {"d": d, "d_T": float(c.transverse_optical_depth),
            "gamma_rt": float(c.trapping_rate(omega_c) if radiation_trapping else 0.0),
            "efficiency": float(best[2]), "iterations": len(traj), "leakage": float(run.leakage)}


def efficiency_vs_depth(cell_preset, d_grid, tau: float = 400e-6, laser_power: float = 9.0,
                        radiation_trapping: bool = True, n_iter: int = 20, tol: float = 1e-3,
                        workers: int = 1, **kw):
    """Best (optimized) storage efficiency at each optical depth.

    ``cell_preset`` is a preset name or a :class:`CellConfig`; density is
    varied to reach each ``d``, which also changes the transverse depth and
    hence the trapping rate. ``laser_power`` (mW) sets the control Rabi
    frequency. Returns a list of row dicts.
    """
    cell = preset(cell_preset) if isinstance(cell_preset, str) else cell_preset
    d_grid = np.asarray(d_grid, dtype=float)
    if d_grid.size == 0 or np.any(np.diff(d_grid) <= 0):
        raise ConfigError("d grid must be non-empty and increasing")
    omega_c = rabi_from_power(laser_power, cell.beam_diameter, cell.gamma_nat)

    def one(d):
        return _depth_point(cell, float(d), omega_c, tau, radiation_trapping, n_iter, tol, kw)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(one, d_grid))
    return [one(d) for d in d_grid]
