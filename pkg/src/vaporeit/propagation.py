"""
One-dimensional propagation of probe (and anti-Stokes) envelopes.

Positions are measured in units of the cell length, so a field obeys

    d Omega_P / dz = i (d gamma / 2) * sum_g c_g rho_{e g}

and a bare resonant absorber transmits ``exp(-d)`` in intensity. CW spectra
use slice-by-slice steady states; pulses integrate the master equation in
time on every slice (co-moving frame, the field follows instantaneously).
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .atoms import LevelScheme
from .lindblad import (ConfigError, DegenerateSteadyStateError, FieldConfig, NumericalError,
                       RelaxationConfig, _commutator_super, liouvillian,
                       probe_superoperators, solve_stationary, steady_state)
from .trapping import CellConfig


class ResolutionError(NumericalError):
    """Time grid too coarse for the explicit integrator."""


@dataclass
class SpectrumResult:
    """Probe transmission versus two-photon detuning.

    ``transmission`` is normalized to the probe level far from any atomic
    resonance. ``anti_stokes`` holds the output anti-Stokes intensity in the
    same units, when the four-wave-mixing model was used.
    """

    delta: np.ndarray
    transmission: np.ndarray
    anti_stokes: np.ndarray = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.delta = np.asarray(self.delta, dtype=float)
        self.transmission = np.asarray(self.transmission, dtype=float)
        if self.delta.shape != self.transmission.shape:
            raise ValueError("delta and transmission must have the same shape")
        if self.delta.size > 1 and np.any(np.diff(self.delta) <= 0):
            raise ValueError("detuning grid must be strictly increasing")
        if np.any(self.transmission < 0):
            raise ValueError("transmission must be non-negative")


@dataclass
class PulseRecord:
    """Probe envelopes on a uniform grid of illuminated time.

    When ``tau > 0`` a dark interval of that length sits just before sample
    ``dark_index``; :attr:`physical_time` adds it back.
    """

    times: np.ndarray
    input: np.ndarray
    output: np.ndarray
    control: np.ndarray
    reference: np.ndarray
    tau: float = 0.0
    dark_index: int = None
    meta: dict = field(default_factory=dict)

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])

    @property
    def physical_time(self) -> np.ndarray:
        t = np.array(self.times, dtype=float)
        if self.dark_index is not None:
            t[self.dark_index:] += self.tau
        return t


def default_detuning_grid(fields: FieldConfig, relax: RelaxationConfig, d: float,
                          n_points: int = 201, span: float = 20.0) -> np.ndarray:
    """``n_points`` detunings across +-span EIT widths, width = Omega_C^2 / (gamma sqrt(d))."""
    width = fields.omega_c ** 2 / (relax.gamma * np.sqrt(max(d, 1.0)))
    if width == 0:
        width = relax.gamma
    return np.linspace(-span * width, span * width, n_points)


def resolve_medium(cell, fields: FieldConfig, relax: RelaxationConfig = None):
    """(optical depth, relaxation) from a :class:`CellConfig` or a bare depth.

    A cell supplies its own relaxation rates (with radiation trapping at the
    control strength in ``fields``) unless ``relax`` is given explicitly.
    """
    if isinstance(cell, CellConfig):
        d = cell.optical_depth
        if relax is None:
            relax = cell.relaxation(fields.omega_c)
    else:
        d = float(cell)
        if relax is None:
            raise ConfigError("relaxation rates are required when no cell is given")
    if not d >= 0:
        raise ConfigError(f"optical depth must be non-negative, got {d}")
    return d, relax


def _probe_vector(scheme: LevelScheme, q: int) -> np.ndarray:
    return scheme.dipole_matrix("probe", q).ravel()


def _detuning_super(scheme: LevelScheme) -> np.ndarray:
    diag = np.zeros((scheme.n, scheme.n), dtype=complex)
    for i, lv in enumerate(scheme.levels):
        if lv.manifold == "ground" and lv.F == scheme.probe_F:
            diag[i, i] = 1.0
    return _commutator_super(diag)


def pumped_state(scheme: LevelScheme) -> np.ndarray:
    """All atoms spread evenly over the probe-ground sublevels."""
    idx = [i for i, lv in enumerate(scheme.levels)
           if lv.manifold == "ground" and lv.F == scheme.probe_F]
    rho = np.zeros((scheme.n, scheme.n), dtype=complex)
    rho[idx, idx] = 1.0 / len(idx)
    return rho


def control_only_state(scheme, fields, relax, rho0=None) -> np.ndarray:
    """Optically pumped state with the probe off, or ``rho0`` when given.

    Falls back to :func:`pumped_state` if the pumping problem has no unique
    steady state (no relaxation feeding the ground manifold).
    """
    if rho0 is not None:
        return np.asarray(rho0, dtype=complex)
    try:
        return steady_state(scheme, fields.replace(omega_p=0.0, delta_two=0.0), relax)
    except DegenerateSteadyStateError:
        return pumped_state(scheme)


def _chunks(n, size):
    for i in range(0, n, size):
        yield slice(i, min(i + size, n))


def transmission_spectrum(cell, scheme: LevelScheme, fields: FieldConfig,
                          relax: RelaxationConfig = None, deltas=None, n_slices: int = 64,
                          method: str = "full", rho0=None) -> SpectrumResult:
    """EIT probe transmission with an undepleted control field.

    method="full" solves each slice's steady state at the local probe
    amplitude (midpoint rule in z). method="linear" keeps the control-only pumped state (or
    ``rho0``) fixed and computes the probe coherence to first order.
    """
    d, relax = resolve_medium(cell, fields, relax)
    if n_slices < 32:
        raise ValueError("n_slices must be at least 32")
    if deltas is None:
        deltas = default_detuning_grid(fields, relax, d)
    deltas = np.asarray(deltas, dtype=float)
    if fields.omega_p == 0 and method == "full":
        method = "linear"
    L0 = liouvillian(scheme, fields.replace(omega_p=0.0, delta_two=0.0), relax)
    Kd = _detuning_super(scheme)
    K, Kc = probe_superoperators(scheme, fields.q_p)
    dvec = _probe_vector(scheme, fields.q_p)
    N = L0.shape[0]
    chunk = max(1, int(4e6 // (N * N)))
    step = 0.5j * d / n_slices

    if method == "linear":
        base = control_only_state(scheme, fields, relax, rho0).ravel()
        eps = 1e-13 * np.linalg.norm(L0)
        rhs = -(K @ base)
        pc = np.empty(deltas.size, dtype=complex)
        for sl in _chunks(deltas.size, chunk):
            A = L0[None] + deltas[sl, None, None] * Kd[None] - eps * np.eye(N)[None]
            x = np.linalg.solve(A, np.broadcast_to(rhs, (A.shape[0], N))[..., None])[..., 0]
            pc[sl] = relax.gamma * (x @ dvec)
        _check_finite(pc, deltas, 0)
        amp = np.exp(step * n_slices * pc)
        T = np.abs(amp) ** 2
    elif method == "full":
        omega0 = complex(fields.omega_p)
        omega = np.full(deltas.size, omega0)
        floor = 1e-6 * abs(omega0)
        scale = np.linalg.norm(L0)

        def local_pc(w, j):
            small = np.abs(w) < floor
            w_eval = np.where(small, floor * np.exp(1j * np.angle(w)), w)
            pc = np.empty(deltas.size, dtype=complex)
            for sl in _chunks(deltas.size, chunk):
                A = (L0[None] + deltas[sl, None, None] * Kd[None]
                     + w_eval[sl, None, None] * K[None] + np.conj(w_eval[sl])[:, None, None] * Kc[None])
                rho = solve_stationary(A).reshape(-1, N)
                res = np.linalg.norm(np.einsum("kij,kj->ki", A, rho), axis=1)
                bad = ~(res <= 1e-8 * scale)
                if np.any(bad):
                    k = np.flatnonzero(bad)[0] + sl.start
                    raise NumericalError(
                        f"slice {j}: steady state did not converge at delta={deltas[k]:.6g}")
                pc[sl] = relax.gamma * (rho @ dvec) / w_eval[sl]
            _check_finite(pc, deltas, j)
            return pc

        # midpoint rule in z: the coherence is re-evaluated at the half-slice amplitude
        for j in range(n_slices):
            half = omega * np.exp(0.5 * step * local_pc(omega, j))
            omega = omega * np.exp(step * local_pc(half, j))
        T = np.abs(omega / omega0) ** 2
    else:
        raise ValueError(f"unknown method {method!r}")
    return SpectrumResult(deltas, T, meta={"d": d, "n_slices": n_slices, "method": method,
                                           "scheme": scheme.name})


def _check_finite(pc, deltas, j):
    if not np.all(np.isfinite(pc)):
        k = np.flatnonzero(~np.isfinite(pc))[0]
        raise NumericalError(f"slice {j}: non-finite probe coherence at delta={deltas[k]:.6g}")


def fwm_coupling_matrix(scheme: LevelScheme, fields: FieldConfig, relax: RelaxationConfig,
                        deltas, rho0=None) -> np.ndarray:
    """Propagation matrices M(delta) for (Omega_P, conj(Omega_AS)).

    The control also drives the probe transition, detuned by the ground
    splitting, and scatters off the ground coherence into the anti-Stokes
    mode on the control transition. Working to first order in the weak
    fields, with the slice populations from the pumped state,

        dy/dz = (d/2) M y,   y = (Omega_P, conj(Omega_AS)).
    """
    if scheme.name != "lambda3":
        raise ValueError("the four-wave-mixing model is formulated for the lambda3 scheme")
    rho = control_only_state(scheme, fields, relax, rho0)
    n1 = (rho[0, 0] - rho[2, 2]).real
    n2 = (rho[1, 1] - rho[2, 2]).real
    g, oc, Dl = relax.gamma, fields.omega_c, fields.delta_one
    wg = scheme.splitting
    g0 = relax.gamma0 + relax.gamma_rt
    c0 = 1j * oc * n1 / (g - 1j * (Dl - wg))
    deltas = np.atleast_1d(np.asarray(deltas, dtype=float))
    M = np.empty((deltas.size, 2, 2), dtype=complex)
    for k, de in enumerate(deltas):
        dp = Dl + de
        da = Dl - wg - de
        # unknowns: P = rho_e1, S = rho_21, Qc = conj(rho_e2 at the anti-Stokes frequency)
        A = np.array([[g - 1j * dp, -1j * oc, 0.0],
                      [-1j * oc, g0 - 1j * de, 1j * oc],
                      [0.0, 1j * oc, g + 1j * da]], dtype=complex)
        B = np.array([[1j * n1, 0.0], [0.0, 1j * c0], [0.0, -1j * n2]], dtype=complex)
        X = np.linalg.solve(A, B)
        M[k, 0] = 1j * g * X[0]
        M[k, 1] = -1j * g * X[2]
    return M


def fwm_spectrum(cell, scheme: LevelScheme, fields: FieldConfig, relax: RelaxationConfig = None,
                 deltas=None, n_slices: int = 64, seed_ratio: float = 1.0,
                 rho0=None) -> SpectrumResult:
    """Probe transmission with a co-propagating, seeded anti-Stokes field.

    The anti-Stokes input is ``fields.omega_as`` if nonzero, otherwise
    ``seed_ratio * fields.omega_p``. Transmission can exceed one.
    """
    d, relax = resolve_medium(cell, fields, relax)
    if n_slices < 32:
        raise ValueError("n_slices must be at least 32")
    if deltas is None:
        deltas = default_detuning_grid(fields, relax, d)
    deltas = np.asarray(deltas, dtype=float)
    op = fields.omega_p if fields.omega_p != 0 else 1.0
    oas = fields.omega_as if fields.omega_as != 0 else seed_ratio * op
    M = fwm_coupling_matrix(scheme, fields, relax, deltas, rho0)
    U = expm(0.5 * d / n_slices * M)
    y = np.tile(np.array([op, np.conj(oas)], dtype=complex), (deltas.size, 1))
    for _ in range(n_slices):
        y = np.einsum("kij,kj->ki", U, y)
    if not np.all(np.isfinite(y)):
        raise NumericalError("four-wave-mixing propagation overflowed")
    T = np.abs(y[:, 0] / op) ** 2
    AS = np.abs(y[:, 1] / op) ** 2
    return SpectrumResult(deltas, T, AS, meta={"d": d, "n_slices": n_slices, "method": "fwm",
                                               "seed_ratio": abs(oas / op), "scheme": scheme.name})


def propagate_pulse(cell, scheme: LevelScheme, fields: FieldConfig, relax: RelaxationConfig,
                    times, input_envelope, control=None, n_slices: int = 64,
                    dark=None, rho0=None, dark_relax: RelaxationConfig = None,
                    return_state: bool = False):
    """Maxwell-Bloch propagation of a probe pulse (RK4 in time, midpoint rule in z).

    ``control`` is the control Rabi frequency per sample (held over the step
    that starts there); defaults to ``fields.omega_c``. ``dark=(k, tau)``
    inserts free evolution of length ``tau`` right before sample ``k``, with
    radiation trapping off since no light is scattered.
    """
    d, relax = resolve_medium(cell, fields, relax)
    times = np.asarray(times, dtype=float)
    n_t = times.size
    dt = times[1] - times[0]
    if not np.allclose(np.diff(times), dt, rtol=1e-9, atol=0):
        raise ValueError("time grid must be uniform")
    e_in = np.asarray(input_envelope, dtype=complex)
    if e_in.shape != times.shape:
        raise ValueError("input envelope must match the time grid")
    ctrl = np.full(n_t, float(fields.omega_c)) if control is None else np.asarray(control, float)

    base = fields.replace(omega_c=0.0, omega_p=0.0)
    L0 = liouvillian(scheme, base, relax)
    Dc = scheme.dipole_matrix("control", fields.q_c)
    C = _commutator_super(-(Dc + Dc.T).astype(complex))
    K, Kc = probe_superoperators(scheme, fields.q_p)
    dvec = _probe_vector(scheme, fields.q_p)
    N = L0.shape[0]

    _check_resolution(L0, C, K, ctrl, e_in, dt, d * relax.gamma)

    kappa = 0.5j * d * relax.gamma / n_slices
    if rho0 is None:
        rho0 = control_only_state(scheme, fields.replace(omega_c=ctrl[0] or fields.omega_c),
                                  relax)
    rho = np.tile(np.asarray(rho0, dtype=complex).ravel(), (n_slices, 1))

    KT, KcT = K.T.copy(), Kc.T.copy()

    def rhs(r, w_in, oc):
        P = r @ dvec
        w = w_in + kappa * (np.cumsum(P) - 0.5 * P)
        Lt = (L0 + oc * C).T
        return r @ Lt + w[:, None] * (r @ KT) + np.conj(w)[:, None] * (r @ KcT)

    out = np.empty(n_t, dtype=complex)
    absorbed = np.empty(n_t)
    dark_index, tau = (None, 0.0) if dark is None else (int(dark[0]), float(dark[1]))
    if dark_index is not None and tau > 0:
        dr = relax.replace(gamma_rt=0.0) if dark_relax is None else dark_relax
        Ud = expm(liouvillian(scheme, base, dr) * tau)
    for k in range(n_t):
        if k == dark_index and tau > 0:
            rho = rho @ Ud.T
        P = rho @ dvec
        w_mid = e_in[k] + kappa * (np.cumsum(P) - 0.5 * P)
        out[k] = e_in[k] + kappa * np.sum(P)
        absorbed[k] = -2.0 * np.sum((np.conj(w_mid) * kappa * P).real)
        if k == n_t - 1:
            break
        a, b = e_in[k], e_in[k + 1]
        m = 0.5 * (a + b)
        oc = ctrl[k]
        k1 = rhs(rho, a, oc)
        k2 = rhs(rho + 0.5 * dt * k1, m, oc)
        k3 = rhs(rho + 0.5 * dt * k2, m, oc)
        k4 = rhs(rho + dt * k3, b, oc)
        rho = rho + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(rho)):
            raise NumericalError(f"pulse integration diverged at t={times[k + 1]:.6g}")

    rec = PulseRecord(times, e_in, out, ctrl, e_in.copy(), tau, dark_index,
                      meta={"d": d, "n_slices": n_slices, "scheme": scheme.name,
                            "absorbed": absorbed})
    if return_state:
        return rec, rho.reshape(n_slices, scheme.n, scheme.n)
    return rec


#: Largest dt * (d gamma / 2) for which the slice cascade stays stable under
#: repeated time reversal of noisy envelopes (found empirically).
CASCADE_LIMIT = 4.0


def _check_resolution(L0, C, K, ctrl, e_in, dt, d_gamma=0.0, limit=2.5):
    """Reject grids where RK4 would be unstable.

    Two conditions: the fastest single-slice atomic rate, and the collective
    rate d gamma / 2 with which the slices feed back on one another.
    """
    oc = np.max(np.abs(ctrl)) if ctrl.size else 0.0
    wp = np.max(np.abs(e_in)) if e_in.size else 0.0
    rate = np.max(np.abs(np.linalg.eigvals(L0 + oc * C + wp * (K + K.conj().T))))
    if dt * rate > limit:
        raise ResolutionError(
            f"time step {dt:.3g} too coarse: dt * (fastest rate {rate:.3g}) = {dt * rate:.3g} > {limit}")
    if dt * 0.5 * d_gamma > CASCADE_LIMIT:
        raise ResolutionError(
            f"time step {dt:.3g} too coarse for optical depth: dt * d gamma / 2 = "
            f"{dt * 0.5 * d_gamma:.3g} > {CASCADE_LIMIT}")


def max_time_step(d: float, relax: RelaxationConfig) -> float:
    """Largest step accepted by :func:`propagate_pulse` on account of the optical depth."""
    dg = d * relax.gamma
    return np.inf if dg == 0 else 2.0 * CASCADE_LIMIT / dg
