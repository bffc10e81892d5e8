r"""
Rotating-wave master equation for Rb D1 level schemes.

The state is evolved under

.. math::

    \dot\rho = -i[H, \rho] + \sum_k r_k \left(L_k \rho L_k^\dagger
        - \tfrac12 \{L_k^\dagger L_k, \rho\}\right)

with jump operators for spontaneous emission, buffer-gas quenching,
excited-state Zeeman mixing, ground-state dephasing, isotropic ground-state
depolarization (radiation trapping and atom exchange with the beam
surroundings) and extra excited-state dephasing. The extra dephasing is
chosen so that every optical coherence decays at exactly ``gamma``.

Rabi frequencies follow the convention ``H[e, g] = -Omega * c``, i.e.
``Omega`` is half of the textbook Rabi frequency. With this choice the weak
probe EIT peak transmission is ``exp(-d gamma gamma0 / Omega_C**2)`` and
the control optical pumping rate is ``Omega_C**2 / gamma``.
"""

from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from scipy.integrate import solve_ivp

from .atoms import LevelScheme


class ConfigError(ValueError):
    """Invalid field or relaxation configuration."""


class NumericalError(RuntimeError):
    """A numerical procedure failed (stiffness, singular system, ...)."""


class DegenerateSteadyStateError(NumericalError):
    """The Liouvillian has more than one stationary state."""


@dataclass(frozen=True)
class FieldConfig:
    """Optical fields in the rotating frame (all rates in rad/s).

    ``delta_one`` is the control detuning from its transition to F'=2 and
    ``delta_two`` the two-photon (Raman) detuning. The anti-Stokes amplitude
    is only used by the four-wave-mixing propagation model.
    """

    omega_c: float = 0.0
    omega_p: float = 0.0
    omega_as: float = 0.0
    delta_one: float = 0.0
    delta_two: float = 0.0
    q_c: int = 1
    q_p: int = 1
    q_as: int = 1

    def replace(self, **kw) -> "FieldConfig":
        return replace(self, **kw)

    @property
    def perturbative(self) -> bool:
        # 4% intensity ratio <=> 0.2 amplitude ratio
        return abs(self.omega_p) <= 0.2 * abs(self.omega_c)


@dataclass(frozen=True)
class RelaxationConfig:
    """Decay and decoherence rates (rad/s).

    gamma_nat
        Natural decay rate of the excited state.
    gamma
        Total optical-coherence half-width including pressure broadening.
    gamma0
        Ground-state coherence decay rate. A fraction ``ground_reset_fraction``
        of it acts as isotropic repopulation of the ground manifold (atoms
        diffusing in from outside the beam); the remainder is pure dephasing.
    gamma_quench
        Non-radiative quenching to the ground level with the same mF.
    gamma_mix
        Uniform redistribution among excited Zeeman sublevels.
    gamma_rt
        Isotropic ground-state depolarization from reabsorbed fluorescence.
    """

    gamma_nat: float = 1.0
    gamma: float = 0.5
    gamma0: float = 0.0
    gamma_quench: float = 0.0
    gamma_mix: float = 0.0
    gamma_rt: float = 0.0
    ground_reset_fraction: float = 0.0

    def __post_init__(self):
        for name in ("gamma_nat", "gamma", "gamma0", "gamma_quench", "gamma_mix", "gamma_rt"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be non-negative")
        if not 0.0 <= self.ground_reset_fraction <= 1.0:
            raise ConfigError("ground_reset_fraction must lie in [0, 1]")
        if self.extra_dephasing < -1e-12 * max(self.gamma, 1.0):
            raise ConfigError(
                "gamma is smaller than the optical decoherence implied by the other "
                f"channels ({self.gamma - self.extra_dephasing:.6g})")

    @property
    def extra_dephasing(self) -> float:
        return self.gamma - 0.5 * (self.gamma_nat + self.gamma_quench + self.gamma_mix
                                   + self.gamma0 + self.gamma_rt)

    def replace(self, **kw) -> "RelaxationConfig":
        return replace(self, **kw)


def hamiltonian(scheme: LevelScheme, fields: FieldConfig) -> np.ndarray:
    """Rotating-frame Hamiltonian (hbar = 1)."""
    H = np.zeros((scheme.n, scheme.n), dtype=complex)
    for i, lv in enumerate(scheme.levels):
        if lv.manifold == "excited":
            H[i, i] = -fields.delta_one + lv.energy
        elif lv.F == scheme.probe_F:
            H[i, i] = fields.delta_two
    for field, omega, q in (("control", fields.omega_c, fields.q_c),
                            ("probe", fields.omega_p, fields.q_p)):
        if omega == 0:
            continue
        D = scheme.dipole_matrix(field, q)
        if not D.any():
            raise ConfigError(f"{field} polarization q={q} has no couplings in {scheme.name}")
        H -= omega * D
        H -= np.conj(omega) * D.T
    return H


def _jump_operators(scheme: LevelScheme, relax: RelaxationConfig):
    """List of (rate, L) pairs. Each L is an n x n real matrix."""
    n = scheme.n
    g_idx, e_idx = scheme.ground, scheme.excited
    levels = scheme.levels
    ops = []

    # spontaneous emission, grouped by (ground F, excited F, q) so that
    # different hyperfine frequencies do not interfere
    out = np.zeros(n)
    for c in scheme.couplings:
        out[c.upper] += c.amplitude ** 2
    groups = {}
    for c in scheme.couplings:
        key = (levels[c.lower].F, levels[c.upper].F, c.q, scheme.name == "lambda3" and c.lower)
        L = groups.setdefault(key, np.zeros((n, n)))
        L[c.lower, c.upper] = c.amplitude / np.sqrt(out[c.upper])
    if relax.gamma_nat > 0:
        ops += [(relax.gamma_nat, L) for L in groups.values()]

    if relax.gamma_quench > 0:
        for e in e_idx:
            if scheme.name == "lambda3":
                targets = list(g_idx)
            else:
                targets = [g for g in g_idx if levels[g].mF == levels[e].mF]
            for g in targets:
                L = np.zeros((n, n))
                L[g, e] = 1.0
                ops.append((relax.gamma_quench / len(targets), L))

    if relax.gamma_mix > 0:
        for e in e_idx:
            for e2 in e_idx:
                L = np.zeros((n, n))
                L[e2, e] = 1.0
                ops.append((relax.gamma_mix / len(e_idx), L))

    dephase = (1.0 - relax.ground_reset_fraction) * relax.gamma0
    if dephase > 0:
        for g in g_idx:
            L = np.zeros((n, n))
            L[g, g] = 1.0
            ops.append((dephase, L))

    reset = relax.ground_reset_fraction * relax.gamma0 + relax.gamma_rt
    if reset > 0:
        for g in g_idx:
            for g2 in g_idx:
                L = np.zeros((n, n))
                L[g2, g] = 1.0
                ops.append((reset / len(g_idx), L))

    x = max(relax.extra_dephasing, 0.0)
    if x > 0:
        P = np.zeros((n, n))
        P[e_idx, e_idx] = 1.0
        ops.append((2.0 * x, P))
    return ops


def dissipator(rho: np.ndarray, scheme: LevelScheme, relax: RelaxationConfig) -> np.ndarray:
    out = np.zeros_like(rho, dtype=complex)
    for r, L in _jump_operators(scheme, relax):
        LdL = L.T @ L
        out += r * (L @ rho @ L.T - 0.5 * (LdL @ rho + rho @ LdL))
    return out


def lindblad_rhs(rho: np.ndarray, scheme: LevelScheme, fields: FieldConfig,
                 relax: RelaxationConfig) -> np.ndarray:
    """Time derivative of the density matrix."""
    H = hamiltonian(scheme, fields)
    return -1j * (H @ rho - rho @ H) + dissipator(rho, scheme, relax)


def _commutator_super(H: np.ndarray) -> np.ndarray:
    n = H.shape[0]
    eye = np.eye(n)
    return -1j * (np.kron(H, eye) - np.kron(eye, H.T))


@lru_cache(maxsize=64)
def _dissipator_super(scheme: LevelScheme, relax: RelaxationConfig) -> np.ndarray:
    n = scheme.n
    eye = np.eye(n)
    S = np.zeros((n * n, n * n), dtype=complex)
    for r, L in _jump_operators(scheme, relax):
        LdL = L.T @ L
        S += r * (np.kron(L, L) - 0.5 * np.kron(LdL, eye) - 0.5 * np.kron(eye, LdL.T))
    S.setflags(write=False)
    return S


def liouvillian(scheme: LevelScheme, fields: FieldConfig, relax: RelaxationConfig) -> np.ndarray:
    """Superoperator acting on row-major ``rho.ravel()``."""
    return _commutator_super(hamiltonian(scheme, fields)) + _dissipator_super(scheme, relax)


def probe_superoperators(scheme: LevelScheme, q: int = 1):
    """(K, Kc) such that the probe adds ``Omega_P K + conj(Omega_P) Kc`` to the Liouvillian."""
    D = scheme.dipole_matrix("probe", q)
    return _commutator_super(-D.astype(complex)), _commutator_super(-D.T.astype(complex))


def evolve(rho0: np.ndarray, scheme: LevelScheme, fields: FieldConfig,
           relax: RelaxationConfig, t_final: float, dt_max: float = np.inf,
           rtol: float = 1e-8, atol: float = 1e-10) -> np.ndarray:
    """Integrate the master equation with an adaptive Dormand-Prince scheme."""
    if t_final < 0:
        raise ValueError("t_final must be non-negative")
    rho0 = np.asarray(rho0, dtype=complex)
    if t_final == 0:
        return rho0.copy()
    L = liouvillian(scheme, fields, relax)
    sol = solve_ivp(lambda t, y: L @ y, (0.0, t_final), rho0.ravel(), method="DOP853",
                    rtol=rtol, atol=atol, max_step=dt_max)
    if sol.status != 0:
        raise NumericalError(f"integration failed at t={sol.t[-1]:.6g}: {sol.message}")
    return sol.y[:, -1].reshape(rho0.shape)


def solve_stationary(L: np.ndarray) -> np.ndarray:
    """Stationary vectors for a stack of Liouvillians ``L[..., N, N]``.

    One population equation is replaced by the trace condition.
    """
    L = np.array(L, dtype=complex)
    N = L.shape[-1]
    n = int(round(np.sqrt(N)))
    diag = np.arange(n) * (n + 1)
    L[..., 0, :] = 0.0
    L[..., 0, diag] = 1.0
    b = np.zeros(L.shape[:-1], dtype=complex)
    b[..., 0] = 1.0
    x = np.linalg.solve(L, b[..., None])[..., 0]
    rho = x.reshape(L.shape[:-2] + (n, n))
    return 0.5 * (rho + np.conj(np.swapaxes(rho, -1, -2)))


def steady_state(scheme: LevelScheme, fields: FieldConfig, relax: RelaxationConfig,
                 tol: float = 1e-10, check_unique: bool = True) -> np.ndarray:
    """Stationary density matrix of the master equation.

    Raises DegenerateSteadyStateError when the Liouvillian null space is more
    than one-dimensional.
    """
    L = liouvillian(scheme, fields, relax)
    scale = np.linalg.norm(L, 2)
    if scale == 0:
        raise DegenerateSteadyStateError("no dynamics: every state is stationary")
    if check_unique:
        s = np.linalg.svd(L, compute_uv=False)
        if s[-2] < 1e-12 * scale:
            raise DegenerateSteadyStateError(
                f"null space dimension > 1 (second singular value {s[-2]:.3g})")
    rho = solve_stationary(L)
    res = np.linalg.norm(L @ rho.ravel())
    if res > tol * scale:
        # one step of iterative refinement before falling back to integration
        rho = _refine(L, rho)
        res = np.linalg.norm(L @ rho.ravel())
        if res > tol * scale:
            raise NumericalError(f"steady-state residual {res:.3g} exceeds {tol * scale:.3g}")
    return rho


def _refine(L, rho):
    n = rho.shape[0]
    A = np.array(L)
    diag = np.arange(n) * (n + 1)
    A[0, :] = 0.0
    A[0, diag] = 1.0
    r = -(L @ rho.ravel())
    r[0] = 1.0 - np.trace(rho)
    x = rho.ravel() + np.linalg.solve(A, r)
    rho = x.reshape(n, n)
    return 0.5 * (rho + rho.conj().T)


def probe_coherence(rho: np.ndarray, scheme: LevelScheme, fields: FieldConfig,
                    relax: RelaxationConfig) -> complex:
    """Normalized probe polarization.

    ``gamma / Omega_P`` times the dipole-weighted sum of probe coherences, so
    the imaginary part equals 1 for a bare resonant two-level absorber.
    """
    if fields.omega_p == 0:
        return 0j
    D = scheme.dipole_matrix("probe", fields.q_p)
    return complex(relax.gamma * np.sum(D * rho) / fields.omega_p)


def populations(rho: np.ndarray) -> np.ndarray:
    return np.real(np.diagonal(rho, axis1=-2, axis2=-1))


def thermal_ground_state(scheme: LevelScheme) -> np.ndarray:
    """Unpolarized ground manifold."""
    rho = np.zeros((scheme.n, scheme.n), dtype=complex)
    g = scheme.ground
    rho[g, g] = 1.0 / len(g)
    return rho
