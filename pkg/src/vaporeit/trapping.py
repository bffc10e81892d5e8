"""
Vapor-cell geometry, optical depths and radiation-trapping depolarization.

Optical depth is linear in density, length and the fraction of atoms in the
probed level; a single cross section calibrates the scale (a 15 cm cell at
1e11 cm^-3 with every atom in the probe level has d = 10). Fluorescence that
fails to escape transversely is reabsorbed and depolarizes the ground state
at a rate proportional to the photon scattering rate.
"""

from dataclasses import asdict, dataclass, replace

import numpy as np

from .atoms import TWO_PI
from .lindblad import RelaxationConfig

KELVIN = 273.15

#: Cross section (cm^2) fixed by the reference cell: n=1e11 cm^-3, L=15 cm -> d=10.
SIGMA = 10.0 / (1e11 * 15.0)

#: D1 natural decay rate of 87Rb (rad/s).
GAMMA_D1 = TWO_PI * 5.746e6
#: Saturation intensity for the D1 line, isotropic light (mW/cm^2).
I_SAT_D1 = 4.484

# Clausius-Clapeyron form log(n T) = A - B / T through the two
# (temperature, density) pairs quoted for the cells: 39 C and 79 C.
_T1, _N1 = 39.0 + KELVIN, 3.8e10
_T2, _N2 = 79.0 + KELVIN, 1.1e12
_B = np.log((_N2 * _T2) / (_N1 * _T1)) / (1.0 / _T1 - 1.0 / _T2)
_A = np.log(_N1 * _T1) + _B / _T1


def density_from_temperature(temperature_c: float) -> float:
    """Rb number density (cm^-3) at a cell temperature in Celsius."""
    T = temperature_c + KELVIN
    return float(np.exp(_A - _B / T) / T)


def temperature_from_density(density: float) -> float:
    """Inverse of :func:`density_from_temperature` (Celsius)."""
    from scipy.optimize import brentq

    return brentq(lambda t: np.log(density_from_temperature(t)) - np.log(density), -50.0, 400.0)


def steck_density(temperature_c: float) -> float:
    """Saturated Rb vapor density from the standard vapor-pressure formula (cm^-3).

    Kept for comparison; the cell model uses :func:`density_from_temperature`.
    """
    T = temperature_c + KELVIN
    if T < 312.46:
        log_p = 2.881 + 4.857 - 4215.0 / T
    else:
        log_p = 2.881 + 4.312 - 4040.0 / T
    p_pa = 10 ** log_p * 133.322
    return p_pa / (1.380649e-23 * T) * 1e-6


def rabi_from_power(power_mw: float, beam_diameter_mm: float = 6.8,
                    gamma_nat: float = GAMMA_D1) -> float:
    """Control Rabi frequency (half-Rabi convention, rad/s) for a flat-top beam."""
    radius_cm = 0.05 * beam_diameter_mm
    intensity = power_mw / (np.pi * radius_cm ** 2)
    return 0.5 * gamma_nat * np.sqrt(intensity / (2.0 * I_SAT_D1))


@dataclass(frozen=True)
class CellConfig:
    """A buffer-gas vapor cell. Lengths in cm, rates in rad/s.

    ``density`` overrides the temperature-derived value when given.
    ``bright_fraction`` is the fraction of atoms that keep scattering control
    light after optical pumping; ``eta`` the depolarization per reabsorption.
    Neither is calibrated against data.
    """

    name: str = "custom"
    length: float = 15.0
    diameter: float = 1.2
    buffer_gas: str = "Ne"
    pressure: float = 40.0
    temperature: float = 57.0
    density: float = None
    beam_diameter: float = 6.8
    fraction: float = 1.0
    gamma_nat: float = GAMMA_D1
    gamma: float = TWO_PI * 200e6
    gamma0: float = TWO_PI * 100.0
    gamma_quench: float = 0.0
    gamma_mix: float = TWO_PI * 50e6
    ground_reset_fraction: float = 1.0
    bright_fraction: float = 0.05
    eta: float = 1.0
    escape_model: str = "exp"

    def __post_init__(self):
        if self.buffer_gas not in ("Ne", "N2"):
            raise ValueError(f"buffer gas must be 'Ne' or 'N2', got {self.buffer_gas!r}")
        for name in ("length", "diameter", "pressure", "beam_diameter"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.density is not None and self.density <= 0:
            raise ValueError("density must be positive")
        if not 0.0 <= self.fraction <= 1.0:
            raise ValueError("fraction must lie in [0, 1]")

    @property
    def n(self) -> float:
        if self.density is not None:
            return self.density
        return density_from_temperature(self.temperature)

    @property
    def optical_depth(self) -> float:
        return optical_depths(self)[0]

    @property
    def transverse_optical_depth(self) -> float:
        return optical_depths(self)[1]

    def with_optical_depth(self, d: float) -> "CellConfig":
        """Same cell heated (or cooled) until the longitudinal depth is ``d``."""
        n = d / (SIGMA * self.fraction * self.length)
        return replace(self, density=n, temperature=temperature_from_density(n))

    def replace(self, **kw) -> "CellConfig":
        return replace(self, **kw)

    def scattering_rate(self, omega_c: float) -> float:
        return nominal_scattering_rate(omega_c, self.gamma, self.bright_fraction)

    def trapping_rate(self, omega_c: float) -> float:
        p = escape_probability(self.transverse_optical_depth, self.escape_model)
        return trapping_rate(self.scattering_rate(omega_c), p, self.eta,
                             self.gamma_nat, self.gamma_quench)

    def relaxation(self, omega_c: float = 0.0, radiation_trapping: bool = True) -> RelaxationConfig:
        """Relaxation rates with the trapping rate evaluated at this control strength."""
        g_rt = self.trapping_rate(omega_c) if radiation_trapping else 0.0
        return RelaxationConfig(
            gamma_nat=self.gamma_nat, gamma=self.gamma, gamma0=self.gamma0,
            gamma_quench=self.gamma_quench, gamma_mix=self.gamma_mix,
            gamma_rt=g_rt, ground_reset_fraction=self.ground_reset_fraction)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["density"] = self.n
        out["optical_depth"] = self.optical_depth
        out["transverse_optical_depth"] = self.transverse_optical_depth
        return out


def optical_depths(cell: CellConfig, scheme=None, fraction: float = None):
    """(longitudinal, transverse) optical depth of ``cell``.

    ``scheme`` is accepted for symmetry with the other entry points; the
    calibration does not depend on it.
    """
    f = cell.fraction if fraction is None else fraction
    if not 0.0 <= f <= 1.0:
        raise ValueError("fraction must lie in [0, 1]")
    k = SIGMA * cell.n * f
    return k * cell.length, k * cell.diameter


def escape_probability(d_t: float, model: str = "exp") -> float:
    """Probability that a fluorescence photon leaves the cell transversely."""
    if d_t < 0:
        raise ValueError("transverse optical depth must be non-negative")
    if model == "exp":
        return float(np.exp(-d_t))
    if model == "rational":
        return 1.0 / (1.0 + d_t)
    raise ValueError(f"unknown escape model {model!r}")


def nominal_scattering_rate(omega_c: float, gamma: float, bright_fraction: float = 1.0) -> float:
    """Photon scattering rate per atom: optical pumping rate times the unpumped fraction."""
    return bright_fraction * omega_c ** 2 / gamma


def trapping_rate(scattering_rate: float, escape_prob: float, eta: float = 1.0,
                  gamma_nat: float = None, gamma_quench: float = 0.0) -> float:
    """Ground-state depolarization rate from reabsorbed fluorescence.

    Quenching removes excitations without emitting, so only the radiative
    branch ``gamma_nat / (gamma_nat + gamma_quench)`` produces photons.
    """
    if scattering_rate < 0:
        raise ValueError("scattering rate must be non-negative")
    if not 0.0 <= escape_prob <= 1.0:
        raise ValueError("escape probability must lie in [0, 1]")
    radiative = 1.0
    if gamma_quench > 0:
        if np.isinf(gamma_quench):
            return 0.0
        radiative = gamma_nat / (gamma_nat + gamma_quench)
    return scattering_rate * (1.0 - escape_prob) * eta * radiative


# Buffer-gas parameters: equal pressure broadening in both cells; N2 quenches,
# Ne mixes the excited Zeeman sublevels. The N2 ground decoherence is 4x Ne.
_NE = dict(buffer_gas="Ne", pressure=40.0, gamma_quench=0.0, gamma_mix=TWO_PI * 50e6,
           gamma0=TWO_PI * 100.0)
_N2 = dict(buffer_gas="N2", pressure=25.0, gamma_quench=TWO_PI * 40e6, gamma_mix=0.0,
           gamma0=TWO_PI * 400.0)

PRESETS = {
    "long-ne": CellConfig(name="long-ne", length=15.0, diameter=1.2, **_NE),
    "long-n2": CellConfig(name="long-n2", length=15.0, diameter=1.2, **_N2),
    "short-ne": CellConfig(name="short-ne", length=7.5, diameter=2.5, **_NE),
}


def preset(name: str, **overrides) -> CellConfig:
    try:
        cell = PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown cell preset {name!r}; choose from {sorted(PRESETS)}") from None
    return replace(cell, **overrides) if overrides else cell
