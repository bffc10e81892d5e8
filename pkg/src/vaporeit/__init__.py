"""
vaporeit: EIT, slow and stored light in warm 87Rb buffer-gas cells.

Modules
-------
atoms        level schemes and D1 dipole couplings
lindblad     master equation, steady states and time evolution
trapping     cell geometry, vapor density and radiation trapping
propagation  CW spectra (EIT, EIT + four-wave mixing) and pulse propagation
storage      store/retrieve runs, pulse optimization, efficiency sweeps
analysis     contrast, fringes, delays and decay fits
"""

from .atoms import (LevelScheme, build_d1_16level, build_lambda3, build_scheme,
                    clebsch_gordan, dipole_coefficient, wigner_6j)
from .lindblad import (ConfigError, DegenerateSteadyStateError, FieldConfig, NumericalError,
                       RelaxationConfig, evolve, hamiltonian, lindblad_rhs, populations,
                       probe_coherence, steady_state)
from .trapping import CellConfig, optical_depths, preset, trapping_rate
from .propagation import (PulseRecord, SpectrumResult, fwm_spectrum, propagate_pulse,
                          transmission_spectrum)
from .storage import StorageRun, efficiency, efficiency_vs_depth, iterate_optimal, run_storage
from .analysis import (eit_linewidth, extract_contrast, fit_decay, fringe_stats,
                       slow_light_delay)

__version__ = "0.1.0"
