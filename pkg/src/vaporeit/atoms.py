"""
Level schemes and dipole couplings for the 87Rb D1 line.

Two schemes are provided: an aggregate three-level Lambda system used for
most EIT/slow-light work, and the full 16-level D1 manifold (8 ground and
8 excited Zeeman sublevels) used for optical pumping studies.
"""

from dataclasses import dataclass
from math import factorial, sqrt
from typing import Tuple

import numpy as np

TWO_PI = 2.0 * np.pi

#: 87Rb ground-state hyperfine splitting (rad/s).
GROUND_SPLITTING = TWO_PI * 6.834682e9
#: 87Rb 5P1/2 hyperfine splitting between F'=1 and F'=2 (rad/s).
EXCITED_SPLITTING = TWO_PI * 814.5e6

NUCLEAR_SPIN = 1.5
J_GROUND = 0.5
J_EXCITED = 0.5

SCHEME_NAMES = ("lambda3", "d1-16")


class QuantumNumberError(ValueError):
    """Raised for angular momentum arguments outside their allowed range."""


@dataclass(frozen=True)
class Level:
    manifold: str  # "ground" or "excited"
    F: int
    mF: int
    energy: float = 0.0
    label: str = ""

    def __post_init__(self):
        if self.manifold not in ("ground", "excited"):
            raise QuantumNumberError(f"unknown manifold {self.manifold!r}")
        if self.F not in (1, 2):
            raise QuantumNumberError(f"F={self.F} not in D1 manifold")
        if abs(self.mF) > self.F:
            raise QuantumNumberError(f"|mF|={abs(self.mF)} exceeds F={self.F}")

    @property
    def key(self):
        return (self.manifold, self.F, self.mF)


@dataclass(frozen=True)
class Coupling:
    lower: int
    upper: int
    q: int
    amplitude: float


@dataclass(frozen=True)
class LevelScheme:
    """Immutable collection of levels and the dipole couplings between them.

    Ground levels with ``F == probe_F`` are driven by the probe field, the
    ones with ``F == control_F`` by the control field.
    """

    name: str
    levels: Tuple[Level, ...]
    couplings: Tuple[Coupling, ...]
    splitting: float = GROUND_SPLITTING
    probe_F: int = 1
    control_F: int = 2

    def __post_init__(self):
        keys = [lv.key for lv in self.levels]
        if len(set(keys)) != len(keys):
            raise ValueError("levels must be unique by (manifold, F, mF)")
        if self.splitting <= 0:
            raise ValueError("hyperfine splitting must be positive")
        for c in self.couplings:
            lo, up = self.levels[c.lower], self.levels[c.upper]
            if lo.manifold != "ground" or up.manifold != "excited":
                raise ValueError("couplings run from ground to excited levels")
            if up.mF != lo.mF + c.q:
                raise ValueError("coupling violates mF' = mF + q")

    @property
    def n(self) -> int:
        return len(self.levels)

    @property
    def ground(self) -> np.ndarray:
        return np.array([i for i, lv in enumerate(self.levels) if lv.manifold == "ground"])

    @property
    def excited(self) -> np.ndarray:
        return np.array([i for i, lv in enumerate(self.levels) if lv.manifold == "excited"])

    def index(self, manifold: str, F: int, mF: int) -> int:
        for i, lv in enumerate(self.levels):
            if lv.key == (manifold, F, mF):
                return i
        raise KeyError((manifold, F, mF))

    def field_couplings(self, field: str, q: int = None):
        """Couplings driven by ``field`` ("probe" or "control"), optionally one polarization."""
        F = self.probe_F if field == "probe" else self.control_F
        return [c for c in self.couplings
                if self.levels[c.lower].F == F and (q is None or c.q == q)]

    def dipole_matrix(self, field: str, q: int) -> np.ndarray:
        """Matrix D with D[e, g] = coupling amplitude of ``field`` with polarization q."""
        D = np.zeros((self.n, self.n))
        for c in self.field_couplings(field, q):
            D[c.upper, c.lower] = c.amplitude
        return D

    def emission_matrices(self):
        """Spontaneous-emission jump operators, one per polarization q.

        All couplings contribute regardless of which field drives them.
        """
        mats = []
        for q in (-1, 0, 1):
            A = np.zeros((self.n, self.n))
            for c in self.couplings:
                if c.q == q:
                    A[c.lower, c.upper] = c.amplitude
            mats.append(A)
        return mats


def _twice(x) -> int:
    t = 2 * x
    r = int(round(t))
    if abs(t - r) > 1e-9:
        raise QuantumNumberError(f"{x} is not an integer or half-integer")
    return r


def _fact2(t2: int) -> int:
    # factorial of t2/2, where t2 is an even integer
    if t2 < 0 or t2 % 2:
        raise QuantumNumberError("factorial of non-integer or negative argument")
    return factorial(t2 // 2)


def _triangle(a2, b2, c2) -> bool:
    return (abs(a2 - b2) <= c2 <= a2 + b2) and (a2 + b2 + c2) % 2 == 0


def clebsch_gordan(j1, m1, j2, m2, J, M) -> float:
    """<j1 m1; j2 m2 | J M> from the explicit Racah sum."""
    a, am, b, bm, c, cm = (_twice(x) for x in (j1, m1, j2, m2, J, M))
    if am + bm != cm or not _triangle(a, b, c):
        return 0.0
    if abs(am) > a or abs(bm) > b or abs(cm) > c:
        return 0.0
    if (a + am) % 2 or (b + bm) % 2 or (c + cm) % 2:
        return 0.0
    pre = (c + 1) * _fact2(c + a - b) * _fact2(c - a + b) * _fact2(a + b - c) / _fact2(a + b + c + 2)
    pre *= (_fact2(c + cm) * _fact2(c - cm) * _fact2(a - am) * _fact2(a + am)
            * _fact2(b - bm) * _fact2(b + bm))
    total = 0.0
    for k in range(0, a + b + c + 1):
        args = (a + b - c - 2 * k, a - am - 2 * k, b + bm - 2 * k,
                c - b + am + 2 * k, c - a - bm + 2 * k)
        if min(args) < 0:
            continue
        den = factorial(k)
        for t in args:
            den *= _fact2(t)
        total += (-1) ** k / den
    return sqrt(pre) * total


def _delta(a2, b2, c2) -> float:
    return sqrt(_fact2(a2 + b2 - c2) * _fact2(a2 - b2 + c2) * _fact2(-a2 + b2 + c2)
                / _fact2(a2 + b2 + c2 + 2))


def wigner_6j(j1, j2, j3, j4, j5, j6) -> float:
    """Wigner 6j symbol {j1 j2 j3; j4 j5 j6} (Racah formula)."""
    a, b, c, d, e, f = (_twice(x) for x in (j1, j2, j3, j4, j5, j6))
    triads = ((a, b, c), (a, e, f), (d, b, f), (d, e, c))
    if not all(_triangle(*t) for t in triads):
        return 0.0
    pre = 1.0
    for t in triads:
        pre *= _delta(*t)
    lo = max(sum(t) for t in triads) // 2
    hi = min(a + b + d + e, b + c + e + f, c + a + f + d) // 2
    total = 0.0
    for t in range(lo, hi + 1):
        den = 1
        for x in triads:
            den *= factorial(t - sum(x) // 2)
        den *= factorial((a + b + d + e) // 2 - t)
        den *= factorial((b + c + e + f) // 2 - t)
        den *= factorial((c + a + f + d) // 2 - t)
        total += (-1) ** t * factorial(t + 1) / den
    return pre * total


def dipole_coefficient(F, mF, q, Fp, mFp) -> float:
    """Relative D1 transition amplitude |F, mF> -> |F', mF'> for polarization q.

    Normalized so that the squared amplitudes out of any excited sublevel,
    summed over all ground sublevels and polarizations, add up to one.
    """
    if F not in (1, 2) or Fp not in (1, 2):
        raise QuantumNumberError(f"F={F}, F'={Fp} outside the 87Rb D1 manifold")
    if abs(mF) > F or abs(mFp) > Fp:
        raise QuantumNumberError("magnetic quantum number exceeds F")
    if q not in (-1, 0, 1):
        raise QuantumNumberError(f"polarization q={q} not in (-1, 0, 1)")
    if mFp != mF + q or abs(F - Fp) > 1:
        return 0.0
    I, J, Jp = NUCLEAR_SPIN, J_GROUND, J_EXCITED
    sign = (-1) ** int(round(Fp + J + 1 + I))
    reduced = sign * sqrt((2 * F + 1) * (2 * Jp + 1)) * wigner_6j(J, Jp, 1, Fp, F, I)
    return reduced * clebsch_gordan(F, mF, 1, q, Fp, mFp)


def build_lambda3(splitting: float = GROUND_SPLITTING) -> LevelScheme:
    """Aggregate Lambda scheme: |1> (F=1), |2> (F=2), |e> (F'=2).

    Both fields are sigma+, so the aggregate levels carry mF labels 0, 0, 1.
    Unit amplitudes; absolute dipole strengths live in the Rabi frequencies.
    """
    levels = (
        Level("ground", 1, 0, 0.0, "1"),
        Level("ground", 2, 0, splitting, "2"),
        Level("excited", 2, 1, 0.0, "e"),
    )
    couplings = (Coupling(0, 2, 1, 1.0), Coupling(1, 2, 1, 1.0))
    return LevelScheme("lambda3", levels, couplings, splitting)


def build_d1_16level(splitting: float = GROUND_SPLITTING,
                     excited_splitting: float = EXCITED_SPLITTING) -> LevelScheme:
    """All 16 Zeeman sublevels of the 87Rb D1 line at zero magnetic field.

    Ground energies are measured from F=1, excited energies from F'=2.
    """
    levels = []
    for F in (1, 2):
        for m in range(-F, F + 1):
            levels.append(Level("ground", F, m, splitting if F == 2 else 0.0, f"{F},{m}"))
    for Fp in (1, 2):
        for m in range(-Fp, Fp + 1):
            levels.append(Level("excited", Fp, m, -excited_splitting if Fp == 1 else 0.0,
                                f"{Fp}',{m}"))
    couplings = []
    for i, lo in enumerate(levels):
        if lo.manifold != "ground":
            continue
        for j, up in enumerate(levels):
            if up.manifold != "excited":
                continue
            q = up.mF - lo.mF
            if q not in (-1, 0, 1):
                continue
            amp = dipole_coefficient(lo.F, lo.mF, q, up.F, up.mF)
            if amp != 0.0:
                couplings.append(Coupling(i, j, q, amp))
    return LevelScheme("d1-16", tuple(levels), tuple(couplings), splitting)


def build_scheme(name: str) -> LevelScheme:
    if name == "lambda3":
        return build_lambda3()
    if name == "d1-16":
        return build_d1_16level()
    raise ValueError(f"unknown scheme {name!r}; choose from {SCHEME_NAMES}")
