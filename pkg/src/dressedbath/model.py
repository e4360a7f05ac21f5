"""Two resonant dipole-coupled qubits, one of them touching a thermal bath.

The coupled Hamiltonian (units of hbar, frequencies in 1/s) keeps the
counter-rotating terms, so its eigenstates mix |0,0> with |1,1>:

  ground:  mix_plus |0,0> - mix_minus |1,1>
  antisym: (|1,0> - |0,1>) / sqrt(2)
  sym:     (|1,0> + |0,1>) / sqrt(2)
  top:     mix_minus |0,0> + mix_plus |1,1>

The bath couples through the x operator of qubit 2 and exchanges quanta at
the two transition (Bohr) frequencies of this ladder.  Downward rates follow
a Lorentzian spectral density times (1 + nbar); upward rates are tied to
them by detailed balance, gamma_up = exp(-w / (kB/hbar T)) * gamma_down.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Boltzmann constant over hbar; converts Kelvin to 1/s.
KB_OVER_HBAR = 1.309193e11


class NonPositiveFrequency(ValueError):
    pass


@dataclass(frozen=True)
class SystemParams:
    """Physical inputs: all frequencies and rates in 1/s, temperature in K."""

    omega: float          # qubit frequency (both qubits, resonant)
    coupling: float       # qubit-qubit coupling strength
    gamma0: float         # single-qubit decay rate (spectral-density peak)
    bath_width: float     # Lorentzian half-width
    bath_center: float    # Lorentzian center frequency
    temperature: float    # bath temperature

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError("omega must be positive")
        if not self.bath_width > 0:
            raise ValueError("bath_width must be positive")
        if self.gamma0 < 0:
            raise ValueError("gamma0 must be non-negative")
        if self.coupling < 0:
            raise ValueError("coupling must be non-negative")
        if self.temperature < 0:
            raise ValueError("temperature must be non-negative")


@dataclass(frozen=True)
class DressedFrame:
    """Eigen-structure of the coupled pair.

    ``energies`` ascend (ground, antisym, sym, top).  ``unitary`` columns are
    the dressed states in computational coordinates, in that order.
    ``amp_low``/``amp_high`` are the qubit-2 x-operator matrix elements
    between dressed states split by ``bohr_low``/``bohr_high``; ``amp_low``
    carries its natural negative sign.
    """

    energies: tuple
    mix_plus: float
    mix_minus: float
    amp_low: float
    amp_high: float
    bohr_low: float
    bohr_high: float
    unitary: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.unitary, dtype=complex)
        u.setflags(write=False)
        object.__setattr__(self, "unitary", u)


@dataclass(frozen=True)
class RateSet:
    """Bath rates for both models.

    emission_*/absorption_* are the bare bath rates at the two Bohr
    frequencies; decay_*/excitation_* fold in the squared transition
    amplitudes and are what the dressed-basis master equation uses.
    emission_bare/absorption_bare evaluate the same expressions at the
    uncoupled qubit frequency, for the phenomenological model.
    """

    emission_low: float
    emission_high: float
    absorption_low: float
    absorption_high: float
    decay_low: float
    decay_high: float
    excitation_low: float
    excitation_high: float
    emission_bare: float
    absorption_bare: float


def hamiltonian(p: SystemParams) -> np.ndarray:
    """Coupled two-qubit Hamiltonian in the computational basis."""
    half = p.coupling / 2.0
    h = np.zeros((4, 4), dtype=complex)
    h[1, 1] = p.omega
    h[2, 2] = p.omega
    h[3, 3] = 2.0 * p.omega
    h[1, 2] = h[2, 1] = half      # excitation exchange
    h[0, 3] = h[3, 0] = half      # counter-rotating pair terms
    return h


def dressed_frame(p: SystemParams) -> DressedFrame:
    splitting = math.hypot(p.coupling, 2.0 * p.omega)
    ratio = 2.0 * p.omega / splitting
    # 1 - ratio = coupling^2 / (splitting (splitting + 2 omega)); the direct
    # subtraction underflows for weak coupling
    one_minus = p.coupling ** 2 / (splitting * (splitting + 2.0 * p.omega))
    mix_plus = math.sqrt(0.5 * (1.0 + ratio))
    mix_minus = math.sqrt(0.5 * one_minus)
    amp_low = -0.5 * (math.sqrt(1.0 + ratio) + math.sqrt(one_minus))
    amp_high = 0.5 * (math.sqrt(1.0 + ratio) - math.sqrt(one_minus))

    energies = (p.omega - splitting / 2.0,
                p.omega - p.coupling / 2.0,
                p.omega + p.coupling / 2.0,
                p.omega + splitting / 2.0)

    s = 1.0 / math.sqrt(2.0)
    unitary = np.array([
        [mix_plus, 0.0, 0.0, mix_minus],
        [0.0, -s, s, 0.0],
        [0.0, s, s, 0.0],
        [-mix_minus, 0.0, 0.0, mix_plus],
    ], dtype=complex)

    bohr_high = (splitting + p.coupling) / 2.0
    return DressedFrame(
        energies=energies,
        mix_plus=mix_plus,
        mix_minus=mix_minus,
        amp_low=amp_low,
        amp_high=amp_high,
        # (splitting - coupling)/2 rewritten to dodge the same cancellation;
        # keeps the product of the two transition frequencies at omega^2
        bohr_low=p.omega ** 2 / bohr_high,
        bohr_high=bohr_high,
        unitary=unitary,
    )


def spectral_density(p: SystemParams, freq: float) -> float:
    """Lorentzian bath coupling profile, peak value gamma0."""
    return p.gamma0 * p.bath_width ** 2 / ((freq - p.bath_center) ** 2 + p.bath_width ** 2)


def thermal_occupancy(freq: float, temperature: float) -> float:
    """Mean photon number of the bath mode at ``freq``; 0 at T = 0 exactly."""
    if freq <= 0:
        raise NonPositiveFrequency(f"occupancy needs a positive frequency, got {freq}")
    if temperature == 0:
        return 0.0
    return 1.0 / math.expm1(freq / (KB_OVER_HBAR * temperature))


def _boltzmann(freq: float, temperature: float) -> float:
    if temperature == 0:
        return 0.0
    return math.exp(-freq / (KB_OVER_HBAR * temperature))


def rate_set(p: SystemParams, frame: DressedFrame | None = None) -> RateSet:
    """All bath rates for the given parameters.

    Detailed balance holds by construction: every absorption rate is its
    emission partner scaled by the Boltzmann factor of its frequency.
    """
    if frame is None:
        frame = dressed_frame(p)
    t = p.temperature

    def pair(freq):
        down = spectral_density(p, freq) * (1.0 + thermal_occupancy(freq, t))
        return down, down * _boltzmann(freq, t)

    em_low, ab_low = pair(frame.bohr_low)
    em_high, ab_high = pair(frame.bohr_high)
    em_bare, ab_bare = pair(p.omega)
    a2 = frame.amp_low ** 2
    e2 = frame.amp_high ** 2
    return RateSet(
        emission_low=em_low,
        emission_high=em_high,
        absorption_low=ab_low,
        absorption_high=ab_high,
        decay_low=a2 * em_low,
        decay_high=e2 * em_high,
        excitation_low=a2 * ab_low,
        excitation_high=e2 * ab_high,
        emission_bare=em_bare,
        absorption_bare=ab_bare,
    )


@dataclass(frozen=True)
class FairnessReport:
    """How comparable the two models' bath inputs are.

    The phenomenological model samples the bath at the bare qubit frequency;
    the dressed model samples it at the two Bohr frequencies.  If those
    samples differ appreciably the model comparison is confounded by the
    bath profile itself, so we flag it.
    """

    spectral_dev_low: float
    spectral_dev_high: float
    occupancy_dev_low: float
    occupancy_dev_high: float
    threshold: float
    unfair: bool
    strong_damping: bool

    def lines(self):
        out = [
            f"spectral density deviation at low/high Bohr frequency: "
            f"{self.spectral_dev_low:.3e} / {self.spectral_dev_high:.3e}",
            f"occupancy deviation at low/high Bohr frequency: "
            f"{self.occupancy_dev_low:.3e} / {self.occupancy_dev_high:.3e}",
        ]
        if self.unfair:
            out.append(f"WARNING: unfair comparison, deviation above {self.threshold:g}")
        if self.strong_damping:
            out.append("WARNING: damping rate within 10x of a Bohr frequency; "
                       "weak-coupling treatment is strained")
        return out


# occupancies below a milliphoton cannot move any rate perceptibly, so
# deviations are measured against at least this floor
OCCUPANCY_FLOOR = 1e-3


def fairness_check(p: SystemParams, threshold: float = 0.15) -> FairnessReport:
    frame = dressed_frame(p)
    j_bare = spectral_density(p, p.omega)
    n_bare = thermal_occupancy(p.omega, p.temperature)
    eps = OCCUPANCY_FLOOR

    def dev_j(freq):
        if j_bare == 0.0:
            return 0.0
        return abs(spectral_density(p, freq) - j_bare) / j_bare

    def dev_n(freq):
        return abs(thermal_occupancy(freq, p.temperature) - n_bare) / max(n_bare, eps)

    devs = (dev_j(frame.bohr_low), dev_j(frame.bohr_high),
            dev_n(frame.bohr_low), dev_n(frame.bohr_high))
    return FairnessReport(
        spectral_dev_low=devs[0],
        spectral_dev_high=devs[1],
        occupancy_dev_low=devs[2],
        occupancy_dev_high=devs[3],
        threshold=threshold,
        unfair=max(devs) > threshold,
        strong_damping=p.gamma0 > 0.1 * min(frame.bohr_low, frame.bohr_high),
    )
