"""Dressed-basis master equation: closed-form solution and its cross-check.

The dissipator couples dressed populations through two emission/absorption
channels and lets each coherence evolve independently or in one of two
2x2 blocks.  That structure admits closed-form solutions, implemented in
``propagate_analytic``.  ``liouvillian`` assembles the same generator from
first principles (jump operators built numerically from the eigenvectors,
detailed-balance-weighted reverse channels included) and is integrated with
``propagate_numeric`` as an independent check on the closed forms.

All states in this module are 4x4 complex matrices in the dressed basis.
"""

from __future__ import annotations

import numpy as np

from . import integrate
from .model import KB_OVER_HBAR, DressedFrame, RateSet


class DegenerateRates(Exception):
    pass


def _channel_sums(rates: RateSet):
    s_low = rates.decay_low + rates.excitation_low
    s_high = rates.decay_high + rates.excitation_high
    return s_low, s_high


def qubit2_x_dressed(frame: DressedFrame) -> np.ndarray:
    """Qubit-2 x operator rotated into the dressed basis."""
    sx2 = np.zeros((4, 4), dtype=complex)
    sx2[0, 1] = sx2[1, 0] = 1.0
    sx2[2, 3] = sx2[3, 2] = 1.0
    u = frame.unitary
    return u.conj().T @ sx2 @ u


def jump_operators(frame: DressedFrame):
    """The two downward jump operators, one per Bohr frequency.

    Matrix elements are read off the rotated coupling operator rather than
    taken from closed-form amplitudes, so this path stays independent of
    the analytic solution it is used to validate.
    """
    sx = qubit2_x_dressed(frame)
    low = np.zeros((4, 4), dtype=complex)
    low[0, 1] = sx[0, 1]   # antisym -> ground
    low[2, 3] = sx[2, 3]   # top -> sym
    high = np.zeros((4, 4), dtype=complex)
    high[0, 2] = sx[0, 2]  # sym -> ground
    high[1, 3] = sx[1, 3]  # top -> antisym
    return low, high


def liouvillian(rates: RateSet, frame: DressedFrame) -> np.ndarray:
    """Full generator (16x16, row-major vec) in the dressed basis.

    Trace-annihilating by construction: every Lindblad term maps any matrix
    to a traceless one, and so does the commutator.
    """
    h = np.diag(np.asarray(frame.energies, dtype=complex))
    low, high = jump_operators(frame)
    channels = [
        (rates.emission_low, low),
        (rates.emission_high, high),
        (rates.absorption_low, low.conj().T),
        (rates.absorption_high, high.conj().T),
    ]
    eye = np.eye(4)
    gen = -1j * (np.kron(h, eye) - np.kron(eye, h.T))
    for rate, op in channels:
        if rate == 0.0:
            continue
        opd = op.conj().T
        norm = opd @ op
        gen += rate * (np.kron(op, opd.T)
                       - 0.5 * (np.kron(norm, eye) + np.kron(eye, norm.T)))
    return gen


def max_rate(rates: RateSet) -> float:
    return max(rates.emission_low + rates.absorption_low,
               rates.emission_high + rates.absorption_high,
               rates.emission_bare + rates.absorption_bare)


def step_bound(rates: RateSet, frame: DressedFrame) -> float:
    return integrate.step_bound(max_rate(rates), frame.bohr_low + frame.bohr_high)


def propagate_numeric(rho0: np.ndarray, generator: np.ndarray, times,
                      h_max: float) -> np.ndarray:
    """RK4 integration of the assembled generator; the validation route."""
    return integrate.propagate(generator, rho0, times, h_max)


def propagate_analytic(rho0: np.ndarray, rates: RateSet, frame: DressedFrame,
                       times) -> np.ndarray:
    """Closed-form dressed-basis evolution on an arbitrary time grid.

    Populations relax through the two channels; the ground-antisym and
    sym-top coherences mix pairwise, the remaining two just rotate and
    decay.  With both channel rates zero the evolution is purely unitary
    (frozen populations, rotating coherences); a single vanishing channel
    has no closed form here and raises DegenerateRates.
    """
    t = np.atleast_1d(np.asarray(times, dtype=float))
    scalar = np.isscalar(times) or getattr(times, "ndim", 1) == 0
    if np.any(t < 0):
        raise ValueError("times must be non-negative")
    rho0 = np.asarray(rho0, dtype=complex)

    s1, s2 = _channel_sums(rates)
    if s1 == 0.0 and s2 == 0.0:
        out = _unitary_branch(rho0, frame, t)
        return out[0] if scalar else out
    if s1 == 0.0 or s2 == 0.0:
        raise DegenerateRates("one relaxation channel is frozen; "
                              "no closed form for this case")

    cl, ch = rates.decay_low, rates.decay_high
    el, eh = rates.excitation_low, rates.excitation_high
    k = s1 * s2
    e1 = np.exp(-s1 * t)
    e2 = np.exp(-s2 * t)
    e12 = e1 * e2
    pa, pb, pc, pd = (rho0[i, i].real for i in range(4))

    out = np.zeros((len(t), 4, 4), dtype=complex)
    out[:, 0, 0] = (cl * ch
                    + e1 * (el * ch * (pa + pc) - cl * ch * (pb + pd))
                    + e2 * (cl * eh * (pa + pb) - cl * ch * (pc + pd))
                    + e12 * (el * eh * pa - cl * eh * pb - el * ch * pc + cl * ch * pd)) / k
    out[:, 1, 1] = (el * ch
                    + e1 * (-el * ch * (pa + pc) + cl * ch * (pb + pd))
                    + e2 * (el * eh * (pa + pb) - el * ch * (pc + pd))
                    + e12 * (-el * eh * pa + cl * eh * pb + el * ch * pc - cl * ch * pd)) / k
    out[:, 2, 2] = (cl * eh
                    + e1 * (el * eh * (pa + pc) - cl * eh * (pb + pd))
                    + e2 * (-cl * eh * (pa + pb) + cl * ch * (pc + pd))
                    + e12 * (-el * eh * pa + cl * eh * pb + el * ch * pc - cl * ch * pd)) / k
    out[:, 3, 3] = (el * eh
                    + e1 * (-el * eh * (pa + pc) + cl * eh * (pb + pd))
                    + e2 * (-el * eh * (pa + pb) + el * ch * (pc + pd))
                    + e12 * (el * eh * pa - cl * eh * pb - el * ch * pc + cl * ch * pd)) / k

    w_low, w_high = frame.bohr_low, frame.bohr_high
    splitting = w_low + w_high
    half_total = 0.5 * (s1 + s2)

    ab0, cd0 = rho0[0, 1], rho0[2, 3]
    ac0, bd0 = rho0[0, 2], rho0[1, 3]
    pre_low = np.exp((1j * w_low - 0.5 * s1) * t) / s2
    out[:, 0, 1] = pre_low * ((ch + e2 * eh) * ab0 + (1.0 - e2) * ch * cd0)
    out[:, 2, 3] = pre_low * ((1.0 - e2) * eh * ab0 + (eh + e2 * ch) * cd0)
    pre_high = np.exp((1j * w_high - 0.5 * s2) * t) / s1
    out[:, 0, 2] = pre_high * ((cl + e1 * el) * ac0 - (1.0 - e1) * cl * bd0)
    out[:, 1, 3] = pre_high * (-(1.0 - e1) * el * ac0 + (el + e1 * cl) * bd0)
    out[:, 0, 3] = np.exp((1j * splitting - half_total) * t) * rho0[0, 3]
    out[:, 1, 2] = np.exp((1j * (w_high - w_low) - half_total) * t) * rho0[1, 2]

    for i, j in ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)):
        out[:, j, i] = np.conj(out[:, i, j])
    return out[0] if scalar else out


def _unitary_branch(rho0, frame, t):
    e = np.asarray(frame.energies, dtype=float)
    phases = np.exp(-1j * np.subtract.outer(e, e)[None, :, :] * t[:, None, None])
    return phases * rho0[None, :, :]


def steady_state(rates: RateSet) -> np.ndarray:
    """Stationary dressed-basis state from the channel rate ratios."""
    s1, s2 = _channel_sums(rates)
    if s1 == 0.0 or s2 == 0.0:
        raise DegenerateRates("stationary state undefined without both channels")
    k = s1 * s2
    pops = np.array([
        rates.decay_low * rates.decay_high,
        rates.excitation_low * rates.decay_high,
        rates.decay_low * rates.excitation_high,
        rates.excitation_low * rates.excitation_high,
    ]) / k
    return np.diag(pops).astype(complex)


def gibbs_state(frame: DressedFrame, temperature: float) -> np.ndarray:
    """Thermal state over the dressed energies; the second, independent route
    to the stationary state."""
    if temperature == 0:
        pops = np.array([1.0, 0.0, 0.0, 0.0])
    else:
        e = np.asarray(frame.energies, dtype=float)
        w = np.exp(-(e - e[0]) / (KB_OVER_HBAR * temperature))
        pops = w / w.sum()
    return np.diag(pops).astype(complex)
