"""The ad hoc model: local qubit-2 damping bolted onto the coupled dynamics.

Works in the computational basis throughout.  The right-hand side is written
out element by element (populations plus the six upper-triangle coherences,
lower triangle mirrored by Hermiticity); a generator assembled directly from
the lowering/raising operators is provided as an equivalent form for
cross-checking.  The stationary state has closed-form populations and two
closed-form coherences, plus a dressed-basis rewrite that exposes its
non-thermal character.
"""

from __future__ import annotations

import numpy as np

from . import integrate
from .linalg import DRESSED, DensityMatrix
from .model import DressedFrame, RateSet, SystemParams, hamiltonian


_UPPER = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def _upper_rows(r: np.ndarray, p: SystemParams, rates: RateSet) -> np.ndarray:
    g = rates.emission_bare
    gb = rates.absorption_bare
    il = 0.5j * p.coupling
    om = p.omega
    half = 0.5 * (g + gb)
    d = np.zeros((4, 4), dtype=complex)

    d[0, 0] = -gb * r[0, 0] + g * r[1, 1] + il * (r[0, 3] - r[3, 0])
    d[1, 1] = gb * r[0, 0] - g * r[1, 1] + il * (r[1, 2] - r[2, 1])
    d[2, 2] = -gb * r[2, 2] + g * r[3, 3] + il * (r[2, 1] - r[1, 2])
    d[3, 3] = gb * r[2, 2] - g * r[3, 3] + il * (r[3, 0] - r[0, 3])

    d[0, 1] = (1j * om - half) * r[0, 1] + il * (r[0, 2] - r[3, 1])
    d[0, 2] = il * r[0, 1] + (1j * om - gb) * r[0, 2] + g * r[1, 3] - il * r[3, 2]
    d[0, 3] = (2j * om - half) * r[0, 3] + il * (r[0, 0] - r[3, 3])
    d[1, 2] = -half * r[1, 2] + il * (r[1, 1] - r[2, 2])
    d[1, 3] = (1j * om - g) * r[1, 3] + gb * r[0, 2] + il * (r[1, 0] - r[2, 3])
    # the coherent feed here is the conjugate ground-sym coherence; the
    # unconjugated one would break Hermiticity of the flow
    d[2, 3] = (1j * om - half) * r[2, 3] + il * (r[2, 0] - r[1, 3])
    return d


def phenom_rhs(rho: np.ndarray, p: SystemParams, rates: RateSet) -> np.ndarray:
    """Time derivative of the computational-basis density matrix.

    Uses the bath rates evaluated at the bare qubit frequency; the coupled
    Hamiltonian enters only through the coherent terms.  Only the diagonal
    and upper-triangle equations are written out; the lower triangle comes
    from d(rho)/dt being Hermitian whenever rho is, expressed through the
    dagger identity so the map stays linear on arbitrary matrices.
    """
    r = np.asarray(rho, dtype=complex)
    d = _upper_rows(r, p, rates)
    mirror = _upper_rows(r.conj().T, p, rates)
    for i, j in _UPPER:
        d[j, i] = np.conj(mirror[i, j])
    return d


def liouvillian(p: SystemParams, rates: RateSet) -> np.ndarray:
    """16x16 generator matrix of phenom_rhs (row-major vec)."""
    return integrate.superoperator_from_rhs(lambda m: phenom_rhs(m, p, rates))


def liouvillian_from_ops(p: SystemParams, rates: RateSet) -> np.ndarray:
    """Same generator assembled from the qubit-2 ladder operators.

    Kept as an independent construction; tests pin it against
    ``liouvillian`` so the element-wise right-hand side cannot drift.
    """
    lower = np.zeros((4, 4), dtype=complex)
    lower[0, 1] = 1.0
    lower[2, 3] = 1.0
    raise_ = lower.conj().T
    h = hamiltonian(p)
    eye = np.eye(4)
    gen = -1j * (np.kron(h, eye) - np.kron(eye, h.T))
    for rate, op in ((rates.emission_bare, lower), (rates.absorption_bare, raise_)):
        if rate == 0.0:
            continue
        opd = op.conj().T
        norm = opd @ op
        gen += rate * (np.kron(op, opd.T)
                       - 0.5 * (np.kron(norm, eye) + np.kron(eye, norm.T)))
    return gen


def step_bound(p: SystemParams, rates: RateSet) -> float:
    scale = np.hypot(p.coupling, 2.0 * p.omega)
    return integrate.step_bound(rates.emission_bare + rates.absorption_bare, scale)


def propagate(rho0: np.ndarray, p: SystemParams, rates: RateSet, times) -> np.ndarray:
    """RK4 trajectory in the computational basis."""
    return integrate.propagate(liouvillian(p, rates), rho0, times, step_bound(p, rates))


def steady_state(p: SystemParams, rates: RateSet) -> np.ndarray:
    """Closed-form stationary state (computational basis).

    Nonzero entries: the four populations and the two antidiagonal
    coherences.  Vanishes under phenom_rhs identically.
    """
    g = rates.emission_bare
    gb = rates.absorption_bare
    if g + gb <= 0:
        raise ValueError("stationary state needs a nonzero damping rate")
    lam = p.coupling
    om = p.omega
    lam2 = lam * lam
    om2 = om * om
    box = (gb + g) ** 2 + 2 * lam2 + 8 * om2
    den = 2 * (gb + g) ** 2 * box

    p11 = (3 * g ** 3 * gb + g ** 2 * (3 * gb ** 2 + lam2 + 16 * om2)
           + g * (2 * lam2 * gb + gb ** 3) + lam2 * gb ** 2 + g ** 4) / den
    p22 = (g ** 3 * gb + g ** 2 * (3 * gb ** 2 + lam2)
           + g * gb * (3 * gb ** 2 + 2 * (lam2 + 8 * om2))
           + gb ** 2 * (gb ** 2 + lam2)) / den
    p33 = (3 * g ** 3 * gb + g ** 2 * (3 * gb ** 2 + lam2)
           + g * gb * (gb ** 2 + 2 * (lam2 + 8 * om2))
           + lam2 * gb ** 2 + g ** 4) / den
    p44 = (g ** 3 * gb + g ** 2 * (3 * gb ** 2 + lam2)
           + gb ** 2 * (gb ** 2 + lam2 + 16 * om2)
           + g * (2 * lam2 * gb + 3 * gb ** 3)) / den
    c_inner = 1j * lam * (gb - g) / (2 * box)
    # the real part's sign follows from stationarity of the outer-coherence
    # equation: (2i om - (g+gb)/2) c_outer + i lam (p11 - p44)/2 = 0
    c_outer = (2 * lam * om * (gb - g) / ((gb + g) * box)
               + 1j * lam * (g - gb) / (2 * box))

    out = np.zeros((4, 4), dtype=complex)
    out[0, 0], out[1, 1], out[2, 2], out[3, 3] = p11, p22, p33, p44
    out[1, 2] = c_inner
    out[2, 1] = np.conj(c_inner)
    out[0, 3] = c_outer
    out[3, 0] = np.conj(c_outer)
    return out


def steady_state_dressed(p: SystemParams, rates: RateSet,
                         frame: DressedFrame) -> DensityMatrix:
    """Stationary state rewritten in the dressed basis, term by term.

    Equals the generic basis change of ``steady_state``; spelled out
    separately because the surviving ground-top and antisym-sym coherences
    are what certify that this state is not thermal.
    """
    ss = steady_state(p, rates)
    p11, p22, p33, p44 = (ss[i, i].real for i in range(4))
    c14 = ss[0, 3]
    c23 = ss[1, 2]
    ap, am = frame.mix_plus, frame.mix_minus

    out = np.zeros((4, 4), dtype=complex)
    out[0, 0] = am ** 2 * p44 + ap ** 2 * p11 - 2 * ap * am * c14.real
    out[1, 1] = 0.5 * (p22 + p33) - c23.real
    out[2, 2] = 0.5 * (p22 + p33) + c23.real
    out[3, 3] = am ** 2 * p11 + ap ** 2 * p44 + 2 * ap * am * c14.real
    out[0, 3] = ap * am * (p11 - p44) + ap ** 2 * c14 - am ** 2 * np.conj(c14)
    out[3, 0] = ap * am * (p11 - p44) + ap ** 2 * np.conj(c14) - am ** 2 * c14
    out[1, 2] = 0.5 * (p33 - p22) - 1j * c23.imag
    out[2, 1] = 0.5 * (p33 - p22) + 1j * c23.imag
    return DensityMatrix(out, DRESSED)
