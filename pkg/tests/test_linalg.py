import numpy as np
import pytest

from dressedbath import linalg
from dressedbath.linalg import (COMPUTATIONAL, DRESSED, DensityMatrix,
                                NotHermitian, NotPSD, WrongBasis,
                                change_basis, hermitian_eigs,
                                partial_trace_q2, validate_density)
from dressedbath.model import SystemParams, dressed_frame, hamiltonian

from conftest import random_density


def bell_state():
    v = np.zeros(4, dtype=complex)
    v[0] = v[3] = 1 / np.sqrt(2)
    return np.outer(v, v.conj())


class TestValidateDensity:
    def test_maximally_mixed(self):
        state = validate_density(np.eye(4) / 4)
        evals, _ = hermitian_eigs(state.matrix)
        assert np.allclose(evals, 0.25, atol=1e-14)

    def test_pure_basis_state(self):
        state = validate_density(np.diag([1.0, 0, 0, 0]).astype(complex))
        assert state.basis == COMPUTATIONAL

    def test_constructed_violation_is_not_psd(self):
        bad = np.diag([0.6, 0.6, -0.1, -0.1]).astype(complex)
        with pytest.raises(NotPSD) as err:
            validate_density(bad)
        assert err.value.violation == pytest.approx(0.1, abs=1e-12)

    def test_trace_violation(self):
        with pytest.raises(linalg.TraceNotOne) as err:
            validate_density(np.eye(4) / 2)
        assert err.value.violation == pytest.approx(1.0, abs=1e-12)

    def test_hermiticity_violation(self):
        bad = np.diag([0.25] * 4).astype(complex)
        bad[0, 1] = 0.3
        with pytest.raises(NotHermitian) as err:
            validate_density(bad)
        assert err.value.violation == pytest.approx(0.3, abs=1e-12)

    def test_matrix_is_readonly(self):
        state = validate_density(np.eye(4) / 4)
        with pytest.raises(ValueError):
            state.matrix[0, 0] = 1.0


class TestPartialTrace:
    def test_product_state_qubit1_excited(self):
        rho = np.zeros((4, 4), dtype=complex)
        rho[2, 2] = 1.0  # |1,0><1,0|
        reduced = partial_trace_q2(DensityMatrix(rho))
        assert np.allclose(reduced, np.diag([0.0, 1.0]))

    def test_bell_reduces_to_maximally_mixed(self):
        reduced = partial_trace_q2(DensityMatrix(bell_state()))
        assert np.allclose(reduced, np.eye(2) / 2, atol=1e-14)

    def test_maximally_mixed(self):
        reduced = partial_trace_q2(DensityMatrix(np.eye(4, dtype=complex) / 4))
        assert np.allclose(reduced, np.eye(2) / 2)

    def test_wrong_basis_rejected(self):
        with pytest.raises(WrongBasis):
            partial_trace_q2(DensityMatrix(np.eye(4) / 4, DRESSED))

    def test_reduction_of_random_state_is_valid(self, rng):
        for _ in range(50):
            reduced = partial_trace_q2(DensityMatrix(random_density(rng)))
            assert abs(np.trace(reduced) - 1) < 1e-12
            assert np.abs(reduced - reduced.conj().T).max() < 1e-12
            evals, _ = hermitian_eigs(reduced)
            assert evals[0] > -1e-12


class TestChangeBasis:
    def setup_method(self):
        self.params = SystemParams(omega=1.0, coupling=3.0, gamma0=0.1,
                                   bath_width=5.0, bath_center=2.0,
                                   temperature=0.0)
        self.frame = dressed_frame(self.params)

    def test_ground_state_to_computational(self):
        ground = np.diag([1.0, 0, 0, 0]).astype(complex)
        comp = change_basis(DensityMatrix(ground, DRESSED), self.frame,
                            COMPUTATIONAL)
        ap, am = self.frame.mix_plus, self.frame.mix_minus
        vec = np.array([ap, 0, 0, -am])
        assert np.abs(comp.matrix - np.outer(vec, vec)).max() < 1e-14

    def test_uncoupled_limit_ground_is_00(self):
        params = SystemParams(omega=1.0, coupling=0.0, gamma0=0.1,
                              bath_width=5.0, bath_center=2.0, temperature=0.0)
        frame = dressed_frame(params)
        ground = np.diag([1.0, 0, 0, 0]).astype(complex)
        comp = change_basis(DensityMatrix(ground, DRESSED), frame,
                            COMPUTATIONAL).matrix
        expected = np.zeros((4, 4))
        expected[0, 0] = 1.0
        assert np.abs(comp - expected).max() < 1e-14

    def test_round_trip(self, rng):
        for _ in range(20):
            rho = DensityMatrix(random_density(rng))
            back = change_basis(change_basis(rho, self.frame, DRESSED),
                                self.frame, COMPUTATIONAL)
            assert np.abs(back.matrix - rho.matrix).max() < 1e-12

    def test_spectrum_invariant(self, rng):
        rho = DensityMatrix(random_density(rng))
        dressed = change_basis(rho, self.frame, DRESSED)
        w1, _ = hermitian_eigs(rho.matrix)
        w2, _ = hermitian_eigs(dressed.matrix)
        assert np.abs(w1 - w2).max() < 1e-10

    def test_same_basis_is_identity(self):
        rho = DensityMatrix(np.eye(4) / 4)
        assert change_basis(rho, self.frame, COMPUTATIONAL) is rho


class TestHermitianEigs:
    def test_diagonal(self):
        w, v = hermitian_eigs(np.diag([3.0, 1.0, 2.0, 0.0]).astype(complex))
        assert np.allclose(w, [0, 1, 2, 3])
        m = np.diag([3.0, 1.0, 2.0, 0.0])
        assert np.abs(m - v @ np.diag(w) @ v.conj().T).max() < 1e-12

    def test_pauli_x_tensor_identity(self):
        sx = np.array([[0, 1], [1, 0]], dtype=complex)
        m = np.kron(sx, np.eye(2))
        w, v = hermitian_eigs(m)
        assert np.allclose(w, [-1, -1, 1, 1])
        assert np.abs(m - v @ np.diag(w) @ v.conj().T).max() < 1e-10

    def test_coupled_hamiltonian_spectrum(self):
        # closed-form eigenvalues of the coupled pair at omega = coupling = 1
        params = SystemParams(omega=1.0, coupling=1.0, gamma0=0.1,
                              bath_width=1.0, bath_center=2.0, temperature=0.0)
        w, _ = hermitian_eigs(hamiltonian(params))
        root5 = np.sqrt(5.0)
        assert np.allclose(w, [1 - root5 / 2, 0.5, 1.5, 1 + root5 / 2],
                           atol=1e-12)

    def test_against_numpy_on_random_hermitian(self, rng):
        for dim in (2, 4):
            for _ in range(100):
                a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
                h = a + a.conj().T
                w, v = hermitian_eigs(h)
                assert np.abs(w - np.linalg.eigvalsh(h)).max() < 1e-10
                assert np.abs(h - v @ np.diag(w) @ v.conj().T).max() < 1e-10
                assert np.abs(v @ v.conj().T - np.eye(dim)).max() < 1e-12

    def test_rejects_non_hermitian(self):
        m = np.zeros((3, 3), dtype=complex)
        m[0, 1] = 1.0
        with pytest.raises(NotHermitian):
            hermitian_eigs(m)

    def test_degenerate_spectrum(self):
        w, v = hermitian_eigs(np.eye(4, dtype=complex) * 0.25)
        assert np.allclose(w, 0.25)
        assert np.abs(v @ v.conj().T - np.eye(4)).max() < 1e-14
