import numpy as np
import pytest

from dressedbath.metrics import XStateElements


def random_density(rng, dim=4):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def random_x_state(rng) -> XStateElements:
    pops = rng.dirichlet(np.ones(4))
    mag = rng.uniform(0.0, 1.0, 2)
    phase = rng.uniform(0.0, 2.0 * np.pi, 2)
    return XStateElements(
        p00=pops[0], p01=pops[1], p10=pops[2], p11=pops[3],
        outer=mag[0] * np.sqrt(pops[0] * pops[3]) * np.exp(1j * phase[0]),
        inner=mag[1] * np.sqrt(pops[1] * pops[2]) * np.exp(1j * phase[1]),
    )


def random_unitary(rng, dim=2):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(a)
    return q * (np.diag(r) / np.abs(np.diag(r)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
