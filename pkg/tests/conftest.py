import numpy as np
import pytest

from lsim.core import DensityMatrix, MediumParams, Pulse, PulseSequence, Transition
from lsim import bloch


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Trigger numba compilation once so timed tests see steady-state cost."""
    params = MediumParams()
    seq = PulseSequence([Pulse(Transition.PROBE, 10.0, 0.0, 1.0)], 1.0)
    bloch.evolve(DensityMatrix.ground(1), seq, params, dt_us=0.01)


def random_density_matrix(rng: np.random.Generator) -> np.ndarray:
    """Random valid state: normalized A A^dagger."""
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real
