import numpy as np
import pytest

from diraclab import build_dec, flat_torus, icosphere, spectrum


@pytest.fixture(scope="session")
def dec_icosphere4():
    return build_dec(icosphere(4))


@pytest.fixture(scope="session")
def dec_torus32():
    return build_dec(flat_torus(32))


@pytest.fixture(scope="session")
def dec_torus48():
    return build_dec(flat_torus(48))


@pytest.fixture(scope="session")
def sphere_spectra(dec_icosphere4):
    """Degree -> SpectrumResult on icosphere(4), shared across tests."""
    return {p: spectrum(dec_icosphere4, p, k, seed=42)
            for p, k in ((0, 10), (1, 12), (2, 8))}


@pytest.fixture(scope="session")
def torus_spectra(dec_torus32):
    return {p: spectrum(dec_torus32, p, k, seed=42)
            for p, k in ((0, 8), (1, 8), (2, 6))}


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(42)
