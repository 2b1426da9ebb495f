import numpy as np
import pytest

from anisoflow import TrigPolynomial, build_profile, state_from_coeffs


@pytest.fixture(scope="session")
def iso_profile_64():
    return build_profile(TrigPolynomial(1.0), 64)


@pytest.fixture(scope="session")
def iso_profile_256():
    return build_profile(TrigPolynomial(1.0), 256)


@pytest.fixture(scope="session")
def aniso_profile_64():
    return build_profile(TrigPolynomial(1.0, ((2, 0.2, 0.0),)), 64)


@pytest.fixture(scope="session")
def aniso_profile_256():
    return build_profile(TrigPolynomial(1.0, ((2, 0.2, 0.0),)), 256)


def make_state(a0, harmonics, n, time=0.0):
    return state_from_coeffs(TrigPolynomial(a0, tuple(harmonics)), n, time)


def ellipse_like(n, eps=0.3):
    return make_state(1.0, [(2, eps, 0.0)], n)
