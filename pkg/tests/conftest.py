"""Shared moduli and parameter sets."""

from collections.abc import Callable

import pytest

from lamekit.elliptic import Modulus, modulus_from_k
from lamekit.recurrence import LameParams


@pytest.fixture
def modulus() -> Modulus:
    return modulus_from_k(0.5)


@pytest.fixture
def params(modulus: Modulus) -> LameParams:
    return LameParams(nu=0.3, modulus=modulus)


@pytest.fixture
def make_params() -> Callable[[float, float], LameParams]:
    def make(nu: float, k: float) -> LameParams:
        return LameParams(nu=nu, modulus=modulus_from_k(k))

    return make
