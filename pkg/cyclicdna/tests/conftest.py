"""
Shared test fixtures for the cyclicdna tests.
"""

import os
import random

import pytest

# Keep the environment from leaking into CLI defaults
for _name in ("CYCLICDNA_CAP", "CYCLICDNA_TEMPERATURE", "CYCLICDNA_WORKERS", "CYCLICDNA_LOG_LEVEL"):
    os.environ.pop(_name, None)

from cyclicdna.services.codes import new_code
from cyclicdna.services.polys import PolyF2, xn_minus_1
from cyclicdna.services.thermo import builtin_weight_table


@pytest.fixture(scope="session")
def table():
    """Builtin weight table at 310 K."""
    return builtin_weight_table(310.0)


@pytest.fixture(scope="session")
def example_code():
    """The n=6 code generated by (1+u+u^2+u^3)(x^2+x+1)."""
    full = xn_minus_1(6)
    return new_code(6, full, full, full, PolyF2.parse("1+x+x^2"))


@pytest.fixture()
def rng():
    """Seeded random source for property sampling."""
    return random.Random(1234)
