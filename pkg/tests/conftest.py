import os
import tempfile

import pytest
from hypothesis import HealthCheck, settings

# keep zero caches out of the home directory during tests
os.environ.setdefault("LTENSOR_CACHE_DIR", os.path.join(tempfile.gettempdir(), "ltensor-test-cache"))

settings.register_profile("ci", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ci")

from ltensor.characters import character_from_label  # noqa: E402
from ltensor.lfunctions import zeros_for  # noqa: E402


@pytest.fixture(scope="session")
def chi4():
    return character_from_label("4.1")


@pytest.fixture(scope="session")
def chi3():
    return character_from_label("3.1")


@pytest.fixture(scope="session")
def chi5():
    # complex odd character with chi(2) = i
    return character_from_label("5.1")


@pytest.fixture(scope="session")
def zeros():
    cache = {}

    def get(chi, T=150.0):
        key = (chi.label, T)
        if key not in cache:
            cache[key] = zeros_for(chi, T)
        return cache[key]

    return get
