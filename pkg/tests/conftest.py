import numpy as np
import pytest

from kornlab.geometry import make_surface, make_thin_domain

SURFACE_SPECS = {
    "plate": {"Lx": 1.0, "Ly": 1.0},
    "cylinder": {"R": 1.0, "length": 1.0},
    "sphere_cap": {"R": 1.0, "polar": (0.3, 1.2)},
    "catenoid": {},
}


def build_surface(kind):
    return make_surface(kind, SURFACE_SPECS[kind])


@pytest.fixture(params=list(SURFACE_SPECS))
def surface(request):
    return build_surface(request.param)


@pytest.fixture
def plate():
    return build_surface("plate")


@pytest.fixture
def cylinder():
    return build_surface("cylinder")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def thin(kind, h=0.02, profile="constant", **kw):
    return make_thin_domain(build_surface(kind), h, profile, **kw)
