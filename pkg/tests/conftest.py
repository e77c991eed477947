import pytest
from hypothesis import settings

from bmw_duality.scalars import FieldSpec

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

ALL_FIELDS = ["generic", "modp:5", "modp:7", "zeta:2", "zeta:3", "zeta:5/3"]


@pytest.fixture(params=ALL_FIELDS)
def field(request):
    return FieldSpec.from_descriptor(request.param)


@pytest.fixture
def generic():
    return FieldSpec.generic()
