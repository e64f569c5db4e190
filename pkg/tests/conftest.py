import pytest
from hypothesis import settings

from zeckstats.recurrence import validate_spec

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")

ORACLE_SPECS = [(1, 1), (1, 1, 1), (10,), (2, 0, 1)]


@pytest.fixture(params=ORACLE_SPECS, ids=lambda c: ",".join(map(str, c)))
def spec(request):
    return validate_spec(request.param)
