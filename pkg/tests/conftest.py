import pytest
from hypothesis import HealthCheck, settings

from treematroid.algebra import FieldSpec, SparseVec
from treematroid.presentation import make_presentation

settings.register_profile(
    "repo",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
    derandomize=True,
)
settings.load_profile("repo")

GF2 = FieldSpec.gf(2)
GF3 = FieldSpec.gf(3)
QQ = FieldSpec.rationals()
FIELDS = [GF2, GF3, QQ]


def vec(field, **entries):
    return SparseVec(field, {e: field.coerce(c) for e, c in entries.items()})


def pres(ground, *vectors, field=GF2):
    return make_presentation(ground, [SparseVec(field, v) for v in vectors], field=field)


@pytest.fixture
def tri():
    return pres("abc", {"a": 1, "b": 1, "c": 1})
