from fractions import Fraction

import pytest
from conftest import GF2, GF3, QQ, vec

from treematroid.algebra import (
    FieldSpec,
    SparseVec,
    Subspace,
    complement,
    dot,
    min_supports,
    nullspace,
    rank,
    rref,
    solve,
    span_canonical,
    subspace_minor,
    supports,
)
from treematroid.errors import BudgetExceeded, ValidationError


def sets(*words):
    return frozenset(frozenset(w) for w in words)


# -- fields and vectors ----------------------------------------------------------


def test_field_parse_and_names():
    assert FieldSpec.parse("GF(5)") == FieldSpec.gf(5)
    assert FieldSpec.parse("Q").name == "Q"
    assert FieldSpec.gf(7).name == "GF(7)"


@pytest.mark.parametrize("bad", [0, 1, 4, 9, -3])
def test_modulus_must_be_prime(bad):
    with pytest.raises(ValidationError, match="modulus not prime"):
        FieldSpec.gf(bad)


def test_rational_coercion_rejects_floats():
    with pytest.raises(ValidationError):
        QQ.coerce(0.5)
    assert GF3.coerce(Fraction(1, 2)) == 2


def test_zero_entries_are_dropped():
    v = SparseVec(GF2, {"a": 1, "b": 2, "c": 0})
    assert v.support == {"a"}


def test_field_mismatch_in_dot():
    with pytest.raises(ValidationError):
        dot(vec(GF2, a=1), vec(GF3, a=1))


def test_dot_examples():
    assert dot(SparseVec(GF2, {}), vec(GF2, a=1)) == 0
    assert dot(vec(GF2, a=1, b=1), vec(GF2, b=1, c=1)) == 1
    assert dot(vec(GF2, a=1, b=1, c=1), vec(GF2, a=1, b=1)) == 0


# -- kernels ---------------------------------------------------------------------------


def test_rref_rank_nullspace_solve_small():
    rows = [[1, 1, 0], [0, 1, 1], [1, 0, 1]]
    red, piv = rref(rows, GF2)
    assert piv == [0, 1] and len(red) == 2
    assert rank(rows, GF2) == 2
    ns = nullspace(rows, 3, GF2)
    assert ns == [[1, 1, 1]]
    assert solve([[1, 1], [0, 1]], [1, 1], GF2) == [0, 1]
    assert solve([[1, 1], [1, 1]], [0, 1], GF2) is None


# -- subspaces ----------------------------------------------------------------------------


def test_span_canonical_examples():
    assert span_canonical([], "abc", GF2).dim == 0
    U = span_canonical([vec(GF2, a=1, b=1, c=1)], "abc")
    assert list(U.basis) == [vec(GF2, a=1, b=1, c=1)]
    U = span_canonical([vec(GF2, a=1, b=1), vec(GF2, b=1, c=1), vec(GF2, a=1, c=1)], "abc")
    assert list(U.basis) == [vec(GF2, a=1, c=1), vec(GF2, b=1, c=1)]


def test_span_rejects_support_outside_ground():
    with pytest.raises(ValidationError):
        Subspace(GF2, "ab", [vec(GF2, c=1)])


def test_complement_examples():
    assert complement(Subspace.zero(GF2, "ab")) == Subspace.full(GF2, "ab")
    U = Subspace(GF2, "abc", [vec(GF2, a=1, b=1, c=1)])
    assert complement(U) == Subspace(GF2, "abc", [vec(GF2, a=1, b=1), vec(GF2, b=1, c=1)])
    U = Subspace(QQ, "ab", [vec(QQ, a=1, b=1)])
    assert complement(U) == Subspace(QQ, "ab", [vec(QQ, a=1, b=-1)])


def test_subspace_minor_examples():
    U = Subspace(GF2, "abc", [vec(GF2, a=1, b=1, c=1)])
    assert subspace_minor(U, "abc", "restrict") == U
    assert subspace_minor(U, "ab", "restrict").dim == 0
    assert subspace_minor(U, "ab", "contract") == Subspace(GF2, "ab", [vec(GF2, a=1, b=1)])
    with pytest.raises(ValidationError):
        subspace_minor(U, "abz", "restrict")


def test_min_supports_examples():
    assert min_supports(Subspace.zero(GF2, "ab")) == frozenset()
    assert min_supports(Subspace(GF2, "abc", [vec(GF2, a=1, b=1, c=1)])) == sets("abc")
    U = Subspace(GF2, "abc", [vec(GF2, a=1, b=1), vec(GF2, b=1, c=1)])
    assert min_supports(U) == sets("ab", "bc", "ac")


def test_min_supports_over_rationals_uses_elementary_vectors():
    # the cut space of a 4-cycle over Q: every pair of edges is a bond
    U = complement(Subspace(QQ, "abcd", [vec(QQ, a=1, b=-1, c=1, d=-1)]))
    assert min_supports(U) == sets("ab", "ac", "ad", "bc", "bd", "cd")


def test_member_enumeration_respects_budget():
    U = Subspace.full(GF3, "abcdef")
    with pytest.raises(BudgetExceeded):
        list(U.members(budget=10))
    with pytest.raises(BudgetExceeded):
        supports(U, budget=10)


def test_projective_members_are_normalised():
    U = Subspace.full(GF3, "ab")
    reps = list(U.projective_members())
    assert len(reps) == 4
    for v in reps:
        first = next(e for e in "ab" if v[e])
        assert v[first] == 1
