import itertools
import random

import pytest
from conftest import pres

from treematroid.axioms import (
    MatroidCert,
    SetSystemPair,
    base_of,
    bases_of_cert,
    check_axiom,
    components,
    is_base,
    is_independent,
    presented_matroid,
    verify_matroid,
)
from treematroid.errors import BudgetExceeded, ValidationError


def fam(*words):
    return frozenset(frozenset(w) for w in words)


@pytest.fixture
def tri_sys(tri):
    return SetSystemPair.from_presentation(tri)


def test_triangle_supports_pass_o1_and_o2(tri_sys):
    assert check_axiom(tri_sys, "O1").ok
    assert check_axiom(tri_sys, "O2").ok
    assert check_axiom(tri_sys, "tame").ok


def test_o1_singleton_overlap():
    v = check_axiom(SetSystemPair("a", fam("a"), fam("a")), "O1")
    assert not v.ok and v.witness == (frozenset("a"), frozenset("a"))


def test_o2_fails_with_nothing_through_e():
    v = check_axiom(SetSystemPair("a", fam(), fam()), "O2")
    assert not v.ok
    assert v.witness == {"e": "a", "P": frozenset(), "Q": frozenset()}


def test_o2_sweep_respects_cap():
    sys = SetSystemPair("abcdefgh", fam(), fam())
    with pytest.raises(BudgetExceeded):
        check_axiom(sys, "O2", cap=100)


def test_o3_and_im_on_the_triangle(tri_sys):
    for name in ("O3", "O3*", "IM"):
        assert check_axiom(tri_sys, name, rng=random.Random(0)).ok


def test_unknown_axiom(tri_sys):
    with pytest.raises(ValidationError):
        check_axiom(tri_sys, "O9")


def test_is_base_examples(tri_sys):
    v = is_base(tri_sys, {"a", "b"})
    assert v.ok
    assert v.witness["c"] == frozenset("abc")
    assert v.witness["a"] == frozenset("ac")
    assert v.witness["b"] == frozenset("bc")
    assert not is_base(tri_sys, {"a", "b", "c"}).ok
    assert is_base(SetSystemPair((), fam(), fam()), set()).ok


def test_components_examples(tri, tri_sys):
    assert components(tri_sys) == [frozenset("abc")]
    other = pres("xyz", {"x": 1, "y": 1, "z": 1})
    both = SetSystemPair("abcxyz", tri_sys.cee | SetSystemPair.from_presentation(other).cee,
                         tri_sys.dee | SetSystemPair.from_presentation(other).dee)
    assert sorted(map(sorted, components(both))) == [list("abc"), list("xyz")]
    loops = SetSystemPair("ab", fam(), fam("a", "b"))
    assert sorted(map(sorted, components(loops))) == [["a"], ["b"]]


def test_verify_matroid_examples():
    ok = verify_matroid(MatroidCert("abc", fam("abc"), fam("ab", "bc", "ac")))
    assert ok.ok and ok.witness == {"rank": 2, "bases": 3}
    assert not verify_matroid(MatroidCert("ab", fam("a", "ab"))).ok
    bad = verify_matroid(MatroidCert("abc", fam("ab", "bc"), fam("ab", "bc", "ac")))
    assert not bad.ok


def test_verify_matroid_cap():
    with pytest.raises(BudgetExceeded):
        verify_matroid(MatroidCert(tuple("abcdefghijklm"), fam()))


def test_presented_matroid_examples(tri):
    cert = presented_matroid(tri)
    assert cert.circuits == fam("abc") and cert.cocircuits == fam("ab", "bc", "ac")
    coloops = presented_matroid(pres("ab"))
    assert coloops.circuits == fam() and coloops.cocircuits == fam("a", "b")
    loop = presented_matroid(pres("a", {"a": 1}))
    assert loop.circuits == fam("a") and loop.cocircuits == fam()


def test_is_base_agrees_with_the_oracle(tri):
    cert = presented_matroid(tri)
    sys = SetSystemPair.from_presentation(tri, minimal=True)
    bases = set(bases_of_cert(cert))
    for k in range(4):
        for B in itertools.combinations("abc", k):
            assert is_base(sys, B).ok == (frozenset(B) in bases)


def test_base_of_extends_independent_sets(tri_sys):
    B = base_of(tri_sys, set("abc"), {"c"})
    assert "c" in B and len(B) == 2 and is_independent(tri_sys, B)


def test_set_system_minors(tri_sys):
    m = tri_sys.minor({"c"}, ())
    assert m.ground == ("a", "b")
    assert frozenset("ab") in m.cee
    with pytest.raises(ValidationError):
        SetSystemPair("ab", fam("abc"), fam())
