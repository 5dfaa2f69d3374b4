import itertools
import random

from conftest import FIELDS, GF2, GF3
from hypothesis import assume, given
from hypothesis import strategies as st

from treematroid.algebra import (
    SparseVec,
    Subspace,
    complement,
    dot,
    min_supports,
    min_supports_by_circuits,
    minimal_sets,
)
from treematroid.axioms import SetSystemPair, check_axiom, components
from treematroid.base import pres_components
from treematroid.formats import dumps, loads
from treematroid.games import FIRST, solve_game
from treematroid.generators import (
    random_presentation,
    random_subspace,
    random_tree,
    random_vector,
)
from treematroid.o2 import O2Instance, build_circuit_game, o2_witness
from treematroid.presentation import (
    Presentation,
    independent_shrink,
    is_pres_independent,
    localize,
    localize_ok,
    minimal_extension,
)
from treematroid.tree import glue, glued_spaces, prevector_span

seeds = st.integers(0, 10**6)
fields = st.sampled_from(FIELDS)
finite_fields = st.sampled_from([GF2, GF3])
GROUND = "abcdefgh"


def _pres(field, seed, n_min=1, n_max=6):
    rng = random.Random(seed)
    return random_presentation(field, GROUND[: rng.randint(n_min, n_max)], rng), rng


def _split(ground, rng, parts=2):
    labels = [rng.randrange(parts) for _ in ground]
    return [frozenset(e for e, k in zip(ground, labels) if k == i) for i in range(parts)]


@given(fields, seeds)
def test_dot_is_symmetric_and_bilinear(field, seed):
    rng = random.Random(seed)
    u, v, w = (random_vector(field, GROUND[:5], rng) for _ in range(3))
    c = field.coerce(rng.randint(-3, 3))
    assert dot(u, v) == dot(v, u)
    assert dot(u + v, w) == field.add(dot(u, w), dot(v, w))
    assert dot(u.scale(c), w) == field.mul(c, dot(u, w))


@given(fields, seeds)
def test_complement_is_an_involution(field, seed):
    rng = random.Random(seed)
    U = random_subspace(field, GROUND[: rng.randint(1, 6)], rng)
    C = complement(U)
    assert U.dim + C.dim == len(U.ground)
    assert U.is_orthogonal_to(C)
    assert complement(C) == U


@given(fields, seeds)
def test_minors_commute_with_duality(field, seed):
    p, rng = _pres(field, seed)
    P, Q = _split(p.ground, rng, 3)[:2]
    assert p.minor(P, Q).dual() == p.dual().minor(Q, P)


@given(finite_fields, seeds)
def test_min_supports_match_brute_force(field, seed):
    rng = random.Random(seed)
    U = random_subspace(field, GROUND[: rng.randint(1, 6)], rng)
    brute = minimal_sets(v.support for v in U.members() if v.support)
    assert min_supports(U) == brute == min_supports_by_circuits(U)


@given(fields, seeds)
def test_circuits_and_cocircuits_never_meet_in_one_element(field, seed):
    p, _ = _pres(field, seed)
    sys = SetSystemPair(p.ground, p.circuits(), p.cocircuits())
    assert check_axiom(sys, "O1").ok
    assert all(len(c & d) != 1 for c in sys.cee for d in sys.dee)


@given(finite_fields, seeds)
def test_minimal_extension_postcondition(field, seed):
    p, rng = _pres(field, seed, 2)
    assume(p.vspace.dim > 0)
    v0 = p.vspace.combine([rng.randrange(field.modulus) for _ in range(p.vspace.dim)])
    F, X = _split(p.ground, rng, 3)[:2]
    v = minimal_extension(p, v0, F, X)
    assert p.vspace.contains(v)
    assert v.restrict(F) == v0.restrict(F)
    assert v.support <= v0.support | X
    for w in p.vspace.members():
        if w.restrict(F) == v0.restrict(F) and w.support <= v0.support | X:
            assert not (w.support - X < v.support - X)


@given(fields, seeds)
def test_localize_meets_both_agreement_equations(field, seed):
    p, rng = _pres(field, seed, 2)
    F = _split(p.ground, rng)[0]
    P_F, Q_F = localize(p, F)
    assert localize_ok(p, F, P_F, Q_F)


@given(fields, seeds)
def test_independent_shrink_postcondition(field, seed):
    p, rng = _pres(field, seed, 2)
    F, P = _split(p.ground, rng, 3)[:2]
    Fo = [e for e in p.ground if e in F]
    Pp = independent_shrink(p, F, P)
    assert Pp <= P
    assert is_pres_independent(p, Pp)
    assert p.contract(Pp).restrict(Fo) == p.contract(P).restrict(Fo)


@given(seeds, st.integers(1, 3))
def test_prevector_span_equals_the_glue(seed, nodes):
    tree = random_tree(GF2, random.Random(seed), nodes=nodes)
    V, W = glued_spaces(tree)
    assert prevector_span(tree) == V
    assert prevector_span(tree, covector=True) == W


@given(seeds)
def test_gluing_commutes_with_minors(seed):
    rng = random.Random(seed)
    tree = random_tree(GF2, rng, nodes=3)
    P, Q = _split(tree.real_edges, rng, 3)[:2]
    assert glue(tree.minor(P, Q)) == glue(tree).minor(P, Q)


@given(fields, seeds)
def test_component_methods_agree(field, seed):
    p, _ = _pres(field, seed)
    sys = SetSystemPair(p.ground, p.circuits(), p.cocircuits())
    as_sets = lambda comps: sorted(sorted(c) for c in comps)  # noqa: E731
    assert as_sets(pres_components(p)) == as_sets(components(sys))


@given(seeds)
def test_game_winner_tracks_the_witness(seed):
    rng = random.Random(seed)
    tree = random_tree(GF2, rng, nodes=2, max_ground=3)
    real = list(tree.real_edges)
    assume(real)
    e = rng.choice(real)
    P, Q = _split([x for x in real if x != e], rng)
    inst = O2Instance(tree, e, P, Q)
    winner = solve_game(build_circuit_game(inst), materialize=False).winner
    assert (winner == FIRST) == (o2_witness(inst).kind == "vector")


@given(fields, seeds)
def test_relabelling_permutes_circuits(field, seed):
    p, rng = _pres(field, seed)
    names = list(p.ground)
    perm = dict(zip(names, rng.sample([f"z{i}" for i in range(len(names))], len(names))))
    assert {frozenset(perm[x] for x in c) for c in p.circuits()} == p.relabel(perm).circuits()


@given(fields, seeds)
def test_instance_files_are_stable(field, seed):
    p, _ = _pres(field, seed)
    text = dumps(p)
    assert loads(text).value == p
    assert dumps(loads(text).value) == text


@given(seeds)
def test_tree_files_are_stable(seed):
    tree = random_tree(GF3, random.Random(seed), nodes=3)
    text = dumps(tree)
    assert dumps(loads(text).value) == text


def test_o2_sweep_on_every_gf2_subspace_of_a_small_ground():
    ground = "abc"
    seen = set()
    for rows in itertools.product(range(8), repeat=2):
        vecs = [{e: (r >> i) & 1 for i, e in enumerate(ground)} for r in rows]
        U = Subspace(GF2, ground, [SparseVec(GF2, v) for v in vecs])
        if U in seen:
            continue
        seen.add(U)
        p = Presentation(U, complement(U))
        assert check_axiom(SetSystemPair.from_presentation(p), "O2").ok
    assert len(seen) == 1 + 7 + 7
