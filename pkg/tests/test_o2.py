import pytest
from conftest import GF2, GF3, QQ, vec

from treematroid.errors import ValidationError
from treematroid.fixtures import path3, tri, twosum
from treematroid.games import (
    FIRST,
    SECOND,
    PositionOrder,
    Strategy,
    check_strategy,
    reduce_strategy,
    solve_game,
)
from treematroid.o2 import (
    COLIN,
    SARAH,
    START,
    O2Instance,
    build_circuit_game,
    check_witness,
    circuit_winner,
    o2_witness,
    partitions,
    sigma_analysis,
)
from treematroid.tree import TreeOfPresentations


def inst(tree, e, P, Q):
    return O2Instance(tree, e, frozenset(P), frozenset(Q))


def test_instance_must_partition_the_real_edges():
    t = twosum()
    with pytest.raises(ValidationError):
        inst(t, "g", "bcd", "")
    with pytest.raises(ValidationError):
        inst(t, "a", "bc", "")
    with pytest.raises(ValidationError):
        inst(t, "a", "bc", "cd")


def test_partition_count():
    assert sum(1 for _ in partitions(twosum())) == 4 * 2**3
    assert sum(1 for _ in partitions(path3())) == 6 * 2**5


def test_single_node_game():
    t = TreeOfPresentations({"t": tri()}, [])
    g = build_circuit_game(inst(t, "a", "bc", ""))
    assert solve_game(g).winner == FIRST
    assert all(not g.moves(p) for p in g.moves(START))
    g = build_circuit_game(inst(t, "a", "c", "b"))
    assert solve_game(g).winner == SECOND


def test_twosum_sarah_wins_with_everything_in_P():
    i = inst(twosum(), "a", "bcd", "")
    assert circuit_winner(solve_game(build_circuit_game(i)).winner) == SARAH
    w = o2_witness(i)
    assert w.kind == "vector" and w.support(i.tree) == frozenset("abcd")
    assert check_witness(i, w)


def test_twosum_colin_wins_with_everything_in_Q():
    i = inst(twosum(), "a", "", "bcd")
    assert circuit_winner(solve_game(build_circuit_game(i)).winner) == COLIN
    dual = solve_game(build_circuit_game(i, dual=True)).winner
    assert circuit_winner(dual, dual=True) == COLIN
    w = o2_witness(i)
    assert w.kind == "covector" and w.support(i.tree) <= frozenset("abcd")
    assert check_witness(i, w)


def test_single_triangle_covector_witness():
    t = TreeOfPresentations({"t": tri()}, [])
    w = o2_witness(inst(t, "a", "c", "b"))
    assert w.kind == "covector" and w.support(t) == frozenset("ab")


def test_games_need_a_finite_field():
    with pytest.raises(ValidationError):
        build_circuit_game(inst(twosum(QQ), "a", "bcd", ""))
    assert o2_witness(inst(twosum(QQ), "a", "bcd", "")).kind == "vector"


def test_dual_instance_swaps_sides():
    i = inst(twosum(), "a", "b", "cd")
    d = i.dual()
    assert d.P == i.Q and d.Q == i.P
    assert d.tree.pres("1").vspace == i.tree.pres("1").wspace


@pytest.mark.parametrize("field", [GF2, GF3])
def test_projective_challenges_do_not_change_winners(field):
    for i in partitions(twosum(field)):
        full = solve_game(build_circuit_game(i, projective=False)).winner
        assert solve_game(build_circuit_game(i)).winner == full


def test_sigma_on_twosum_has_one_continuation():
    i = inst(twosum(), "a", "bcd", "")
    g = build_circuit_game(i)
    order = PositionOrder.construction(g)
    red = reduce_strategy(g, solve_game(g).strategy, order)
    rep = sigma_analysis(i, red, order, g)
    assert rep.ok and rep.reduced
    assert rep.subtree == {"1", "2"}
    assert [(c[1], c[2], c[3]) for c in rep.counts if c[1] == ("1", "2")] == [(("1", "2"), 1, 1)]


def test_sigma_on_a_single_node():
    t = TreeOfPresentations({"t": tri()}, [])
    i = inst(t, "a", "bc", "")
    rep = sigma_analysis(i, solve_game(build_circuit_game(i)).strategy)
    assert rep.subtree == {"t"} and rep.counts == [] and rep.ok


def _double_answer_strategy():
    """Over GF(3), answer the challenges g:1 and g:2 with different vectors at node 2."""
    i = inst(twosum(GF3), "a", "bcd", "")
    g = build_circuit_game(i, projective=False)
    x1 = ("X", "1", vec(GF3, a=1, b=1, g=1))
    y1, y2 = ("Y", ("1", "2"), vec(GF3, g=1)), ("Y", ("1", "2"), vec(GF3, g=2))
    u1, u2 = ("X", "2", vec(GF3, g=1, c=1, d=1)), ("X", "2", vec(GF3, g=2, c=2, d=2))
    sigma = Strategy(FIRST, frozenset({(x1,), (x1, y1, u1), (x1, y2, u2)}))
    return i, g, sigma


def test_double_answer_is_flagged_then_fixed_by_reduction():
    i, g, sigma = _double_answer_strategy()
    order = PositionOrder.construction(g)
    assert check_strategy(g, sigma).ok
    before = sigma_analysis(i, sigma, order, g)
    assert not before.ok and not before.reduced
    assert [(v[2], v[3]) for v in before.violations] == [(2, 1)]
    red = reduce_strategy(g, sigma, order)
    after = sigma_analysis(i, red, order, g)
    assert after.ok and after.reduced


def test_sigma_analysis_requires_a_winning_sarah_strategy():
    i = inst(twosum(), "a", "", "bcd")
    g = build_circuit_game(i)
    with pytest.raises(ValidationError):
        sigma_analysis(i, solve_game(g).strategy, game=g)
