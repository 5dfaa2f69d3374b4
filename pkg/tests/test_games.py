import random

import pytest

from treematroid.errors import ValidationError
from treematroid.fixtures import toy_game
from treematroid.games import (
    FIRST,
    SECOND,
    GameCycle,
    PositionalGame,
    PositionOrder,
    Strategy,
    check_strategy,
    is_reduced,
    reduce_strategy,
    solve_game,
    splice_fault,
)

R1_FIRST = PositionOrder(("s", "m", "c1", "c2", "r1", "r2"))


def test_stuck_start_loses_for_the_first_player():
    g = PositionalGame("a", {})
    r = solve_game(g)
    assert r.winner == SECOND and r.strategy.plays == {()}


def test_single_edge_is_a_first_player_win():
    g = PositionalGame.from_edges("a", [("a", "x")])
    r = solve_game(g)
    assert r.winner == FIRST and r.strategy.plays == {("x",)}


def test_cycles_are_rejected():
    g = PositionalGame.from_edges("a", [("a", "b"), ("b", "a")])
    with pytest.raises(GameCycle):
        solve_game(g)


def test_undeclared_positions_are_rejected():
    with pytest.raises(ValidationError):
        PositionalGame("a", {"a": ["b"]}, ["a"])


def test_solver_output_is_a_winning_strategy():
    g = toy_game()
    r = solve_game(g)
    assert r.winner == FIRST
    rep = check_strategy(g, r.strategy)
    assert rep.is_strategy and rep.is_winning


def test_reduction_answers_equivalent_challenges_alike():
    g = toy_game()
    sigma = Strategy(FIRST, frozenset({("m",), ("m", "c1", "r2"), ("m", "c2", "r1")}))
    assert is_reduced(g, sigma, R1_FIRST) == (("m", "c1", "r2"), ("m", "c2", "r1"))
    red = reduce_strategy(g, sigma, R1_FIRST)
    assert red.plays == {("m",), ("m", "c1", "r1"), ("m", "c2", "r1")}
    rep = check_strategy(g, red, R1_FIRST)
    assert rep.ok and rep.is_reduced and rep.splice_closed


def test_reduced_input_is_a_fixed_point():
    g = toy_game()
    sigma = Strategy(FIRST, frozenset({("m",), ("m", "c1", "r1"), ("m", "c2", "r1")}))
    assert reduce_strategy(g, sigma, R1_FIRST) == sigma


def test_missing_answer_is_reported():
    g = toy_game()
    sigma = Strategy(FIRST, frozenset({("m",), ("m", "c1", "r1")}))
    rep = check_strategy(g, sigma)
    assert not rep.is_strategy
    assert rep.witness == ("m", "c2") and rep.detail == "missing answer"


def test_strategy_parity_is_enforced():
    with pytest.raises(ValidationError):
        Strategy(FIRST, frozenset({("m", "c1")}))
    with pytest.raises(ValidationError):
        Strategy(3, frozenset())


def test_losing_strategy_is_not_winning():
    g = PositionalGame.from_edges("s", [("s", "x"), ("x", "y"), ("s", "z")])
    sigma = Strategy(FIRST, frozenset({("x",)}))
    rep = check_strategy(g, sigma)
    assert rep.is_strategy and not rep.is_winning and rep.witness == ("x", "y")


def test_second_player_strategy():
    g = PositionalGame.from_edges("s", [("s", "x"), ("x", "y")])
    r = solve_game(g)
    assert r.winner == SECOND
    assert r.strategy.plays == {(), ("x", "y")}
    assert check_strategy(g, r.strategy).ok


def test_reduce_rejects_second_player_strategies():
    g = PositionalGame.from_edges("s", [("s", "x"), ("x", "y")])
    with pytest.raises(ValidationError):
        reduce_strategy(g, solve_game(g).strategy)


def _random_game(rng, layers=4, width=3):
    """A layered acyclic game; positions are named by (layer, index)."""
    names = [[f"{i}.{j}" for j in range(width)] for i in range(layers)]
    edges = [("s", n) for n in names[0]]
    for i in range(layers - 1):
        for a in names[i]:
            for b in names[i + 1]:
                if rng.random() < 0.5:
                    edges.append((a, b))
    return PositionalGame.from_edges("s", edges)


def _first_player_game(rng):
    while True:
        g = _random_game(rng)
        r = solve_game(g)
        if r.winner == FIRST:
            return g, r


@pytest.mark.parametrize("seed", range(15))
def test_reduction_under_random_orders(seed):
    rng = random.Random(seed)
    g, r = _first_player_game(rng)
    for _ in range(3):
        ranking = list(g.positions)
        rng.shuffle(ranking)
        order = PositionOrder(tuple(ranking))
        red = reduce_strategy(g, r.strategy, order)
        rep = check_strategy(g, red, order)
        assert rep.ok, rep
        assert splice_fault(g, red) is None


@pytest.mark.parametrize("seed", range(10))
def test_winner_is_invariant_under_relabelling(seed):
    rng = random.Random(seed)
    g = _random_game(rng)
    names = list(g.positions)
    shuffled = names[:]
    rng.shuffle(shuffled)
    h = g.relabel(dict(zip(names, shuffled)))
    assert solve_game(h).winner == solve_game(g).winner
