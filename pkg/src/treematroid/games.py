"""Finite positional games, play-tree strategies, exact solving and strategy reduction.

A play is a tuple of positions p1 p2 ... where p1 is a successor of the start
and each later position a successor of the previous one.  Odd moves belong to
the first player.  A player who cannot move loses.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ValidationError

FIRST, SECOND = 1, 2


class GameCycle(ValidationError):
    """The reachable part of the game graph has a directed cycle."""


class PositionalGame:
    def __init__(self, start, successors, positions=None):
        self.start = start
        self._succ = {p: tuple(qs) for p, qs in dict(successors).items()}
        order = list(positions) if positions is not None else None
        if order is None:
            seen, order = set(), []
            for p in [start, *self._succ]:
                if p not in seen:
                    seen.add(p)
                    order.append(p)
            for qs in self._succ.values():
                for q in qs:
                    if q not in seen:
                        seen.add(q)
                        order.append(q)
        self.positions = tuple(order)
        known = set(self.positions)
        for p, qs in self._succ.items():
            if p not in known or any(q not in known for q in qs):
                raise ValidationError(f"move from or to an undeclared position at {p!r}")

    @classmethod
    def from_edges(cls, start, edges, positions=None) -> PositionalGame:
        succ: dict = {}
        for p, q in edges:
            succ.setdefault(p, []).append(q)
        return cls(start, succ, positions)

    def moves(self, p) -> tuple:
        return self._succ.get(p, ())

    @property
    def edges(self) -> list:
        return [(p, q) for p in self.positions for q in self.moves(p)]

    def at(self, play) -> object:
        return play[-1] if play else self.start

    def is_legal(self, play) -> bool:
        cur = self.start
        for p in play:
            if p not in self.moves(cur):
                return False
            cur = p
        return True

    def relabel(self, mapping) -> PositionalGame:
        return PositionalGame(
            mapping[self.start],
            {mapping[p]: [mapping[q] for q in qs] for p, qs in self._succ.items()},
            [mapping[p] for p in self.positions],
        )

    def __repr__(self):
        return f"PositionalGame(start={self.start!r}, positions={len(self.positions)}, edges={len(self.edges)})"


@dataclass(frozen=True)
class PositionOrder:
    ranking: tuple

    def __post_init__(self):
        if len(set(self.ranking)) != len(self.ranking):
            raise ValidationError("position order repeats a position")
        object.__setattr__(self, "_rank", {p: i for i, p in enumerate(self.ranking)})

    @classmethod
    def construction(cls, game: PositionalGame) -> PositionOrder:
        return cls(game.positions)

    def key(self, p) -> int:
        try:
            return self._rank[p]
        except KeyError:
            raise ValidationError(f"position {p!r} is not ordered") from None

    def le(self, p, q) -> bool:
        return self.key(p) <= self.key(q)


@dataclass(frozen=True)
class Strategy:
    """Plays (as position tuples) owned by ``player``, each ending with that player's move.

    A second-player strategy also contains the empty play.
    """

    player: int
    plays: frozenset

    def __post_init__(self):
        if self.player not in (FIRST, SECOND):
            raise ValidationError("player must be 1 or 2")
        parity = 1 if self.player == FIRST else 0
        for P in self.plays:
            if len(P) % 2 != parity:
                raise ValidationError(f"play {P!r} does not end with a move of player {self.player}")

    def responses(self) -> dict:
        """prefix (ending with an opponent move) -> list of stored answers."""
        out: dict = {}
        for P in self.plays:
            if P:
                out.setdefault(P[:-1], []).append(P[-1])
        return out

    def sorted_plays(self) -> list:
        return sorted(self.plays, key=lambda P: (len(P), [repr(x) for x in P]))

    def __len__(self):
        return len(self.plays)


@dataclass
class SolveResult:
    winner: int
    strategy: Strategy | None
    mover_wins: dict = field(repr=False, default_factory=dict)


def _label(game: PositionalGame) -> dict:
    """mover_wins[p]: the player about to move at p can force a win."""
    win: dict = {}
    state: dict = {}
    stack = [(game.start, iter(game.moves(game.start)))]
    state[game.start] = 1
    while stack:
        p, it = stack[-1]
        advanced = False
        for q in it:
            s = state.get(q)
            if s == 1:
                raise GameCycle(f"cycle through {q!r}")
            if s is None:
                state[q] = 1
                stack.append((q, iter(game.moves(q))))
                advanced = True
                break
        if advanced:
            continue
        stack.pop()
        state[p] = 2
        win[p] = any(not win[q] for q in game.moves(p))
    return win


def _winning_play_tree(game, win, player) -> frozenset:
    plays = set()
    frontier = [()] if player == SECOND else []
    if player == FIRST:
        first = next(q for q in game.moves(game.start) if not win[q])
        frontier = [(first,)]
    plays.update(frontier)
    while frontier:
        nxt = []
        for P in frontier:
            for m in game.moves(game.at(P)):
                answers = [q for q in game.moves(m) if not win[q]]
                if answers:
                    Q = P + (m, answers[0])
                    plays.add(Q)
                    nxt.append(Q)
        frontier = nxt
    return frozenset(plays)


def solve_game(game: PositionalGame, *, materialize=True) -> SolveResult:
    """Backward induction on the reachable, necessarily acyclic, part of the game."""
    win = _label(game)
    winner = FIRST if win[game.start] else SECOND
    strat = Strategy(winner, _winning_play_tree(game, win, winner)) if materialize else None
    return SolveResult(winner, strat, win)


# -- predicates ------------------------------------------------------------------


@dataclass
class StrategyReport:
    is_strategy: bool
    is_winning: bool
    is_reduced: bool | None = None
    splice_closed: bool | None = None
    witness: object = None
    detail: str = ""

    @property
    def ok(self) -> bool:
        flags = [self.is_strategy, self.is_winning]
        flags += [x for x in (self.is_reduced, self.splice_closed) if x is not None]
        return all(flags)


def _structure_fault(game, sigma: Strategy):
    """First violation of the strategy definition, or None.  Returns (fault, stuck)."""
    plays = sigma.plays
    resp = sigma.responses()
    stuck = None
    for P in sigma.sorted_plays():
        if not game.is_legal(P):
            return ("illegal play", P), stuck
        if len(P) >= 2 and P[:-2] not in plays and not (sigma.player == FIRST and len(P) == 1):
            return ("not closed under 2-truncation", P), stuck
    if sigma.player == FIRST:
        starts = [P for P in plays if len(P) == 1]
        if len(starts) > 1:
            return ("several first moves", starts[0]), stuck
        if not starts:
            if game.moves(game.start):
                return ("no first move", ()), stuck
            stuck = ()
            return None, stuck
        roots = starts
    else:
        if () not in plays:
            return ("empty play missing", ()), stuck
        roots = [()]
    todo = list(roots)
    while todo:
        P = todo.pop()
        for m in game.moves(game.at(P)):
            Pm = P + (m,)
            answers = resp.get(Pm, [])
            if len(answers) > 1:
                return ("several answers", Pm), stuck
            if not answers:
                if game.moves(m):
                    return ("missing answer", Pm), stuck
                continue
            todo.append(Pm + (answers[0],))
    # every stored play must be reachable from the roots
    reach, todo = set(roots), list(roots)
    while todo:
        P = todo.pop()
        for m in game.moves(game.at(P)):
            for a in resp.get(P + (m,), []):
                reach.add(P + (m, a))
                todo.append(P + (m, a))
    extra = plays - reach
    if extra:
        return ("unreachable stored play", min(extra, key=len)), stuck
    return None, stuck


def _first_stuck(game, sigma: Strategy):
    """A play after which the strategy's owner has to move but cannot."""
    if sigma.player == FIRST and not sigma.plays:
        return ()
    for P in sigma.sorted_plays():
        for m in game.moves(game.at(P)):
            if not game.moves(m):
                return P + (m,)
    return None


def is_reduced(game, sigma: Strategy, order: PositionOrder):
    """Witness pair (P, Q) violating reducedness, or None."""
    by_len: dict = {}
    for P in sigma.plays:
        by_len.setdefault(len(P), []).append(P)
    for n2, group in by_len.items():
        if n2 < 3:
            continue
        buckets: dict = {}
        for P in group:
            buckets.setdefault(P[: n2 - 1 : 2], []).append(P)
        for same in buckets.values():
            for P in same:
                for Q in same:
                    if Q[-1] in game.moves(P[-2]) and order.key(P[-1]) > order.key(Q[-1]):
                        return (P, Q)
    return None


def splice_fault(game, sigma: Strategy):
    """(P, Q, i) with P, Q agreeing on first-player moves through odd i whose splice is missing."""
    plays = sigma.plays
    for P in plays:
        for Q in plays:
            for i in range(1, min(len(P), len(Q)) + 1, 2):
                if P[0:i:2] != Q[0:i:2]:
                    break
                if P[:i] + Q[i:] not in plays:
                    return (P, Q, i)
    return None


def check_strategy(game: PositionalGame, sigma: Strategy, order: PositionOrder | None = None) -> StrategyReport:
    fault, stuck = _structure_fault(game, sigma)
    if fault is not None:
        return StrategyReport(False, False, witness=fault[1], detail=fault[0])
    stuck = _first_stuck(game, sigma) if stuck is None else stuck
    winning = stuck is None
    rep = StrategyReport(True, winning, witness=stuck, detail="" if winning else "owner stuck")
    if sigma.player == FIRST:
        sp = splice_fault(game, sigma)
        rep.splice_closed = sp is None
        if sp is not None and rep.witness is None:
            rep.witness, rep.detail = sp, "splice missing"
        if order is not None:
            bad = is_reduced(game, sigma, order)
            rep.is_reduced = bad is None
            if bad is not None and rep.witness is None:
                rep.witness, rep.detail = bad, "not reduced"
    return rep


# -- reduction ----------------------------------------------------------------------


def reduce_strategy(game: PositionalGame, sigma: Strategy, order: PositionOrder | None = None, *, with_aux=False):
    """A reduced winning strategy for the first player built from a winning one.

    Each play s of the new strategy carries an auxiliary play s' of sigma
    ending at the same position.  After an opponent move m the answer is the
    pair (m', u) with s'm'u in sigma and smu legal, u least and then m' least.
    """
    if sigma.player != FIRST:
        raise ValidationError("only first-player strategies are reduced")
    order = order or PositionOrder.construction(game)
    firsts = [P for P in sigma.plays if len(P) == 1]
    if len(firsts) != 1:
        raise ValidationError("strategy is not winning: no unique first move")
    index: dict = {}
    for P in sigma.plays:
        if len(P) >= 3:
            index.setdefault(P[:-2], []).append((P[-2], P[-1]))
    out, aux = set(), {}
    s0 = firsts[0]
    out.add(s0)
    aux[s0] = s0
    todo = [s0]
    limit = len(game.positions) + 1
    while todo:
        s = todo.pop()
        if len(s) > limit:
            raise ValidationError("play longer than the position count; the game is not acyclic")
        sp = aux[s]
        options = index.get(sp, [])
        for m in game.moves(game.at(s)):
            X = [(mp, u) for mp, u in options if u in game.moves(m)]
            if not X:
                raise ValidationError(f"strategy is not winning: no answer after {s + (m,)!r}")
            mp, u = min(X, key=lambda pair: (order.key(pair[1]), order.key(pair[0])))
            t = s + (m, u)
            out.add(t)
            aux[t] = sp + (mp, u)
            todo.append(t)
    reduced = Strategy(FIRST, frozenset(out))
    return (reduced, aux) if with_aux else reduced


__all__ = [
    "FIRST",
    "SECOND",
    "GameCycle",
    "PositionalGame",
    "PositionOrder",
    "Strategy",
    "SolveResult",
    "StrategyReport",
    "solve_game",
    "check_strategy",
    "is_reduced",
    "splice_fault",
    "reduce_strategy",
]
