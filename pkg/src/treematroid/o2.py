"""Circuit and cocircuit games on a rooted tree of presentations, and linear-algebra (O2) witnesses.

Positions of the circuit game:

* ``START``;
* ``("X", t, v)`` with v a local vector at node t avoiding Q (Sarah's moves);
* ``("Y", (t, u), w)`` with u a child of t and w a nonzero functional on E(tu)
  (Colin's challenges).  By default one representative per line is used,
  since the non-orthogonality relation ignores nonzero scalars.

The cocircuit game is the circuit game of the dual tree with P and Q swapped,
played with Colin moving first.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .algebra import DEFAULT_ENUM_BUDGET, Subspace, dot
from .errors import ValidationError
from .games import (
    FIRST,
    PositionalGame,
    PositionOrder,
    Strategy,
    check_strategy,
    is_reduced,
)
from .tree import PreVector, TreeOfPresentations, agreement_families

START = "a"
SARAH, COLIN = "Sarah", "Colin"


@dataclass(frozen=True)
class O2Instance:
    tree: TreeOfPresentations
    e: object
    P: frozenset
    Q: frozenset

    def __post_init__(self):
        object.__setattr__(self, "P", frozenset(self.P))
        object.__setattr__(self, "Q", frozenset(self.Q))
        real = set(self.tree.real_edges)
        if self.e not in real:
            raise ValidationError(f"{self.e!r} is not a real edge of the tree")
        if self.P & self.Q or self.e in self.P | self.Q:
            raise ValidationError("P, Q and e must be pairwise disjoint")
        if self.P | self.Q | {self.e} != real:
            raise ValidationError("P, Q and e must partition the real edges")

    @property
    def root(self):
        return self.tree.node_of(self.e)

    def dual(self) -> O2Instance:
        """Same partition on the tree with vectors and covectors exchanged, P and Q swapped."""
        t = self.tree
        flipped = t.with_presentations({n: t.pres(n).dual() for n in t.nodes})
        return O2Instance(flipped, self.e, self.Q, self.P)


def partitions(tree: TreeOfPresentations):
    """Every (e, P, Q) with P, Q, {e} partitioning the real edges, e in ground order then P by bitmask."""
    real = tree.real_edges
    for e in real:
        rest = [x for x in real if x != e]
        for mask in range(1 << len(rest)):
            P = frozenset(x for i, x in enumerate(rest) if mask >> i & 1)
            yield O2Instance(tree, e, P, frozenset(rest) - P)


def build_circuit_game(inst: O2Instance, dual=False, *, projective=True, budget=DEFAULT_ENUM_BUDGET) -> PositionalGame:
    """The circuit game of ``inst``; with ``dual`` the cocircuit game (Colin moves first)."""
    if dual:
        inst = inst.dual()
    tree = inst.tree
    if not tree.field.is_finite:
        raise ValidationError("games need a finite field; use o2_witness over the rationals")
    children = tree.children(inst.root)
    Q = inst.Q
    local = {}
    for t in tree.nodes:
        local[t] = [v for v in tree.pres(t).vspace.members(budget) if v and not (v.support & Q)]
    challenges = {}
    for t in tree.nodes:
        for u in children[t]:
            full = Subspace.full(tree.field, tree.shared(t, u))
            challenges[(t, u)] = full.projective_members(budget) if projective else [w for w in full.members(budget) if w]

    succ: dict = {}
    start_moves = [("X", inst.root, v) for v in local[inst.root] if inst.e in v.support]
    succ[START] = start_moves
    order, seen = [START], {START}
    q = deque()
    for p in start_moves:
        if p not in seen:
            seen.add(p)
            order.append(p)
            q.append(p)
    while q:
        pos = q.popleft()
        if pos[0] == "X":
            _, t, v = pos
            nxt = []
            for u in children[t]:
                for w in challenges[(t, u)]:
                    if dot(v, w) != 0:
                        nxt.append(("Y", (t, u), w))
        else:
            _, (t, u), w = pos
            nxt = [("X", u, v) for v in local[u] if dot(v, w) != 0]
        succ[pos] = nxt
        for p in nxt:
            if p not in seen:
                seen.add(p)
                order.append(p)
                q.append(p)
    return PositionalGame(START, succ, order)


def circuit_winner(result_winner: int, dual=False) -> str:
    """Name of the winner given the first/second player outcome."""
    if dual:
        return COLIN if result_winner == FIRST else SARAH
    return SARAH if result_winner == FIRST else COLIN


# -- witnesses -------------------------------------------------------------------


@dataclass(frozen=True)
class O2Witness:
    kind: str  # "vector" | "covector"
    carrier: PreVector

    def support(self, tree) -> frozenset:
        return self.carrier.support(tree)


def decompose_family(tree: TreeOfPresentations, family: dict, root, covector=False) -> PreVector:
    """The pre-vector carried by the part of an agreement family that reaches ``root``.

    Tree edges on which the family restricts to zero are cut; the piece
    containing the root satisfies the matching and vanishing conditions.
    """
    S, todo = {root}, [root]
    while todo:
        t = todo.pop()
        for u in tree.neighbors(t):
            if u not in S and family[t].restrict(tree.shared(t, u)):
                S.add(u)
                todo.append(u)
    order = [t for t in tree.nodes if t in S]
    return PreVector(frozenset(S), tuple((t, family[t]) for t in order), covector)


def _side_witness(inst: O2Instance, covector: bool):
    tree = inst.tree
    avoid = inst.P if covector else inst.Q
    spaces = {}
    for t in tree.nodes:
        p = tree.pres(t)
        U = p.wspace if covector else p.vspace
        spaces[t] = U.restrict([x for x in U.ground if x not in avoid])
    root = inst.root
    for fam in agreement_families(tree, spaces, covector=covector):
        if fam[root][inst.e] != 0:
            return decompose_family(tree, fam, root, covector)
    return None


def o2_witness(inst: O2Instance) -> O2Witness:
    """A pre-vector through e inside P+e, or else a pre-covector through e inside Q+e."""
    pv = _side_witness(inst, covector=False)
    if pv is not None:
        return O2Witness("vector", pv)
    pw = _side_witness(inst, covector=True)
    if pw is None:
        raise AssertionError("neither side of the (O2) alternative has a witness")
    return O2Witness("covector", pw)


def check_witness(inst: O2Instance, wit: O2Witness) -> bool:
    wit.carrier.validate(inst.tree)
    supp = wit.support(inst.tree)
    side = inst.P if wit.kind == "vector" else inst.Q
    return inst.e in supp and supp <= side | {inst.e}


# -- sigma analysis ----------------------------------------------------------------


@dataclass
class SigmaReport:
    subtree: frozenset
    reduced: bool
    counts: list  # (sarah_history, (t, u), continuations, bound)
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations


def sarah_moves(play) -> tuple:
    return tuple(play[0::2])


def sigma_analysis(inst: O2Instance, sigma: Strategy, order: PositionOrder | None = None, game: PositionalGame | None = None) -> SigmaReport:
    """The subtree S_sigma and, per Sarah history and tree edge, the number of continuations.

    The count of distinct Sarah continuations from a history ending at t into
    a child u is bounded by |E(tu)| whenever sigma is reduced.
    """
    game = game or build_circuit_game(inst)
    order = order or PositionOrder.construction(game)
    rep = check_strategy(game, sigma)
    if sigma.player != FIRST or not (rep.is_strategy and rep.is_winning):
        raise ValidationError("sigma is not a winning strategy for Sarah")
    tree = inst.tree
    nodes = frozenset(p[1] for P in sigma.plays for p in P if p[0] == "X")
    tau = {sarah_moves(P) for P in sigma.plays}
    ext: dict = {}
    for s in tau:
        if len(s) >= 2:
            ext.setdefault(s[:-1], set()).add(s)
    children = tree.children(inst.root)
    counts, violations = [], []
    for s in sorted(tau, key=lambda h: (len(h), repr(h))):
        t = s[-1][1]
        for u in children[t]:
            n = sum(1 for s2 in ext.get(s, ()) if s2[-1][1] == u)
            bound = len(tree.shared(t, u))
            counts.append((s, (t, u), n, bound))
            if n > bound:
                violations.append((s, (t, u), n, bound))
    return SigmaReport(nodes, is_reduced(game, sigma, order) is None, counts, violations)


__all__ = [
    "START",
    "SARAH",
    "COLIN",
    "O2Instance",
    "O2Witness",
    "SigmaReport",
    "partitions",
    "build_circuit_game",
    "circuit_winner",
    "decompose_family",
    "o2_witness",
    "check_witness",
    "sarah_moves",
    "sigma_analysis",
]
