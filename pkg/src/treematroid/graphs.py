"""Graphs, tree decompositions, torsos, precircuits and the graph game.

Edge sets of a torso are handled as bitmasks over the torso's edge list
(real edges first, then dummies).  Over GF(2) an edge set with even degree
everywhere is a cycle-space member and a cut is a cut-space member, so each
torso also yields a presentation for the bridge to trees of presentations.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import cached_property

import networkx as nx
from networkx.algorithms.approximation import treewidth_min_fill_in

from .algebra import DEFAULT_ENUM_BUDGET, FieldSpec, SparseVec, Subspace, complement
from .errors import BudgetExceeded, ValidationError
from .games import PositionalGame
from .presentation import Presentation
from .tree import TreeOfPresentations

GF2 = FieldSpec.gf(2)


@dataclass(frozen=True)
class Graph:
    vertices: tuple
    edges: tuple  # (name, u, v); parallel edges and loops allowed

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise ValidationError("repeated vertex")
        names = [e[0] for e in self.edges]
        if len(set(names)) != len(names):
            raise ValidationError("repeated edge name")
        for name, u, v in self.edges:
            if u not in vs or v not in vs:
                raise ValidationError(f"edge {name!r} has an endpoint outside the vertex set")

    @classmethod
    def from_networkx(cls, g) -> Graph:
        verts = [str(v) for v in g.nodes()]
        edges = []
        for u, v in g.edges():
            a, b = sorted((str(u), str(v)), key=verts.index)
            edges.append((f"{a}{b}" if len(a) == len(b) == 1 else f"{a}-{b}", a, b))
        return cls(verts, edges)

    @property
    def edge_names(self) -> tuple:
        return tuple(e[0] for e in self.edges)

    @cached_property
    def _ends(self) -> dict:
        return {name: (u, v) for name, u, v in self.edges}

    def ends(self, name) -> tuple:
        return self._ends[name]

    def to_networkx(self) -> nx.MultiGraph:
        g = nx.MultiGraph()
        g.add_nodes_from(self.vertices)
        for name, u, v in self.edges:
            g.add_edge(u, v, key=name)
        return g

    def is_connected(self) -> bool:
        return len(self.vertices) > 0 and nx.is_connected(self.to_networkx())


def subdivide(G: Graph) -> Graph:
    """Replace each edge by a path of length two through a new midpoint."""
    verts = list(G.vertices)
    edges = []
    for name, u, v in G.edges:
        m = f"{name}*"
        verts.append(m)
        edges.append((f"{name}.1", u, m))
        edges.append((f"{name}.2", m, v))
    return Graph(verts, edges)


@dataclass(frozen=True)
class TreeDecomposition:
    nodes: tuple
    tree_edges: tuple
    parts: dict
    edge_part: dict

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "tree_edges", tuple(tuple(e) for e in self.tree_edges))
        object.__setattr__(self, "parts", {t: frozenset(self.parts[t]) for t in self.nodes})
        object.__setattr__(self, "edge_part", dict(self.edge_part))

    def neighbors(self, t) -> list:
        return [b if a == t else a for a, b in self.tree_edges if t in (a, b)]

    def validate(self, G: Graph) -> None:
        ids = set(self.nodes)
        if not self.nodes:
            raise ValidationError("a tree decomposition needs a node")
        if len(self.tree_edges) != len(self.nodes) - 1:
            raise ValidationError("decomposition tree has the wrong number of edges")
        T = nx.Graph()
        T.add_nodes_from(self.nodes)
        for a, b in self.tree_edges:
            if a not in ids or b not in ids:
                raise ValidationError(f"tree edge {a!r}-{b!r} uses an unknown node")
            T.add_edge(a, b)
        if not nx.is_tree(T):
            raise ValidationError("decomposition graph is not a tree")
        vs = set(G.vertices)
        for t, part in self.parts.items():
            if not part <= vs:
                raise ValidationError(f"part {t!r} has vertices outside the graph")
        for v in G.vertices:
            holders = [t for t in self.nodes if v in self.parts[t]]
            if not holders:
                raise ValidationError(f"vertex {v!r} lies in no part")
            if not nx.is_connected(T.subgraph(holders)):
                raise ValidationError(f"parts containing {v!r} are not connected in the tree")
        for name, u, v in G.edges:
            t = self.edge_part.get(name)
            if t is None:
                raise ValidationError(f"edge {name!r} is not assigned to a part")
            if t not in ids or u not in self.parts[t] or v not in self.parts[t]:
                raise ValidationError(f"edge {name!r} does not lie in its part {t!r}")
        extra = set(self.edge_part) - set(G.edge_names)
        if extra:
            raise ValidationError(f"unknown edges assigned: {sorted(extra)}")


def single_part_td(G: Graph) -> TreeDecomposition:
    return TreeDecomposition(("t0",), (), {"t0": G.vertices}, {name: "t0" for name in G.edge_names})


def generate_td(G: Graph) -> TreeDecomposition:
    """A valid decomposition from the min-fill-in heuristic; each edge goes to its first bag."""
    g = nx.Graph()
    g.add_nodes_from(G.vertices)
    g.add_edges_from((u, v) for _, u, v in G.edges if u != v)
    _, dec = treewidth_min_fill_in(g)
    pos = {v: i for i, v in enumerate(G.vertices)}
    bags = sorted(dec.nodes(), key=lambda b: (sorted(pos[v] for v in b)))
    names = {b: f"t{i}" for i, b in enumerate(bags)}
    tree_edges = sorted(((names[a], names[b]) for a, b in dec.edges()), key=lambda e: (int(e[0][1:]), int(e[1][1:])))
    parts = {names[b]: b for b in bags}
    edge_part = {}
    for name, u, v in G.edges:
        edge_part[name] = next(names[b] for b in bags if u in b and v in b)
    td = TreeDecomposition(tuple(names[b] for b in bags), tuple(tree_edges), parts, edge_part)
    td.validate(G)
    return td


# -- torsos -------------------------------------------------------------------------


@dataclass(frozen=True)
class Torso:
    node: object
    vertices: tuple
    edges: tuple  # (name, u, v): real edges then dummies
    dummies: dict  # neighbour -> tuple of dummy names

    @property
    def edge_names(self) -> tuple:
        return tuple(e[0] for e in self.edges)

    @property
    def dummy_names(self) -> frozenset:
        return frozenset(n for ds in self.dummies.values() for n in ds)

    @property
    def real_names(self) -> tuple:
        d = self.dummy_names
        return tuple(n for n in self.edge_names if n not in d)


def dummy_name(td: TreeDecomposition, t, s, v, w) -> str:
    a, b = sorted((t, s), key=td.nodes.index)
    return f"({a}{b},{v},{w})" if len(str(a)) + len(str(b)) <= 2 else f"({a}-{b},{v},{w})"


def torso_build(G: Graph, td: TreeDecomposition, t) -> Torso:
    """The part at t plus one dummy edge per pair of vertices shared with each neighbour."""
    if t not in td.parts:
        raise ValidationError(f"unknown decomposition node {t!r}")
    pos = {v: i for i, v in enumerate(G.vertices)}
    verts = tuple(sorted(td.parts[t], key=pos.__getitem__))
    real = [e for e in G.edges if td.edge_part[e[0]] == t]
    dummies, extra = {}, []
    for s in td.neighbors(t):
        common = sorted(td.parts[t] & td.parts[s], key=pos.__getitem__)
        names = []
        for v, w in itertools.combinations(common, 2):
            name = dummy_name(td, t, s, v, w)
            names.append(name)
            extra.append((name, v, w))
        dummies[s] = tuple(names)
    return Torso(t, verts, tuple(real) + tuple(extra), dummies)


class _TorsoMasks:
    """Bitmask views of one torso: edge bits, cycle-space basis, vertex stars."""

    def __init__(self, torso: Torso):
        self.torso = torso
        self.names = torso.edge_names
        self.bit = {n: 1 << i for i, n in enumerate(self.names)}
        self.dummy_mask = {s: self.mask(ds) for s, ds in torso.dummies.items()}
        self.real_mask = self.mask(torso.real_names)
        star = {v: 0 for v in torso.vertices}
        for name, u, v in torso.edges:
            if u != v:
                star[u] ^= self.bit[name]
                star[v] ^= self.bit[name]
        self.star = star

    def mask(self, names) -> int:
        m = 0
        for n in names:
            m |= self.bit[n]
        return m

    def unmask(self, m) -> frozenset:
        return frozenset(n for i, n in enumerate(self.names) if m >> i & 1)

    def is_even(self, m) -> bool:
        return all(bin(m & s).count("1") % 2 == 0 for s in self.star.values())

    @cached_property
    def cycle_basis(self) -> list:
        rows = [self._vec(self.star[v]) for v in self.torso.vertices]
        U = Subspace(GF2, self.names, rows)
        return [self.mask(b.support) for b in complement(U).basis]

    def _vec(self, m) -> SparseVec:
        return SparseVec(GF2, {n: 1 for n in self.unmask(m)})

    def even_sets(self, budget=DEFAULT_ENUM_BUDGET) -> list:
        basis = self.cycle_basis
        if 1 << len(basis) > budget:
            raise BudgetExceeded("even subgraph enumeration", 1 << len(basis), budget)
        return _xor_span(basis)

    def cuts(self, budget=DEFAULT_ENUM_BUDGET) -> list:
        verts = self.torso.vertices
        if len(verts) > 1 and 1 << (len(verts) - 1) > budget:
            raise BudgetExceeded("cut enumeration", 1 << (len(verts) - 1), budget)
        out = set()
        for bits in range(1 << max(0, len(verts) - 1)):
            m = 0
            for i, v in enumerate(verts[1:]):
                if bits >> i & 1:
                    m ^= self.star[v]
            out.add(m)
        return sorted(out)


def _xor_span(basis) -> list:
    out = [0]
    for b in basis:
        out += [x ^ b for x in out]
    return out


class GraphTD:
    """A graph with a validated decomposition, its torsos and their masks."""

    def __init__(self, G: Graph, td: TreeDecomposition):
        td.validate(G)
        self.G, self.td = G, td
        self.torsos = {t: torso_build(G, td, t) for t in td.nodes}
        self.masks = {t: _TorsoMasks(self.torsos[t]) for t in td.nodes}

    def root_of(self, e):
        return self.td.edge_part[e]

    def children(self, root) -> dict:
        ch, seen, q = {t: [] for t in self.td.nodes}, {root}, deque([root])
        while q:
            t = q.popleft()
            for s in self.td.neighbors(t):
                if s not in seen:
                    seen.add(s)
                    ch[t].append(s)
                    q.append(s)
        return ch

    def subtrees(self, cap=16):
        nodes = self.td.nodes
        if len(nodes) > cap:
            raise BudgetExceeded("subtree enumeration", 1 << len(nodes), 1 << cap)
        for k in range(1, len(nodes) + 1):
            for S in itertools.combinations(nodes, k):
                if _connected_in(self.td, S):
                    yield frozenset(S)


def _connected_in(td, S) -> bool:
    S = set(S)
    start = next(iter(S))
    seen, todo = {start}, [start]
    while todo:
        for u in td.neighbors(todo.pop()):
            if u in S and u not in seen:
                seen.add(u)
                todo.append(u)
    return seen == S


# -- precircuits ------------------------------------------------------------------


@dataclass(frozen=True)
class PreCircuit:
    subtree: frozenset
    assignment: tuple  # ((t, frozenset of torso edge names), ...)
    cocircuit: bool = False

    def underlying(self, real) -> frozenset:
        out = set()
        for _, o in self.assignment:
            out |= o
        return frozenset(out) & frozenset(real)


def _members(gt: GraphTD, cocircuit, budget) -> dict:
    return {t: (m.cuts(budget) if cocircuit else m.even_sets(budget)) for t, m in gt.masks.items()}


def enumerate_precircuits(G: Graph, td: TreeDecomposition, cocircuit=False, *, budget=DEFAULT_ENUM_BUDGET, gt=None) -> list:
    """Every precircuit (or precocircuit) of the decomposition."""
    gt = gt or GraphTD(G, td)
    members = _members(gt, cocircuit, budget)
    out = []
    for S in gt.subtrees():
        root = next(t for t in td.nodes if t in S)
        order, parent, seen = [root], {root: None}, {root}
        q = deque([root])
        while q:
            t = q.popleft()
            for u in td.neighbors(t):
                if u in S and u not in seen:
                    seen.add(u)
                    parent[u] = t
                    order.append(u)
                    q.append(u)
        outside = {}
        for t in S:
            m = gt.masks[t]
            outside[t] = 0
            for u in td.neighbors(t):
                if u not in S:
                    outside[t] |= m.dummy_mask[u]
        cands = {t: [x for x in members[t] if not x & outside[t]] for t in S}

        def extend(i, chosen):
            if i == len(order):
                out.append(
                    PreCircuit(S, tuple((t, gt.masks[t].unmask(chosen[t])) for t in order), cocircuit)
                )
                if len(out) > budget:
                    raise BudgetExceeded("precircuit enumeration", len(out), budget)
                return
            t = order[i]
            p = parent[t]
            for x in cands[t]:
                if p is not None:
                    mine = gt.masks[t].unmask(x & gt.masks[t].dummy_mask[p])
                    theirs = gt.masks[p].unmask(chosen[p] & gt.masks[p].dummy_mask[t])
                    if mine != theirs:
                        continue
                chosen[t] = x
                extend(i + 1, chosen)
                del chosen[t]

        extend(0, {})
    return out


def underlying_sets(G: Graph, td: TreeDecomposition, cocircuit=False, **kw) -> frozenset:
    real = G.edge_names
    return frozenset(p.underlying(real) for p in enumerate_precircuits(G, td, cocircuit, **kw))


def minimal_nonempty(sets) -> frozenset:
    out = []
    for s in sorted((s for s in sets if s), key=len):
        if not any(o <= s for o in out):
            out.append(s)
    return frozenset(out)


# -- oracles from graph theory -------------------------------------------------------


def graph_cycles(G: Graph) -> frozenset:
    """Edge sets of cycles: loops, parallel pairs, and simple cycles with every choice of parallel edge."""
    out = set()
    for name, u, v in G.edges:
        if u == v:
            out.add(frozenset([name]))
    simple = nx.Graph()
    simple.add_nodes_from(G.vertices)
    by_pair: dict = {}
    for name, u, v in G.edges:
        if u != v:
            by_pair.setdefault(frozenset((u, v)), []).append(name)
            simple.add_edge(u, v)
    for names in by_pair.values():
        for a, b in itertools.combinations(names, 2):
            out.add(frozenset((a, b)))
    for cyc in nx.simple_cycles(simple):
        if len(cyc) < 3:
            continue
        pairs = [frozenset((cyc[i], cyc[(i + 1) % len(cyc)])) for i in range(len(cyc))]
        for choice in itertools.product(*(by_pair[p] for p in pairs)):
            out.add(frozenset(choice))
    return frozenset(out)


def graph_bonds(G: Graph) -> frozenset:
    """Minimal nonempty edge cuts: delta(S) with both sides inducing connected subgraphs."""
    g = G.to_networkx()
    verts = list(G.vertices)
    out = set()
    comps = list(nx.connected_components(g))
    for comp in comps:
        cv = [v for v in verts if v in comp]
        if len(cv) < 2:
            continue
        first, rest = cv[0], cv[1:]
        for bits in range(1 << len(rest)):
            S = {first} | {v for i, v in enumerate(rest) if bits >> i & 1}
            T = set(cv) - S
            if not T:
                continue
            if not nx.is_connected(g.subgraph(S)) or not nx.is_connected(g.subgraph(T)):
                continue
            out.add(frozenset(name for name, u, v in G.edges if (u in S) != (v in S)))
    return frozenset(out)


# -- the bridge -------------------------------------------------------------------------


def torso_presentation(torso: Torso) -> Presentation:
    m = _TorsoMasks(torso)
    V = Subspace(GF2, m.names, [m._vec(b) for b in m.cycle_basis])
    return Presentation(V, complement(V))


def td_to_presentations(G: Graph, td: TreeDecomposition) -> TreeOfPresentations:
    td.validate(G)
    nodes = {t: torso_presentation(torso_build(G, td, t)) for t in td.nodes}
    return TreeOfPresentations(nodes, td.tree_edges)


# -- the graph game ------------------------------------------------------------------


def build_graph_game(G: Graph, td: TreeDecomposition, e, P, Q, *, gt=None) -> PositionalGame:
    """Sarah offers even edge sets avoiding Q, Colin names their trace on a dummy set."""
    gt = gt or GraphTD(G, td)
    P, Q = frozenset(P), frozenset(Q)
    names = set(G.edge_names)
    if e not in names or P & Q or e in P | Q or P | Q | {e} != names:
        raise ValidationError("P, Q and e must partition the edges")
    root = gt.root_of(e)
    children = gt.children(root)
    xsets = {}
    for t, m in gt.masks.items():
        qmask = m.mask(n for n in m.names if n in Q)
        xsets[t] = [x for x in m.even_sets() if not x & qmask]
    ebit = gt.masks[root].bit[e]
    by_trace = {}
    for t in td.nodes:
        for u in children[t]:
            mu = gt.masks[u]
            dm = mu.dummy_mask[t]
            idx: dict = {}
            for x in xsets[u]:
                tr = mu.unmask(x & dm)
                if tr:
                    idx.setdefault(tr, []).append(x)
            by_trace[(t, u)] = idx
    succ: dict = {}
    start = "a"
    first = [("X", root, x) for x in xsets[root] if x & ebit]
    succ[start] = first
    order, seen, q = [start], {start}, deque()
    for p in first:
        seen.add(p)
        order.append(p)
        q.append(p)
    while q:
        pos = q.popleft()
        if pos[0] == "X":
            _, t, x = pos
            m = gt.masks[t]
            nxt = []
            for u in children[t]:
                y = m.unmask(x & m.dummy_mask[u])
                if y:
                    nxt.append(("Y", (t, u), y))
        else:
            _, (t, u), y = pos
            nxt = [("X", u, x) for x in by_trace[(t, u)].get(y, [])]
        succ[pos] = nxt
        for p in nxt:
            if p not in seen:
                seen.add(p)
                order.append(p)
                q.append(p)
    return PositionalGame(start, succ, order)


def graph_witness(G: Graph, e, P, Q) -> tuple:
    """('circuit', C) with e in C inside P+e, else ('bond', D) with e in D inside Q+e."""
    u, v = G.ends(e)
    P, Q = frozenset(P), frozenset(Q)
    if u == v:
        return ("circuit", frozenset([e]))
    g = nx.MultiGraph()
    g.add_nodes_from(G.vertices)
    for name, a, b in G.edges:
        if name in P:
            g.add_edge(a, b, key=name)
    if nx.has_path(g, u, v):
        path = nx.shortest_path(g, u, v)
        names = [next(iter(g.get_edge_data(a, b))) for a, b in zip(path, path[1:])]
        return ("circuit", frozenset(names) | {e})
    side = nx.node_connected_component(g, u)
    return ("bond", frozenset(name for name, a, b in G.edges if (a in side) != (b in side)))


def graph_partitions(G: Graph, limit=None, rng=None):
    """Partitions (e, P, Q) of the edges; all of them, or ``limit`` distinct seeded samples."""
    names = G.edge_names
    total = len(names) * (1 << max(0, len(names) - 1))
    if limit is None or total <= limit:
        for e in names:
            rest = [x for x in names if x != e]
            for bits in range(1 << len(rest)):
                P = frozenset(x for i, x in enumerate(rest) if bits >> i & 1)
                yield e, P, frozenset(rest) - P
        return
    seen = set()
    while len(seen) < limit:
        e = rng.choice(names)
        rest = [x for x in names if x != e]
        P = frozenset(x for x in rest if rng.random() < 0.5)
        if (e, P) not in seen:
            seen.add((e, P))
            yield e, P, frozenset(rest) - P


def connected_atlas(max_vertices=6) -> list:
    """All connected graphs with 1..max_vertices vertices from the networkx atlas."""
    return [
        Graph.from_networkx(g)
        for g in nx.graph_atlas_g()
        if 1 <= g.number_of_nodes() <= max_vertices and nx.is_connected(g)
    ]


__all__ = [
    "Graph",
    "TreeDecomposition",
    "Torso",
    "GraphTD",
    "PreCircuit",
    "subdivide",
    "single_part_td",
    "generate_td",
    "torso_build",
    "enumerate_precircuits",
    "underlying_sets",
    "minimal_nonempty",
    "graph_cycles",
    "graph_bonds",
    "torso_presentation",
    "td_to_presentations",
    "build_graph_game",
    "graph_witness",
    "graph_partitions",
    "connected_atlas",
]
