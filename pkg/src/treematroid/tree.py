"""Finite trees of presentations and the gluing construction.

Shared ("dummy") elements are recognised by label: an edge id that occurs in
two node grounds is shared by those nodes, which must be adjacent.  The glued
presentation lives on the remaining ("real") elements.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

from .algebra import (
    DEFAULT_ENUM_BUDGET,
    FieldSpec,
    SparseVec,
    Subspace,
    complement,
    dot,
    min_supports,
    nullspace,
    solve,
)
from .axioms import MatroidCert, Verdict, verify_matroid
from .errors import BudgetExceeded, HypothesisViolation, ValidationError
from .presentation import Presentation, pres_minor

FINITE_TREE = "finite-tree (end set vacuous)"
DEFAULT_NODE_CAP = 8


class TreeOfPresentations:
    def __init__(self, nodes, edges):
        """``nodes``: mapping node id -> Presentation (order is kept); ``edges``: node pairs."""
        self._pres = dict(nodes)
        self.nodes = tuple(self._pres)
        self.edges = tuple(tuple(e) for e in edges)
        self._validate()
        self._adj = {t: [] for t in self.nodes}
        for t, u in self.edges:
            self._adj[t].append(u)
            self._adj[u].append(t)
        owners = {}
        for t in self.nodes:
            for e in self._pres[t].ground:
                owners.setdefault(e, []).append(t)
        self._owners = owners
        self.real_edges = tuple(e for t in self.nodes for e in self._pres[t].ground if len(owners[e]) == 1)
        self.home = {e: owners[e][0] for e in self.real_edges}

    def _validate(self):
        if not self.nodes:
            raise ValidationError("a tree needs at least one node")
        fields = {p.field for p in self._pres.values()}
        if len(fields) != 1:
            raise ValidationError("node presentations use different fields")
        ids = set(self.nodes)
        for t, u in self.edges:
            if t not in ids or u not in ids or t == u:
                raise ValidationError(f"bad tree edge {t!r}-{u!r}")
        if len(self.edges) != len(self.nodes) - 1:
            raise ValidationError("edge count does not match a tree")
        adj = {t: set() for t in self.nodes}
        for t, u in self.edges:
            adj[t].add(u)
            adj[u].add(t)
        seen, todo = {self.nodes[0]}, [self.nodes[0]]
        while todo:
            for u in adj[todo.pop()]:
                if u not in seen:
                    seen.add(u)
                    todo.append(u)
        if seen != ids:
            raise ValidationError("the node graph is not connected")
        owners = {}
        for t in self.nodes:
            for e in self._pres[t].ground:
                owners.setdefault(e, []).append(t)
        for e, ts in owners.items():
            if len(ts) > 2:
                raise ValidationError(f"element {e!r} occurs in more than two node grounds")
            if len(ts) == 2 and ts[1] not in adj[ts[0]]:
                raise ValidationError(f"element {e!r} is shared by non-adjacent nodes {ts[0]!r}, {ts[1]!r}")

    # -- structure -------------------------------------------------------------

    @property
    def field(self) -> FieldSpec:
        return self._pres[self.nodes[0]].field

    def pres(self, t) -> Presentation:
        return self._pres[t]

    def presentations(self) -> dict:
        return dict(self._pres)

    def neighbors(self, t) -> list:
        return list(self._adj[t])

    def shared(self, t, u) -> tuple:
        """E(tu), in t's ground order."""
        other = set(self._pres[u].ground)
        return tuple(e for e in self._pres[t].ground if e in other)

    @property
    def dummy_edges(self) -> tuple:
        return tuple(e for t in self.nodes for e in self._pres[t].ground if len(self._owners[e]) == 2 and self._owners[e][0] == t)

    def real_of(self, t) -> tuple:
        return tuple(e for e in self._pres[t].ground if len(self._owners[e]) == 1)

    def node_of(self, e):
        ts = self._owners.get(e)
        if ts is None:
            raise ValidationError(f"{e!r} is not an element of the tree")
        return ts[0]

    def bfs_order(self, root) -> list:
        """Nodes breadth-first from root, children in input adjacency order."""
        order, parent = [root], {root: None}
        q = deque([root])
        while q:
            t = q.popleft()
            for u in self._adj[t]:
                if u not in parent:
                    parent[u] = t
                    order.append(u)
                    q.append(u)
        self._last_parent = parent
        return order

    def parents(self, root) -> dict:
        self.bfs_order(root)
        return dict(self._last_parent)

    def children(self, root) -> dict:
        par = self.parents(root)
        ch = {t: [] for t in self.nodes}
        for t in self.bfs_order(root):
            if par[t] is not None:
                ch[par[t]].append(t)
        return ch

    def branch(self, s, t) -> list:
        """Nodes u whose path from s passes through t (s adjacent to t)."""
        if t not in self._adj[s]:
            raise ValidationError(f"{s!r}-{t!r} is not a tree edge")
        out, todo, seen = [], [t], {s, t}
        while todo:
            x = todo.pop()
            out.append(x)
            for y in self._adj[x]:
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        return [u for u in self.nodes if u in set(out)]

    def induced(self, nodes) -> TreeOfPresentations:
        keep = set(nodes)
        return TreeOfPresentations(
            {t: self._pres[t] for t in self.nodes if t in keep},
            [(t, u) for t, u in self.edges if t in keep and u in keep],
        )

    def branch_tree(self, s, t) -> TreeOfPresentations:
        return self.induced(self.branch(s, t))

    def with_presentations(self, replace) -> TreeOfPresentations:
        return TreeOfPresentations({t: replace.get(t, self._pres[t]) for t in self.nodes}, self.edges)

    def minor(self, P=(), Q=()) -> TreeOfPresentations:
        """Per-node contraction of P and deletion of Q (both sets of real edges)."""
        P, Q = set(P), set(Q)
        if (P | Q) - set(self.real_edges):
            raise ValidationError("minors of a tree may only touch real edges")
        return self.with_presentations(
            {t: pres_minor(self._pres[t], P & set(p.ground), Q & set(p.ground)) for t, p in self._pres.items()}
        )

    def __repr__(self):
        return f"TreeOfPresentations(nodes={list(self.nodes)}, edges={list(self.edges)})"


def make_star(center: Presentation, leaves: dict, center_id="*") -> TreeOfPresentations:
    nodes = {center_id: center}
    nodes.update(leaves)
    return TreeOfPresentations(nodes, [(center_id, leaf) for leaf in leaves])


# -- agreement spaces ------------------------------------------------------------


def agreement_families(tree: TreeOfPresentations, spaces=None, covector=False) -> list:
    """Basis of {(x_t) : x_t in space(t), x_t|E(tu) = +-x_u|E(tu) on every tree edge}.

    The sign is + for vectors and - for covectors.  ``spaces`` overrides the
    per-node subspaces (same grounds as the node presentations).
    """
    f = tree.field
    if spaces is None:
        spaces = {t: (tree.pres(t).wspace if covector else tree.pres(t).vspace) for t in tree.nodes}
    offsets, total = {}, 0
    for t in tree.nodes:
        offsets[t] = total
        total += spaces[t].dim
    if total == 0:
        return []
    sign = f.one() if covector else f.neg(f.one())
    rows = []
    for t, u in tree.edges:
        for e in tree.shared(t, u):
            row = [f.zero()] * total
            St, Su = spaces[t], spaces[u]
            it, iu = St._index[e], Su._index[e]
            for k, r in enumerate(St.rows):
                row[offsets[t] + k] = r[it]
            for k, r in enumerate(Su.rows):
                row[offsets[u] + k] = f.mul(sign, r[iu])
            rows.append(row)
    coeff_basis = nullspace(rows, total, f) if rows else [
        [f.one() if j == i else f.zero() for j in range(total)] for i in range(total)
    ]
    out = []
    for c in coeff_basis:
        out.append({t: spaces[t].combine(c[offsets[t] : offsets[t] + spaces[t].dim]) for t in tree.nodes})
    return out


def underlying(tree: TreeOfPresentations, family: dict) -> SparseVec:
    real = set(tree.real_edges)
    out = {}
    for t, x in family.items():
        for e, c in x.items():
            if e in real:
                out[e] = c
    return SparseVec(tree.field, out)


def glued_spaces(tree: TreeOfPresentations) -> tuple[Subspace, Subspace]:
    f, real = tree.field, tree.real_edges
    V = Subspace(f, real, [underlying(tree, fam) for fam in agreement_families(tree)])
    W = Subspace(f, real, [underlying(tree, fam) for fam in agreement_families(tree, covector=True)])
    return V, W


@dataclass(frozen=True)
class GlueRequest:
    tree: TreeOfPresentations
    psi_policy: str = FINITE_TREE

    def __post_init__(self):
        if self.psi_policy != FINITE_TREE:
            raise ValidationError(f"only {FINITE_TREE!r} is supported")


def glue(req) -> Presentation:
    """The glued presentation of a finite tree (no ends, so no end set to choose)."""
    tree = req.tree if isinstance(req, GlueRequest) else req
    V, W = glued_spaces(tree)
    return Presentation(V, W)


# -- pre-vectors -------------------------------------------------------------------


@dataclass(frozen=True)
class PreVector:
    subtree: frozenset
    local: tuple  # ((node, SparseVec), ...)
    covector: bool = False

    @property
    def local_map(self) -> dict:
        return dict(self.local)

    def underlying(self, tree: TreeOfPresentations) -> SparseVec:
        return underlying(tree, self.local_map)

    def support(self, tree) -> frozenset:
        return self.underlying(tree).support

    def validate(self, tree: TreeOfPresentations):
        loc = self.local_map
        if set(loc) != set(self.subtree):
            raise ValidationError("local map does not match the subtree")
        if not _connected(tree, self.subtree):
            raise ValidationError("subtree is not connected")
        for t in self.subtree:
            space = tree.pres(t).wspace if self.covector else tree.pres(t).vspace
            if not space.contains(loc[t]):
                raise ValidationError(f"local vector at {t!r} is not in the node space")
            for u in tree.neighbors(t):
                E = tree.shared(t, u)
                here = loc[t].restrict(E)
                if u in self.subtree:
                    there = loc[u].restrict(E)
                    if self.covector:
                        there = -there
                    if here != there or not here:
                        raise ValidationError(f"matching fails on {t!r}-{u!r}")
                elif here:
                    raise ValidationError(f"nonzero toward the outside on {t!r}-{u!r}")


PreCovector = PreVector


def _connected(tree, S) -> bool:
    S = set(S)
    if not S:
        return False
    start = next(iter(S))
    seen, todo = {start}, [start]
    while todo:
        for u in tree.neighbors(todo.pop()):
            if u in S and u not in seen:
                seen.add(u)
                todo.append(u)
    return seen == S


def connected_subtrees(tree: TreeOfPresentations, cap=DEFAULT_NODE_CAP):
    n = len(tree.nodes)
    if n > cap:
        raise BudgetExceeded("subtree enumeration", 1 << n, 1 << cap)
    for k in range(1, n + 1):
        for S in itertools.combinations(tree.nodes, k):
            if _connected(tree, S):
                yield frozenset(S)


def enumerate_prevectors(tree: TreeOfPresentations, covector=False, *, budget=DEFAULT_ENUM_BUDGET, node_cap=DEFAULT_NODE_CAP):
    """Every pre-vector (or pre-covector) of a finite tree over a finite field."""
    f = tree.field
    if not f.is_finite:
        raise ValidationError("pre-vector enumeration needs a finite field")
    members = {}
    for t in tree.nodes:
        space = tree.pres(t).wspace if covector else tree.pres(t).vspace
        members[t] = space.members(budget)
    out = []
    for S in connected_subtrees(tree, node_cap):
        order, parent = _bfs_within(tree, S)

        def outside_zero(t, x):
            return all(not x.restrict(tree.shared(t, u)) for u in tree.neighbors(t) if u not in S)

        def extend(i, chosen):
            if i == len(order):
                out.append(PreVector(S, tuple((t, chosen[t]) for t in order), covector))
                if len(out) > budget:
                    raise BudgetExceeded("pre-vector enumeration", len(out), budget)
                return
            t = order[i]
            p = parent.get(t)
            for x in members[t]:
                if not outside_zero(t, x):
                    continue
                if p is not None:
                    E = tree.shared(t, p)
                    mine = x.restrict(E)
                    theirs = chosen[p].restrict(E)
                    if covector:
                        theirs = -theirs
                    if not mine or mine != theirs:
                        continue
                chosen[t] = x
                extend(i + 1, chosen)
                del chosen[t]

        extend(0, {})
    return out


def _bfs_within(tree, S):
    S = set(S)
    root = next(t for t in tree.nodes if t in S)
    order, parent = [root], {root: None}
    q = deque([root])
    while q:
        t = q.popleft()
        for u in tree.neighbors(t):
            if u in S and u not in parent:
                parent[u] = t
                order.append(u)
                q.append(u)
    return order, parent


def prevector_span(tree: TreeOfPresentations, covector=False, **kw) -> Subspace:
    vecs = [p.underlying(tree) for p in enumerate_prevectors(tree, covector, **kw)]
    return Subspace(tree.field, tree.real_edges, vecs)


def pairing_sum(tree: TreeOfPresentations, v: PreVector, w: PreVector):
    """Sum over common nodes of the local pairings; vanishes for matching pairs."""
    f = tree.field
    lv, lw = v.local_map, w.local_map
    total = f.zero()
    for t in v.subtree & w.subtree:
        total = f.add(total, dot(lv[t], lw[t]))
    return total


def neat_count(tree: TreeOfPresentations, v: PreVector, w: PreVector, node) -> int:
    """Number of shared sets at ``node`` meeting both local supports."""
    lv, lw = v.local_map, w.local_map
    if node not in lv or node not in lw:
        return 0
    sv, sw = lv[node].support, lw[node].support
    count = 0
    for u in tree.neighbors(node):
        E = set(tree.shared(node, u))
        if E & sv and E & sw:
            count += 1
    return count


# -- stars -------------------------------------------------------------------------


def check_star_shape(pres: Presentation, star: TreeOfPresentations, center) -> None:
    if center not in star.nodes:
        raise ValidationError(f"center {center!r} is not a node of the star")
    if not star.pres(center).same_as(pres):
        raise ValidationError("the star's center does not carry the given presentation")
    for t, u in star.edges:
        if center not in (t, u):
            raise ValidationError("a star has only center-leaf edges")
    for leaf in star.nodes:
        if leaf == center:
            continue
        F = set(star.shared(center, leaf))
        lg = set(star.pres(leaf).ground)
        if lg & set(pres.ground) != F:
            raise ValidationError(f"leaf {leaf!r} overlaps the center outside its shared set")


def check_stellar_instance(pres: Presentation, star: TreeOfPresentations, center="*", cap=12) -> Verdict:
    check_star_shape(pres, star, center)
    V, W = glued_spaces(star)
    if not V.is_orthogonal_to(W):
        return Verdict("stellar", False, None, "glued vectors and covectors are not orthogonal")
    if W != complement(V):
        return Verdict("stellar", False, None, "glued pair is not a complementary pair")
    cert = MatroidCert(V.ground, min_supports(V), min_supports(W))
    verdict = verify_matroid(cert, cap)
    if not verdict.ok:
        return Verdict("stellar", False, verdict.witness, verdict.detail)
    return Verdict("stellar", True, {"glued_ground": V.ground, "circuits": cert.circuits}, "stellar-consistent")


def extend_leaf_covector(pres: Presentation, family, F0, w0: SparseVec, Q, wfams, *, budget=DEFAULT_ENUM_BUDGET) -> SparseVec:
    """A covector w with w|F0 = w0, supp(w) inside Q and the family, and w|F in <wfams[F]>.

    Raises HypothesisViolation carrying an unblocked vector if some vector
    avoiding Q pairs nontrivially with w0 but with no listed covector.
    """
    f = pres.field
    family = [frozenset(F) for F in family]
    F0, Q = frozenset(F0), frozenset(Q)
    if F0 not in family:
        raise ValidationError("F0 must be a member of the family")
    for A, B in itertools.combinations(family, 2):
        if A & B:
            raise ValidationError("family members must be disjoint")
    if any(Q & F for F in family):
        raise ValidationError("Q must avoid every family member")
    if not w0.support <= F0:
        raise ValidationError("w0 must be supported in F0")
    others = [F for F in family if F != F0]
    wf = {frozenset(F): list(ws) for F, ws in dict(wfams).items()}

    for v in pres.vspace.members(budget):
        if v.support & Q or dot(v, w0) == 0:
            continue
        if not any(dot(w, v) != 0 for F in others for w in wf.get(F, [])):
            raise HypothesisViolation("a vector avoiding Q meets w0 but no listed covector", v)

    leaves = {}
    names = {}
    for i, F in enumerate(others):
        ground = [e for e in pres.ground if e in F]
        Wf = Subspace(f, ground, wf.get(F, []))
        leaves[f"leaf{i}"] = Presentation(complement(Wf), Wf)
        names[F] = f"leaf{i}"
    center = "center"
    star = make_star(pres, leaves, center)
    fams = agreement_families(star, covector=True)
    real = [e for e in pres.ground if e in set(star.real_edges)]
    rows, rhs = [], []
    for e in real:
        if e in F0:
            target = w0[e]
        elif e in Q:
            continue
        else:
            target = f.zero()
        rows.append([fam[center][e] for fam in fams])
        rhs.append(target)
    if not fams:
        coeffs = [] if all(x == 0 for x in rhs) else None
    else:
        coeffs = solve(rows, rhs, f) if rows else [f.zero()] * len(fams)
    if coeffs is None:
        raise AssertionError("stellar star failed to produce the covector")
    w = SparseVec(f, {})
    for c, fam in zip(coeffs, fams):
        if c != 0:
            w = w + fam[center].scale(c)
    return w


# -- the counterexample family --------------------------------------------------------


@dataclass
class CexInstance:
    tree: TreeOfPresentations
    prevector: PreVector
    precovector: PreVector
    center: str = "*"
    leaves: list = field(default_factory=list)

    @property
    def intersection(self) -> frozenset:
        return self.prevector.support(self.tree) & self.precovector.support(self.tree)


def default_cex_center(n: int, field: FieldSpec):
    """A cycle on e1..e(n+1) with a pendant edge f_i at each vertex."""
    m = n + 1
    es = [f"e{i}" for i in range(1, m + 1)]
    fs = [f"f{i}" for i in range(1, m + 1)]
    V = Subspace(field, es + fs, [SparseVec(field, {e: 1 for e in es})])
    pres = Presentation(V, complement(V))
    v = SparseVec(field, {e: 1 for e in es})
    w = SparseVec(field, {x: 1 for x in fs})
    return pres, v, w


def _find_cex_pair(pres: Presentation, n: int, budget):
    if not pres.field.is_finite:
        raise ValidationError("give v and w explicitly over the rationals")
    for v in pres.vspace.projective_members(budget):
        for w in pres.wspace.projective_members(budget):
            if len(v.support - w.support) >= n and len(w.support - v.support) >= n:
                return v, w
    return None


def gen_cex(n: int, center: Presentation | None = None, v=None, w=None, *, field=None, budget=DEFAULT_ENUM_BUDGET) -> CexInstance:
    """The n-leaf truncation of the star whose pre-vector/pre-covector supports meet in 2n leaf elements."""
    if n < 1:
        raise ValidationError("n must be positive")
    if center is None:
        center, v, w = default_cex_center(n, field or FieldSpec.gf(2))
    elif v is None or w is None:
        pair = _find_cex_pair(center, n, budget)
        if pair is None:
            raise ValidationError(f"the center has no vector/covector pair with {n} private elements on each side")
        v, w = pair
    f = center.field
    if not (center.vspace.contains(v) and center.wspace.contains(w)):
        raise ValidationError("v must be a vector and w a covector of the center")
    es = [e for e in center.ground if e in v.support and e not in w.support][:n]
    fs = [e for e in center.ground if e in w.support and e not in v.support][:n]
    if len(es) < n or len(fs) < n:
        raise ValidationError(f"the center has no vector/covector pair with {n} private elements on each side")
    taken = set(center.ground)

    def fresh(stem):
        name = stem
        while name in taken:
            name += "'"
        taken.add(name)
        return name

    nodes = {"*": center}
    vloc, wloc = [("*", v)], [("*", w)]
    leaves = []
    for i in range(n):
        e, fi = es[i], fs[i]
        g, h = fresh(f"g{i + 1}"), fresh(f"h{i + 1}")
        ground = (e, fi, g, h)
        Vi = Subspace(f, ground, [SparseVec(f, {e: 1}), SparseVec(f, {g: 1, h: 1})])
        Wi = Subspace(f, ground, [SparseVec(f, {fi: 1}), SparseVec(f, {g: 1, h: f.neg(1)})])
        name = str(i + 1)
        nodes[name] = Presentation(Vi, Wi)
        leaves.append(name)
        vloc.append((name, SparseVec(f, {e: v[e], g: v[e], h: v[e]})))
        wloc.append((name, SparseVec(f, {fi: f.neg(w[fi]), g: f.neg(w[fi]), h: w[fi]})))
    tree = TreeOfPresentations(nodes, [("*", leaf) for leaf in leaves])
    allnodes = frozenset(tree.nodes)
    pv = PreVector(allnodes, tuple(vloc), False)
    pw = PreVector(allnodes, tuple(wloc), True)
    pv.validate(tree)
    pw.validate(tree)
    return CexInstance(tree, pv, pw, "*", leaves)


__all__ = [
    "FINITE_TREE",
    "TreeOfPresentations",
    "GlueRequest",
    "PreVector",
    "PreCovector",
    "CexInstance",
    "make_star",
    "agreement_families",
    "underlying",
    "glued_spaces",
    "glue",
    "connected_subtrees",
    "enumerate_prevectors",
    "prevector_span",
    "pairing_sum",
    "neat_count",
    "check_star_shape",
    "check_stellar_instance",
    "extend_leaf_covector",
    "default_cex_center",
    "gen_cex",
]
