"""Base/cobase construction for glued trees of presentations.

``im_star`` extends independent X and coindependent Y on a star so that the
centre's real edges are covered and no component of the remaining minor
links two leaves.  ``build_base`` applies it node by node, breadth first from
a root, and certifies the eight recursion conditions along the way.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import SparseVec, Subspace, min_supports
from .axioms import SetSystemPair, Verdict, is_base
from .errors import HypothesisViolation, ValidationError
from .presentation import Presentation, independent_shrink, localize, pres_minor
from .tree import TreeOfPresentations, check_star_shape, glue, make_star

# -- linear helpers ------------------------------------------------------------


def dependent_witness(U: Subspace, X) -> frozenset | None:
    """A minimal nonempty support of U inside X, or None when X is independent."""
    X = set(X)
    R = U.restrict([e for e in U.ground if e in X])
    if R.dim == 0:
        return None
    return min(min_supports(R), key=lambda c: (len(c), sorted(map(str, c))))


def span_witness(U: Subspace, X, e) -> SparseVec | None:
    """A member of U with e in its support and support inside X + e."""
    keep = set(X) | {e}
    R = U.restrict([x for x in U.ground if x in keep])
    return next((b for b in R.basis if b[e] != 0), None)


def pres_components(pres: Presentation) -> list:
    """Connected components of the presented matroid.

    Read off the echelon form of the covectors: a pivot column and a free
    column are linked when the free column is nonzero in the pivot's row.
    """
    W = pres.wspace
    ground = W.ground
    parent = {e: e for e in ground}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for row, pc in zip(W.rows, W.pivots):
        a = ground[pc]
        for j, c in enumerate(row):
            if c != 0 and j != pc:
                ra, rb = find(a), find(ground[j])
                if ra != rb:
                    parent[rb] = ra
    groups: dict = {}
    for e in ground:
        groups.setdefault(find(e), []).append(e)
    return [frozenset(g) for g in groups.values()]


def greedy_base(pres: Presentation, X=(), Y=()) -> frozenset:
    """Base containing X and avoiding Y, adding elements in ground order."""
    X, Y = set(X), set(Y)
    B = [e for e in pres.ground if e in X]
    if pres.vspace.restrict(B).dim:
        raise HypothesisViolation("seed set is dependent", dependent_witness(pres.vspace, B))
    for e in pres.ground:
        if e in X or e in Y:
            continue
        if pres.vspace.restrict(B + [e]).dim == 0:
            B.append(e)
    B = frozenset(B)
    outside = [e for e in pres.ground if e not in B]
    if pres.wspace.restrict(outside).dim:
        raise HypothesisViolation("avoided set is codependent", dependent_witness(pres.wspace, Y))
    return B


# -- the star step ----------------------------------------------------------------


@dataclass(frozen=True)
class StarBaseInput:
    star: TreeOfPresentations
    center: object
    X: frozenset = frozenset()
    Y: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "X", frozenset(self.X))
        object.__setattr__(self, "Y", frozenset(self.Y))
        if self.X & self.Y:
            raise ValidationError("X and Y must be disjoint")
        if not (self.X | self.Y) <= set(self.star.real_edges):
            raise ValidationError("X and Y must consist of real edges of the star")
        check_star_shape(self.star.pres(self.center), self.star, self.center)

    @property
    def leaves(self) -> list:
        return [t for t in self.star.nodes if t != self.center]

    @property
    def center_real(self) -> frozenset:
        return frozenset(self.star.real_of(self.center))


@dataclass
class StarResult:
    X: frozenset
    Y: frozenset
    B: frozenset
    localized: dict
    bullets: dict
    witnesses: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.bullets.values())


def check_star_bullets(inp: StarBaseInput, Xp, Yp, glued: Presentation | None = None):
    """The five postconditions of the star step, with witnesses."""
    G = glued or glue(inp.star)
    Xp, Yp = frozenset(Xp), frozenset(Yp)
    Ep = inp.center_real
    wit = {}
    b = {}
    b["extends"] = inp.X <= Xp and inp.Y <= Yp and not (Xp & Yp) and (Xp | Yp) <= set(G.ground)
    b["covers"] = Ep <= Xp | Yp
    dx, dy = dependent_witness(G.vspace, Xp), dependent_witness(G.wspace, Yp)
    b["independent"] = dx is None and dy is None
    if not b["independent"]:
        wit["dependent"] = dx if dx is not None else dy
    spans = {}
    for e in sorted(Ep - Xp, key=G.ground.index):
        spans[e] = span_witness(G.vspace, Xp, e)
    b["spanning"] = all(v is not None for v in spans.values())
    cospans = {}
    for e in sorted(Ep - Yp, key=G.ground.index):
        cospans[e] = span_witness(G.wspace, Yp, e)
    b["cospanning"] = all(w is not None for w in cospans.values())
    wit["circuits"], wit["cocircuits"] = spans, cospans
    leaf_sets = {t: frozenset(inp.star.real_of(t)) for t in inp.leaves}
    minor = pres_minor(G, Xp, Yp) if b["extends"] else None
    linked = None
    if minor is not None:
        for comp in pres_components(minor):
            hit = [t for t in inp.leaves if comp & leaf_sets[t]]
            if len(hit) > 1:
                linked = (comp, hit)
                break
    b["separated"] = minor is not None and linked is None
    if linked:
        wit["linked"] = linked
    return b, wit


def im_star(inp: StarBaseInput) -> StarResult:
    """Extend (X, Y) on a star: cover the centre, stay (co)independent, separate the leaves."""
    star, center = inp.star, inp.center
    G = glue(star)
    dx = dependent_witness(G.vspace, inp.X)
    if dx is not None:
        raise HypothesisViolation("X is dependent in the glued star", dx)
    dy = dependent_witness(G.wspace, inp.Y)
    if dy is not None:
        raise HypothesisViolation("Y is codependent in the glued star", dy)
    Ep = inp.center_real
    X0, Y0 = inp.X & Ep, inp.Y & Ep

    # move the parts of X and Y inside leaves into the leaf presentations
    leaves = {}
    for t in inp.leaves:
        p = star.pres(t)
        inside = set(p.ground)
        leaves[t] = pres_minor(p, inp.X & inside, inp.Y & inside)
    Pi = star.pres(center)

    localized, tilde = {}, {}
    for t, p in leaves.items():
        F = star.shared(center, t)
        PF, QF = localize(p, F)
        localized[t] = (F, PF, QF)
        tilde[t] = pres_minor(p, PF, QF)
    Gt = glue(make_star(Pi, tilde, center))
    B = greedy_base(Gt, X0, Y0)
    Bc = frozenset(Gt.ground) - B

    Xp, Yp = set(B & Ep), set(Bc & Ep)
    for t, p in leaves.items():
        F, PF, QF = localized[t]
        inside = set(p.ground)
        XF = independent_shrink(p, F, PF | (B & inside))
        YF = independent_shrink(p.dual(), F, QF | (Bc & inside))
        Xp |= XF
        Yp |= YF
    Xp |= inp.X
    Yp |= inp.Y
    bullets, wit = check_star_bullets(inp, Xp, Yp, G)
    return StarResult(frozenset(Xp), frozenset(Yp), B, localized, bullets, wit)


# -- the recursion -------------------------------------------------------------------


CONDITIONS = tuple(range(1, 9))


@dataclass
class BaseCert:
    root: object
    order: list
    X_t: dict
    Y_t: dict
    conditions: dict  # node -> {1..8: bool}
    steps: dict  # node -> StarResult
    X: frozenset = frozenset()
    Y: frozenset = frozenset()
    global_checks: dict = field(default_factory=dict)
    base_verdict: Verdict | None = None

    @property
    def ok(self) -> bool:
        return (
            all(all(c.values()) for c in self.conditions.values())
            and all(self.global_checks.values())
            and bool(self.base_verdict)
        )

    def failures(self) -> list:
        out = [(t, k) for t, c in self.conditions.items() for k, ok in c.items() if not ok]
        out += [("global", k) for k, ok in self.global_checks.items() if not ok]
        return out


def _branch_real(tree: TreeOfPresentations, s, t) -> frozenset:
    """E(T_{s->t}): real edges of the tree living on t's side of st."""
    side = set(tree.branch(s, t))
    return frozenset(e for e in tree.real_edges if tree.home[e] in side)


def _center_for(tree: TreeOfPresentations, s, t, Xs, Ys) -> Presentation:
    """(glue(T_{t->s} + t) / (X_s on that side)) restricted to E(t) - E(st)."""
    sub = tree.induced(tree.branch(t, s) + [t])
    Gp = glue(sub)
    Ets = _branch_real(tree, t, s)
    keep = [e for e in tree.pres(t).ground if e not in set(tree.shared(s, t))]
    via_x = pres_minor(Gp, Xs & Ets, Ets - Xs).reorder(keep)
    via_y = pres_minor(Gp, Ets - Ys, Ys & Ets).reorder(keep)
    if via_x != via_y:
        raise AssertionError(f"contracting X_s and deleting Y_s disagree at {t!r}")
    return via_x


def _check_node(tree, G, t, parent, X_t, Y_t, children) -> dict:
    X, Y = X_t[t], Y_t[t]
    real = set(tree.real_of(t))
    c = {}
    c[1] = not (X & Y)
    s = parent[t]
    c[2] = s is None or (X_t[s] <= X and Y_t[s] <= Y)
    if s is None:
        c[3] = True
    else:
        side = _branch_real(tree, s, t)
        c[3] = (X - X_t[s]) <= side and (Y - Y_t[s]) <= side
    c[4] = real <= X | Y
    c[5] = dependent_witness(G.vspace, X) is None and dependent_witness(G.wspace, Y) is None
    c[6] = all(span_witness(G.vspace, X, e) is not None for e in real - X)
    c[7] = all(span_witness(G.wspace, Y, e) is not None for e in real - Y)
    c[8] = True
    if c[1]:
        minor = pres_minor(G, X, Y)
        comps = pres_components(minor)
        for u in children[t]:
            below = _branch_real(tree, t, u)
            above = _branch_real(tree, u, t)
            if any(comp & below and comp & above for comp in comps):
                c[8] = False
                break
    else:
        c[8] = False
    return c


def build_base(tree: TreeOfPresentations, root=None) -> BaseCert:
    """Partition the glued real edges into a base and a cobase, certified node by node."""
    root = tree.nodes[0] if root is None else root
    if root not in tree.nodes:
        raise ValidationError(f"unknown root {root!r}")
    order = tree.bfs_order(root)
    parent = tree.parents(root)
    children = tree.children(root)
    G = glue(tree)
    X_t, Y_t, steps = {}, {}, {}
    for t in order:
        s = parent[t]
        if s is None:
            center = tree.pres(t)
            X0, Y0 = frozenset(), frozenset()
            Xs, Ys = frozenset(), frozenset()
        else:
            Xs, Ys = X_t[s], Y_t[s]
            center = _center_for(tree, s, t, Xs, Ys)
            side = _branch_real(tree, s, t)
            X0, Y0 = Xs & side, Ys & side
        leaves = {u: glue(tree.branch_tree(t, u)) for u in children[t]}
        star = make_star(center, leaves, t)
        res = im_star(StarBaseInput(star, t, X0, Y0))
        if not res.ok:
            raise AssertionError(f"star step at {t!r} failed: {res.bullets}")
        steps[t] = res
        X_t[t] = Xs | res.X
        Y_t[t] = Ys | res.Y
    conditions = {t: _check_node(tree, G, t, parent, X_t, Y_t, children) for t in order}
    X = frozenset().union(*X_t.values())
    Y = frozenset().union(*Y_t.values())
    cert = BaseCert(root, order, X_t, Y_t, conditions, steps, X, Y)
    real = frozenset(tree.real_edges)
    cert.global_checks = {
        "partition": not (X & Y) and X | Y == real,
        "independent": dependent_witness(G.vspace, X) is None,
        "coindependent": dependent_witness(G.wspace, Y) is None,
        "separation": all(_check_node(tree, G, t, parent, X_t, Y_t, children)[8] for t in order),
    }
    sys = SetSystemPair.from_presentation(G, minimal=True)
    cert.base_verdict = is_base(sys, X)
    bad = cert.failures()
    if bad:
        raise AssertionError(f"base construction certificate fails: {bad}")
    return cert


__all__ = [
    "StarBaseInput",
    "StarResult",
    "BaseCert",
    "CONDITIONS",
    "dependent_witness",
    "span_witness",
    "pres_components",
    "greedy_base",
    "check_star_bullets",
    "im_star",
    "build_base",
]
