"""Presentations: complementary pairs (vectors, covectors) over a finite ground set."""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import (
    DEFAULT_ENUM_BUDGET,
    FieldSpec,
    SparseVec,
    Subspace,
    complement,
    dot,
    min_supports,
    solve,
)
from .errors import ValidationError

STAR = "*"


@dataclass(frozen=True)
class Presentation:
    vspace: Subspace
    wspace: Subspace

    def __post_init__(self):
        v, w = self.vspace, self.wspace
        if v.field != w.field or v.ground != w.ground:
            raise ValidationError("vector and covector spaces live on different grounds")
        if not v.is_orthogonal_to(w):
            raise ValidationError("vectors and covectors are not orthogonal")
        if w != complement(v):
            raise ValidationError(
                "covectors are orthogonal to the vectors but not their full complement; "
                "the pair fails (O2) and is not a presentation"
            )

    @property
    def field(self) -> FieldSpec:
        return self.vspace.field

    @property
    def ground(self) -> tuple:
        return self.vspace.ground

    def dual(self) -> Presentation:
        return Presentation(self.wspace, self.vspace)

    def restrict(self, X) -> Presentation:
        """(V|X, W.X)"""
        return Presentation(self.vspace.restrict(X), self.wspace.contract(X))

    def contract_to(self, X) -> Presentation:
        """(V.X, W|X)"""
        return Presentation(self.vspace.contract(X), self.wspace.restrict(X))

    def contract(self, P) -> Presentation:
        P = set(P)
        return self.contract_to([e for e in self.ground if e not in P])

    def delete(self, Q) -> Presentation:
        Q = set(Q)
        return self.restrict([e for e in self.ground if e not in Q])

    def minor(self, P=(), Q=()) -> Presentation:
        return pres_minor(self, P, Q)

    def reorder(self, ground) -> Presentation:
        return Presentation(self.vspace.reorder(ground), self.wspace.reorder(ground))

    def relabel(self, mapping) -> Presentation:
        return Presentation(self.vspace.relabel(mapping), self.wspace.relabel(mapping))

    def circuits(self, budget=DEFAULT_ENUM_BUDGET) -> frozenset:
        return min_supports(self.vspace, budget)

    def cocircuits(self, budget=DEFAULT_ENUM_BUDGET) -> frozenset:
        return min_supports(self.wspace, budget)

    def is_independent(self, X, budget=DEFAULT_ENUM_BUDGET) -> bool:
        """No nonzero vector is supported inside X."""
        return self.vspace.restrict(X).dim == 0

    def same_as(self, other: Presentation) -> bool:
        return self.vspace.same_space(other.vspace) and self.wspace.same_space(other.wspace)


def make_presentation(ground, v_basis, w_basis=None, field: FieldSpec | None = None) -> Presentation:
    v_basis = list(v_basis)
    if field is None:
        gens = v_basis + list(w_basis or [])
        if not gens:
            raise ValidationError("field must be given when no generators are")
        field = gens[0].field
    V = Subspace(field, ground, v_basis)
    if w_basis is None:
        return Presentation(V, complement(V))
    return Presentation(V, Subspace(field, ground, w_basis))


def pres_minor(pres: Presentation, P=(), Q=()) -> Presentation:
    """Contract P and delete Q: (V/P\\Q, W\\P/Q)."""
    P, Q = set(P), set(Q)
    if P & Q:
        raise ValidationError(f"contracted and deleted sets overlap: {sorted(map(str, P & Q))}")
    outside = (P | Q) - set(pres.ground)
    if outside:
        raise ValidationError(f"not in the ground set: {sorted(map(str, outside))}")
    keep = [e for e in pres.ground if e not in P and e not in Q]
    after_p = [e for e in pres.ground if e not in P]
    V = pres.vspace.contract(after_p).restrict(keep)
    W = pres.wspace.restrict(after_p).contract(keep)
    return Presentation(V, W)


def adjoin_x(pres: Presentation, x: SparseVec, star=STAR) -> Presentation:
    """Add a new element ``star`` so that x - 1_star becomes a vector."""
    if star in pres.ground:
        raise ValidationError(f"{star!r} is already in the ground set")
    if not x.support <= set(pres.ground):
        raise ValidationError("x is not supported in the ground set")
    f = pres.field
    ground = pres.ground + (star,)
    vgens = list(pres.vspace.basis) + [x - SparseVec.unit(f, star)]
    wgens = []
    for w in pres.wspace.basis:
        entries = dict(w.items())
        entries[star] = dot(w, x)
        wgens.append(SparseVec(f, entries))
    return Presentation(Subspace(f, ground, vgens), Subspace(f, ground, wgens))


def _affine_member(K: Subspace, v0: SparseVec, zero_on):
    """v0 + k with k in K vanishing on ``zero_on``, in a canonical form, or None.

    The coset v0 + K is reduced by an echelon basis of K whose columns are
    ordered with ``zero_on`` first; feasibility means the remainder vanishes
    there.
    """
    f = K.field
    zero_on = [e for e in K.ground if e in set(zero_on)]
    order = zero_on + [e for e in K.ground if e not in set(zero_on)]
    Kp = K.reorder(order)
    x = Kp.reduce(v0.restrict(K.ground))
    if any(x[i] != 0 for i in range(len(zero_on))):
        return None
    rest = v0.drop(K.ground)
    return rest + SparseVec(f, [(e, c) for e, c in zip(order, x) if c != 0])


def minimal_extension(pres: Presentation, v0: SparseVec, F, X) -> SparseVec:
    """A vector v agreeing with v0 on F, supported in supp(v0) | X, with supp(v) - X minimal.

    Among the inclusion-minimal choices of supp(v) - X the one that is least
    when compared from the end of the ground order is returned, and the vector
    itself is the canonical representative of its coset.
    """
    F, X = set(F), set(X)
    if F & X:
        raise ValidationError("F and X must be disjoint")
    if not pres.vspace.contains(v0):
        raise ValidationError("v0 is not a vector of the presentation")
    allowed = (v0.support | X) - F
    K = pres.vspace.restrict([e for e in pres.ground if e in allowed])
    R = [e for e in pres.ground if e in v0.support and e not in X and e not in F]
    # backward greedy: removing an element stays feasible on every subset
    keep = list(R)
    for e in reversed(R):
        trial = [r for r in keep if r != e]
        if _affine_member(K, v0, [r for r in R if r not in trial]) is not None:
            keep = trial
    v = _affine_member(K, v0, [r for r in R if r not in keep])
    assert v is not None
    return v


def lift(pres: Presentation, target: SparseVec, F, *, covector=False) -> SparseVec | None:
    """Some member u of V (or W) with u|F = target, or None."""
    U = pres.wspace if covector else pres.vspace
    F = [e for e in pres.ground if e in set(F)]
    idx = {e: i for i, e in enumerate(U.ground)}
    rows = [[row[j] for row in U.rows] for j in (idx[e] for e in F)]
    rhs = [target[e] for e in F]
    if U.dim == 0:
        return SparseVec(pres.field) if all(c == 0 for c in rhs) else None
    coeffs = solve(rows, rhs, pres.field)
    if coeffs is None:
        return None
    return U.combine(coeffs)


def independent_shrink(pres: Presentation, F, P) -> frozenset:
    """An independent P' inside P with (pres/P)|F == (pres/P')|F."""
    F, P = set(F), set(P)
    if F & P:
        raise ValidationError("F and P must be disjoint")
    Fo = [e for e in pres.ground if e in F]
    target = pres.contract(P).restrict(Fo)
    chosen: set = set()
    for b in target.vspace.basis:
        v0 = _lift_inside(pres, b, Fo, P | F)
        assert v0 is not None
        v = minimal_extension(pres, v0, Fo, chosen)
        chosen |= v.support & P
    return frozenset(chosen)


def _lift_inside(pres: Presentation, target: SparseVec, F, allowed) -> SparseVec | None:
    """A vector supported in ``allowed`` with restriction ``target`` to F."""
    sub = pres.vspace.restrict([e for e in pres.ground if e in set(allowed)])
    idx = {e: i for i, e in enumerate(sub.ground)}
    if sub.dim == 0:
        return SparseVec(pres.field) if not target else None
    rows = [[row[idx[e]] for row in sub.rows] for e in F]
    coeffs = solve(rows, [target[e] for e in F], pres.field)
    return None if coeffs is None else sub.combine(coeffs)


def localize(pres: Presentation, F) -> tuple[frozenset, frozenset]:
    """Disjoint P_F, Q_F off F such that pres/P_F\\Q_F agrees with pres on |F and .F."""
    F = set(F)
    if not F <= set(pres.ground):
        raise ValidationError("F is not a subset of the ground set")
    Fo = [e for e in pres.ground if e in F]
    vsupp: set = set()
    for b in pres.vspace.contract(Fo).basis:
        v0 = lift(pres, b, Fo)
        vsupp |= minimal_extension(pres, v0, Fo, ()).support
    dual = pres.dual()
    wsupp: set = set()
    for b in pres.wspace.contract(Fo).basis:
        w0 = lift(pres, b, Fo, covector=True)
        wsupp |= minimal_extension(dual, w0, Fo, ()).support
    Fprime = F | (vsupp & wsupp)
    P_F = frozenset(vsupp - Fprime)
    Q_F = frozenset(set(pres.ground) - P_F - Fprime)
    return P_F, Q_F


def localize_ok(pres: Presentation, F, P_F, Q_F) -> bool:
    Fo = [e for e in pres.ground if e in set(F)]
    if set(P_F) & set(Q_F) or (set(P_F) | set(Q_F)) & set(F):
        return False
    small = pres_minor(pres, P_F, Q_F)
    return small.restrict(Fo) == pres.restrict(Fo) and small.contract_to(Fo) == pres.contract_to(Fo)


def is_pres_independent(pres: Presentation, X) -> bool:
    return pres.vspace.restrict(X).dim == 0


__all__ = [
    "Presentation",
    "STAR",
    "make_presentation",
    "pres_minor",
    "adjoin_x",
    "minimal_extension",
    "independent_shrink",
    "localize",
    "localize_ok",
    "lift",
    "is_pres_independent",
]

