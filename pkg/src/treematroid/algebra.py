"""Exact linear algebra over GF(p) and the rationals.

Everything here is immutable: a ``SparseVec`` is a finitely supported map from
edge ids to nonzero scalars, and a ``Subspace`` is stored as its reduced
echelon basis with respect to a fixed ordering of its ground set, so two
subspaces are equal exactly when their stored bases are.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb
from types import MappingProxyType
from typing import Iterable, Mapping

from .errors import BudgetExceeded, ValidationError

DEFAULT_ENUM_BUDGET = 1 << 20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Either GF(p) for a prime p, or the rationals."""

    kind: str
    modulus: int | None = None

    def __post_init__(self):
        if self.kind == "prime":
            if not isinstance(self.modulus, int) or not is_prime(self.modulus):
                raise ValidationError(f"modulus not prime: {self.modulus!r}")
        elif self.kind == "rational":
            if self.modulus is not None:
                raise ValidationError("the rationals take no modulus")
        else:
            raise ValidationError(f"unknown field kind {self.kind!r}")

    @classmethod
    def gf(cls, p: int) -> FieldSpec:
        return cls("prime", p)

    @classmethod
    def rationals(cls) -> FieldSpec:
        return cls("rational")

    @classmethod
    def parse(cls, text: str) -> FieldSpec:
        t = text.strip().replace(" ", "")
        if t in ("Q", "QQ", "rationals"):
            return cls.rationals()
        if t.upper().startswith("GF(") and t.endswith(")"):
            body = t[3:-1]
        elif t.upper().startswith("GF"):
            body = t[2:]
        else:
            raise ValidationError(f"cannot parse field {text!r}")
        try:
            p = int(body)
        except ValueError:
            raise ValidationError(f"cannot parse field {text!r}") from None
        return cls.gf(p)

    @property
    def name(self) -> str:
        return f"GF({self.modulus})" if self.kind == "prime" else "Q"

    def __str__(self):
        return self.name

    @property
    def is_finite(self) -> bool:
        return self.kind == "prime"

    @property
    def order(self) -> int | None:
        return self.modulus

    # -- scalars -------------------------------------------------------------

    def coerce(self, x):
        if self.kind == "prime":
            p = self.modulus
            if isinstance(x, Fraction):
                if x.denominator % p == 0:
                    raise ValidationError(f"{x} has no value in {self.name}")
                return (x.numerator * pow(x.denominator, -1, p)) % p
            if isinstance(x, str):
                return self.coerce(Fraction(x))
            return int(x) % p
        if isinstance(x, float):
            raise ValidationError("floating point scalars are not exact")
        return Fraction(x)

    def zero(self):
        return 0 if self.kind == "prime" else Fraction(0)

    def one(self):
        return 1 if self.kind == "prime" else Fraction(1)

    def add(self, a, b):
        return (a + b) % self.modulus if self.kind == "prime" else a + b

    def sub(self, a, b):
        return (a - b) % self.modulus if self.kind == "prime" else a - b

    def mul(self, a, b):
        return (a * b) % self.modulus if self.kind == "prime" else a * b

    def neg(self, a):
        return (-a) % self.modulus if self.kind == "prime" else -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.modulus) if self.kind == "prime" else 1 / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def elements(self):
        if not self.is_finite:
            raise ValidationError("cannot enumerate the rationals")
        return range(self.modulus)

    def nonzero_elements(self):
        return range(1, self.modulus) if self.is_finite else None

    def format_scalar(self, x):
        if self.kind == "prime":
            return int(x)
        x = Fraction(x)
        return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class SparseVec:
    """A finitely supported vector; zero entries are never stored."""

    __slots__ = ("field", "_entries", "_hash")

    def __init__(self, field: FieldSpec, entries: Mapping | Iterable = ()):
        items = entries.items() if isinstance(entries, Mapping) else entries
        stored = {}
        for e, x in items:
            if e in stored:
                raise ValidationError(f"duplicate coordinate {e!r}")
            x = field.coerce(x)
            stored[e] = x
        self.field = field
        self._entries = {e: x for e, x in stored.items() if x != 0}
        self._hash = None

    @classmethod
    def unit(cls, field, e, c=1):
        return cls(field, {e: c})

    @property
    def entries(self):
        return MappingProxyType(self._entries)

    @property
    def support(self) -> frozenset:
        return frozenset(self._entries)

    def __getitem__(self, e):
        return self._entries.get(e, self.field.zero())

    def __bool__(self):
        return bool(self._entries)

    def items(self):
        return self._entries.items()

    def _check(self, other):
        if not isinstance(other, SparseVec):
            return NotImplemented
        if other.field != self.field:
            raise ValidationError(f"field mismatch: {self.field} vs {other.field}")
        return None

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        f = self.field
        out = dict(self._entries)
        for e, x in other._entries.items():
            out[e] = f.add(out[e], x) if e in out else x
        return SparseVec(f, out)

    def __neg__(self):
        f = self.field
        return SparseVec(f, {e: f.neg(x) for e, x in self._entries.items()})

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self + (-other)

    def scale(self, c):
        f = self.field
        c = f.coerce(c)
        return SparseVec(f, {e: f.mul(c, x) for e, x in self._entries.items()})

    def __mul__(self, c):
        if isinstance(c, SparseVec):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def restrict(self, keep) -> SparseVec:
        keep = set(keep)
        return SparseVec(self.field, {e: x for e, x in self._entries.items() if e in keep})

    def drop(self, remove) -> SparseVec:
        remove = set(remove)
        return SparseVec(self.field, {e: x for e, x in self._entries.items() if e not in remove})

    def relabel(self, mapping) -> SparseVec:
        return SparseVec(self.field, {mapping.get(e, e): x for e, x in self._entries.items()})

    def dot(self, other):
        return dot(self, other)

    def ordered(self, ground) -> list:
        """(edge, value) pairs in the order of ``ground``."""
        return [(e, self._entries[e]) for e in ground if e in self._entries]

    def __eq__(self, other):
        if not isinstance(other, SparseVec):
            return NotImplemented
        return self.field == other.field and self._entries == other._entries

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, frozenset(self._entries.items())))
        return self._hash

    def __repr__(self):
        body = ", ".join(f"{e}:{self.field.format_scalar(x)}" for e, x in self._entries.items())
        return f"SparseVec({self.field}, {{{body}}})"


def dot(v: SparseVec, w: SparseVec):
    """Bilinear pairing; the sum runs over the shared support only."""
    if v.field != w.field:
        raise ValidationError(f"field mismatch: {v.field} vs {w.field}")
    f = v.field
    small, big = (v, w) if len(v._entries) <= len(w._entries) else (w, v)
    total = f.zero()
    for e, x in small._entries.items():
        y = big._entries.get(e)
        if y is not None:
            total = f.add(total, f.mul(x, y))
    return total


# -- dense kernels -------------------------------------------------------------


def rref(rows, field: FieldSpec):
    """Reduced row echelon form. Returns (nonzero rows, pivot columns)."""
    rows = [list(r) for r in rows]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(rows):
            break
        piv = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        lead = rows[r][c]
        if lead != 1:
            inv = field.inv(lead)
            rows[r] = [field.mul(inv, x) for x in rows[r]]
        pivot_row = rows[r]
        for i in range(len(rows)):
            if i != r:
                fac = rows[i][c]
                if fac != 0:
                    rows[i] = [field.sub(x, field.mul(fac, y)) for x, y in zip(rows[i], pivot_row)]
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def rank(rows, field: FieldSpec) -> int:
    return len(rref(rows, field)[1])


def nullspace(rows, ncols: int, field: FieldSpec):
    """Basis of {x : row . x = 0 for every row}, as dense lists."""
    red, pivots = rref(rows, field) if rows else ([], [])
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        x = [field.zero()] * ncols
        x[free] = field.one()
        for row, pc in zip(red, pivots):
            x[pc] = field.neg(row[free])
        basis.append(x)
    return basis


def solve(rows, rhs, field: FieldSpec):
    """One solution x of ``rows @ x = rhs`` or None; free variables set to 0."""
    if not rows:
        return []
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, field)
    if ncols in pivots:
        return None
    x = [field.zero()] * ncols
    for row, pc in zip(red, pivots):
        x[pc] = row[ncols]
    return x


# -- subspaces -----------------------------------------------------------------


class Subspace:
    """A subspace of k^ground in canonical reduced echelon form."""

    def __init__(self, field: FieldSpec, ground: Iterable, vectors: Iterable[SparseVec] = ()):
        ground = tuple(ground)
        if len(set(ground)) != len(ground):
            raise ValidationError("ground set has repeated elements")
        index = {e: i for i, e in enumerate(ground)}
        rows = []
        for v in vectors:
            if v.field != field:
                raise ValidationError(f"field mismatch: {v.field} vs {field}")
            row = [field.zero()] * len(ground)
            for e, x in v.items():
                if e not in index:
                    raise ValidationError(f"support outside ground: {e!r}")
                row[index[e]] = x
            rows.append(row)
        red, pivots = rref(rows, field)
        self.field = field
        self.ground = ground
        self._index = index
        self._rows = tuple(tuple(r) for r in red)
        self.pivots = tuple(pivots)
        self.basis = tuple(self._to_vec(r) for r in red)

    @classmethod
    def zero(cls, field, ground):
        return cls(field, ground)

    @classmethod
    def full(cls, field, ground):
        return cls(field, ground, [SparseVec.unit(field, e) for e in ground])

    def _to_vec(self, row) -> SparseVec:
        return SparseVec(self.field, [(e, x) for e, x in zip(self.ground, row) if x != 0])

    def dense(self, v: SparseVec) -> list:
        row = [self.field.zero()] * len(self.ground)
        for e, x in v.items():
            if e not in self._index:
                raise ValidationError(f"support outside ground: {e!r}")
            row[self._index[e]] = x
        return row

    @property
    def dim(self) -> int:
        return len(self._rows)

    @property
    def rows(self):
        return self._rows

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.field, self.ground, self._rows) == (other.field, other.ground, other._rows)

    def __hash__(self):
        return hash((self.field, self.ground, self._rows))

    def __repr__(self):
        return f"Subspace({self.field}, ground={list(self.ground)}, basis={list(self.basis)})"

    def same_space(self, other: Subspace) -> bool:
        """Equality up to the ordering of the ground set."""
        if set(self.ground) != set(other.ground) or self.field != other.field:
            return False
        return self == other.reorder(self.ground)

    def reorder(self, ground) -> Subspace:
        ground = tuple(ground)
        if set(ground) != set(self.ground) or len(ground) != len(self.ground):
            raise ValidationError("reorder needs a permutation of the ground set")
        return Subspace(self.field, ground, self.basis)

    def embed(self, ground) -> Subspace:
        """The same vectors regarded inside a larger ground set."""
        return Subspace(self.field, ground, self.basis)

    def relabel(self, mapping) -> Subspace:
        return Subspace(
            self.field,
            [mapping.get(e, e) for e in self.ground],
            [v.relabel(mapping) for v in self.basis],
        )

    def reduce(self, v: SparseVec) -> list:
        """Dense remainder of v after eliminating every pivot column."""
        f = self.field
        x = self.dense(v)
        for row, pc in zip(self._rows, self.pivots):
            c = x[pc]
            if c != 0:
                x = [f.sub(a, f.mul(c, b)) for a, b in zip(x, row)]
        return x

    def contains(self, v: SparseVec) -> bool:
        if v.field != self.field:
            return False
        if not v.support <= set(self.ground):
            return False
        return all(x == 0 for x in self.reduce(v))

    __contains__ = contains

    def coordinates(self, v: SparseVec) -> list | None:
        """Coefficients of v in the stored basis, or None if v is not a member."""
        if not self.contains(v):
            return None
        x = self.dense(v)
        return [x[pc] for pc in self.pivots]

    def combine(self, coeffs) -> SparseVec:
        f = self.field
        out = [f.zero()] * len(self.ground)
        for c, row in zip(coeffs, self._rows):
            if c != 0:
                out = [f.add(a, f.mul(c, b)) for a, b in zip(out, row)]
        return self._to_vec(out)

    def members(self, budget: int = DEFAULT_ENUM_BUDGET):
        """Every vector of a subspace over a finite field, zero first."""
        if not self.field.is_finite:
            raise ValidationError("member enumeration needs a finite field")
        count = self.field.order ** self.dim
        if count > budget:
            raise BudgetExceeded("subspace member enumeration", count, budget)
        return self._members

    @cached_property
    def _members(self):
        return tuple(self.combine(c) for c in itertools.product(self.field.elements(), repeat=self.dim))

    def projective_members(self, budget: int = DEFAULT_ENUM_BUDGET):
        """One representative per nonzero line (first nonzero coefficient 1)."""
        if not self.field.is_finite:
            raise ValidationError("member enumeration needs a finite field")
        p, d = self.field.order, self.dim
        count = (p**d - 1) // (p - 1) if d else 0
        if count > budget:
            raise BudgetExceeded("projective member enumeration", count, budget)
        out = []
        for lead in range(d):
            for tail in itertools.product(self.field.elements(), repeat=d - lead - 1):
                out.append(self.combine([0] * lead + [1] + list(tail)))
        return out

    def complement(self) -> Subspace:
        return complement(self)

    def restrict(self, X) -> Subspace:
        return subspace_minor(self, X, "restrict")

    def contract(self, X) -> Subspace:
        return subspace_minor(self, X, "contract")

    def delete(self, Q) -> Subspace:
        Q = set(Q)
        return self.restrict([e for e in self.ground if e not in Q])

    def contract_out(self, P) -> Subspace:
        P = set(P)
        return self.contract([e for e in self.ground if e not in P])

    def is_orthogonal_to(self, other: Subspace) -> bool:
        return all(dot(v, w) == 0 for v in self.basis for w in other.basis)


def span_canonical(vectors, ground, field: FieldSpec | None = None) -> Subspace:
    vectors = list(vectors)
    if field is None:
        if not vectors:
            raise ValidationError("cannot infer the field of an empty generator list")
        field = vectors[0].field
    return Subspace(field, ground, vectors)


def complement(U: Subspace) -> Subspace:
    n = len(U.ground)
    basis = nullspace([list(r) for r in U.rows], n, U.field)
    return Subspace(U.field, U.ground, [U._to_vec(x) for x in basis])


def _ordered_subset(U: Subspace, X) -> tuple:
    X = set(X)
    extra = X - set(U.ground)
    if extra:
        raise ValidationError(f"not a subset of the ground set: {sorted(map(str, extra))}")
    return tuple(e for e in U.ground if e in X)


def subspace_minor(U: Subspace, X, mode: str) -> Subspace:
    """``restrict``: members supported in X.  ``contract``: projection onto X."""
    keep = _ordered_subset(U, X)
    if mode == "contract":
        return Subspace(U.field, keep, [v.restrict(keep) for v in U.basis])
    if mode != "restrict":
        raise ValidationError(f"unknown minor mode {mode!r}")
    keepset = set(keep)
    outside = [i for i, e in enumerate(U.ground) if e not in keepset]
    inside = [i for i, e in enumerate(U.ground) if e in keepset]
    perm = outside + inside
    rows = [[r[i] for i in perm] for r in U.rows]
    red, pivots = rref(rows, U.field)
    n_out = len(outside)
    vecs = []
    for row, pc in zip(red, pivots):
        if pc >= n_out:
            vecs.append(SparseVec(U.field, [(U.ground[perm[j]], row[j]) for j in range(n_out, len(perm)) if row[j] != 0]))
    return Subspace(U.field, keep, vecs)


# -- supports ------------------------------------------------------------------


def minimal_sets(family) -> frozenset:
    """Inclusion-minimal nonempty members of a family of sets."""
    cands = sorted({frozenset(s) for s in family if s}, key=len)
    out = []
    for s in cands:
        if not any(m <= s for m in out):
            out.append(s)
    return frozenset(out)


def _column_circuits(U: Subspace, budget: int) -> frozenset:
    # minimal dependent column sets of a matrix whose null space is U
    A = [list(r) for r in complement(U).rows]
    n = len(U.ground)
    r = len(A)
    max_size = min(n, r + 1)
    work = sum(comb(n, k) for k in range(1, max_size + 1))
    if work > budget:
        raise BudgetExceeded("circuit enumeration", work, budget)
    found = []
    for k in range(1, max_size + 1):
        for cols in itertools.combinations(range(n), k):
            cs = frozenset(cols)
            if any(c <= cs for c in found):
                continue
            sub = [[row[j] for j in cols] for row in A]
            if not A or rank(sub, U.field) < k:
                found.append(cs)
    return frozenset(frozenset(U.ground[j] for j in c) for c in found)


def min_supports(U: Subspace, budget: int = DEFAULT_ENUM_BUDGET) -> frozenset:
    """The inclusion-minimal nonempty supports of members of U."""
    if U.dim == 0:
        return frozenset()
    f = U.field
    if f.is_finite and f.order**U.dim <= budget:
        return minimal_sets(v.support for v in U.projective_members(budget))
    return _column_circuits(U, budget)


def min_supports_by_circuits(U: Subspace, budget: int = DEFAULT_ENUM_BUDGET) -> frozenset:
    """Column-matroid route, available over every field."""
    if U.dim == 0:
        return frozenset()
    return _column_circuits(U, budget)


def supports(U: Subspace, budget: int = DEFAULT_ENUM_BUDGET) -> frozenset:
    """S(U): the set of supports of all members (the empty set included).

    Over an infinite field a generic combination of the elementary vectors of
    any set of circuits has their union as support, so S(U) is exactly the
    union-closure of the circuits.
    """
    if U.field.is_finite and U.field.order**U.dim <= budget:
        return frozenset({frozenset()} | {v.support for v in U.projective_members(budget)})
    circuits = list(min_supports(U, budget))
    closure = {frozenset()}
    for c in circuits:
        closure |= {s | c for s in closure}
        if len(closure) > budget:
            raise BudgetExceeded("support closure", len(closure), budget)
    return frozenset(closure)
