"""Set-system checks: orthogonality axioms, bases, components, and a brute-force matroid oracle.

Sets are frozensets of edge ids at the interface; scans run on bitmasks
indexed by the ground order.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .algebra import DEFAULT_ENUM_BUDGET, min_supports, minimal_sets, supports
from .errors import BudgetExceeded, ValidationError

DEFAULT_ORACLE_CAP = 12
DEFAULT_O2_CAP = 3**10
IM_EXHAUSTIVE_UP_TO = 6
IM_SAMPLES = 200

AXIOMS = ("O1", "O2", "O3", "O3*", "tame", "IM")


@dataclass(frozen=True)
class SetSystemPair:
    ground: tuple
    cee: frozenset
    dee: frozenset

    def __post_init__(self):
        object.__setattr__(self, "ground", tuple(self.ground))
        object.__setattr__(self, "cee", frozenset(frozenset(c) for c in self.cee))
        object.__setattr__(self, "dee", frozenset(frozenset(d) for d in self.dee))
        g = set(self.ground)
        for s in itertools.chain(self.cee, self.dee):
            if not s <= g:
                raise ValidationError(f"member {sorted(map(str, s))} is not inside the ground set")

    @classmethod
    def from_presentation(cls, pres, budget=DEFAULT_ENUM_BUDGET, minimal=False):
        if minimal:
            return cls(pres.ground, min_supports(pres.vspace, budget), min_supports(pres.wspace, budget))
        return cls(pres.ground, supports(pres.vspace, budget), supports(pres.wspace, budget))

    def dual(self) -> SetSystemPair:
        return SetSystemPair(self.ground, self.dee, self.cee)

    def restrict(self, X) -> SetSystemPair:
        """(C|X, D.X)"""
        X = frozenset(X)
        ground = [e for e in self.ground if e in X]
        return SetSystemPair(ground, {c for c in self.cee if c <= X}, {d & X for d in self.dee})

    def contract_to(self, X) -> SetSystemPair:
        """(C.X, D|X)"""
        X = frozenset(X)
        ground = [e for e in self.ground if e in X]
        return SetSystemPair(ground, {c & X for c in self.cee}, {d for d in self.dee if d <= X})

    def minor(self, A=(), B=()) -> SetSystemPair:
        """Contract A, delete B."""
        A, B = frozenset(A), frozenset(B)
        rest = [e for e in self.ground if e not in A]
        keep = [e for e in rest if e not in B]
        return self.contract_to(rest).restrict(keep)


@dataclass
class Verdict:
    name: str
    ok: bool
    witness: object = None
    detail: str = ""
    checked: int = 0

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class MatroidCert:
    ground: tuple
    circuits: frozenset
    cocircuits: frozenset = field(default_factory=frozenset)


class _Masks:
    def __init__(self, ground):
        self.ground = tuple(ground)
        self.bit = {e: 1 << i for i, e in enumerate(self.ground)}
        self.full = (1 << len(self.ground)) - 1

    def mask(self, s) -> int:
        m = 0
        for e in s:
            m |= self.bit[e]
        return m

    def unmask(self, m) -> frozenset:
        return frozenset(e for i, e in enumerate(self.ground) if m >> i & 1)


def _minimal_masks(masks):
    out = []
    for m in sorted(set(masks), key=lambda x: bin(x).count("1")):
        if not any(o & m == o for o in out):
            out.append(m)
    return out


def is_independent(sys: SetSystemPair, I) -> bool:
    I = frozenset(I)
    return not any(c and c <= I for c in sys.cee)


def _check_o1(sys):
    n = 0
    for c in sorted(sys.cee, key=sorted_key(sys.ground)):
        for d in sorted(sys.dee, key=sorted_key(sys.ground)):
            n += 1
            if len(c & d) == 1:
                return Verdict("O1", False, (c, d), "a circuit-type set meets a cocircuit-type set in one element", n)
    return Verdict("O1", True, checked=n)


def _check_tame(sys):
    # finite ground: every intersection is finite
    n = len(sys.cee) * len(sys.dee)
    return Verdict("tame", True, detail="finite ground set", checked=n)


def _check_o2(sys, cap):
    mk = _Masks(sys.ground)
    n = len(mk.ground)
    work = n * (1 << max(n - 1, 0))
    if work > cap:
        raise BudgetExceeded("(O2) partition sweep", work, cap)
    cmasks = [mk.mask(c) for c in sys.cee]
    dmasks = [mk.mask(d) for d in sys.dee]
    checked = 0
    for i, e in enumerate(mk.ground):
        eb = 1 << i
        through_c = _minimal_masks([m & ~eb for m in cmasks if m & eb])
        through_d = _minimal_masks([m & ~eb for m in dmasks if m & eb])
        others = [j for j in range(n) if j != i]
        for bits in range(1 << (n - 1)):
            P = 0
            for k, j in enumerate(others):
                if bits >> k & 1:
                    P |= 1 << j
            Q = mk.full & ~P & ~eb
            checked += 1
            if any(c & ~P == 0 for c in through_c):
                continue
            if any(d & ~Q == 0 for d in through_d):
                continue
            return Verdict(
                "O2",
                False,
                {"e": e, "P": mk.unmask(P), "Q": mk.unmask(Q)},
                "neither side of the partition holds a set through e",
                checked,
            )
    return Verdict("O2", True, checked=checked)


def _check_o3(sys, dual, cap):
    fam = sys.dee if dual else sys.cee
    name = "O3*" if dual else "O3"
    mk = _Masks(sys.ground)
    n = len(mk.ground)
    masks = [mk.mask(c) for c in fam]
    work = sum(bin(m).count("1") for m in masks) * (1 << n)
    if work > cap:
        raise BudgetExceeded(f"({name}) scan", work, cap)
    checked = 0
    for C in masks:
        for i in range(n):
            if not C >> i & 1:
                continue
            for X in range(1 << n):
                checked += 1
                cands = [m for m in masks if m >> i & 1 and m & ~(X | C) == 0]
                rests = [m & ~X for m in cands]
                if not any(all(not (o & r == o and o != r) for o in rests) for r in rests):
                    return Verdict(name, False, {"C": mk.unmask(C), "e": mk.ground[i], "X": mk.unmask(X)}, checked=checked)
    return Verdict(name, True, checked=checked)


def base_of(sys: SetSystemPair, X, I=()) -> frozenset:
    """A maximal independent subset of X containing I, greedily in ground order."""
    B = set(I)
    for e in sys.ground:
        if e in X and e not in B and is_independent(sys, B | {e}):
            B.add(e)
    return frozenset(B)


def _check_im(sys, rng):
    mk = _Masks(sys.ground)
    n = len(mk.ground)
    if n <= IM_EXHAUSTIVE_UP_TO:
        pairs = []
        for X in range(1 << n):
            sub = X
            while True:
                pairs.append((sub, X))
                if sub == 0:
                    break
                sub = (sub - 1) & X
    else:
        rng = rng or random.Random(0)
        pairs = []
        for _ in range(IM_SAMPLES):
            X = rng.getrandbits(n)
            pairs.append((X & rng.getrandbits(n), X))
    checked = 0
    for Im, Xm in pairs:
        I, X = mk.unmask(Im), mk.unmask(Xm)
        if not is_independent(sys, I):
            continue
        checked += 1
        B = base_of(sys, X, I)
        if not (I <= B <= X and is_independent(sys, B)):
            return Verdict("IM", False, {"I": I, "X": X}, "greedy extension failed", checked)
        for e in X - B:
            if is_independent(sys, B | {e}):
                return Verdict("IM", False, {"I": I, "X": X, "B": B}, "extension not maximal", checked)
    return Verdict("IM", True, checked=checked)


def check_axiom(sys: SetSystemPair, which: str, *, cap=DEFAULT_O2_CAP, rng=None) -> Verdict:
    if which == "O1":
        return _check_o1(sys)
    if which == "O2":
        return _check_o2(sys, cap)
    if which == "O3":
        return _check_o3(sys, False, cap * 64)
    if which == "O3*":
        return _check_o3(sys, True, cap * 64)
    if which == "tame":
        return _check_tame(sys)
    if which == "IM":
        return _check_im(sys, rng)
    raise ValidationError(f"unknown axiom {which!r}")


def sorted_key(ground):
    pos = {e: i for i, e in enumerate(ground)}
    return lambda s: (len(s), sorted(pos[e] for e in s))


def is_base(sys: SetSystemPair, B) -> Verdict:
    """Elementwise base test: fundamental circuits outside B, fundamental cocircuits inside."""
    B = frozenset(B)
    if not B <= set(sys.ground):
        raise ValidationError("B is not a subset of the ground set")
    key = sorted_key(sys.ground)
    cee = sorted(sys.cee, key=key)
    dee = sorted(sys.dee, key=key)
    co = frozenset(sys.ground) - B
    witnesses = {}
    for x in sys.ground:
        if x in B:
            hit = next((d for d in dee if x in d and d <= co | {x}), None)
        else:
            hit = next((c for c in cee if x in c and c <= B | {x}), None)
        if hit is None:
            side = "cocircuit" if x in B else "circuit"
            return Verdict("base", False, {"element": x, "missing": side}, f"no {side} through {x}", len(witnesses))
        witnesses[x] = hit
    return Verdict("base", True, witnesses, checked=len(witnesses))


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def _classes(ground, family):
    uf = _UnionFind(ground)
    for s in minimal_sets(family):
        s = list(s)
        for x in s[1:]:
            uf.union(s[0], x)
    groups = {}
    for e in ground:
        groups.setdefault(uf.find(e), []).append(e)
    return [frozenset(g) for g in groups.values()]


def components(sys: SetSystemPair) -> list:
    """Connected components, via circuits; cross-checked via cocircuits and minors."""
    by_c = _classes(sys.ground, sys.cee)
    by_d = _classes(sys.ground, sys.dee)
    if set(by_c) != set(by_d):
        raise ValidationError("circuit and cocircuit characterisations of components disagree")
    for X in by_c:
        r, c = sys.restrict(X), sys.contract_to(X)
        if minimal_sets(r.cee) != minimal_sets(c.cee) or minimal_sets(r.dee) != minimal_sets(c.dee):
            raise ValidationError(f"restriction and contraction differ on component {sorted(map(str, X))}")
    return by_c


def verify_matroid(cert: MatroidCert, cap: int = DEFAULT_ORACLE_CAP) -> Verdict:
    """Brute-force check that (circuits, cocircuits) are those of one finite matroid."""
    n = len(cert.ground)
    if n > cap:
        raise BudgetExceeded("matroid oracle", 1 << n, 1 << cap)
    mk = _Masks(cert.ground)
    circ = [mk.mask(c) for c in cert.circuits]
    if any(c == 0 for c in circ):
        return Verdict("matroid", False, frozenset(), "empty circuit")
    for a, b in itertools.permutations(circ, 2):
        if a & b == a:
            return Verdict("matroid", False, (mk.unmask(a), mk.unmask(b)), "circuits are not an antichain")
    for a, b in itertools.combinations(circ, 2):
        common = a & b
        for i in range(n):
            if common >> i & 1:
                u = (a | b) & ~(1 << i)
                if not any(c & u == c for c in circ):
                    return Verdict(
                        "matroid",
                        False,
                        (mk.unmask(a), mk.unmask(b), mk.ground[i]),
                        "circuit elimination fails",
                    )
    indep = [m for m in range(1 << n) if not any(c & m == c for c in circ)]
    indep_set = set(indep)
    bases = [m for m in indep if not any((m | (1 << i)) in indep_set for i in range(n) if not m >> i & 1)]
    sizes = {bin(b).count("1") for b in bases}
    if len(sizes) != 1:
        return Verdict("matroid", False, sorted(sizes), "maximal independent sets of different sizes")
    # cocircuits: minimal nonempty sets meeting every base
    hitting = [m for m in range(1, 1 << n) if all(m & b for b in bases)]
    dual_circ = set(_minimal_masks(hitting))
    given = {mk.mask(d) for d in cert.cocircuits}
    if dual_circ != given:
        diff = dual_circ ^ given
        return Verdict(
            "matroid",
            False,
            sorted((sorted(map(str, mk.unmask(m))) for m in diff)),
            "cocircuits differ from the circuits of the dual",
        )
    return Verdict("matroid", True, {"rank": sizes.pop(), "bases": len(bases)}, checked=1 << n)


def bases_of_cert(cert: MatroidCert) -> list:
    mk = _Masks(cert.ground)
    n = len(cert.ground)
    circ = [mk.mask(c) for c in cert.circuits]
    indep = {m for m in range(1 << n) if not any(c & m == c for c in circ)}
    bases = [m for m in indep if not any((m | (1 << i)) in indep for i in range(n) if not m >> i & 1)]
    return [mk.unmask(b) for b in bases]


def presented_matroid(pres, budget=DEFAULT_ENUM_BUDGET, cap=DEFAULT_ORACLE_CAP) -> MatroidCert:
    cert = MatroidCert(pres.ground, min_supports(pres.vspace, budget), min_supports(pres.wspace, budget))
    verdict = verify_matroid(cert, cap)
    if not verdict.ok:
        raise AssertionError(f"presented pair fails the matroid oracle: {verdict.detail} {verdict.witness}")
    return cert
