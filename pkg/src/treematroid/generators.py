"""Seeded random instances: subspaces, presentations and trees of presentations."""

from __future__ import annotations

import random

from .algebra import FieldSpec, SparseVec, Subspace, complement
from .presentation import Presentation
from .tree import TreeOfPresentations


def _scalar(field: FieldSpec, rng: random.Random):
    if field.is_finite:
        return rng.randrange(field.modulus)
    return field.coerce(rng.choice([-2, -1, 0, 0, 1, 1, 2, 3]))


def random_vector(field: FieldSpec, ground, rng: random.Random, density=0.6) -> SparseVec:
    return SparseVec(field, {e: _scalar(field, rng) for e in ground if rng.random() < density})


def random_subspace(field: FieldSpec, ground, rng: random.Random, dim=None) -> Subspace:
    ground = tuple(ground)
    if dim is None:
        dim = rng.randint(0, len(ground))
    return Subspace(field, ground, [random_vector(field, ground, rng) for _ in range(dim)])


def random_presentation(field: FieldSpec, ground, rng: random.Random, dim=None) -> Presentation:
    V = random_subspace(field, ground, rng, dim)
    return Presentation(V, complement(V))


def random_proper_pair(field: FieldSpec, ground, rng: random.Random):
    """(V, W) with W orthogonal to V but strictly smaller than its complement, or None."""
    V = random_subspace(field, ground, rng)
    C = complement(V)
    if C.dim == 0:
        return None
    basis = list(C.basis)
    rng.shuffle(basis)
    return V, Subspace(field, V.ground, basis[: rng.randrange(C.dim)])


def random_tree(field: FieldSpec, rng: random.Random, nodes=3, max_ground=4, max_shared=2) -> TreeOfPresentations:
    """A random tree of presentations; each node ground has at most ``max_ground`` elements."""
    names = [str(i) for i in range(nodes)]
    parent = {names[i]: names[rng.randrange(i)] for i in range(1, nodes)}
    degree = {t: 0 for t in names}
    for t, s in parent.items():
        degree[t] += 1
        degree[s] += 1
    shared = {}
    budget = {t: max_ground for t in names}
    for t, s in parent.items():
        room = min(budget[t] - (degree[t] - 1), budget[s] - (degree[s] - 1), max_shared)
        k = rng.randint(1, max(1, room))
        shared[(s, t)] = [f"d{t}_{j}" for j in range(k)]
        budget[t] -= k
        budget[s] -= k
        degree[t] -= 1
        degree[s] -= 1
    grounds = {t: [] for t in names}
    for (s, t), labels in shared.items():
        grounds[s] += labels
        grounds[t] += labels
    for t in names:
        extra = rng.randint(0, max(0, max_ground - len(grounds[t])))
        if not grounds[t] and extra == 0:
            extra = 1
        grounds[t] += [f"r{t}_{j}" for j in range(extra)]
        rng.shuffle(grounds[t])
    pres = {t: random_presentation(field, grounds[t], rng) for t in names}
    return TreeOfPresentations(pres, [(s, t) for (s, t) in shared])


__all__ = [
    "random_vector",
    "random_subspace",
    "random_presentation",
    "random_proper_pair",
    "random_tree",
]
