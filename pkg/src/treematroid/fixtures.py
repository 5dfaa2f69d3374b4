"""Small named instances used by the tests, the acceptance suite and the CLI examples.

Each builder returns a fresh value.  The same instances ship as canonical
JSON files under ``treematroid/fixtures``; ``fixture_path`` locates them and
``write_fixtures`` regenerates them.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .algebra import FieldSpec, SparseVec
from .formats import GameFile, dump
from .games import PositionalGame
from .graphs import Graph, TreeDecomposition
from .presentation import Presentation, make_presentation
from .tree import TreeOfPresentations, gen_cex, make_star

GF2 = FieldSpec.gf(2)


def cycle_presentation(*ground, field: FieldSpec = GF2) -> Presentation:
    """The presentation whose only circuit is the whole ground set."""
    return make_presentation(ground, [SparseVec(field, {e: 1 for e in ground})], field=field)


def tri(field: FieldSpec = GF2) -> Presentation:
    return cycle_presentation("a", "b", "c", field=field)


def twosum(field: FieldSpec = GF2) -> TreeOfPresentations:
    """Two triangles glued along the dummy g."""
    return TreeOfPresentations(
        {"1": cycle_presentation("a", "b", "g", field=field), "2": cycle_presentation("g", "c", "d", field=field)},
        [("1", "2")],
    )


def path3(field: FieldSpec = GF2) -> TreeOfPresentations:
    """Triangle, square, triangle in a path; the glued matroid is one circuit on a..f."""
    return TreeOfPresentations(
        {
            "1": cycle_presentation("a", "b", "g1", field=field),
            "2": cycle_presentation("g1", "c", "d", "g2", field=field),
            "3": cycle_presentation("g2", "e", "f", field=field),
        },
        [("1", "2"), ("2", "3")],
    )


def tri_star(field: FieldSpec = GF2) -> TreeOfPresentations:
    """A triangle on a, b, g with one leaf on {g, x} where g and x are parallel."""
    leaf = make_presentation(("g", "x"), [SparseVec(field, {"g": 1, "x": 1})], field=field)
    return make_star(cycle_presentation("a", "b", "g", field=field), {"L": leaf})


def cex3() -> TreeOfPresentations:
    return gen_cex(3).tree


def k4_two_parts() -> tuple[Graph, TreeDecomposition]:
    """K4 with the edge xy held by a second part that meets the first in {x, y}."""
    G = Graph(
        ("x", "y", "u", "v"),
        (("xy", "x", "y"), ("xu", "x", "u"), ("xv", "x", "v"), ("yu", "y", "u"), ("yv", "y", "v"), ("uv", "u", "v")),
    )
    parts = {"t0": ("x", "y", "u", "v"), "t1": ("x", "y")}
    edge_part = {name: ("t1" if name == "xy" else "t0") for name in G.edge_names}
    td = TreeDecomposition(("t0", "t1"), (("t0", "t1"),), parts, edge_part)
    td.validate(G)
    return G, td


def triangle_path() -> tuple[Graph, TreeDecomposition]:
    """Three triangles in a chain, one per part, consecutive ones sharing a cut vertex."""
    verts = ("1", "2", "3", "4", "5", "6", "7")
    tris = (("1", "2", "3"), ("3", "4", "5"), ("5", "6", "7"))
    edges, edge_part, parts = [], {}, {}
    for i, (p, q, r) in enumerate(tris):
        t = f"t{i}"
        parts[t] = (p, q, r)
        for u, v in ((p, q), (q, r), (p, r)):
            edges.append((u + v, u, v))
            edge_part[u + v] = t
    G = Graph(verts, edges)
    td = TreeDecomposition(("t0", "t1", "t2"), (("t0", "t1"), ("t1", "t2")), parts, edge_part)
    td.validate(G)
    return G, td


def toy_game() -> PositionalGame:
    """Sarah opens with m; Colin challenges with c1 or c2; r1 answers both, r2 only c1."""
    return PositionalGame.from_edges(
        "s",
        [("s", "m"), ("m", "c1"), ("m", "c2"), ("c1", "r2"), ("c1", "r1"), ("c2", "r1")],
        ["s", "m", "c1", "c2", "r2", "r1"],
    )


FIXTURES = {
    "TRI": ("presentation", tri),
    "TWOSUM": ("tree", twosum),
    "PATH3": ("tree", path3),
    "TRISTAR": ("tree", tri_star),
    "CEX3": ("tree", cex3),
    "K4": ("td", k4_two_parts),
    "TRIPATH": ("td", triangle_path),
    "TOYGAME": ("game", lambda: GameFile(toy_game())),
}

PRESENTATION_FIXTURES = {"TRI": tri}
TREE_FIXTURES = {"TWOSUM": twosum, "PATH3": path3, "TRISTAR": tri_star, "CEX3": cex3}
GRAPH_FIXTURES = {"K4": k4_two_parts, "TRIPATH": triangle_path}


def fixture(name: str):
    return FIXTURES[name][1]()


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("treematroid") / "fixtures" / f"{name}.json"))


def write_fixtures(directory=None) -> list:
    directory = Path(directory) if directory else fixture_path("TRI").parent
    directory.mkdir(parents=True, exist_ok=True)
    out = []
    for name, (kind, build) in FIXTURES.items():
        path = directory / f"{name}.json"
        dump(build(), path, kind)
        out.append(path)
    return out


__all__ = [
    "cycle_presentation",
    "tri",
    "twosum",
    "path3",
    "tri_star",
    "cex3",
    "k4_two_parts",
    "triangle_path",
    "toy_game",
    "FIXTURES",
    "PRESENTATION_FIXTURES",
    "TREE_FIXTURES",
    "GRAPH_FIXTURES",
    "fixture",
    "fixture_path",
    "write_fixtures",
]
