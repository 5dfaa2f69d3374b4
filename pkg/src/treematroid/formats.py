"""Instance files: canonical JSON for presentations, trees, (O2) instances, graphs, decompositions and games.

Every file is a JSON object with a ``kind`` key.  ``dumps`` writes a fixed
key order, two-space indentation and a trailing newline, so a file produced
by ``dumps`` parses and re-serializes to the same bytes.  Arrays and
objects holding only scalars stay on one line, so each vector, edge and
play is one line of the file.  Vectors are objects keyed by edge id in
ground order; rational scalars that are not integers are "p/q" strings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .algebra import FieldSpec, SparseVec, Subspace, complement
from .errors import FormatError, TreeMatroidError
from .games import PositionalGame, PositionOrder, Strategy
from .graphs import Graph, TreeDecomposition
from .o2 import O2Instance
from .presentation import Presentation
from .tree import TreeOfPresentations

KINDS = ("presentation", "tree", "o2-instance", "graph", "td", "game")


@dataclass
class GameFile:
    game: PositionalGame
    strategy: Strategy | None = None
    order: PositionOrder | None = None


@dataclass
class Instance:
    kind: str
    value: object
    seed: int | None = None


# -- locating problems in the source text ------------------------------------------


def _locate(text: str, token) -> tuple:
    if text is None:
        return None, None
    i = text.find(json.dumps(token))
    if i < 0 and isinstance(token, str):
        i = text.find(token)
    if i < 0:
        return None, None
    line = text.count("\n", 0, i) + 1
    col = i - (text.rfind("\n", 0, i) + 1) + 1
    return line, col


class _Ctx:
    def __init__(self, text):
        self.text = text

    def fail(self, message, token=None):
        line, col = _locate(self.text, token) if token is not None else (None, None)
        raise FormatError(message, line, col)

    def need(self, obj, key, kind=None):
        if not isinstance(obj, dict) or key not in obj:
            self.fail(f"missing key {key!r}", None)
        val = obj[key]
        if kind is not None and not isinstance(val, kind):
            self.fail(f"key {key!r} has the wrong type", key)
        return val

    def wrap(self, fn, token=None):
        try:
            return fn()
        except FormatError:
            raise
        except (TreeMatroidError, ValueError, TypeError, KeyError, ZeroDivisionError) as exc:
            self.fail(str(exc), token)


# -- scalars and vectors ---------------------------------------------------------------


def _scalar_out(field: FieldSpec, x):
    return field.format_scalar(x)


def _scalar_in(ctx: _Ctx, field: FieldSpec, raw):
    if isinstance(raw, bool) or not isinstance(raw, (int, str)):
        ctx.fail(f"scalar {raw!r} must be an integer or a 'p/q' string", raw)
    if isinstance(raw, str):
        try:
            raw = Fraction(raw)
        except (ValueError, ZeroDivisionError):
            ctx.fail(f"bad scalar {raw!r}", raw)
    return ctx.wrap(lambda: field.coerce(raw), raw)


def _vec_out(v: SparseVec, ground) -> dict:
    return {str(e): _scalar_out(v.field, v[e]) for e in ground if v[e] != 0}


def _vec_in(ctx, field, raw, ground) -> SparseVec:
    if not isinstance(raw, dict):
        ctx.fail("a vector must be an object mapping edge ids to scalars", raw)
    gset = set(ground)
    entries = {}
    for e, c in raw.items():
        if e not in gset:
            ctx.fail(f"vector entry {e!r} is outside the ground set", e)
        entries[e] = _scalar_in(ctx, field, c)
    return SparseVec(field, entries)


def _field_in(ctx, raw) -> FieldSpec:
    if not isinstance(raw, str):
        ctx.fail("field must be a string such as 'GF(2)' or 'Q'", "field")
    return ctx.wrap(lambda: FieldSpec.parse(raw), raw)


# -- per-kind payloads -----------------------------------------------------------------


def _pres_payload(p: Presentation) -> dict:
    return {
        "ground": [str(e) for e in p.ground],
        "vectors": [_vec_out(b, p.ground) for b in p.vspace.basis],
        "covectors": [_vec_out(b, p.ground) for b in p.wspace.basis],
    }


def _pres_in(ctx, field, obj) -> Presentation:
    ground = ctx.need(obj, "ground", list)
    if any(not isinstance(e, str) for e in ground):
        ctx.fail("edge ids must be strings", "ground")
    if len(set(ground)) != len(ground):
        ctx.fail("repeated edge id in ground", "ground")
    vecs = [_vec_in(ctx, field, v, ground) for v in ctx.need(obj, "vectors", list)]
    V = Subspace(field, ground, vecs)
    if "covectors" in obj:
        covs = [_vec_in(ctx, field, w, ground) for w in ctx.need(obj, "covectors", list)]
        return ctx.wrap(lambda: Presentation(V, Subspace(field, ground, covs)), "covectors")
    return Presentation(V, complement(V))


def _tree_payload(t: TreeOfPresentations) -> dict:
    return {
        "field": t.field.name,
        "nodes": [{"id": str(n), **_pres_payload(t.pres(n))} for n in t.nodes],
        "edges": [[str(a), str(b)] for a, b in t.edges],
    }


def _tree_in(ctx, obj) -> TreeOfPresentations:
    field = _field_in(ctx, ctx.need(obj, "field"))
    nodes = {}
    for raw in ctx.need(obj, "nodes", list):
        nid = ctx.need(raw, "id", str)
        if nid in nodes:
            ctx.fail(f"repeated node id {nid!r}", nid)
        nodes[nid] = _pres_in(ctx, field, raw)
    edges = ctx.need(obj, "edges", list)
    for e in edges:
        if not (isinstance(e, list) and len(e) == 2):
            ctx.fail("tree edges must be pairs of node ids", "edges")
    return ctx.wrap(lambda: TreeOfPresentations(nodes, [tuple(e) for e in edges]), "edges")


def _graph_payload(G: Graph) -> dict:
    return {"vertices": list(G.vertices), "edges": [list(e) for e in G.edges]}


def _graph_in(ctx, obj) -> Graph:
    verts = ctx.need(obj, "vertices", list)
    edges = ctx.need(obj, "edges", list)
    for e in edges:
        if not (isinstance(e, list) and len(e) == 3):
            ctx.fail("graph edges must be [name, u, v] triples", "edges")
    return ctx.wrap(lambda: Graph([str(v) for v in verts], [tuple(map(str, e)) for e in edges]), "edges")


def _td_payload(G: Graph, td: TreeDecomposition) -> dict:
    pos = {v: i for i, v in enumerate(G.vertices)}
    return {
        "graph": _graph_payload(G),
        "nodes": list(td.nodes),
        "tree_edges": [list(e) for e in td.tree_edges],
        "parts": {t: sorted(td.parts[t], key=pos.__getitem__) for t in td.nodes},
        "edge_part": {e: td.edge_part[e] for e in G.edge_names},
    }


def _td_in(ctx, obj):
    G = _graph_in(ctx, ctx.need(obj, "graph", dict))
    td = ctx.wrap(
        lambda: TreeDecomposition(
            ctx.need(obj, "nodes", list),
            [tuple(e) for e in ctx.need(obj, "tree_edges", list)],
            ctx.need(obj, "parts", dict),
            ctx.need(obj, "edge_part", dict),
        ),
        "parts",
    )
    ctx.wrap(lambda: td.validate(G), "parts")
    return G, td


def _game_payload(gf: GameFile) -> dict:
    g = gf.game
    out = {
        "start": g.start,
        "positions": list(g.positions),
        "edges": [[p, q] for p, q in g.edges],
    }
    if gf.order is not None:
        out["order"] = list(gf.order.ranking)
    if gf.strategy is not None:
        out["strategy"] = {
            "player": gf.strategy.player,
            "plays": [list(P) for P in gf.strategy.sorted_plays()],
        }
    return out


def _game_in(ctx, obj) -> GameFile:
    start = ctx.need(obj, "start", str)
    positions = ctx.need(obj, "positions", list)
    edges = ctx.need(obj, "edges", list)
    for e in edges:
        if not (isinstance(e, list) and len(e) == 2):
            ctx.fail("game edges must be position pairs", "edges")
    game = ctx.wrap(lambda: PositionalGame.from_edges(start, [tuple(e) for e in edges], positions), "edges")
    order = None
    if "order" in obj:
        order = ctx.wrap(lambda: PositionOrder(tuple(obj["order"])), "order")
    strat = None
    if "strategy" in obj:
        raw = ctx.need(obj, "strategy", dict)
        strat = ctx.wrap(
            lambda: Strategy(ctx.need(raw, "player", int), frozenset(tuple(P) for P in ctx.need(raw, "plays", list))),
            "strategy",
        )
    return GameFile(game, strat, order)


# -- entry points ------------------------------------------------------------------------


def to_payload(kind: str, value) -> dict:
    if kind == "presentation":
        return {"kind": kind, "field": value.field.name, **_pres_payload(value)}
    if kind == "tree":
        return {"kind": kind, **_tree_payload(value)}
    if kind == "o2-instance":
        inst: O2Instance = value
        real = inst.tree.real_edges
        return {
            "kind": kind,
            "tree": _tree_payload(inst.tree),
            "e": inst.e,
            "P": [x for x in real if x in inst.P],
            "Q": [x for x in real if x in inst.Q],
        }
    if kind == "graph":
        return {"kind": kind, **_graph_payload(value)}
    if kind == "td":
        G, td = value
        return {"kind": kind, **_td_payload(G, td)}
    if kind == "game":
        gf = value if isinstance(value, GameFile) else GameFile(value)
        return {"kind": kind, **_game_payload(gf)}
    raise FormatError(f"unknown kind {kind!r}")


def kind_of(value) -> str:
    if isinstance(value, Presentation):
        return "presentation"
    if isinstance(value, TreeOfPresentations):
        return "tree"
    if isinstance(value, O2Instance):
        return "o2-instance"
    if isinstance(value, Graph):
        return "graph"
    if isinstance(value, tuple) and len(value) == 2 and isinstance(value[1], TreeDecomposition):
        return "td"
    if isinstance(value, (PositionalGame, GameFile)):
        return "game"
    raise FormatError(f"cannot serialize {type(value).__name__}")


def _flat(x) -> bool:
    items = x.values() if isinstance(x, dict) else x
    return not any(isinstance(y, (dict, list)) for y in items)


def _render(x, depth=0) -> str:
    """Indented JSON in which containers of scalars stay on one line."""
    if not isinstance(x, (dict, list)) or _flat(x):
        return json.dumps(x, ensure_ascii=False)
    pad, inner = "  " * depth, "  " * (depth + 1)
    if isinstance(x, dict):
        body = [f"{inner}{json.dumps(k, ensure_ascii=False)}: {_render(v, depth + 1)}" for k, v in x.items()]
        return "{\n" + ",\n".join(body) + "\n" + pad + "}"
    return "[\n" + ",\n".join(inner + _render(v, depth + 1) for v in x) + "\n" + pad + "]"


def dumps(value, kind: str | None = None, seed: int | None = None) -> str:
    if isinstance(value, Instance):
        kind, seed, value = value.kind, value.seed, value.value
    payload = to_payload(kind or kind_of(value), value)
    if seed is not None:
        payload["seed"] = seed
    return _render(payload) + "\n"


def loads(text: str) -> Instance:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"malformed JSON: {exc.msg}", exc.lineno, exc.colno) from None
    ctx = _Ctx(text)
    if not isinstance(obj, dict):
        ctx.fail("an instance file must hold a JSON object")
    kind = obj.get("kind")
    if kind not in KINDS:
        ctx.fail(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}", kind if isinstance(kind, str) else "kind")
    seed = obj.get("seed")
    if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int)):
        ctx.fail("seed must be an integer", "seed")
    if kind == "presentation":
        field = _field_in(ctx, ctx.need(obj, "field"))
        value = _pres_in(ctx, field, obj)
    elif kind == "tree":
        value = _tree_in(ctx, obj)
    elif kind == "o2-instance":
        tree = _tree_in(ctx, ctx.need(obj, "tree", dict))
        e = ctx.need(obj, "e", str)
        P, Q = ctx.need(obj, "P", list), ctx.need(obj, "Q", list)
        value = ctx.wrap(lambda: O2Instance(tree, e, frozenset(P), frozenset(Q)), e)
    elif kind == "graph":
        value = _graph_in(ctx, obj)
    elif kind == "td":
        value = _td_in(ctx, obj)
    else:
        value = _game_in(ctx, obj)
    return Instance(kind, value, seed)


def load(path) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def dump(value, path, kind=None, seed=None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(value, kind, seed))


__all__ = ["KINDS", "GameFile", "Instance", "dumps", "loads", "dump", "load", "to_payload", "kind_of"]
