"""Command-line front end.

Every command prints ``key: value`` lines and, when there is something to
show, a ``WITNESS`` block of indented lines.  Exit codes: 0 success,
1 verdict failure, 2 usage or input error, 3 enumeration cap exceeded.
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction
from pathlib import Path

from . import formats
from .algebra import DEFAULT_ENUM_BUDGET, SparseVec, min_supports
from .axioms import (
    AXIOMS,
    DEFAULT_O2_CAP,
    DEFAULT_ORACLE_CAP,
    MatroidCert,
    SetSystemPair,
    check_axiom,
    verify_matroid,
)
from .base import StarBaseInput, build_base, im_star
from .errors import BudgetExceeded, FormatError, HypothesisViolation, TreeMatroidError
from .formats import GameFile
from .games import FIRST, PositionOrder, check_strategy, reduce_strategy, solve_game
from .graphs import (
    GraphTD,
    build_graph_game,
    enumerate_precircuits,
    generate_td,
    graph_bonds,
    graph_cycles,
    graph_partitions,
    graph_witness,
    minimal_nonempty,
)
from .o2 import (
    O2Instance,
    build_circuit_game,
    check_witness,
    circuit_winner,
    o2_witness,
    sigma_analysis,
)
from .presentation import Presentation, adjoin_x, pres_minor
from .tree import enumerate_prevectors, gen_cex, glue, prevector_span

OK, FAIL, USAGE, CAP = 0, 1, 2, 3


class Report:
    def __init__(self):
        self.lines: list[str] = []
        self.witness: list[str] = []
        self.ok = True

    def add(self, key, value):
        self.lines.append(f"{key}: {value}")

    def check(self, key, ok: bool):
        self.add(key, "yes" if ok else "no")
        self.ok = self.ok and bool(ok)

    def show(self, line, depth=0):
        self.witness.append("  " * (depth + 1) + line)

    def text(self) -> str:
        out = list(self.lines)
        if self.witness:
            out.append("WITNESS")
            out.extend(self.witness)
        return "\n".join(out) + "\n"


# -- rendering ---------------------------------------------------------------------


def fmt_set(s, ground=None) -> str:
    if ground is not None:
        pos = {e: i for i, e in enumerate(ground)}
        items = sorted(s, key=lambda e: pos.get(e, len(pos)))
    else:
        items = sorted(s, key=str)
    return "{" + ",".join(map(str, items)) + "}"


def fmt_vec(v: SparseVec, ground=None) -> str:
    keys = [e for e in ground if v[e] != 0] if ground is not None else sorted(v.support, key=str)
    return "(" + ", ".join(f"{e}:{v.field.format_scalar(v[e])}" for e in keys) + ")"


def fmt_pos(p) -> str:
    if isinstance(p, tuple) and p and p[0] == "X":
        return f"X[{p[1]}] {fmt_vec(p[2])}"
    if isinstance(p, tuple) and p and p[0] == "Y":
        t, u = p[1]
        return f"Y[{t}-{u}] {fmt_vec(p[2])}"
    if isinstance(p, frozenset):
        return fmt_set(p)
    return str(p)


def dump_strategy(rep: Report, sigma, limit=200):
    """The plays of sigma as an indented tree, one move per line."""
    children: dict = {}
    for P in sigma.plays:
        for i in range(len(P)):
            children.setdefault(P[:i], set()).add(P[: i + 1])
    shown = 0

    def walk(P, depth):
        nonlocal shown
        for Q in sorted(children.get(P, ()), key=lambda Q: repr(Q[-1])):
            if shown >= limit:
                return
            shown += 1
            rep.show(fmt_pos(Q[-1]), depth)
            walk(Q, depth + 1)

    walk((), 0)
    if shown >= limit:
        rep.show(f"... truncated after {limit} moves")


def _split(text) -> list:
    return [x for x in (text or "").split(",") if x]


def _read(path, *kinds):
    inst = formats.load(path)
    if kinds and inst.kind not in kinds:
        raise FormatError(f"file kind {inst.kind!r} not accepted here; expected {' or '.join(kinds)}")
    return inst


def _as_presentation(inst) -> Presentation:
    return glue(inst.value) if inst.kind == "tree" else inst.value


def _emit_instance(args, value, kind, rep: Report, seed=None) -> str | None:
    text = formats.dumps(value, kind, seed)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        rep.add("written", args.output)
        return None
    return text


# -- commands ------------------------------------------------------------------------


def cmd_verify_presentation(args, rep):
    inst = _read(args.file, "presentation", "tree")
    p = _as_presentation(inst)
    rep.add("field", p.field.name)
    rep.add("ground", fmt_set(p.ground, p.ground))
    rep.add("rank", p.vspace.dim)
    rep.add("corank", p.wspace.dim)
    rep.check("orthogonal", p.vspace.is_orthogonal_to(p.wspace))
    pair = SetSystemPair.from_presentation(p, args.budget)
    for name in ("O1", "O2", "tame"):
        v = check_axiom(pair, name, cap=args.o2_cap)
        rep.check(name, v.ok)
        if not v.ok:
            rep.show(f"{name}: {v.detail} {v.witness}")
    if len(p.ground) > args.oracle_cap:
        raise BudgetExceeded("matroid oracle", 1 << len(p.ground), 1 << args.oracle_cap)
    cert = MatroidCert(p.ground, min_supports(p.vspace, args.budget), min_supports(p.wspace, args.budget))
    v = verify_matroid(cert, args.oracle_cap)
    rep.check("matroid", v.ok)
    if v.ok:
        rep.add("bases", v.witness["bases"])


def cmd_circuits(args, rep):
    inst = _read(args.file, "presentation", "tree")
    p = _as_presentation(inst)
    U = p.wspace if args.cocircuits else p.vspace
    fam = sorted(min_supports(U, args.budget), key=lambda s: (len(s), sorted(p.ground.index(e) for e in s)))
    rep.add("kind", "cocircuits" if args.cocircuits else "circuits")
    rep.add("count", len(fam))
    for c in fam:
        rep.show(fmt_set(c, p.ground))


def cmd_minor(args, rep):
    inst = _read(args.file, "presentation")
    P, Q = _split(args.contract), _split(args.delete)
    m = pres_minor(inst.value, P, Q)
    rep.add("contracted", fmt_set(P, inst.value.ground))
    rep.add("deleted", fmt_set(Q, inst.value.ground))
    rep.add("ground", fmt_set(m.ground, m.ground))
    return _emit_instance(args, m, "presentation", rep)


def _parse_vec(field, text) -> SparseVec:
    entries = {}
    for part in _split(text):
        e, _, c = part.partition(":")
        if not e or not c:
            raise FormatError(f"bad vector entry {part!r}; use e:c pairs")
        try:
            entries[e] = field.coerce(Fraction(c))
        except (ValueError, ZeroDivisionError):
            raise FormatError(f"bad scalar {c!r}") from None
    return SparseVec(field, entries)


def cmd_adjoin(args, rep):
    inst = _read(args.file, "presentation")
    p = inst.value
    x = _parse_vec(p.field, args.x)
    q = adjoin_x(p, x, args.star)
    rep.add("x", fmt_vec(x, p.ground))
    rep.add("ground", fmt_set(q.ground, q.ground))
    return _emit_instance(args, q, "presentation", rep)


def cmd_glue(args, rep):
    inst = _read(args.file, "tree")
    g = glue(inst.value)
    rep.add("nodes", len(inst.value.nodes))
    rep.add("ground", fmt_set(g.ground, g.ground))
    rep.add("rank", g.vspace.dim)
    return _emit_instance(args, g, "presentation", rep)


def cmd_enumerate_prevectors(args, rep):
    tree = _read(args.file, "tree").value
    pvs = enumerate_prevectors(tree, args.covector, budget=args.budget)
    G = glue(tree)
    span = prevector_span(tree, args.covector, budget=args.budget)
    rep.add("kind", "pre-covectors" if args.covector else "pre-vectors")
    rep.add("count", len(pvs))
    rep.check("span-equals-glue", span.same_space(G.wspace if args.covector else G.vspace))
    for pv in pvs:
        nodes = [t for t in tree.nodes if t in pv.subtree]
        local = "; ".join(f"{t}={fmt_vec(pv.local_map[t], tree.pres(t).ground)}" for t in nodes)
        rep.show(f"{fmt_set(nodes, tree.nodes)} {local} -> {fmt_set(pv.support(tree), G.ground)}")


def cmd_check_axioms(args, rep):
    inst = _read(args.file, "presentation", "tree")
    p = _as_presentation(inst)
    pair = SetSystemPair.from_presentation(p, args.budget)
    names = _split(args.axioms) or ["O1", "O2", "tame", "IM"]
    rng = random.Random(args.seed)
    for name in names:
        if name not in AXIOMS:
            raise FormatError(f"unknown axiom {name!r}; choose from {', '.join(AXIOMS)}")
        v = check_axiom(pair, name, cap=args.o2_cap, rng=rng)
        rep.check(name, v.ok)
        if not v.ok:
            rep.show(f"{name}: {v.detail} {v.witness}")


def cmd_o2_witness(args, rep):
    inst: O2Instance = _read(args.file, "o2-instance").value
    w = o2_witness(inst)
    tree = inst.tree
    rep.add("e", inst.e)
    rep.add("side", w.kind)
    rep.add("support", fmt_set(w.support(tree), tree.real_edges))
    rep.check("valid", check_witness(inst, w))
    for t in tree.nodes:
        if t in w.carrier.subtree:
            rep.show(f"{t}: {fmt_vec(w.carrier.local_map[t], tree.pres(t).ground)}")


def _game_from(args, inst):
    """(game, given strategy or None, order or None, o2 instance or None)."""
    if inst.kind == "game":
        gf: GameFile = inst.value
        return gf.game, gf.strategy, gf.order, None
    o2 = inst.value
    return build_circuit_game(o2, args.cocircuit, budget=args.budget), None, None, o2


def cmd_solve_game(args, rep):
    inst = _read(args.file, "game", "o2-instance")
    game, _, _, o2 = _game_from(args, inst)
    res = solve_game(game)
    rep.add("positions", len(game.positions))
    rep.add("moves", len(game.edges))
    rep.add("winner", "first" if res.winner == FIRST else "second")
    if o2 is not None:
        rep.add("winner-name", circuit_winner(res.winner, args.cocircuit))
    rep.add("strategy-plays", len(res.strategy))
    dump_strategy(rep, res.strategy, args.limit)


def cmd_reduce_strategy(args, rep):
    inst = _read(args.file, "game", "o2-instance")
    game, sigma, order, _ = _game_from(args, inst)
    order = order or PositionOrder.construction(game)
    if sigma is None:
        res = solve_game(game)
        if res.winner != FIRST:
            rep.add("winner", "second")
            rep.check("first-player-wins", False)
            return
        sigma = res.strategy
    before = check_strategy(game, sigma, order)
    rep.check("input-winning", before.is_strategy and before.is_winning)
    if not (before.is_strategy and before.is_winning):
        rep.show(f"{before.detail} {before.witness}")
        return
    red = reduce_strategy(game, sigma, order)
    after = check_strategy(game, red, order)
    rep.add("plays-before", len(sigma))
    rep.add("plays-after", len(red))
    rep.check("winning", after.is_strategy and after.is_winning)
    rep.check("reduced", bool(after.is_reduced))
    rep.check("splice-closed", bool(after.splice_closed))
    dump_strategy(rep, red, args.limit)


def cmd_sigma_analysis(args, rep):
    inst: O2Instance = _read(args.file, "o2-instance").value
    game = build_circuit_game(inst, projective=not args.all_scalars, budget=args.budget)
    order = PositionOrder.construction(game)
    res = solve_game(game)
    if res.winner != FIRST:
        rep.add("winner", circuit_winner(res.winner))
        rep.check("sarah-wins", False)
        return
    sigma = res.strategy if args.unreduced else reduce_strategy(game, res.strategy, order)
    sa = sigma_analysis(inst, sigma, order, game)
    rep.add("subtree", fmt_set(sa.subtree, inst.tree.nodes))
    rep.add("reduced", "yes" if sa.reduced else "no")
    rep.add("max-continuations", max((c[2] for c in sa.counts), default=0))
    rep.check("within-bound", sa.ok)
    for s, (t, u), n, bound in sa.violations:
        rep.show(f"{' > '.join(fmt_pos(p) for p in s)} into {t}-{u}: {n} > {bound}")


def cmd_im_star(args, rep):
    tree = _read(args.file, "tree").value
    inp = StarBaseInput(tree, args.center, frozenset(_split(args.X)), frozenset(_split(args.Y)))
    res = im_star(inp)
    G = tree.real_edges
    rep.add("X", fmt_set(res.X, G))
    rep.add("Y", fmt_set(res.Y, G))
    for k, ok in res.bullets.items():
        rep.check(k, ok)
    for t, (F, PF, QF) in res.localized.items():
        rep.show(f"{t}: F={fmt_set(F)} P_F={fmt_set(PF)} Q_F={fmt_set(QF)}")


def cmd_build_base(args, rep):
    tree = _read(args.file, "tree").value
    root = args.root if args.root is not None else tree.nodes[0]
    cert = build_base(tree, root)
    G = tree.real_edges
    rep.add("root", root)
    rep.add("base", fmt_set(cert.X, G))
    rep.add("cobase", fmt_set(cert.Y, G))
    rep.add("size", len(cert.X))
    rep.check("conditions", all(all(c.values()) for c in cert.conditions.values()))
    rep.check("global", all(cert.global_checks.values()))
    rep.check("is-base", bool(cert.base_verdict))
    rep.add("cert", "OK" if cert.ok else "FAILED")
    for t in cert.order:
        rep.show(f"{t}: X={fmt_set(cert.X_t[t])} Y={fmt_set(cert.Y_t[t])}")


def cmd_graph_verify(args, rep):
    inst = _read(args.file, "graph", "td")
    G, td = inst.value if inst.kind == "td" else (inst.value, generate_td(inst.value))
    gt = GraphTD(G, td)
    C = minimal_nonempty(p.underlying(G.edge_names) for p in enumerate_precircuits(G, td, budget=args.budget, gt=gt))
    D = minimal_nonempty(p.underlying(G.edge_names) for p in enumerate_precircuits(G, td, True, budget=args.budget, gt=gt))
    rep.add("vertices", len(G.vertices))
    rep.add("edges", len(G.edges))
    rep.add("parts", len(td.nodes))
    rep.check("circuits-match", C == graph_cycles(G))
    rep.check("bonds-match", D == graph_bonds(G))
    seed = args.seed if args.seed is not None else inst.seed
    rng = random.Random(seed if seed is not None else 0)
    swept = mismatched = 0
    for e, P, Q in graph_partitions(G, args.partitions, rng):
        swept += 1
        r = solve_game(build_graph_game(G, td, e, P, Q, gt=gt), materialize=False)
        kind, wit = graph_witness(G, e, P, Q)
        if (r.winner == FIRST) != (kind == "circuit"):
            mismatched += 1
            rep.show(f"e={e} P={fmt_set(P, G.edge_names)} game={r.winner} witness={kind} {fmt_set(wit, G.edge_names)}")
    rep.add("partitions", swept)
    rep.check("game-matches-witness", mismatched == 0)


def cmd_gen_cex(args, rep):
    cex = gen_cex(args.n)
    rep.add("n", args.n)
    rep.add("nodes", len(cex.tree.nodes))
    rep.add("intersection", len(cex.intersection))
    rep.check("at-least-2n", len(cex.intersection) >= 2 * args.n)
    rep.show(fmt_set(cex.intersection, cex.tree.real_edges))
    if args.output:
        formats.dump(cex.tree, args.output, "tree", args.seed)
        rep.add("written", args.output)


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--oracle-cap", type=int, default=DEFAULT_ORACLE_CAP, help="largest ground set for brute-force matroid checks")
    common.add_argument("--o2-cap", type=int, default=DEFAULT_O2_CAP, help="work cap for the (O2) partition sweep")
    common.add_argument("--budget", type=int, default=DEFAULT_ENUM_BUDGET, help="cap on enumerated vectors and positions")
    common.add_argument("--seed", type=int, default=None, help="seed for sampled checks")
    common.add_argument("-o", "--output", default=None, help="write the produced instance file here (minor, adjoin, glue, gen-cex)")

    ap = argparse.ArgumentParser(prog="treematroid", description="Presentations, trees of presentations and their games.")
    sub = ap.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, fn, helptext, file=True):
        p = sub.add_parser(name, parents=[common], help=helptext, description=helptext)
        if file:
            p.add_argument("file", help="instance file")
        p.set_defaults(fn=fn)
        return p

    add("verify-presentation", cmd_verify_presentation, "check orthogonality, (O1), (O2) and the matroid oracle")
    p = add("circuits", cmd_circuits, "list circuits (minimal nonempty vector supports)")
    p.add_argument("--cocircuits", action="store_true")
    p = add("minor", cmd_minor, "contract and delete elements")
    p.add_argument("--contract", default="", help="comma-separated elements")
    p.add_argument("--delete", default="", help="comma-separated elements")
    p = add("adjoin", cmd_adjoin, "adjoin a fresh element for the vector x")
    p.add_argument("--x", required=True, help="entries as e:c pairs, e.g. a:1,b:-1/2")
    p.add_argument("--star", default="*", help="name of the new element")
    add("glue", cmd_glue, "glue a tree of presentations")
    p = add("enumerate-prevectors", cmd_enumerate_prevectors, "list pre-vectors of a tree")
    p.add_argument("--covector", action="store_true")
    p = add("check-axioms", cmd_check_axioms, "run axiom scans on the support families")
    p.add_argument("--axioms", default="", help=f"comma-separated subset of {','.join(AXIOMS)}")
    add("o2-witness", cmd_o2_witness, "find the pre-vector or pre-covector witness for a partition")
    for name, fn, helptext in (
        ("solve-game", cmd_solve_game, "solve a game file or the circuit game of an instance"),
        ("reduce-strategy", cmd_reduce_strategy, "reduce a winning first-player strategy"),
    ):
        p = add(name, fn, helptext)
        p.add_argument("--cocircuit", action="store_true", help="use the cocircuit game of an instance")
        p.add_argument("--limit", type=int, default=200, help="moves shown in the strategy dump")
    p = add("sigma-analysis", cmd_sigma_analysis, "count continuations of a reduced strategy per tree edge")
    p.add_argument("--unreduced", action="store_true", help="analyse the solver's strategy as is")
    p.add_argument("--all-scalars", action="store_true", help="one challenge per nonzero functional")
    p = add("im-star", cmd_im_star, "extend (X, Y) on a star")
    p.add_argument("--center", default="*")
    p.add_argument("--X", default="")
    p.add_argument("--Y", default="")
    p = add("build-base", cmd_build_base, "build a certified base of a glued tree")
    p.add_argument("--root", default=None)
    p = add("graph-verify", cmd_graph_verify, "compare precircuits with cycles and bonds; sweep game partitions")
    p.add_argument("--partitions", type=int, default=64, help="sampled partitions (all if fewer exist)")
    p = add("gen-cex", cmd_gen_cex, "build the n-leaf counterexample star", file=False)
    p.add_argument("--n", type=int, required=True)
    return ap


def run_command(argv=None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    rep = Report()
    try:
        emitted = args.fn(args, rep)
    except BudgetExceeded as exc:
        rep.add("error", str(exc))
        out.write(rep.text())
        return CAP
    except HypothesisViolation as exc:
        rep.add("error", str(exc))
        rep.show(fmt_pos(exc.witness) if isinstance(exc.witness, frozenset) else repr(exc.witness))
        out.write(rep.text())
        return FAIL
    except (TreeMatroidError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except AssertionError as exc:
        rep.add("error", str(exc))
        rep.ok = False
        emitted = None
    if emitted is not None:
        out.write(emitted)
    else:
        rep.add("verdict", "OK" if rep.ok else "FAIL")
        out.write(rep.text())
    return OK if rep.ok else FAIL


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
