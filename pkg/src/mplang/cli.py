"""``mplang`` command-line entry point.

Exit status: 0 on success, 1 when a checked property fails, 2 on usage,
parse or file errors.
"""
from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import activation as _act
from . import analysis, gnn, graph, logic, normalform, translate
from .errors import MPLangError
from .evaluator import booleanize, eval
from .expr import contains_sugar, diamond_depth
from .parser import parse, to_text
from .scalar import format_scalar


class _Fail(Exception):
    """A checked property did not hold (exit status 1)."""


def _read_expr(args, colours=None):
    if getattr(args, "expr_file", None):
        text = _read(args.expr_file)
    elif args.expr is not None:
        text = args.expr
    else:
        raise MPLangError("an expression is required (-e or -E)")
    e = parse(text, colours or _colour_list(args))
    return translate.expand_sugar(e) if contains_sugar(e) else e


def _read(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise MPLangError(f"cannot read {path}: {exc}") from None


def _colour_list(args):
    raw = getattr(args, "colours", None)
    return [c.strip() for c in raw.split(",")] if raw else None


def _graph_colours(g):
    return list(g.colours) if isinstance(g, graph.ColouredGraph) else None


def _fmt(x, as_float: bool) -> str:
    return format_scalar(float(x), as_float=True) if as_float else format_scalar(x)


def _write(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# commands ---------------------------------------------------------------------

def cmd_eval(args):
    g = graph.load(args.graph)
    e = _read_expr(args, _colour_list(args) or _graph_colours(g))
    values = eval(e, g)
    if args.node is not None:
        if not 0 <= args.node < g.node_count:
            raise MPLangError(f"node {args.node} not in graph with {g.node_count} nodes")
        print(_fmt(values[args.node], args.float))
    else:
        for v, x in enumerate(values):
            print(f"{v}\t{_fmt(x, args.float)}")


def cmd_normalform(args):
    e = _read_expr(args)
    nf = normalform.to_normal_form(e, dim=args.dim)
    print(to_text(normalform.from_normal_form(nf), _colour_list(args)))


def cmd_negate(args):
    e = _read_expr(args)
    print(to_text(normalform.negate_boolean(e, dim=args.dim), _colour_list(args)))


def cmd_translate(args):
    e = _read_expr(args)
    if args.to_step:
        out = translate.to_step(e)
    else:
        out = translate.from_step(e, _act.lookup(args.from_step))
    print(to_text(out, _colour_list(args)))


def cmd_compile(args):
    e = _read_expr(args)
    _write(gnn.dumps_model(gnn.compile(e, args.dim)), args.output)


def cmd_decompile(args):
    m = gnn.load_model(args.model)
    print(to_text(gnn.decompile(m), _colour_list(args)))


def cmd_logic(args):
    g = graph.load(args.graph) if args.graph else None
    colours = _colour_list(args) or (_graph_colours(g) if g is not None else None)
    text = _read(args.formula_file) if args.formula_file else args.formula
    if text is None:
        raise MPLangError("a formula is required (-f or -F)")
    phi = logic.parse_formula(text, colours)
    if args.to_mplang:
        print(to_text(logic.logic_to_mplang(phi), colours))
        return
    if g is None:
        raise MPLangError("--eval needs a graph (-g)")
    for v, x in enumerate(logic.eval_logic(phi, g)):
        print(f"{v}\t{format_scalar(x)}")


def cmd_walkeq(args):
    g1, g2 = graph.load(args.g1), graph.load(args.g2)
    for g, v in ((g1, args.v1), (g2, args.v2)):
        if not 0 <= v < g.node_count:
            raise MPLangError(f"node {v} not in graph with {g.node_count} nodes")
    result = analysis.walk_equivalent(g1, args.v1, g2, args.v2, args.n)
    if result.equivalent:
        print("EQUIVALENT")
    else:
        print("NOT EQUIVALENT")
        print(f"{to_text(result.witness, _graph_colours(g1))}\t"
              f"{format_scalar(result.left)}\t{format_scalar(result.right)}")


def cmd_gen(args):
    fam = args.family
    nums = args.params

    def need(count):
        if len(nums) != count:
            raise MPLangError(f"gen {fam} takes {count} integer parameters")

    if fam in ("star", "rbtree"):
        need(2 if fam == "star" else 3)
        g = graph.make_star(*nums)[0] if fam == "star" else graph.make_rb_tree(*nums)
        _write(graph.dumps(g), args.output)
        return
    need(0)
    if fam == "path-example":
        (c, _), (c_prime, _) = graph.make_path_example()
        named = [("c", c), ("cprime", c_prime)]
    else:
        t1, t2, t3, _ = graph.make_nonclosure_trees()
        named = [("1", t1), ("2", t2), ("3", t3)]
    if not args.output:
        raise MPLangError(f"gen {fam} writes several graphs; give an output prefix with -o")
    for suffix, g in named:
        path = f"{args.output}_{suffix}.json"
        graph.save(g, path)
        print(path)


def cmd_demo(args):
    if args.which == "separation":
        rows = analysis.separation_demo(args.rmax, args.bmax, args.k)
        sys.stdout.write(analysis.format_tsv(analysis.separation_rows(rows)))
        ok = all(r.ok for r in rows)
    elif args.which == "shape":
        ok = _demo_shape(args)
    else:
        report = analysis.nonclosure_demo(args.samples, seed=args.seed)
        print(f"samples\t{report.samples}")
        print(f"violations\t{len(report.violations)}")
        for e in report.violations:
            print(f"violation\t{to_text(e, list(analysis.RB_COLOURS))}")
        print("conjunction\t" + "\t".join(str(x) for x in report.conjunction))
        ok = report.passed
    print("PASS" if ok else "FAIL")
    if not ok:
        raise _Fail()


def _demo_shape(args) -> bool:
    colours = list(analysis.RB_COLOURS)
    if args.expr is not None or args.expr_file:
        exprs = [_read_expr(args, colours)]
    else:
        from .randgen import random_step_expr
        rng = random.Random(args.seed)
        exprs = analysis.shape_corpus() + [
            random_step_expr(rng, 3, rng.randint(0, 3), rng.randint(2, 10)) for _ in range(args.samples)]
    rows, ok = [], True
    for e in exprs:
        k = args.k if args.k is not None else diamond_depth(e) + 2
        for r in range(args.rmax + 1):
            for b in range(args.bmax + 1):
                if not graph.rb_tree_feasible(r, b, k):
                    continue
                rep = analysis.shape_report(e, r, b, k)
                ok = ok and rep.passed
                if len(exprs) == 1:
                    rows.extend(rep.rows())
                elif not rep.passed:
                    rows.extend((*row, to_text(e, colours)) for row in rep.rows())
    header = ("r", "b", "type", "value") if len(exprs) == 1 else ("r", "b", "type", "value", "expr")
    sys.stdout.write(analysis.format_tsv(rows, header))
    return ok


# argument parsing ---------------------------------------------------------

def _add_expr(p, required=True):
    grp = p.add_mutually_exclusive_group(required=required)
    grp.add_argument("-e", "--expr", help="expression text")
    grp.add_argument("-E", "--expr-file", help="file holding the expression")
    p.add_argument("-c", "--colours", help="comma-separated colour names bound to P1, P2, ...")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mplang", description="Exact message-passing expressions over graphs.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate an expression on a graph file")
    _add_expr(p)
    p.add_argument("-g", "--graph", required=True)
    p.add_argument("-v", "--node", type=int)
    p.add_argument("--float", action="store_true", help="print decimals instead of exact rationals")
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("normalform", help="walk-count normal form of an affine expression")
    _add_expr(p)
    p.add_argument("-d", "--dim", type=int)
    p.set_defaults(fn=cmd_normalform)

    p = sub.add_parser("negate", help="affine expression for the Boolean negation")
    _add_expr(p)
    p.add_argument("-d", "--dim", type=int)
    p.set_defaults(fn=cmd_negate)

    p = sub.add_parser("translate", help="rewrite activations into step or back")
    _add_expr(p)
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--to-step", action="store_true")
    mode.add_argument("--from-step", metavar="ACT")
    p.set_defaults(fn=cmd_translate)

    p = sub.add_parser("compile", help="compile an expression into a GNN model")
    _add_expr(p)
    p.add_argument("-d", "--dim", type=int, required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(fn=cmd_compile)

    p = sub.add_parser("decompile", help="unfold a GNN model file into an expression")
    p.add_argument("-m", "--model", required=True)
    p.add_argument("-c", "--colours")
    p.set_defaults(fn=cmd_decompile)

    p = sub.add_parser("logic", help="check or translate a modal formula")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--eval", action="store_true")
    mode.add_argument("--to-mplang", action="store_true")
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("-f", "--formula")
    grp.add_argument("-F", "--formula-file")
    p.add_argument("-g", "--graph")
    p.add_argument("-c", "--colours")
    p.set_defaults(fn=cmd_logic)

    p = sub.add_parser("walkeq", help="compare walk signatures of two pointed graphs")
    p.add_argument("-g1", required=True)
    p.add_argument("-v1", type=int, required=True)
    p.add_argument("-g2", required=True)
    p.add_argument("-v2", type=int, required=True)
    p.add_argument("-n", type=int, required=True)
    p.set_defaults(fn=cmd_walkeq)

    p = sub.add_parser("gen", help="write a generated graph family")
    p.add_argument("family", choices=("star", "path-example", "rbtree", "nonclosure-trees"))
    p.add_argument("params", nargs="*", type=int)
    p.add_argument("-o", "--output", help="output file (prefix for multi-graph families)")
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("demo", help="run a checked demonstration battery")
    p.add_argument("which", choices=("separation", "shape", "nonclosure"))
    p.add_argument("--rmax", type=int, default=5)
    p.add_argument("--bmax", type=int, default=5)
    p.add_argument("-k", type=int)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-e", "--expr")
    p.add_argument("-E", "--expr-file")
    p.set_defaults(fn=cmd_demo)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "demo" and args.which == "separation" and args.k is None:
        args.k = 3
    try:
        args.fn(args)
    except _Fail:
        return 1
    except (MPLangError, ValueError, OSError) as exc:
        print(f"mplang: error: {exc}", file=sys.stderr)
        return 2
    return 0


run = main


if __name__ == "__main__":
    sys.exit(main())
