"""Command line interface.

Exit codes: 0 for success (including finite failure, which prints "no"),
1 for usage or parse errors, 2 for a failing static check.
"""

from __future__ import annotations

import argparse
import json
import sys

from .engine import DepthCut, project, solve
from .modes import check_wellmoded_program, is_kif_clause, is_kif_program
from .oracle import Bounds, enum_ground, enum_ground_terms
from .parser import (
    ParseError,
    parse_constraint,
    parse_hedge,
    parse_program,
    parse_query,
    parse_regex,
    query_variables,
)
from .printer import (
    format_trace_event,
    image_text,
    print_conjunction,
    print_dnf,
    print_hedge,
    print_literal,
    print_regex,
    print_term,
    render_answer,
)
from .regex import EMPTY_LANGUAGE, ground_member, intersect, lf
from .repl import Repl
from .solver import sol
from .syntax import Signature


class _UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _tracer(mode: str | None):
    if mode is None:
        return None
    if mode == "full":
        def full(event, dnf):
            print(format_trace_event(event), file=sys.stderr)
            print(f"  {print_dnf(dnf)}", file=sys.stderr)
        return full
    return lambda event, _dnf: print(format_trace_event(event), file=sys.stderr)


def _cmd_run(args) -> int:
    with open(args.file) as fh:
        program = parse_program(fh.read())
    goal = parse_query(args.query, program)
    qvars = query_variables(goal)
    if args.all:
        max_answers = None
    elif args.n is not None:
        if args.n < 1:
            raise _UsageError("-n must be at least 1")
        max_answers = args.n
    else:
        max_answers = 1
    answers = 0
    cuts = 0
    for ev in solve(
        goal,
        program,
        max_depth=args.max_depth,
        max_answers=max_answers,
        on_sol_step=_tracer(args.trace),
    ):
        if isinstance(ev, DepthCut):
            cuts += 1
            continue
        bindings, residuals = project(ev.disjunct, qvars)
        ordered = {v: bindings[v] for v in qvars if v in bindings}
        if args.format == "json":
            record = {
                "bindings": {repr(v): image_text(img) for v, img in ordered.items()},
                "residual": " & ".join(print_literal(l) for l in residuals),
            }
            print(json.dumps(record))
        else:
            if answers:
                print()
            print(render_answer(ordered, residuals))
        answers += 1
    if answers == 0 and args.format == "text":
        print("no")
    if cuts:
        print(f"note: {cuts} branch(es) cut at depth {args.max_depth}", file=sys.stderr)
    return 0


def _cmd_check(args) -> int:
    with open(args.file) as fh:
        program = parse_program(fh.read())
    run_all = not (args.modes or args.kif)
    failed = False
    if args.modes or run_all:
        rep = check_wellmoded_program(program)
        for w in rep.warnings:
            print(f"warning: {w}", file=sys.stderr)
        if rep.ok:
            print("modes: well moded")
        else:
            print(f"modes: not well moded: {rep.violation}")
            failed = True
    if args.kif or run_all:
        if is_kif_program(program):
            print("kif: inside the fragment")
        else:
            bad = next(
                i for i, c in enumerate(program.clauses)
                if not is_kif_clause(c, program.sig)
            )
            print(f"kif: outside the fragment: clause {bad + 1}")
            failed = True
    return 2 if failed else 0


def _cmd_solve(args) -> int:
    sig = Signature()
    d = parse_constraint(args.constraint, sig)
    result = sol(d, sig, on_step=_tracer(args.trace))
    if args.format == "json":
        record = {"disjuncts": [print_conjunction(c) for c in result.disjuncts]}
        print(json.dumps(record))
    else:
        print(print_dnf(result))
    return 0


def _cmd_repl(args) -> int:
    shell = Repl()
    for path in args.files:
        shell.load(path)
    return shell.run(lambda prompt: input(prompt))


def _dev_sig(unordered: str | None) -> Signature:
    sig = Signature()
    for name in _names(unordered):
        sig.declare(name, True)
    return sig


def _names(csv: str | None) -> list:
    return [s.strip() for s in (csv or "").split(",") if s.strip()]


def _cmd_dev(args) -> int:
    sig = _dev_sig(args.unordered)
    if args.tool == "lf":
        r = parse_regex(args.regex, sig)
        for head, tail in lf(r):
            print(f"{print_regex(head)} . {print_regex(tail)}")
        return 0
    if args.tool == "member":
        h = parse_hedge(args.hedge, sig)
        r = parse_regex(args.regex, sig)
        print("yes" if ground_member(h, r, sig) else "no")
        return 0
    if args.tool == "intersect":
        r1 = parse_regex(args.left, sig)
        r2 = parse_regex(args.right, sig)
        g = intersect(r1, r2)
        print("empty" if g is EMPTY_LANGUAGE else print_regex(g))
        return 0
    for name in _names(args.symbols):
        if not sig.is_declared(name):
            sig.declare(name, False)
    bounds = Bounds(args.depth, args.width, args.size)
    if args.tool == "ground-terms":
        for t in enum_ground_terms(sig, bounds):
            print(print_term(t))
    else:
        for h in enum_ground(sig, bounds):
            print(print_hedge(h))
    return 0


def build_parser() -> _ArgumentParser:
    p = _ArgumentParser(prog="clph", description="hedge constraint logic programming")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a query against a program file")
    run.add_argument("file")
    run.add_argument("-q", "--query", required=True)
    howmany = run.add_mutually_exclusive_group()
    howmany.add_argument("--all", action="store_true", help="enumerate all answers")
    howmany.add_argument("-n", type=int, metavar="K", help="stop after K answers")
    run.add_argument("--max-depth", type=int, default=10_000)
    run.add_argument("--trace", nargs="?", const="rules", choices=("rules", "full"))
    run.add_argument("--format", choices=("text", "json"), default="text")
    run.set_defaults(func=_cmd_run)

    check = sub.add_parser("check", help="static analyses of a program file")
    check.add_argument("--modes", action="store_true", help="well-modedness only")
    check.add_argument("--kif", action="store_true", help="KIF membership only")
    check.add_argument("file")
    check.set_defaults(func=_cmd_check)

    solve_p = sub.add_parser("solve", help="solve a standalone constraint")
    solve_p.add_argument("constraint")
    solve_p.add_argument("--trace", nargs="?", const="rules", choices=("rules", "full"))
    solve_p.add_argument("--format", choices=("text", "json"), default="text")
    solve_p.set_defaults(func=_cmd_solve)

    repl_p = sub.add_parser("repl", help="interactive shell")
    repl_p.add_argument("files", nargs="*")
    repl_p.set_defaults(func=_cmd_repl)

    dev = sub.add_parser("dev", help="inspection helpers")
    devsub = dev.add_subparsers(dest="tool", required=True)
    lf_p = devsub.add_parser("lf", help="linear form of a regex")
    lf_p.add_argument("regex")
    member_p = devsub.add_parser("member", help="ground membership test")
    member_p.add_argument("hedge")
    member_p.add_argument("regex")
    inter_p = devsub.add_parser("intersect", help="regex intersection")
    inter_p.add_argument("left")
    inter_p.add_argument("right")
    gt = devsub.add_parser("ground-terms", help="enumerate ground terms")
    gh = devsub.add_parser("ground-hedges", help="enumerate ground hedges")
    for enum_p in (gt, gh):
        enum_p.add_argument("--symbols", required=True, help="comma separated")
        enum_p.add_argument("--depth", type=int, required=True)
        enum_p.add_argument("--width", type=int, required=True)
        enum_p.add_argument("--size", type=int, required=True)
    for tool in (lf_p, member_p, inter_p, gt, gh):
        tool.add_argument("--unordered", help="comma separated unordered symbols")
    dev.set_defaults(func=_cmd_dev)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as e:
        print(f"clph: {e}", file=sys.stderr)
        return 1
    except ParseError as e:
        print(f"clph: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"clph: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
