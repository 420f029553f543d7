"""Clause resolution: reduction steps, search order, answer projection."""

from clph.constraints import FALSE_DNF, HedgeEq, Membership, TRUE_DNF
from clph.engine import (
    Answer,
    Atom,
    DepthCut,
    State,
    defn,
    project,
    reduce,
    rename_clause,
    solve,
)
from clph.parser import parse_program, parse_query, query_variables
from clph.printer import print_literal
from clph.syntax import FreshVars, TermVar, free_vars


def answers(goal, program, **kw):
    return [ev for ev in solve(goal, program, **kw) if isinstance(ev, Answer)]


def test_defn_returns_matching_clauses_in_program_order(corpus):
    program = parse_program((corpus / "rewrite.clph").read_text())
    fresh = FreshVars()
    for c in program.clauses:
        fresh.reserve(v.name for v in free_vars(c))
    atom = parse_query("rewrite(f(a), ?out)", program)[0]
    variants = defn(program, atom, fresh)
    assert len(variants) == 2
    assert all(v.head.name == "rewrite" for v in variants)


def test_clause_renaming_is_fresh_and_structure_preserving(corpus):
    program = parse_program((corpus / "rewrite.clph").read_text())
    clause = program.clauses[1]
    fresh = FreshVars()
    fresh.reserve(v.name for v in free_vars(clause))
    variant = rename_clause(clause, fresh)
    assert variant.head.arity == clause.head.arity
    assert not (free_vars(variant) & free_vars(clause))
    assert all(v.name.startswith("_") for v in free_vars(variant))


def test_reducing_an_atom_emits_parameter_equations(corpus):
    program = parse_program((corpus / "append_dl.clph").read_text())
    goal = parse_query(
        "append_dl(dl(f1(a, b, @xs), f2(@xs)), dl(f2(c, d, e, @ys), f3(@ys)), dl(?x, f3))",
        program,
    )
    fresh = FreshVars()
    state = State(tuple(goal), TRUE_DNF, 0)
    child = reduce(state, program, 0, clause=defn(program, goal[0], fresh)[0], fresh=fresh)
    assert child.depth == 1
    assert child.store == TRUE_DNF
    assert len(child.goal) == 3
    assert all(isinstance(l, HedgeEq) for l in child.goal)


def test_reducing_a_constraint_literal_moves_it_into_the_store():
    program = parse_program("p(a).\n")
    goal = parse_query("(?x) = (a)", program)
    state = State(tuple(goal), TRUE_DNF, 0)
    child = reduce(state, program, 0, fresh=FreshVars())
    assert child.goal == ()
    assert print_literal(child.store.disjuncts[0].literals[0]) == "?x = a"


def test_reducing_an_atom_without_clauses_fails_the_state():
    program = parse_program("p(a).\n")
    goal = parse_query("q(a)", program)
    child = reduce(State(tuple(goal), TRUE_DNF, 0), program, 0, clause=None)
    assert child.failed
    assert child.store is FALSE_DNF


def test_answers_come_in_program_order():
    program = parse_program("color(r).\ncolor(g).\ncolor(b).\n")
    goal = parse_query("color(?x)", program)
    got = [project(a.disjunct, query_variables(goal))[0][TermVar("x")] for a in answers(goal, program)]
    assert [repr(t) for t in got] == ["r", "g", "b"]


def test_max_answers_short_circuits():
    program = parse_program("color(r).\ncolor(g).\ncolor(b).\n")
    goal = parse_query("color(?x)", program)
    assert len(answers(goal, program, max_answers=2)) == 2


def test_failed_branches_yield_no_answers():
    program = parse_program("color(r).\n")
    goal = parse_query("color(?x), (?x) = (q)", program)
    assert answers(goal, program) == []


def test_depth_limit_reports_a_cut_instead_of_diverging():
    program = parse_program("loop(?x) :- loop(?x).\n")
    goal = parse_query("loop(a)", program)
    events = list(solve(goal, program, max_depth=50))
    assert events == [DepthCut(depth=50)]


def test_projection_separates_bindings_from_residual_constraints():
    program = parse_program("p(?x) :- ?x in f(a*).\n")
    goal = parse_query("p(?y)", program)
    (ans,) = answers(goal, program)
    bindings, residuals = project(ans.disjunct, query_variables(goal))
    assert set(bindings) == {TermVar("y")}
    (res,) = residuals
    assert isinstance(res, Membership)
    # the residual constrains the query variable through its binding
    assert bindings[TermVar("y")] in free_vars(res)


def test_conjunctive_goals_thread_one_store():
    program = parse_program("p(f(?u)).\nq(f(b)).\n")
    goal = parse_query("p(?x), q(?x)", program)
    (ans,) = answers(goal, program)
    bindings, _ = project(ans.disjunct, query_variables(goal))
    assert repr(bindings[TermVar("x")]) == "f(b)"


def test_reduce_observes_hooks_through_solve(corpus):
    program = parse_program((corpus / "append_dl.clph").read_text())
    goal = parse_query(
        "append_dl(dl(f1(a, b, @xs), f2(@xs)), dl(f2(c, d, e, @ys), f3(@ys)), dl(?x, f3))",
        program,
    )
    seen = []
    list(solve(goal, program, on_reduce=lambda parent, child: seen.append((parent.depth, child.depth))))
    assert seen and all(c == p + 1 for p, c in seen)
