"""Static analyses: well-modedness and the KIF fragment."""

import pytest

from clph.constraints import FunctorEq, HedgeEq, Membership
from clph.modes import (
    ModeError,
    ModeTable,
    check_wellmoded_conjunction,
    check_wellmoded_goal,
    check_wellmoded_program,
    is_kif_clause,
    is_kif_constraint,
    is_kif_program,
    is_kif_term,
)
from clph.parser import parse_constraint, parse_program, parse_query, parse_term
from clph.regex import EPS, Sym
from clph.syntax import FuncVar, Hedge, Signature, TermVar


def test_mode_table_declarations():
    table = ModeTable()
    table.declare("p", "io")
    assert table.lookup("p", 2) == ("i", "o")
    assert table.lookup("p", 3) is None
    assert table.arities("p") == (2,)
    with pytest.raises(ModeError):
        table.declare("p", "oi")
    with pytest.raises(ModeError):
        table.declare("q", "ix")


def test_conjunction_scheduling_finds_a_data_flow_order():
    sig = Signature()
    (c,) = parse_constraint("(?x) in a & (?y) = (?x, b) & (?x) = (f(a))", sig).disjuncts
    rep = check_wellmoded_conjunction(c.literals, ModeTable())
    assert rep.ok
    # the ground equation runs first, then the membership, then ?y
    assert rep.witness == (2, 0, 1)


def test_conjunction_scheduling_reports_stuck_literals():
    lits = (
        Membership(Hedge.of(TermVar("x")), Sym("a", EPS)),
        HedgeEq(Hedge.of(TermVar("x")), Hedge.of(TermVar("y"))),
    )
    rep = check_wellmoded_conjunction(lits, ModeTable())
    assert not rep.ok
    assert "cannot schedule" in rep.violation


def test_seed_variables_count_as_known():
    lits = (Membership(Hedge.of(TermVar("x")), Sym("a", EPS)),)
    assert not check_wellmoded_conjunction(lits, ModeTable()).ok
    assert check_wellmoded_conjunction(lits, ModeTable(), seed={TermVar("x")}).ok


def test_functor_equations_flow_from_the_symbol_side():
    lits = (
        FunctorEq(FuncVar("F"), "f"),
        FunctorEq(FuncVar("G"), FuncVar("F")),
    )
    assert check_wellmoded_conjunction(lits, ModeTable()).ok
    alone = (FunctorEq(FuncVar("G"), FuncVar("F")),)
    assert not check_wellmoded_conjunction(alone, ModeTable()).ok


def test_corpus_programs_are_well_moded(corpus):
    for name in ("rewrite.clph", "rpo.clph", "append_dl.clph"):
        program = parse_program((corpus / name).read_text())
        rep = check_wellmoded_program(program)
        assert rep.ok, f"{name}: {rep.violation}"


def test_ill_moded_program_is_rejected_with_the_offending_atom():
    program = parse_program(":- mode p(i, o).\n:- mode q(i, i).\np(?x, ?y) :- q(?y, ?z).\n")
    rep = check_wellmoded_program(program)
    assert not rep.ok
    assert rep.violation == "literal 0 of p(?x, ?y) not enabled: q(?y, ?z)"


def test_missing_mode_declarations_warn_and_default_to_input():
    program = parse_program("p(?x).\n")
    rep = check_wellmoded_program(program)
    assert rep.ok
    assert rep.warnings == ("no mode declared for p/1, assuming all input",)


def test_goal_check_uses_declared_modes(corpus):
    program = parse_program((corpus / "append_dl.clph").read_text())
    good = parse_query("append_dl(dl(f1(a), f2), dl(f2, f3), dl(?x, f3))", program)
    assert check_wellmoded_goal(good, program.modes).ok
    open_goal = parse_query("append_dl(?u, ?v, ?w)", program)
    assert not check_wellmoded_goal(open_goal, program.modes).ok


@pytest.mark.parametrize(
    "text, want",
    [
        ("f(?x, @ys)", True),  # hedge variable in last position
        ("f(@ys, ?x)", False),  # but not earlier
        ("f(?x, f(?y, @zs))", True),
        ("m(?x, ?y)", True),  # unordered heads take term arguments only
        ("m(?x, @ys)", False),
        ("a", True),
    ],
)
def test_kif_terms(text, want):
    sig = Signature.of(ordered=["f", "a"], unordered=["m"])
    assert is_kif_term(parse_term(text, sig), sig) is want


def test_kif_function_variable_heads_depend_on_the_signature():
    mixed = Signature.of(ordered=["f"], unordered=["m"])
    assert is_kif_term(parse_term("^F(?x)", mixed), mixed)
    # ^F could stand for the unordered symbol, so a hedge variable is unsafe
    assert not is_kif_term(parse_term("^F(@xs)", mixed), mixed)
    plain = Signature.of(ordered=["f"])
    assert is_kif_term(parse_term("^F(@xs)", plain), plain)


def test_kif_constraints_check_every_literal():
    sig = Signature.of(ordered=["f", "a"], unordered=["m"])
    assert is_kif_constraint(parse_constraint("(f(?x, @ys)) = (f(a, a)) & (?x) in a", sig), sig)
    assert not is_kif_constraint(parse_constraint("(f(@ys, ?x)) = (f(a, a))", sig), sig)


def test_kif_membership_of_corpus_programs(corpus):
    append_dl = parse_program((corpus / "append_dl.clph").read_text())
    assert is_kif_program(append_dl)
    rewrite = parse_program((corpus / "rewrite.clph").read_text())
    assert not is_kif_program(rewrite)
    # the head of the context-descent clause carries a leading hedge variable
    assert is_kif_clause(rewrite.clauses[0], rewrite.sig)
    assert not is_kif_clause(rewrite.clauses[1], rewrite.sig)
