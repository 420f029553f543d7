import pytest

from clph.syntax import (
    EMPTY,
    Apply,
    FreshVars,
    FuncVar,
    Hedge,
    HedgeVar,
    Signature,
    SignatureError,
    Substitution,
    TermVar,
    free_vars,
    is_ground,
    is_term,
    occurs_in,
    ordered_vars,
    perms,
    size,
)


def T(head, *args):
    return Apply(head, Hedge(tuple(args)))


def test_variable_kinds_are_distinct():
    assert TermVar("x") == TermVar("x")
    assert TermVar("x") != HedgeVar("x")
    assert HedgeVar("x") != FuncVar("x")
    assert len({TermVar("x"), TermVar("x"), HedgeVar("x")}) == 2


def test_hedge_is_a_sequence():
    h = Hedge.of(T("a"), HedgeVar("xs"), T("b"))
    assert len(h) == 3
    assert h[0] == T("a")
    assert h[1:] == Hedge.of(HedgeVar("xs"), T("b"))
    assert h + EMPTY == h
    assert not EMPTY and bool(h)


def test_hedge_rejects_foreign_elements():
    with pytest.raises(TypeError):
        Hedge(("a",))
    with pytest.raises(TypeError):
        Hedge((FuncVar("F"),))


def test_apply_validates_head_and_args():
    assert is_term(T("f", T("a")))
    assert is_term(TermVar("x"))
    assert not is_term(HedgeVar("xs"))
    with pytest.raises(TypeError):
        Apply(42)
    with pytest.raises(TypeError):
        Apply("f", (T("a"),))


def test_signature_remembers_declaration_order():
    sig = Signature.of(ordered=["f", "a"], unordered=["m"])
    assert sig.symbols == ("f", "a", "m")
    assert sig.is_unordered("m")
    assert not sig.is_unordered("f")
    assert not sig.is_unordered("undeclared")
    assert sig.has_unordered
    assert not Signature.of(ordered=["f"]).has_unordered


def test_signature_rejects_conflicting_declarations():
    sig = Signature.of(ordered=["f"])
    sig.declare("f")  # re-declaring the same kind is fine
    with pytest.raises(SignatureError):
        sig.declare("f", unordered=True)


def test_free_vars_and_first_occurrence_order():
    h = Hedge.of(T("f", TermVar("y"), HedgeVar("xs")), T(FuncVar("F")), TermVar("y"))
    assert free_vars(h) == frozenset({TermVar("y"), HedgeVar("xs"), FuncVar("F")})
    assert ordered_vars(h) == (TermVar("y"), HedgeVar("xs"), FuncVar("F"))
    assert occurs_in(HedgeVar("xs"), h)
    assert not occurs_in(HedgeVar("ys"), h)
    assert not is_ground(h)
    assert is_ground(T("f", T("a")))


def test_size_counts_symbols_and_variables():
    assert size(T("f", T("a"), T("g", T("b")))) == 4
    assert size(Hedge.of(TermVar("x"), HedgeVar("xs"))) == 2
    assert size(EMPTY) == 0


def test_substitution_drops_identity_pairs():
    theta = Substitution(
        term_map={TermVar("x"): TermVar("x"), TermVar("y"): T("a")},
        hedge_map={HedgeVar("xs"): Hedge.of(HedgeVar("xs"))},
    )
    assert theta.domain() == frozenset({TermVar("y")})
    assert not Substitution().domain()
    assert Substitution().is_identity


def test_hedge_variables_splice_in_place():
    theta = Substitution.bind(HedgeVar("xs"), Hedge.of(T("c"), T("d")))
    t = T("f", T("a"), HedgeVar("xs"), T("b"))
    assert theta(t) == T("f", T("a"), T("c"), T("d"), T("b"))
    # binding a lone term wraps it into a one-element hedge
    assert Substitution.bind(HedgeVar("xs"), T("c"))(Hedge.of(HedgeVar("xs"))) == Hedge.of(T("c"))


def test_functor_variables_rename_heads():
    theta = Substitution(functor_map={FuncVar("F"): "g"})
    assert theta(T(FuncVar("F"), TermVar("x"))) == T("g", TermVar("x"))


def test_compose_applies_left_substitution_first():
    first = Substitution.bind(TermVar("x"), T("f", TermVar("y")))
    second = Substitution.bind(TermVar("y"), T("a"))
    both = first.compose(second)
    obj = Hedge.of(TermVar("x"), TermVar("y"))
    assert both(obj) == second(first(obj))
    assert both(obj) == Hedge.of(T("f", T("a")), T("a"))


def test_restrict_keeps_only_requested_variables():
    theta = Substitution(
        term_map={TermVar("x"): T("a"), TermVar("y"): T("b")},
    )
    kept = theta.restrict([TermVar("x")])
    assert kept.domain() == frozenset({TermVar("x")})


def test_fresh_names_avoid_reserved_ones():
    fresh = FreshVars()
    fresh.reserve(["x", "_x1"])
    v1 = fresh.fresh(TermVar, "x")
    v2 = fresh.fresh(TermVar, "x")
    assert (v1.name, v2.name) == ("_x2", "_x3")
    assert fresh.fresh(HedgeVar, "xs").name == "_xs1"


def test_perms_enumerates_all_orders():
    assert len(perms((1, 2, 3))) == 6
    assert perms(()) == [()]
