"""Pretty-printing of terms, hedges, regexes, constraints and answers.

Printing is shape-preserving: parsing the output reproduces the value,
including the association of regex operators.
"""

from __future__ import annotations

from .constraints import DNF, Conjunction, FunctorEq, HedgeEq, Membership
from .regex import EPS, Choice, Concat, Eps, Star, Sym
from .syntax import Apply, FuncVar, Hedge, HedgeVar, TermVar


def print_functor(f) -> str:
    return f"^{f.name}" if isinstance(f, FuncVar) else f


def print_term(t) -> str:
    if isinstance(t, TermVar):
        return f"?{t.name}"
    if isinstance(t, HedgeVar):
        return f"@{t.name}"
    if isinstance(t, Apply):
        if not t.args:
            return print_functor(t.head)
        inner = ", ".join(print_term(it) for it in t.args)
        return f"{print_functor(t.head)}({inner})"
    raise TypeError(f"not a term: {t!r}")


def print_hedge(h: Hedge) -> str:
    if len(h) == 1:
        return print_term(h[0])
    return "(" + ", ".join(print_term(it) for it in h) + ")"


# Precedence levels: choice 0, concatenation 1, star/atoms 3.
def _rx(r, level: int) -> str:
    if isinstance(r, Eps):
        s, own = "eps", 3
    elif isinstance(r, Sym):
        s = r.symbol if r.body == EPS else f"{r.symbol}({_rx(r.body, 0)})"
        own = 3
    elif isinstance(r, Star):
        s, own = _rx(r.body, 3) + "*", 3
    elif isinstance(r, Concat):
        s, own = _rx(r.left, 1) + " . " + _rx(r.right, 2), 1
    elif isinstance(r, Choice):
        s, own = _rx(r.left, 0) + " | " + _rx(r.right, 1), 0
    else:
        raise TypeError(f"not a regex: {r!r}")
    return f"({s})" if own < level else s


def print_regex(r) -> str:
    return _rx(r, 0)


def print_literal(lit) -> str:
    if isinstance(lit, HedgeEq):
        return f"{print_hedge(lit.lhs)} = {print_hedge(lit.rhs)}"
    if isinstance(lit, FunctorEq):
        return f"{print_functor(lit.lhs)} = {print_functor(lit.rhs)}"
    if isinstance(lit, Membership):
        return f"{print_hedge(lit.subject)} in {print_regex(lit.rho)}"
    raise TypeError(f"not a literal: {lit!r}")


def print_conjunction(c: Conjunction) -> str:
    if c.is_false:
        return "false"
    if not c.literals:
        return "true"
    return " & ".join(print_literal(l) for l in c.literals)


def print_dnf(d: DNF) -> str:
    return " ; ".join(print_conjunction(c) for c in d.disjuncts)


def print_binding(var, image) -> str:
    if isinstance(var, FuncVar):
        return f"{print_functor(var)} = {print_functor(image)}"
    if isinstance(image, Hedge):
        return f"{print_term(var)} = {print_hedge(image)}"
    return f"{print_term(var)} = {print_term(image)}"


def image_text(image) -> str:
    if isinstance(image, Hedge):
        return print_hedge(image)
    if isinstance(image, (str, FuncVar)):
        return print_functor(image)
    return print_term(image)


def render_answer(bindings: dict, residuals) -> str:
    """Answer display: one binding per line, residual literals after."""
    lines = [print_binding(v, img) for v, img in bindings.items()]
    lines.extend("| " + print_literal(l) for l in residuals)
    if not lines:
        return "yes"
    return "\n".join(lines)


def format_trace_event(event) -> str:
    return f"{event.rule.value} @ disjunct={event.disjunct} literal={event.literal}"
