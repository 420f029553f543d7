"""Reference oracles for the test suite.

Everything here is deliberately brute force: bounded ground enumeration,
exhaustive solution search, a textbook recursive path order.  The solver is
validated against these on small domains, so clarity wins over speed.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .constraints import DNF, Conjunction, FunctorEq, HedgeEq, Membership
from .regex import ground_member, shortest_member
from .solver import to_dnf
from .syntax import (
    Apply,
    FuncVar,
    Hedge,
    HedgeVar,
    Signature,
    Substitution,
    TermVar,
    free_vars,
    is_ground,
    iter_vars,
    ordered_vars,
    size,
)


class OracleError(Exception):
    pass


@dataclass(frozen=True)
class Bounds:
    """Limits for ground enumeration.

    max_depth bounds term nesting (a nullary term has depth 1), max_width
    bounds both argument lists and the top-level hedge length, and
    max_total_size bounds the symbol count of the whole hedge.
    """

    max_depth: int
    max_width: int
    max_total_size: int


def term_key(t: Apply):
    """A total order on ground terms, used to pick canonical argument
    orderings under unordered symbols."""
    return (t.head, len(t.args), tuple(term_key(x) for x in t.args))


def canonical_term(t: Apply, sig: Signature) -> Apply:
    args = tuple(canonical_term(x, sig) for x in t.args)
    if isinstance(t.head, str) and sig.is_unordered(t.head):
        args = tuple(sorted(args, key=term_key))
    return Apply(t.head, Hedge(args))


def canonical_hedge(h: Hedge, sig: Signature) -> Hedge:
    return Hedge(tuple(canonical_term(t, sig) for t in h))


def _hedges_over(terms, max_len: int, max_size: int):
    out = [Hedge()]
    frontier = [((), 0)]
    for _ in range(max_len):
        grown = []
        for items, sz in frontier:
            for t in terms:
                total = sz + size(t)
                if total <= max_size:
                    grown.append((items + (t,), total))
        out.extend(Hedge(items) for items, _ in grown)
        frontier = grown
    return out


def _is_sorted_args(h: Hedge) -> bool:
    keys = [term_key(t) for t in h]
    return all(a <= b for a, b in zip(keys, keys[1:]))


def enum_ground_terms(sig: Signature, bounds: Bounds):
    """All canonical ground terms within the bounds, smallest first."""
    symbols = sig.symbols
    if bounds.max_depth < 1 or bounds.max_total_size < 1 or not symbols:
        return []
    terms = [Apply(f) for f in symbols]
    for _ in range(1, bounds.max_depth):
        seen = dict.fromkeys(terms)
        for h in _hedges_over(terms, bounds.max_width, bounds.max_total_size - 1):
            if not h:
                continue
            for f in symbols:
                if sig.is_unordered(f) and not _is_sorted_args(h):
                    continue
                seen.setdefault(Apply(f, h))
        if len(seen) == len(terms):
            break
        terms = list(seen)
    terms.sort(key=lambda t: (size(t), term_key(t)))
    return terms


def enum_ground(sig: Signature, bounds: Bounds):
    """All canonical ground hedges within the bounds, smallest first."""
    terms = enum_ground_terms(sig, bounds)
    hedges = _hedges_over(terms, bounds.max_width, bounds.max_total_size)
    hedges.sort(key=lambda h: (size(h), tuple(term_key(t) for t in h)))
    return hedges


def _require_ground(obj, lit):
    if not is_ground(obj):
        raise OracleError(f"assignment does not ground {lit!r}")


def eval_ground(lit, theta: Substitution, sig: Signature) -> bool:
    """Truth of a single literal under a grounding assignment."""
    if isinstance(lit, HedgeEq):
        l, r = theta(lit.lhs), theta(lit.rhs)
        _require_ground(l, lit)
        _require_ground(r, lit)
        return canonical_hedge(l, sig) == canonical_hedge(r, sig)
    if isinstance(lit, FunctorEq):
        l = theta(lit.lhs) if isinstance(lit.lhs, FuncVar) else lit.lhs
        r = theta(lit.rhs) if isinstance(lit.rhs, FuncVar) else lit.rhs
        if not isinstance(l, str) or not isinstance(r, str):
            raise OracleError(f"assignment does not ground {lit!r}")
        return l == r
    if isinstance(lit, Membership):
        h = theta(lit.subject)
        _require_ground(h, lit)
        return ground_member(h, lit.rho, sig)
    raise TypeError(f"not a literal: {lit!r}")


def satisfies(c, theta: Substitution, sig: Signature) -> bool:
    if isinstance(c, DNF):
        return any(satisfies(d, theta, sig) for d in c.disjuncts)
    if isinstance(c, Conjunction):
        if c.is_false:
            return False
        return all(eval_ground(l, theta, sig) for l in c.literals)
    return eval_ground(c, theta, sig)


def brute_solutions(constraint, sig: Signature, bounds: Bounds, over_vars=None):
    """Every grounding of the constraint's variables within the bounds that
    satisfies it, as a set of substitutions restricted to over_vars.

    Variables listed in over_vars but absent from the constraint still range
    over the full domain, so restricted solution sets stay comparable across
    equivalent constraints with different variable footprints.
    """
    dnf = to_dnf(constraint)
    if over_vars is None:
        over_vars = ordered_vars(dnf)
    over_vars = tuple(dict.fromkeys(over_vars))
    terms = enum_ground_terms(sig, bounds)
    hedges = enum_ground(sig, bounds)
    funcs = sig.symbols
    solutions = set()
    for d in dnf.disjuncts:
        if d.is_false:
            continue
        solutions |= _brute_disjunct(d, sig, terms, hedges, funcs, over_vars)
    return solutions


def _domain(v, terms, hedges, funcs):
    if isinstance(v, TermVar):
        return terms
    if isinstance(v, HedgeVar):
        return hedges
    return funcs


def _brute_disjunct(d, sig, terms, hedges, funcs, over_vars):
    variables = list(ordered_vars(d))
    for v in over_vars:
        if v not in variables:
            variables.append(v)
    lits = d.literals
    lit_vars = [free_vars(l) for l in lits]

    # Order variables so literals become checkable as early as possible.
    order = []
    assigned = set()
    remaining = list(variables)
    while remaining:
        def score(v):
            trial = assigned | {v}
            completes = sum(
                1 for vs in lit_vars if vs and vs <= trial and not vs <= assigned
            )
            return (completes, -len(_domain(v, terms, hedges, funcs)))

        best = max(remaining, key=score)
        remaining.remove(best)
        order.append(best)
        assigned.add(best)

    seen = set()
    checks = []
    ground_checks = [j for j, vs in enumerate(lit_vars) if not vs]
    for i in range(len(order)):
        upto = set(order[: i + 1])
        row = [j for j, vs in enumerate(lit_vars) if vs and vs <= upto and j not in seen]
        seen.update(row)
        checks.append(row)

    results = set()
    term_map, hedge_map, functor_map = {}, {}, {}

    def theta():
        return Substitution(dict(term_map), dict(hedge_map), dict(functor_map))

    if not all(eval_ground(lits[j], Substitution(), sig) for j in ground_checks):
        return results

    def assign(v, val):
        if isinstance(v, TermVar):
            term_map[v] = val
        elif isinstance(v, HedgeVar):
            hedge_map[v] = val
        else:
            functor_map[v] = val

    def unassign(v):
        if isinstance(v, TermVar):
            del term_map[v]
        elif isinstance(v, HedgeVar):
            del hedge_map[v]
        else:
            del functor_map[v]

    def go(i):
        if i == len(order):
            results.add(theta().restrict(over_vars))
            return
        v = order[i]
        for val in _domain(v, terms, hedges, funcs):
            assign(v, val)
            th = theta()
            if all(eval_ground(lits[j], th, sig) for j in checks[i]):
                go(i + 1)
            unassign(v)

    go(0)
    return results


def rpo_reference(s: Apply, t: Apply, precedence: dict, status: dict) -> bool:
    """Strict recursive path order on ground ranked terms.

    precedence maps symbols to ranks (bigger is greater); status maps a
    symbol to "lex" or "mul" (default "lex").
    """
    if s == t:
        return False
    if any(si == t or rpo_reference(si, t, precedence, status) for si in s.args):
        return True
    f, g = s.head, t.head
    if precedence[f] > precedence[g]:
        return all(rpo_reference(s, tj, precedence, status) for tj in t.args)
    if f != g:
        return False
    if status.get(f, "lex") == "lex":
        if len(s.args) != len(t.args):
            return False
        if not all(rpo_reference(s, tj, precedence, status) for tj in t.args):
            return False
        for si, ti in zip(s.args, t.args):
            if si == ti:
                continue
            return rpo_reference(si, ti, precedence, status)
        return False
    ms, mt = Counter(s.args), Counter(t.args)
    common = ms & mt
    ms, mt = ms - common, mt - common
    if not ms:
        return False
    return all(
        any(rpo_reference(m, n, precedence, status) for m in ms) for n in mt
    )


def solved_grounding(
    disjunct: Conjunction, sig: Signature, over_vars=None
) -> Substitution:
    """A grounding substitution satisfying a solved disjunct.

    Membership variables take the shortest member of their language, other
    free variables take a default, and equation variables take their images
    under those choices.  Valid only for disjuncts in solved form, where
    each equation variable occurs exactly once.  Variables in over_vars that
    the disjunct no longer mentions also receive the default.
    """
    symbols = sig.symbols
    if not symbols:
        raise OracleError("cannot ground without declared symbols")
    default = Apply(symbols[0])
    counts = Counter()
    for lit in disjunct.literals:
        counts.update(iter_vars(lit))
    term_map, hedge_map, functor_map = {}, {}, {}
    eq_plan = []
    planned = set()
    for lit in disjunct.literals:
        if isinstance(lit, Membership):
            if len(lit.subject) != 1 or not isinstance(
                lit.subject[0], (TermVar, HedgeVar)
            ):
                raise OracleError(f"membership not in solved form: {lit!r}")
            v = lit.subject[0]
            h = shortest_member(lit.rho)
            if isinstance(v, TermVar):
                if len(h) != 1:
                    raise OracleError(f"membership not in solved form: {lit!r}")
                term_map[v] = h[0]
            else:
                hedge_map[v] = h
        elif isinstance(lit, HedgeEq):
            # The witness side must be a lone variable occurring nowhere
            # else; otherwise its image could smuggle a planned variable
            # past the default bindings below.
            for a, b in ((lit.lhs, lit.rhs), (lit.rhs, lit.lhs)):
                if (
                    len(a) == 1
                    and isinstance(a[0], (TermVar, HedgeVar))
                    and counts[a[0]] == 1
                    and a[0] not in planned
                ):
                    eq_plan.append((a[0], b))
                    planned.add(a[0])
                    break
            else:
                raise OracleError(f"equation not in solved form: {lit!r}")
        else:
            for a, b in ((lit.lhs, lit.rhs), (lit.rhs, lit.lhs)):
                if isinstance(a, FuncVar) and counts[a] == 1 and a not in planned:
                    eq_plan.append((a, b))
                    planned.add(a)
                    break
            else:
                raise OracleError(f"equation not in solved form: {lit!r}")
    for v in (*ordered_vars(disjunct), *(over_vars or ())):
        if v in planned or v in term_map or v in hedge_map or v in functor_map:
            continue
        if isinstance(v, TermVar):
            term_map[v] = default
        elif isinstance(v, HedgeVar):
            hedge_map[v] = Hedge()
        else:
            functor_map[v] = symbols[0]
    theta = Substitution(dict(term_map), dict(hedge_map), dict(functor_map))
    for v, img in eq_plan:
        if isinstance(v, TermVar):
            image = theta(img)
            if len(image) != 1:
                raise OracleError(f"cannot ground term variable {v!r} to {image!r}")
            term_map[v] = image[0]
        elif isinstance(v, HedgeVar):
            hedge_map[v] = theta(img)
        else:
            functor_map[v] = theta(img) if isinstance(img, FuncVar) else img
    return Substitution(term_map, hedge_map, functor_map)
