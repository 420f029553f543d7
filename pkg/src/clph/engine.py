"""The CLP engine: programs, states, clause selection and resolution.

Search is depth-first with chronological backtracking; the leftmost goal
literal is selected, clause alternatives are tried in program order.
The constraint store is a whole DNF carried through every state; answers
fan out per non-false disjunct once the goal is empty.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .constraints import (
    DNF,
    FALSE_DNF,
    TRUE_DNF,
    Conjunction,
    FunctorEq,
    HedgeEq,
    Membership,
    make_eq,
)
from .solver import sol
from .syntax import (
    FreshVars,
    FuncVar,
    Hedge,
    HedgeVar,
    Signature,
    Substitution,
    TermVar,
    free_vars,
    iter_vars,
    occurs_in,
    register_children,
)


@dataclass(frozen=True)
class Atom:
    """A predicate applied to a sequence of argument items."""

    name: str
    args: Hedge

    @property
    def arity(self) -> int:
        return len(self.args)

    def __repr__(self) -> str:
        return f"{self.name}{self.args!r}"


@iter_vars.register
def _(a: Atom):
    yield from iter_vars(a.args)


register_children(Atom, lambda a: (a.args,))


@dataclass(frozen=True)
class Clause:
    head: Atom
    body: tuple = ()  # Atom | HedgeEq | FunctorEq | Membership

    def __repr__(self) -> str:
        if not self.body:
            return f"{self.head!r}."
        return f"{self.head!r} :- {', '.join(repr(b) for b in self.body)}."


@iter_vars.register
def _(c: Clause):
    yield from iter_vars(c.head)
    for lit in c.body:
        yield from iter_vars(lit)


register_children(Clause, lambda c: (c.head,) + c.body)


@dataclass(frozen=True)
class Program:
    clauses: tuple = ()
    sig: Signature = field(default_factory=Signature)
    modes: object = None  # ModeTable, attached by the parser

    def __repr__(self) -> str:
        return f"Program({len(self.clauses)} clauses)"


@dataclass(frozen=True)
class State:
    goal: tuple
    store: DNF
    depth: int = 0

    @property
    def failed(self) -> bool:
        return self.store == FALSE_DNF


@dataclass(frozen=True)
class Answer:
    """One answer: a non-false disjunct of a finished state's store."""

    disjunct: Conjunction


@dataclass(frozen=True)
class DepthCut:
    """A branch abandoned at the depth limit (not a failure)."""

    depth: int


def rename_clause(clause: Clause, fresh: FreshVars) -> Clause:
    """A variant of the clause with every variable replaced by a fresh one."""
    term_map, hedge_map, functor_map = {}, {}, {}
    for v in dict.fromkeys(iter_vars(clause)):
        hint = v.name.lstrip("_") or "v"
        if isinstance(v, TermVar):
            term_map[v] = fresh.fresh(TermVar, hint)
        elif isinstance(v, HedgeVar):
            hedge_map[v] = Hedge((fresh.fresh(HedgeVar, hint),))
        else:
            functor_map[v] = fresh.fresh(FuncVar, hint)
    theta = Substitution(term_map, hedge_map, functor_map)
    return _subst_clause(clause, theta)


def _subst_atom(a: Atom, theta: Substitution) -> Atom:
    return Atom(a.name, theta(a.args))


def _subst_clause(c: Clause, theta: Substitution) -> Clause:
    body = tuple(
        _subst_atom(l, theta) if isinstance(l, Atom) else _subst_goal_literal(l, theta)
        for l in c.body
    )
    return Clause(_subst_atom(c.head, theta), body)


def _subst_goal_literal(lit, theta):
    # Renaming is kind-preserving, so no re-normalization can trigger.
    if isinstance(lit, HedgeEq):
        return HedgeEq(theta(lit.lhs), theta(lit.rhs))
    if isinstance(lit, FunctorEq):
        l = theta(lit.lhs) if isinstance(lit.lhs, FuncVar) else lit.lhs
        r = theta(lit.rhs) if isinstance(lit.rhs, FuncVar) else lit.rhs
        return FunctorEq(l, r)
    return Membership(theta(lit.subject), lit.rho)


def defn(program: Program, atom: Atom, fresh: FreshVars) -> list:
    """Fresh variants of the clauses matching the atom's name and arity."""
    return [
        rename_clause(c, fresh)
        for c in program.clauses
        if c.head.name == atom.name and c.head.arity == atom.arity
    ]


def is_constraint_literal(lit) -> bool:
    return isinstance(lit, (HedgeEq, FunctorEq, Membership))


def _conjoin(store: DNF, lit) -> DNF:
    parts = tuple(
        c if c.is_false else Conjunction(c.literals + (lit,)) for c in store.disjuncts
    )
    return DNF(parts)


def _droppable(lit, counts) -> bool:
    """Is the literal satisfiable on its own, with a lone variable side?

    counts maps each variable to the number of store literals mentioning
    it.  Such literals are exactly what projection discards at answer
    time when they cannot reach the query.
    """
    if isinstance(lit, HedgeEq):
        for a, b in ((lit.lhs, lit.rhs), (lit.rhs, lit.lhs)):
            if (
                len(a) == 1
                and isinstance(a[0], (TermVar, HedgeVar))
                and counts[a[0]] == 1
                and not occurs_in(a[0], b)
            ):
                if isinstance(a[0], TermVar) and len(b) != 1:
                    continue
                return True
        return False
    if isinstance(lit, FunctorEq):
        return any(
            isinstance(v, FuncVar) and v != img and counts[v] == 1
            for v, img in ((lit.lhs, lit.rhs), (lit.rhs, lit.lhs))
        )
    s = lit.subject
    return len(s) == 1 and isinstance(s[0], (TermVar, HedgeVar)) and counts[s[0]] == 1


def _compact(store: DNF, keep, sig: Signature) -> DNF:
    """Drop store literals that can no longer influence the derivation.

    A literal goes when its variables cannot reach the keep set through
    shared-variable chains and it is independently satisfiable.  Answers
    are unchanged: projection would discard exactly these literals, and
    satisfiability of every disjunct is preserved.  Stores stay small
    instead of accumulating one solved equation per parameter passed.
    """
    if not sig.symbols:
        return store
    out = []
    changed = False
    for c in store.disjuncts:
        if c.is_false or not c.literals:
            out.append(c)
            continue
        varsets = [free_vars(l) for l in c.literals]
        counts = Counter()
        for vs in varsets:
            counts.update(vs)
        reach = set(keep)
        growing = True
        while growing:
            growing = False
            for vs in varsets:
                if not vs.isdisjoint(reach) and not vs <= reach:
                    reach |= vs
                    growing = True
        kept = []
        for j, lit in enumerate(c.literals):
            if varsets[j] and varsets[j].isdisjoint(reach) and _droppable(lit, counts):
                changed = True
            else:
                kept.append(lit)
        out.append(c if len(kept) == len(c.literals) else Conjunction(tuple(kept)))
    return DNF(tuple(out)) if changed else store


def reduce(
    state: State,
    program: Program,
    literal_index: int = 0,
    clause: Clause | None = None,
    fresh: FreshVars | None = None,
    on_sol_step=None,
) -> State:
    """One resolution step on the selected goal literal.

    Constraint literals move into the store via sol; atoms are replaced by
    parameter-passing equations followed by the chosen clause's body.  An
    atom with no matching clause fails the state.
    """
    if not state.goal:
        raise IndexError("cannot reduce a finished state")
    if not 0 <= literal_index < len(state.goal):
        raise IndexError(f"no goal literal at index {literal_index}")
    lit = state.goal[literal_index]
    rest = state.goal[:literal_index] + state.goal[literal_index + 1 :]
    if fresh is None:
        fresh = FreshVars()
    if is_constraint_literal(lit):
        new_store = sol(
            _conjoin(state.store, lit), program.sig, fresh, on_step=on_sol_step
        )
        if new_store == FALSE_DNF:
            return State((), FALSE_DNF, state.depth + 1)
        return State(rest, new_store, state.depth + 1)
    if clause is None:
        return State((), FALSE_DNF, state.depth + 1)
    if clause.head.arity != lit.arity:
        raise ValueError("clause arity does not match the selected atom")
    param_eqs = tuple(
        make_eq(Hedge((g,)), Hedge((r,)), program.sig)
        for g, r in zip(lit.args, clause.head.args)
    )
    new_goal = (
        state.goal[:literal_index]
        + param_eqs
        + clause.body
        + state.goal[literal_index + 1 :]
    )
    return State(new_goal, state.store, state.depth + 1)


def solve(
    goal,
    program: Program,
    *,
    max_depth: int = 10_000,
    max_answers: int | None = None,
    fresh: FreshVars | None = None,
    on_reduce=None,
    on_sol_step=None,
):
    """Yield Answer and DepthCut events for the goal, leftmost-first DFS.

    on_reduce(parent_state, child_state) observes every reduction; used by
    the mode-preservation instrumentation and by tracing.
    """
    if fresh is None:
        fresh = FreshVars()
    goal = tuple(goal)
    qvars = set()
    for l in goal:
        qvars |= free_vars(l)
    fresh.reserve(v.name for v in qvars)
    for c in program.clauses:
        fresh.reserve(v.name for v in free_vars(c))
    emitted = 0
    stack = [State(goal, TRUE_DNF, 0)]
    while stack:
        st = stack.pop()
        if st.failed:
            continue
        if not st.goal:
            for d in st.store.disjuncts:
                if not d.is_false:
                    yield Answer(d)
                    emitted += 1
                    if max_answers is not None and emitted >= max_answers:
                        return
            continue
        if st.depth >= max_depth:
            yield DepthCut(st.depth)
            continue
        lit = st.goal[0]
        if is_constraint_literal(lit):
            child = reduce(st, program, 0, fresh=fresh, on_sol_step=on_sol_step)
            if not child.failed:
                keep = set(qvars)
                for l in child.goal:
                    keep |= free_vars(l)
                store = _compact(child.store, keep, program.sig)
                if store is not child.store:
                    child = State(child.goal, store, child.depth)
            if on_reduce is not None:
                on_reduce(st, child)
            stack.append(child)
        else:
            clauses = defn(program, lit, fresh)
            if not clauses:
                child = reduce(st, program, 0, clause=None, fresh=fresh)
                if on_reduce is not None:
                    on_reduce(st, child)
                continue
            children = [reduce(st, program, 0, clause=c, fresh=fresh) for c in clauses]
            if on_reduce is not None:
                for child in children:
                    on_reduce(st, child)
            stack.extend(reversed(children))


def project(disjunct: Conjunction, query_vars):
    """Split a final disjunct into bindings for the query variables and
    residual literals constraining them (directly or through bindings)."""
    if disjunct.is_false:
        raise ValueError("cannot project the false constraint")
    qvars = set(query_vars)
    bindings = {}
    used = set()
    for j, lit in enumerate(disjunct.literals):
        if isinstance(lit, HedgeEq):
            for a, b in ((lit.lhs, lit.rhs), (lit.rhs, lit.lhs)):
                if len(a) != 1 or not isinstance(a[0], (TermVar, HedgeVar)):
                    continue
                v = a[0]
                if v in qvars and v not in bindings and v not in free_vars(b):
                    if isinstance(v, TermVar):
                        if len(b) == 1:
                            bindings[v] = b[0]
                        else:
                            continue
                    else:
                        bindings[v] = b
                    used.add(j)
                    break
        elif isinstance(lit, FunctorEq):
            for v, other in ((lit.lhs, lit.rhs), (lit.rhs, lit.lhs)):
                if isinstance(v, FuncVar) and v in qvars and v not in bindings and v != other:
                    bindings[v] = other
                    used.add(j)
                    break
    relevant = set(qvars)
    for img in bindings.values():
        if not isinstance(img, str):
            relevant |= free_vars(img)
    residuals = []
    changed = True
    taken = set(used)
    while changed:
        changed = False
        for j, lit in enumerate(disjunct.literals):
            if j in taken:
                continue
            vs = free_vars(lit)
            if vs & relevant:
                residuals.append((j, lit))
                taken.add(j)
                relevant |= vs
                changed = True
    residuals.sort()
    return bindings, [lit for _, lit in residuals]
