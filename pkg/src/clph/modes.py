"""Static analysis: well-modedness and the KIF fragment.

Mode checking treats equations and memberships as test/generate literals:
an equation is schedulable once one side is fully known and then makes all
its variables known; a membership needs every variable known already.
Atoms follow their declared per-position modes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .constraints import DNF, Conjunction, FunctorEq, HedgeEq, Membership
from .engine import Atom, Clause, Program, State
from .syntax import Apply, FuncVar, Hedge, HedgeVar, Signature, TermVar, free_vars


class ModeError(Exception):
    pass


IN = "i"
OUT = "o"


@dataclass
class ModeTable:
    """Declared modes, keyed by predicate name and arity."""

    _modes: dict = field(default_factory=dict)

    def declare(self, name: str, modes) -> None:
        modes = tuple(modes)
        for m in modes:
            if m not in (IN, OUT):
                raise ModeError(f"bad mode {m!r} for {name}")
        key = (name, len(modes))
        old = self._modes.get(key)
        if old is not None and old != modes:
            raise ModeError(
                f"conflicting mode declarations for {name}/{len(modes)}"
            )
        self._modes[key] = modes

    def lookup(self, name: str, arity: int):
        return self._modes.get((name, arity))

    def arities(self, name: str) -> tuple:
        return tuple(sorted(a for (n, a) in self._modes if n == name))

    def items(self):
        return self._modes.items()

    def __bool__(self) -> bool:
        return bool(self._modes)


@dataclass(frozen=True)
class ModeReport:
    ok: bool
    witness: tuple | None = None
    violation: str | None = None
    warnings: tuple = ()


def _atom_modes(atom: Atom, table: ModeTable, warnings: list):
    modes = table.lookup(atom.name, atom.arity)
    if modes is None:
        msg = f"no mode declared for {atom.name}/{atom.arity}, assuming all input"
        if msg not in warnings:
            warnings.append(msg)
        modes = (IN,) * atom.arity
    return modes


def invars(lit, table: ModeTable, warnings: list) -> frozenset:
    """Variables a literal requires to be known before it runs."""
    if isinstance(lit, Atom):
        modes = _atom_modes(lit, table, warnings)
        out = set()
        for m, arg in zip(modes, lit.args):
            if m == IN:
                out |= free_vars(arg)
        return frozenset(out)
    return frozenset()


def outvars(lit, table: ModeTable, warnings: list) -> frozenset:
    """Variables a literal makes known after it runs."""
    if isinstance(lit, Atom):
        modes = _atom_modes(lit, table, warnings)
        out = set()
        for m, arg in zip(modes, lit.args):
            if m == OUT:
                out |= free_vars(arg)
        return frozenset(out)
    return free_vars(lit)


def _enabled(lit, acc: set, table: ModeTable, warnings: list) -> bool:
    if isinstance(lit, Atom):
        return invars(lit, table, warnings) <= acc
    if isinstance(lit, HedgeEq):
        return free_vars(lit.lhs) <= acc or free_vars(lit.rhs) <= acc
    if isinstance(lit, FunctorEq):
        return _functor_side_vars(lit.lhs) <= acc or _functor_side_vars(lit.rhs) <= acc
    return free_vars(lit) <= acc


def _functor_side_vars(side) -> frozenset:
    return frozenset((side,)) if isinstance(side, FuncVar) else frozenset()


def check_wellmoded_conjunction(literals, table: ModeTable, seed=frozenset()):
    """Greedy data-flow scheduling; complete because enabling is monotone."""
    warnings: list = []
    literals = tuple(literals)
    acc = set(seed)
    remaining = list(range(len(literals)))
    order = []
    while remaining:
        for pos, j in enumerate(remaining):
            if _enabled(literals[j], acc, table, warnings):
                break
        else:
            stuck = ", ".join(repr(literals[j]) for j in remaining)
            return ModeReport(
                False,
                violation=f"no well-moded ordering: cannot schedule {stuck}",
                warnings=tuple(warnings),
            )
        acc |= outvars(literals[j], table, warnings)
        order.append(remaining.pop(pos))
    return ModeReport(True, witness=tuple(order), warnings=tuple(warnings))


def check_wellmoded_clause(clause: Clause, table: ModeTable):
    """Body literals must be enabled in written order; the head's output
    variables must all be known at the end."""
    warnings: list = []
    acc = set(invars(clause.head, table, warnings))
    for j, lit in enumerate(clause.body):
        if not _enabled(lit, acc, table, warnings):
            return ModeReport(
                False,
                violation=f"literal {j} of {clause.head!r} not enabled: {lit!r}",
                warnings=tuple(warnings),
            )
        acc |= outvars(lit, table, warnings)
    missing = outvars(clause.head, table, warnings) - acc
    if missing:
        names = ", ".join(sorted(v.name for v in missing))
        return ModeReport(
            False,
            violation=f"head outputs of {clause.head!r} never bound: {names}",
            warnings=tuple(warnings),
        )
    return ModeReport(True, witness=tuple(range(len(clause.body))), warnings=tuple(warnings))


def check_wellmoded_program(program: Program, table: ModeTable | None = None):
    if table is None:
        table = program.modes or ModeTable()
    warnings: list = []
    for c in program.clauses:
        rep = check_wellmoded_clause(c, table)
        warnings.extend(w for w in rep.warnings if w not in warnings)
        if not rep.ok:
            return ModeReport(False, violation=rep.violation, warnings=tuple(warnings))
    return ModeReport(True, warnings=tuple(warnings))


def check_wellmoded_goal(goal, table: ModeTable):
    return check_wellmoded_conjunction(tuple(goal), table)


def check_wellmoded_state(state: State, table: ModeTable):
    """Every non-failed disjunct of the store, joined with the goal, must
    admit a well-moded ordering."""
    warnings: list = []
    for d in state.store.disjuncts:
        if d.is_false:
            continue
        rep = check_wellmoded_conjunction(tuple(state.goal) + d.literals, table)
        warnings.extend(w for w in rep.warnings if w not in warnings)
        if not rep.ok:
            return ModeReport(False, violation=rep.violation, warnings=tuple(warnings))
    return ModeReport(True, warnings=tuple(warnings))


# --- KIF fragment ----------------------------------------------------------
#
# KIF terms restrict where hedge variables may appear: only as the last
# argument under an ordered head.  When the signature has no unordered
# symbols the same relaxation extends to functor-variable heads.


def is_kif_term(t, sig: Signature) -> bool:
    if isinstance(t, TermVar):
        return True
    if not isinstance(t, Apply):
        return False
    if isinstance(t.head, FuncVar):
        if sig.has_unordered:
            return all(is_kif_term(x, sig) for x in t.args)
        return _kif_args(t.args, sig)
    if sig.is_unordered(t.head):
        return all(is_kif_term(x, sig) for x in t.args)
    return _kif_args(t.args, sig)


def _kif_args(h: Hedge, sig: Signature) -> bool:
    items = h.items
    if items and isinstance(items[-1], HedgeVar):
        items = items[:-1]
    return all(is_kif_term(x, sig) for x in items)


def is_kif_hedge(h: Hedge, sig: Signature) -> bool:
    return _kif_args(h, sig)


def is_kif_literal(lit, sig: Signature) -> bool:
    if isinstance(lit, HedgeEq):
        return is_kif_hedge(lit.lhs, sig) and is_kif_hedge(lit.rhs, sig)
    if isinstance(lit, FunctorEq):
        return True
    if isinstance(lit, Membership):
        return is_kif_hedge(lit.subject, sig)
    if isinstance(lit, Atom):
        return is_kif_hedge(lit.args, sig)
    raise TypeError(f"not a literal: {lit!r}")


def is_kif_clause(clause: Clause, sig: Signature) -> bool:
    return is_kif_literal(clause.head, sig) and all(
        is_kif_literal(l, sig) for l in clause.body
    )


def is_kif_program(program: Program) -> bool:
    return all(is_kif_clause(c, program.sig) for c in program.clauses)


def is_kif_constraint(c, sig: Signature) -> bool:
    if isinstance(c, DNF):
        return all(is_kif_constraint(d, sig) for d in c.disjuncts)
    if isinstance(c, Conjunction):
        return all(is_kif_literal(l, sig) for l in c.literals)
    return is_kif_literal(c, sig)
