"""Constraint logic programming over hedges.

Hedges are finite sequences of unranked terms.  The package provides the
data model (terms, hedges, three variable kinds, ordered and unordered
symbols), regular hedge expressions with membership and intersection, a
rule-based constraint solver with a termination measure, a clause engine
with DFS search, static analyses (well-modedness, the KIF fragment),
reference oracles for testing, and a concrete syntax with CLI and REPL.
"""

from .constraints import (
    DNF,
    FALSE_CONJ,
    FALSE_DNF,
    TRUE_CONJ,
    TRUE_DNF,
    And,
    Conjunction,
    FalseF,
    Form,
    FunctorEq,
    HedgeEq,
    Lit,
    Membership,
    Or,
    TrueF,
    classify,
    classify_dnf,
    dnf,
    make_eq,
    make_term_eq,
)
from .engine import (
    Answer,
    Atom,
    Clause,
    DepthCut,
    Program,
    State,
    defn,
    project,
    reduce,
    solve,
)
from .modes import (
    ModeError,
    ModeReport,
    ModeTable,
    check_wellmoded_clause,
    check_wellmoded_conjunction,
    check_wellmoded_goal,
    check_wellmoded_program,
    check_wellmoded_state,
    is_kif_clause,
    is_kif_constraint,
    is_kif_hedge,
    is_kif_literal,
    is_kif_program,
    is_kif_term,
)
from .oracle import (
    Bounds,
    OracleError,
    brute_solutions,
    canonical_hedge,
    canonical_term,
    enum_ground,
    enum_ground_terms,
    eval_ground,
    rpo_reference,
    satisfies,
    solved_grounding,
)
from .parser import (
    ParseError,
    parse_constraint,
    parse_hedge,
    parse_program,
    parse_query,
    parse_regex,
    parse_term,
)
from .printer import (
    print_binding,
    print_conjunction,
    print_dnf,
    print_hedge,
    print_literal,
    print_regex,
    print_term,
)
from .regex import (
    EMPTY_LANGUAGE,
    EPS,
    Choice,
    Concat,
    Eps,
    Star,
    Sym,
    ground_member,
    intersect,
    lang_enumerate,
    lf,
    member_direct,
    nullable,
    shortest_member,
)
from .solver import MeasureError, Rule, TraceEvent, cm, cm_dnf, sol, step
from .syntax import (
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
    iter_vars,
    ordered_vars,
    size,
)

__version__ = "0.1.0"
