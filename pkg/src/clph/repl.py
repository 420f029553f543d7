"""Interactive shell.

IO is injectable: run() pulls lines through a prompt callback and writes to
the configured streams, so tests can script whole sessions.
"""

from __future__ import annotations

import sys

from .engine import DepthCut, Program, project, solve
from .modes import ModeTable, check_wellmoded_program, is_kif_program
from .parser import ParseError, Parser, query_variables
from .printer import format_trace_event, print_dnf, render_answer
from .solver import sol
from .syntax import Signature

HELP = """\
commands:
  <query>              run a goal, e.g.  rewrite(f(a, b), ?x)
  :load <file>         load a program file
  :solve <constraint>  solve a constraint (& conjunction, ; disjunction)
  :modes               well-modedness of the loaded program
  :kif                 KIF membership of the loaded program
  :trace on|off        solver rule tracing
  :help                this text
  :quit                leave"""


class Repl:
    def __init__(self, out=None, err=None):
        self.out = out if out is not None else sys.stdout
        self.err = err if err is not None else sys.stderr
        self.sig = Signature()
        self.modes = ModeTable()
        self.clauses: tuple = ()
        self.trace = False

    @property
    def program(self) -> Program:
        return Program(self.clauses, self.sig, self.modes)

    def say(self, text: str = "") -> None:
        print(text, file=self.out)

    def complain(self, text: str) -> None:
        print(text, file=self.err)

    def load(self, path: str) -> None:
        with open(path) as fh:
            text = fh.read()
        prog = Parser(text, self.sig, self.modes).program()
        self.clauses += prog.clauses
        self.say(f"loaded {path} ({len(prog.clauses)} clauses)")

    def run(self, input_fn) -> int:
        """Drive the shell; input_fn(prompt) returns the next line or
        raises EOFError."""
        while True:
            try:
                line = input_fn("clph> ")
            except EOFError:
                self.say()
                return 0
            if line is None:
                return 0
            line = line.strip()
            if not line:
                continue
            if line in (":quit", ":q"):
                return 0
            try:
                if line.startswith(":"):
                    self.command(line)
                else:
                    self.query(line, input_fn)
            except ParseError as e:
                self.complain(f"parse error: {e}")
            except OSError as e:
                self.complain(str(e))

    def command(self, line: str) -> None:
        name, _, rest = line.partition(" ")
        rest = rest.strip()
        if name == ":help":
            self.say(HELP)
        elif name == ":load":
            if not rest:
                self.complain("usage: :load <file>")
            else:
                self.load(rest)
        elif name == ":modes":
            rep = check_wellmoded_program(self.program)
            for w in rep.warnings:
                self.say(f"warning: {w}")
            self.say("well moded" if rep.ok else f"not well moded: {rep.violation}")
        elif name == ":kif":
            ok = is_kif_program(self.program)
            self.say("inside the KIF fragment" if ok else "outside the KIF fragment")
        elif name == ":trace":
            if rest not in ("on", "off"):
                self.complain("usage: :trace on|off")
            else:
                self.trace = rest == "on"
        elif name == ":solve":
            if not rest:
                self.complain("usage: :solve <constraint>")
                return
            d = Parser(rest, self.sig, self.modes).constraint()
            result = sol(d, self.sig, on_step=self._tracer())
            self.say(print_dnf(result))
        else:
            self.complain(f"unknown command {name} (try :help)")

    def _tracer(self):
        if not self.trace:
            return None
        return lambda event, _dnf: self.complain(format_trace_event(event))

    def query(self, line: str, input_fn) -> None:
        goal = Parser(line, self.sig, self.modes).query()
        qvars = query_variables(goal)
        answers = 0
        cuts = 0
        for ev in solve(goal, self.program, on_sol_step=self._tracer()):
            if isinstance(ev, DepthCut):
                cuts += 1
                continue
            answers += 1
            bindings, residuals = project(ev.disjunct, qvars)
            ordered = {v: bindings[v] for v in qvars if v in bindings}
            self.say(render_answer(ordered, residuals))
            try:
                more = input_fn("more? [;] ")
            except EOFError:
                return
            if more is None or more.strip() != ";":
                return
        if answers == 0:
            self.say("no")
        else:
            self.say("no more answers")
        if cuts:
            self.complain(f"note: {cuts} branch(es) cut at the depth limit")
