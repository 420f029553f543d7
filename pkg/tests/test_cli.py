"""Command line entry points and the interactive shell."""

import io
import json

import pytest

from clph.cli import main
from clph.repl import Repl


def test_solve_prints_the_normal_form(capsys):
    assert main(["solve", "(?x, ?y) = (a, b)"]) == 0
    assert capsys.readouterr().out == "?x = a & ?y = b\n"


def test_solve_prints_false_for_unsatisfiable_input(capsys):
    assert main(["solve", "a = b"]) == 0
    assert capsys.readouterr().out == "false\n"


def test_solve_json_format(capsys):
    assert main(["solve", "--format", "json", "(?x, ?y) = (a, b)"]) == 0
    record = json.loads(capsys.readouterr().out)
    assert record == {"disjuncts": ["?x = a & ?y = b"]}


def test_solve_trace_goes_to_stderr(capsys):
    assert main(["solve", "--trace", "(?x, ?y) = (a, b)"]) == 0
    out, err = capsys.readouterr()
    assert out == "?x = a & ?y = b\n"
    assert err == "D2 @ disjunct=0 literal=0\n"


def test_parse_errors_exit_with_one(capsys):
    assert main(["solve", "(?x) = (f(a)"]) == 1
    err = capsys.readouterr().err
    assert err.startswith("clph: line 1, col 13")


def test_missing_program_file_exits_with_one(tmp_path, capsys):
    assert main(["run", str(tmp_path / "nope.clph"), "-q", "p(a)"]) == 1
    assert "clph:" in capsys.readouterr().err


def test_run_prints_bindings_for_the_query_variables(corpus, capsys):
    code = main(
        [
            "run",
            str(corpus / "append_dl.clph"),
            "-q",
            "append_dl(dl(f1(a, b, @xs), f2(@xs)), dl(f2(c, d, e, @ys), f3(@ys)), dl(?x, f3))",
        ]
    )
    assert code == 0
    assert capsys.readouterr().out == "@xs = (c, d, e)\n@ys = ()\n?x = f1(a, b, c, d, e)\n"


def test_run_all_separates_answers_with_blank_lines(corpus, capsys):
    code = main(
        [
            "run",
            str(corpus / "rewrite.clph"),
            "--all",
            "-q",
            "rewrite(f(f(f(a, a), b)), ?x)",
        ]
    )
    assert code == 0
    blocks = capsys.readouterr().out.strip().split("\n\n")
    assert blocks == ["?x = f(f(f(a, a), f))", "?x = f(f(f(a, a), f(b)))"]


def test_run_reports_finite_failure_as_no(corpus, capsys):
    code = main(["run", str(corpus / "rewrite.clph"), "-q", "rewrite(a, ?x)"])
    assert code == 0
    assert capsys.readouterr().out == "no\n"


def test_run_json_emits_one_record_per_answer(corpus, capsys):
    code = main(
        [
            "run",
            str(corpus / "rewrite.clph"),
            "--all",
            "--format",
            "json",
            "-q",
            "rewrite(f(f(f(a, a), b)), ?x)",
        ]
    )
    assert code == 0
    records = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert [r["bindings"]["?x"] for r in records] == [
        "f(f(f(a, a), f))",
        "f(f(f(a, a), f(b)))",
    ]


def test_run_rejects_nonpositive_answer_counts(corpus, capsys):
    assert main(["run", str(corpus / "rewrite.clph"), "-n", "0", "-q", "rewrite(a, ?x)"]) == 1


def test_check_passes_a_program_inside_both_fragments(corpus, capsys):
    assert main(["check", str(corpus / "append_dl.clph")]) == 0
    assert capsys.readouterr().out == "modes: well moded\nkif: inside the fragment\n"


def test_check_fails_on_a_program_outside_kif(corpus, capsys):
    assert main(["check", str(corpus / "rpo.clph")]) == 2
    out = capsys.readouterr().out
    assert "modes: well moded" in out
    assert "kif: outside the fragment: clause 1" in out


def test_check_can_scope_to_one_analysis(corpus, capsys):
    assert main(["check", "--modes", str(corpus / "rpo.clph")]) == 0
    assert capsys.readouterr().out == "modes: well moded\n"


def test_dev_member(capsys):
    assert main(["dev", "member", "(a, a)", "a*"]) == 0
    assert capsys.readouterr().out == "yes\n"
    assert main(["dev", "member", "(a, b)", "a*"]) == 0
    assert capsys.readouterr().out == "no\n"


def test_dev_member_honours_unordered_symbols(capsys):
    assert main(["dev", "member", "--unordered", "m", "(m(b, a))", "m(a . b)"]) == 0
    assert capsys.readouterr().out == "yes\n"


def test_dev_intersect(capsys):
    assert main(["dev", "intersect", "a*", "b*"]) == 0
    assert capsys.readouterr().out == "eps\n"
    assert main(["dev", "intersect", "a", "b"]) == 0
    assert capsys.readouterr().out == "empty\n"


def test_dev_ground_hedges(capsys):
    code = main(
        ["dev", "ground-hedges", "--symbols", "a", "--depth", "1", "--width", "1", "--size", "1"]
    )
    assert code == 0
    assert capsys.readouterr().out == "()\n(a)\n"


def repl_session(lines, *paths):
    out, err = io.StringIO(), io.StringIO()
    shell = Repl(out=out, err=err)
    for p in paths:
        shell.load(str(p))
    feed = iter(lines)
    prompts = []

    def input_fn(prompt):
        prompts.append(prompt)
        try:
            return next(feed)
        except StopIteration:
            raise EOFError

    code = shell.run(input_fn)
    return code, out.getvalue(), err.getvalue(), prompts


def test_repl_answers_queries_and_prompts_for_more(corpus):
    code, out, err, prompts = repl_session(
        [
            "append_dl(dl(f1(a, @xs), f2(@xs)), dl(f2(b, @ys), f3(@ys)), dl(?x, f3))",
            "",
            ":quit",
        ],
        corpus / "append_dl.clph",
    )
    assert code == 0
    assert err == ""
    assert "?x = f1(a, b)" in out
    assert prompts[1] == "more? [;] "


def test_repl_solve_and_static_commands(corpus):
    code, out, err, _ = repl_session(
        [":solve (?x, @y) = (a, b, c)", ":modes", ":kif", ":quit"],
        corpus / "append_dl.clph",
    )
    assert code == 0
    assert "?x = a & @y = (b, c)" in out
    assert "well moded" in out
    assert "inside the KIF fragment" in out


def test_repl_reports_parse_errors_and_continues():
    code, out, err, prompts = repl_session(["(?x = (a)", ":quit"])
    assert code == 0
    assert "parse error" in err
    assert len(prompts) == 2
