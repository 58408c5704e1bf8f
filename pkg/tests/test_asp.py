import pytest

from l4.asp import (
    CompileError,
    compile_program,
    export_scasp,
    make_query,
    parse_query,
    range_restricted,
)
from l4.parser import parse
from l4.sem import normalize

WINNER_CLAUSE = (
    "win(G, A) :- game(G), player(A), player(B), participate(G, A), "
    "participate(G, B), throw(A, R), throw(B, S), beat(R, S)."
)


def test_winner_rule_clause(rps):
    clauses = compile_program(rps)
    rules = [str(c) for c in clauses if not c.is_fact]
    assert rules == [WINNER_CLAUSE]


def test_fact_clauses(rps):
    facts = [str(c) for c in compile_program(rps) if c.is_fact]
    assert facts == ["beat(rock, scissors).", "beat(scissors, paper).", "beat(paper, rock)."]


def test_fact_rule_compiles_to_itself():
    program = normalize(parse(
        "class\n  Sign\ndecl\n  Rock : Sign\n  Paper : Sign\n"
        "decl\n  Beat : Sign → Sign → Bool\n"
        "rule <b>\n  then Beat Paper Rock\n"
    ))
    clauses = compile_program(program)
    assert [str(c) for c in clauses] == ["beat(paper, rock)."]


def test_all_clauses_range_restricted(rps, rps_standalone):
    for program in (rps, rps_standalone):
        for clause in compile_program(program):
            assert range_restricted(clause), str(clause)


def test_conjunction_flattening_counts(rps):
    rule_clause = next(c for c in compile_program(rps) if not c.is_fact)
    # 5 condition conjuncts + membership atoms for G, A (head) and B (exists)
    assert len(rule_clause.body) == 8


def test_constant_mangling():
    program = normalize(parse(
        "class\n  Sign\ndecl\n  RockSolid : Sign\n  BigPaper : Sign\n"
        "decl\n  Beat : Sign → Sign → Bool\n"
        "rule <b>\n  then Beat RockSolid BigPaper\n"
    ))
    assert str(program.facts[0]) == "beat(rock_solid, big_paper)"


def test_mangling_collision_gets_suffix():
    program = normalize(parse(
        "class\n  Sign\ndecl\n  Rock : Sign\n  ROCK : Sign\ndecl\n  P : Sign → Bool\n"
    ))
    assert program.asp_const("Rock") == "rock"
    assert program.asp_const("ROCK") == "rock2"


# ── export ───────────────────────────────────────────────────────


def test_export_query_line(rps):
    text = export_scasp(compile_program(rps), make_query(rps, "win"))
    assert "?- win(Game, Player).\n" in text
    assert text.endswith("?- win(Game, Player).\n")


def test_export_order_facts_rules_query(rps):
    lines = export_scasp(compile_program(rps), make_query(rps, "win")).strip().splitlines()
    assert lines[0].startswith("beat(")
    assert lines[3].startswith("win(G, A) :-")
    assert lines[4] == "?- win(Game, Player)."


def test_export_empty_clauses_just_query(rps):
    text = export_scasp([], make_query(rps, "win"))
    assert text == "?- win(Game, Player).\n"


def test_export_deterministic(rps):
    one = export_scasp(compile_program(rps), make_query(rps, "win"))
    two = export_scasp(compile_program(rps), make_query(rps, "win"))
    assert one == two


def test_query_var_names_deduplicate(rps):
    query = make_query(rps, "beat")
    assert query.atom_text() == "beat(Sign, Sign2)"


def test_parse_query_binds_lowercase_args(rps):
    query = parse_query(rps, "win(rps, alice)")
    assert query.bound_args == {0: "rps", 1: "alice"}
    query = parse_query(rps, "win(Game, alice)")
    assert query.bound_args == {1: "alice"}
    assert query.atom_text() == "win(Game, alice)"


def test_parse_query_bad_arity(rps):
    with pytest.raises(CompileError):
        parse_query(rps, "win(a, b, c)")


def test_parse_query_unknown_predicate(rps):
    with pytest.raises(CompileError):
        parse_query(rps, "losses")
