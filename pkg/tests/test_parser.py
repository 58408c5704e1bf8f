import random

import pytest

from l4 import ast_nodes as ast
from l4.parser import parse
from l4.printer import pretty_print
from l4.source import L4SyntaxError

from fuzzgen import random_source_program

BARE_CLASS_SNIPPET = """\
class # types
  Player
  Game
  Sign
"""


def test_bare_class_block():
    program = parse(BARE_CLASS_SNIPPET)
    assert len(program.blocks) == 1
    block = program.blocks[0]
    assert isinstance(block, ast.ClassBlock)
    assert [c.name for c in block.classes] == ["Player", "Game", "Sign"]
    assert all(c.fields == () for c in block.classes)


def test_empty_input():
    assert parse("") == ast.SourceProgram(())
    assert parse("   \n\n# only a comment\n") == ast.SourceProgram(())


def test_full_rps_program(rps_standalone_text=None):
    from l4 import fixtures

    program = parse(fixtures.rps_standalone_source(), "rps_standalone.l4")
    kinds = {type(b).__name__ for b in program.blocks}
    assert kinds == {"ClassBlock", "DeclBlock", "RuleBlock", "LexiconBlock"}
    winner = next(
        b.rule for b in program.blocks if isinstance(b, ast.RuleBlock) and b.rule.name == "winner"
    )
    assert len(winner.binders) == 4
    exists = [op for op in ast.conjuncts(winner.condition) if isinstance(op, ast.Exists)]
    assert len(exists) == 1


def test_arrow_right_association():
    program = parse("decl\n  Win : Player → Game → Bool\n")
    decl = program.blocks[0].decls[0]
    assert decl.declared_type == ast.Arrow(
        ast.ClassRef("Player"), ast.Arrow(ast.ClassRef("Game"), ast.BOOL)
    )


def test_ascii_arrow_equivalent():
    a = parse("decl\n  Win : Player -> Game -> Bool\n")
    b = parse("decl\n  Win : Player → Game → Bool\n")
    assert a == b


def test_class_fields_comma_or_newline():
    newline = parse("class\n  Game {\n    participate : Player → Bool\n    win : Player → Bool\n  }\n")
    comma = parse("class\n  Game { participate : Player → Bool, win : Player → Bool }\n")
    assert newline == comma


def test_fact_rule_parses():
    program = parse("rule <beatRockScissors>\n  then Beat Rock Scissors\n")
    rule = program.blocks[0].rule
    assert rule.is_fact()
    assert rule.conclusion == ast.Apply("Beat", (ast.ConstRef("Rock"), ast.ConstRef("Scissors")))


def test_exists_scopes_variable():
    program = parse(
        "rule <r>\n  for a : Player\n  if exists b : Player . Knows a b\n  then Win a\n"
    )
    rule = program.blocks[0].rule
    exists = rule.condition
    assert isinstance(exists, ast.Exists)
    assert exists.body == ast.Apply("Knows", (ast.VarRef("a"), ast.VarRef("b")))


def test_exists_extends_maximally_right():
    program = parse(
        "rule <r>\n  for a : P\n  if Foo a && exists b : P . Bar b && Baz b\n  then Win a\n"
    )
    condition = program.blocks[0].rule.condition
    operands = ast.conjuncts(condition)
    assert len(operands) == 2
    assert isinstance(operands[1], ast.Exists)
    assert len(ast.conjuncts(operands[1].body)) == 2


def test_syntax_error_carries_span_and_expected():
    with pytest.raises(L4SyntaxError) as err:
        parse("class\n  Game {\n")
    diag = err.value.diagnostics[0]
    assert diag.span.line == 2
    assert 1 <= diag.span.col <= 9
    assert err.value.expected


def test_error_on_stray_token():
    with pytest.raises(L4SyntaxError) as err:
        parse("Rock : Sign\n")
    assert "expected" in str(err.value)


def test_diagnostic_format_is_path_line_col():
    with pytest.raises(L4SyntaxError) as err:
        parse("decl\n  Rock :\n", path="bad.l4")
    assert str(err.value.diagnostics[0]).startswith("bad.l4:")


# ── pretty printer ───────────────────────────────────────────────


def test_pretty_print_decl_golden():
    program = parse("decl\n  Rock : Sign\n")
    assert pretty_print(program) == "decl\n  Rock : Sign\n"


def test_pretty_print_empty_program():
    assert pretty_print(ast.SourceProgram(())) == ""


def test_round_trip_fixture():
    from l4 import fixtures

    for source in (fixtures.rps_source(), fixtures.rps_standalone_source()):
        once = parse(source)
        again = parse(pretty_print(once))
        assert once == again


def test_round_trip_fuzzed_programs():
    rng = random.Random(20210601)
    for _ in range(100):
        program = random_source_program(rng)
        printed = pretty_print(program)
        assert parse(printed) == program, printed
