import pytest

from l4 import fixtures
from l4.parser import parse
from l4.printer import pretty_print
from l4.sem import (
    FieldOf,
    Membership,
    Standalone,
    UnknownGoal,
    askable_predicates,
    normalize,
    standalone_source,
    type_check,
)
from l4.source import SemanticError


def test_field_predicate_prepends_owner(rps):
    win = rps.predicate("win")
    assert win.arg_classes == ("Game", "Player")
    assert win.origin == FieldOf("Game")


def test_standalone_predicate_unchanged(rps_standalone):
    beat = rps_standalone.predicate("Beat")
    assert beat.arg_classes == ("Sign", "Sign")
    assert beat.origin == Standalone()


def test_membership_predicates_synthesized(rps):
    for cls in ("Player", "Game", "Sign"):
        member = rps.membership_predicate(cls)
        assert member.arg_classes == (cls,)
        assert member.asp_name == cls.lower()
        assert isinstance(member.origin, Membership)


def test_enumerated_flags(rps):
    assert rps.class_info("Sign").is_enumerated
    assert not rps.class_info("Player").is_enumerated
    assert not rps.class_info("Game").is_enumerated
    assert rps.class_info("Sign").constants == ("Rock", "Paper", "Scissors")


def test_groupings_agree_up_to_argument_order(rps, rps_standalone):
    field = {p.asp_name: p.arg_classes for p in rps.user_predicates()}
    standalone = {p.asp_name: p.arg_classes for p in rps_standalone.user_predicates()}
    assert set(field) == set(standalone)
    assert field["participate"] == ("Game", "Player")
    assert standalone["participate"] == ("Player", "Game")
    assert sorted(field["participate"]) == sorted(standalone["participate"])
    assert field["throw"] == standalone["throw"] == ("Player", "Sign")


def test_facts_extracted(rps):
    assert [str(f) for f in rps.facts] == [
        "beat(rock, scissors)",
        "beat(scissors, paper)",
        "beat(paper, rock)",
    ]


def test_normalize_idempotent(rps_standalone):
    # re-expressing the normalized program as standalone source and
    # normalizing again changes nothing
    again = normalize(parse(pretty_print(standalone_source(rps_standalone))))
    assert again.classes == rps_standalone.classes
    assert again.predicates == rps_standalone.predicates
    assert again.facts == rps_standalone.facts
    assert again.rules == rps_standalone.rules


def test_duplicate_predicate_rejected():
    source = "class\n  A\ndecl\n  P : A → Bool\n  P : A → Bool\n"
    with pytest.raises(SemanticError) as err:
        normalize(parse(source))
    assert any(d.code == "duplicate-predicate" for d in err.value.diagnostics)


def test_unknown_class_rejected():
    with pytest.raises(SemanticError) as err:
        normalize(parse("decl\n  P : Nope → Bool\n"))
    assert any(d.code == "unknown-class" for d in err.value.diagnostics)


# ── type checking ────────────────────────────────────────────────


def test_rps_type_checks_clean(rps, rps_standalone):
    assert type_check(rps) == []
    assert type_check(rps_standalone) == []


def test_arity_mismatch():
    source = (
        "class\n  Player\n  Game\n"
        "decl\n  Win : Player → Game → Bool\n"
        "rule <r>\n  for a : Player, g : Game\n  if Win a\n  then Win a g\n"
    )
    diags = type_check(normalize(parse(source)))
    assert [d.code for d in diags] == ["arity-mismatch"]


def test_class_mismatch_flags_only_mutated_atom():
    source = fixtures.rps_standalone_source().replace("Beat r s", "Beat a s")
    diags = type_check(normalize(parse(source)))
    assert len(diags) == 1
    assert diags[0].code == "class-mismatch"
    assert "expected Sign, got Player" in diags[0].message


def test_unbound_variable():
    source = (
        "class\n  Player\n"
        "decl\n  Win : Player → Bool\n"
        "rule <r>\n  if Win z\n  then Win z\n"
    )
    diags = type_check(normalize(parse(source)))
    assert any(d.code == "unbound-variable" for d in diags)


# ── askable predicates ───────────────────────────────────────────


def test_askables_for_win(rps):
    names = [p.asp_name for p in askable_predicates(rps, "win")]
    assert names == ["game", "participate", "throw"]


def test_askables_for_fact_defined_goal(rps):
    assert askable_predicates(rps, "beat") == []


def test_askables_unknown_goal(rps):
    with pytest.raises(UnknownGoal):
        askable_predicates(rps, "nonexistent")


def test_rule_defined_predicate_drops_out():
    # throw is concluded by a rule here, so the interview must not ask it
    source = (
        "class\n  Player\n  Sign\n"
        "class\n  Game {\n    participate : Player → Bool\n    win : Player → Bool\n  }\n"
        "decl\n  Rock : Sign\n  Paper : Sign\n  Scissors : Sign\n"
        "decl\n  Throw : Player → Sign → Bool\n  Beat : Sign → Sign → Bool\n"
        "  Favors : Player → Sign → Bool\n"
        "rule <throws>\n  for a : Player, r : Sign\n  if Favors a r\n  then Throw a r\n"
        "rule <winner>\n  for a : Player, g : Game, r : Sign, s : Sign\n"
        "  if exists b : Player .\n"
        "    participate g a && participate g b && Throw a r && Throw b s && Beat r s\n"
        "  then win g a\n"
        "rule <b1>\n  then Beat Rock Scissors\n"
        "rule <b2>\n  then Beat Scissors Paper\n"
        "rule <b3>\n  then Beat Paper Rock\n"
    )
    program = normalize(parse(source))
    assert type_check(program) == []
    names = [p.asp_name for p in askable_predicates(program, "win")]
    assert "throw" not in names
    assert names == ["game", "participate", "favors"]


def test_askables_never_contain_goal_or_rule_defined(rps):
    askables = askable_predicates(rps, "win")
    assert all(p.asp_name != "win" for p in askables)
    assert all(not rps.defining_rules(p) for p in askables)
