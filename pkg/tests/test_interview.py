import pytest

from l4 import analyze, fixtures
from l4.interview import (
    DuplicateConstant,
    InvalidOption,
    NoRuleForGoal,
    Session,
    WrongQuestion,
    build_plan,
    emit_lexsis,
    load_lexsis,
    question_view,
)
from l4.realizer import EXISTENCE, POLAR, WH_ENUM, WH_OPEN
from l4.sem import GroundAtom

from conftest import LOOP_GOLDEN, QUESTIONS_GOLDEN, RPS_TRANSCRIPT, WHY_GOLDEN, run_transcript


def fresh_session(rps):
    plan = build_plan(rps, "win", config=fixtures.rps_config())
    return Session(rps, plan)


# ── planning ─────────────────────────────────────────────────────


def test_rps_plan_structure(rps_plan):
    kinds = [(q.kind, q.predicate) for q in rps_plan.questions]
    assert kinds == [(EXISTENCE, "game"), (WH_OPEN, "participate"), (WH_ENUM, "throw")]
    assert rps_plan.expansions == [("q3", "Player")]
    whopen = rps_plan.questions[1]
    assert whopen.loop_prompt == LOOP_GOLDEN
    whenum = rps_plan.questions[2]
    assert whenum.options == ["rock", "paper", "scissors"]


def test_plan_prompts(rps_plan):
    assert [q.prompt for q in rps_plan.questions] == [
        "Is there a game?",
        "Who participates in the game?",
        "Which sign does [Player] throw?",
    ]


def test_goal_beat_plan_is_empty(rps):
    plan = build_plan(rps, "beat")
    assert plan.questions == []


def test_unconcluded_goal_raises(rps):
    with pytest.raises(NoRuleForGoal):
        build_plan(rps, "participate")


def test_standalone_plan_order(rps_standalone):
    plan = build_plan(rps_standalone, "Win")
    assert [q.prompt for q in plan.questions] == [
        "Are there any players?",
        "Who is a player?",
        "Which game does [Player] participate in?",
        "Which sign does [Player] throw?",
    ]


def test_plan_never_asks_goal_or_rule_defined(rps_plan, rps):
    for q in rps_plan.questions:
        pred = rps.predicate(q.predicate)
        assert pred.asp_name != "win"
        assert not rps.defining_rules(pred)


# ── session flow ─────────────────────────────────────────────────


def test_full_transcript_concludes_alice(rps):
    session = run_transcript(fresh_session(rps), RPS_TRANSCRIPT)
    assert session.state == "concluded"
    assert [s.conclusion.args for s in session.answer_sets] == [("rps", "alice")]
    assert session.conclusion_text == WHY_GOLDEN


def test_materialized_prompts_match_golden(rps):
    session = fresh_session(rps)
    prompts = []
    for value in RPS_TRANSCRIPT:
        prompts.append(session.pending.prompt)
        session.answer(session.pending.id, value)
    deduped = list(dict.fromkeys(prompts))
    assert deduped == QUESTIONS_GOLDEN


def test_existence_no_concludes_empty(rps):
    session = fresh_session(rps)
    session.answer(session.pending.id, "no")
    assert session.state == "concluded"
    assert session.answer_sets == []
    assert session.conclusion_text == "No game exists."


def test_tie_concludes_without_winner(rps):
    answers = ["yes", {"text": "Alice", "more": True}, {"text": "Bob", "more": False}, "rock", "rock"]
    session = run_transcript(fresh_session(rps), answers)
    assert session.answer_sets == []
    assert session.conclusion_text == "Nobody wins RPS. Alice throws rock and Bob throws rock."


def test_facts_match_answers_exactly(rps):
    session = run_transcript(fresh_session(rps), RPS_TRANSCRIPT)
    assert [str(f) for f in session.facts] == [
        "game(rps)",
        "player(alice)",
        "participate(rps, alice)",
        "player(bob)",
        "participate(rps, bob)",
        "throw(alice, paper)",
        "throw(bob, rock)",
    ]


def test_question_order_introduces_before_use(rps):
    session = fresh_session(rps)
    seen_constants: set[str] = set()
    for value in RPS_TRANSCRIPT:
        q = session.pending
        for const in q.fixed_args.values():
            if not const.startswith("@"):
                assert const in seen_constants
        session.answer(q.id, value)
        seen_constants.update(session.constants)


def test_duplicate_participant_rejected(rps):
    session = fresh_session(rps)
    session.answer(session.pending.id, "yes")
    session.answer(session.pending.id, {"text": "Alice", "more": True})
    with pytest.raises(DuplicateConstant):
        session.answer(session.pending.id, {"text": "Alice", "more": True})


def test_invalid_enum_option(rps):
    session = fresh_session(rps)
    for value in RPS_TRANSCRIPT[:3]:
        session.answer(session.pending.id, value)
    with pytest.raises(InvalidOption):
        session.answer(session.pending.id, "lizard")


def test_wrong_question_id(rps):
    session = fresh_session(rps)
    with pytest.raises(WrongQuestion):
        session.answer("q9.9", "yes")


def test_answer_after_conclusion_rejected(rps):
    session = run_transcript(fresh_session(rps), RPS_TRANSCRIPT)
    with pytest.raises(WrongQuestion):
        session.answer("q1.1", "yes")


def test_empty_free_text_rejected(rps):
    session = fresh_session(rps)
    session.answer(session.pending.id, "yes")
    with pytest.raises(InvalidOption):
        session.answer(session.pending.id, {"text": "   ", "more": False})


def test_three_players_three_throw_questions(rps):
    answers = [
        "yes",
        {"text": "Alice", "more": True},
        {"text": "Bob", "more": True},
        {"text": "Carol", "more": False},
        "rock", "paper", "scissors",
    ]
    session = run_transcript(fresh_session(rps), answers)
    throw_prompts = [h["prompt"] for h in session.history if h["template"] == "q3"]
    assert throw_prompts == [
        "Which sign does Alice throw?",
        "Which sign does Bob throw?",
        "Which sign does Carol throw?",
    ]
    assert session.state == "concluded"


def test_reused_constant_across_questions(rps_standalone):
    plan = build_plan(rps_standalone, "Win")
    session = Session(rps_standalone, plan)
    answers = [
        "yes",
        {"text": "Alice", "more": True},
        {"text": "Bob", "more": False},
        {"text": "RPS", "more": False},
        {"text": "RPS", "more": False},
        "paper",
        "rock",
    ]
    run_transcript(session, answers)
    assert session.state == "concluded"
    assert GroundAtom("participate", ("alice", "rps")) in session.facts
    assert GroundAtom("participate", ("bob", "rps")) in session.facts
    assert session.introduced["Game"] == ["rps"]


def test_session_replay_is_deterministic(rps):
    session = run_transcript(fresh_session(rps), RPS_TRANSCRIPT)
    replayed = fresh_session(rps)
    for h in session.history:
        replayed.answer(h["question_id"], h["value"])
    assert replayed.snapshot() == session.snapshot()


# ── LEXSIS ───────────────────────────────────────────────────────


def test_lexsis_contains_schema_fields(rps_plan):
    text = emit_lexsis(rps_plan, "rps.l4")
    assert text.startswith("lexsis_version: 1\n")
    for key in ("meta:", "goal: win(Game, Player)", "questions:", "expansions:", "prompt:"):
        assert key in text


def test_lexsis_emit_reload_emit_identity(rps, rps_plan):
    once = emit_lexsis(rps_plan, "rps.l4")
    reloaded = load_lexsis(once, rps)
    assert emit_lexsis(reloaded, "rps.l4") == once


def test_lexsis_empty_plan(rps):
    text = emit_lexsis(build_plan(rps, "beat"), "rps.l4")
    assert "questions: []" in text


def test_lexsis_prompt_override_survives_reload(rps, rps_plan):
    text = emit_lexsis(rps_plan, "rps.l4").replace("Is there a game?", "Got a game?")
    plan = load_lexsis(text, rps)
    assert plan.questions[0].prompt == "Got a game?"
    session = Session(rps, plan)
    assert session.pending.prompt == "Got a game?"


def test_loaded_plan_runs_a_session(rps, rps_plan):
    plan = load_lexsis(emit_lexsis(rps_plan, "rps.l4"), rps)
    session = run_transcript(Session(rps, plan), RPS_TRANSCRIPT)
    assert session.conclusion_text == WHY_GOLDEN


# ── views ────────────────────────────────────────────────────────


def test_question_views_expose_input_schema(rps_plan):
    views = [question_view(q) for q in rps_plan.questions]
    assert views[0]["input"] == {"type": "yesno"}
    assert views[1]["input"] == {"type": "text", "loop_prompt": LOOP_GOLDEN}
    assert views[2]["input"] == {"type": "enum", "options": ["rock", "paper", "scissors"]}
