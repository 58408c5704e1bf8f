import pytest

from l4 import analyze, fixtures
from l4.interview import Session, build_plan

# Golden strings: the RPS interview and both answer renderings.
QUESTIONS_GOLDEN = [
    "Is there a game?",
    "Who participates in the game?",
    "Which sign does Alice throw?",
    "Which sign does Bob throw?",
]
LOOP_GOLDEN = "Are there more players?"

WHY_GOLDEN = (
    "Alice wins RPS, because\n"
    "- Alice throws paper and Bob throws rock, and\n"
    "- paper beats rock."
)

ALL_WAYS_COMMON = "RPS is a game, and Alice and Bob are players and participate in RPS"
ALL_WAYS_ALTERNATIVES = [
    "rock beats scissors, Alice throws rock and Bob throws scissors",
    "scissors beats paper, Alice throws scissors and Bob throws paper",
    "paper beats rock, Alice throws paper and Bob throws rock",
]
ALL_WAYS_GOLDEN = (
    "Alice wins RPS, if all of the following hold:\n"
    f"- {ALL_WAYS_COMMON},\n"
    "and one of the following holds:\n"
    f"- {ALL_WAYS_ALTERNATIVES[0]},\n"
    f"- {ALL_WAYS_ALTERNATIVES[1]}, or\n"
    f"- {ALL_WAYS_ALTERNATIVES[2]}."
)

RPS_TRANSCRIPT = [
    "yes",
    {"text": "Alice", "more": True},
    {"text": "Bob", "more": False},
    "paper",
    "rock",
]


@pytest.fixture(scope="session")
def rps():
    return analyze(fixtures.rps_source(), "rps.l4")


@pytest.fixture(scope="session")
def rps_standalone():
    return analyze(fixtures.rps_standalone_source(), "rps_standalone.l4")


@pytest.fixture
def rps_plan(rps):
    return build_plan(rps, "win", config=fixtures.rps_config())


def run_transcript(session: Session, answers) -> Session:
    for value in answers:
        assert session.pending is not None, "interview ended early"
        session.answer(session.pending.id, value)
    return session
