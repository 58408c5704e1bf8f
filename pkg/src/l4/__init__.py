"""L4 toolchain: a rules DSL compiled into interviews, clause programs and
English answers."""

from .asp import Clause, QuerySpec, compile_program, export_scasp, make_query, parse_query
from .interview import (
    InterviewConfig,
    Question,
    QuestionPlan,
    Session,
    build_plan,
    emit_lexsis,
    load_lexsis,
)
from .lexicon import LexiconTable, MorphLexicon, build_lexicon, parse_entry
from .parser import parse, parse_file
from .pipeline import analyze, build_artifacts
from .printer import pretty_print
from .realizer import InfoState, Verbalizer
from .reasoner import (
    AnswerSet,
    HypotheticalSpace,
    answer,
    build_space,
    enumerate_hypotheticals,
    facts_from_json,
    facts_to_json,
    least_model,
)
from .sem import GroundAtom, NormalizedProgram, askable_predicates, normalize, type_check

__all__ = [
    "AnswerSet",
    "Clause",
    "GroundAtom",
    "HypotheticalSpace",
    "InfoState",
    "InterviewConfig",
    "LexiconTable",
    "MorphLexicon",
    "NormalizedProgram",
    "Question",
    "QuestionPlan",
    "QuerySpec",
    "Session",
    "Verbalizer",
    "analyze",
    "answer",
    "askable_predicates",
    "build_artifacts",
    "build_lexicon",
    "build_plan",
    "build_space",
    "compile_program",
    "emit_lexsis",
    "enumerate_hypotheticals",
    "export_scasp",
    "facts_from_json",
    "facts_to_json",
    "least_model",
    "load_lexsis",
    "make_query",
    "normalize",
    "parse",
    "parse_entry",
    "parse_file",
    "parse_query",
    "pretty_print",
    "type_check",
]

__version__ = "0.1.0"
