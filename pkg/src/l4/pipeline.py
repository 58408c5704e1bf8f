"""End-to-end helpers shared by the CLI and the HTTP service.

Keeping artifact generation here guarantees that ``l4 compile``/``l4
interview`` output is byte-identical to the service's artifact bodies.
"""

from __future__ import annotations

from typing import Optional

from .asp import compile_program, export_scasp, parse_query
from .interview import InterviewConfig, QuestionPlan, build_plan, emit_lexsis, plan_view
from .lexicon import MorphLexicon
from .parser import parse
from .realizer import Verbalizer
from .sem import NormalizedProgram, normalize, type_check
from .source import Diagnostic, SemanticError, SourceError


def analyze(source: str, path: str = "<input>") -> NormalizedProgram:
    """Parse, normalize and type-check; any diagnostic aborts with SourceError."""
    program = normalize(parse(source, path))
    diags = [_with_path(d, path) for d in type_check(program)]
    if diags:
        raise SemanticError(diags)
    return program


def _with_path(diag: Diagnostic, path: str) -> Diagnostic:
    return Diagnostic(diag.code, diag.message, diag.span, path)


def build_artifacts(
    program: NormalizedProgram,
    goal: str,
    config: Optional[InterviewConfig] = None,
    source_name: str = "<source>",
    morph: Optional[MorphLexicon] = None,
) -> dict:
    """The three generated artifacts for a program + goal."""
    query = parse_query(program, goal)
    plan = plan_for(program, query, config, morph)
    scasp = export_scasp(compile_program(program), query)
    return {
        "lexsis_yaml": emit_lexsis(plan, source=source_name),
        "scasp_text": scasp,
        "interview_json": plan_view(plan),
    }


def plan_for(program, query, config=None, morph: Optional[MorphLexicon] = None) -> QuestionPlan:
    verbalizer = Verbalizer(program, morph=morph)
    return build_plan(program, query, config=config, verbalizer=verbalizer)
