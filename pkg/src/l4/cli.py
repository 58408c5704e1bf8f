"""Command-line driver: check, compile, interview, ask, serve."""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from .asp import CompileError, compile_program, export_scasp, parse_query
from .interview import InstanceName, InterviewConfig
from .lexicon import MorphLexicon
from .pipeline import analyze, build_artifacts
from .realizer import Verbalizer
from .reasoner import (
    ReasonerError,
    answer,
    build_space,
    enumerate_hypotheticals,
    facts_from_json,
)
from .source import L4Error, SourceError


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except SourceError as err:
        for diag in err.diagnostics:
            print(diag, file=sys.stderr)
        return 1
    except L4Error as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="l4", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="parse and type-check a source file")
    check.add_argument("file")
    check.set_defaults(run=_cmd_check)

    comp = sub.add_parser("compile", help="export the clause program and query")
    comp.add_argument("file")
    comp.add_argument("--goal", required=True, help="goal predicate, e.g. win or win(rps, Player)")
    comp.add_argument("-o", "--output")
    comp.set_defaults(run=_cmd_compile)

    interview = sub.add_parser("interview", help="emit the LEXSIS interview schema")
    interview.add_argument("file")
    interview.add_argument("--goal", required=True)
    interview.add_argument("-o", "--output")
    interview.add_argument("--instance", action="append", default=[], metavar="CLASS=slug[:Display]",
                           help="name the auto-introduced instance of a class")
    interview.add_argument("--lexicon", help="morph lexicon config file")
    interview.set_defaults(run=_cmd_interview)

    ask = sub.add_parser("ask", help="run the reasoner over facts and print the answer")
    ask.add_argument("file")
    ask.add_argument("--goal", required=True)
    ask.add_argument("--facts", required=True, help="facts JSON file")
    ask.add_argument("--all-ways", action="store_true", help="enumerate hypothetical assignments")
    ask.add_argument("--open", dest="open_predicate", help="open predicate for --all-ways")
    ask.add_argument("--html", action="store_true", help="print the HTML rendering")
    ask.add_argument("--lexicon", help="morph lexicon config file")
    ask.set_defaults(run=_cmd_ask)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--persist", help="session event-log directory")
    serve.add_argument("--ui", help="static UI bundle directory")
    serve.add_argument("--lexicon", help="morph lexicon config file")
    serve.set_defaults(run=_cmd_serve)
    return parser


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as handle:
        return handle.read()


def _write(text: str, output: Optional[str]) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _morph(path: Optional[str]) -> Optional[MorphLexicon]:
    return MorphLexicon.load_file(path) if path else None


def _basename(path: str) -> str:
    return path.replace("\\", "/").rsplit("/", 1)[-1]


def _cmd_check(args) -> int:
    analyze(_read(args.file), args.file)
    return 0


def _cmd_compile(args) -> int:
    program = analyze(_read(args.file), args.file)
    query = parse_query(program, args.goal)
    _write(export_scasp(compile_program(program), query), args.output)
    return 0


def _parse_instances(pairs: list[str]) -> InterviewConfig:
    config = InterviewConfig()
    for pair in pairs:
        if "=" not in pair:
            raise CompileError(f"bad --instance {pair!r}, expected CLASS=slug[:Display]")
        cls, _, rest = pair.partition("=")
        slug, _, display = rest.partition(":")
        config.instances[cls] = InstanceName(slug, display or slug)
    return config


def _cmd_interview(args) -> int:
    program = analyze(_read(args.file), args.file)
    config = _parse_instances(args.instance)
    artifacts = build_artifacts(program, args.goal, config, _basename(args.file), _morph(args.lexicon))
    _write(artifacts["lexsis_yaml"], args.output)
    return 0


def _cmd_ask(args) -> int:
    program = analyze(_read(args.file), args.file)
    query = parse_query(program, args.goal)
    facts, names = facts_from_json(_read(args.facts))
    clauses = compile_program(program)
    verbalizer = Verbalizer(program, morph=_morph(args.lexicon), names=names)

    if args.all_ways:
        if not args.open_predicate:
            raise ReasonerError("--all-ways needs --open PREDICATE")
        space = build_space(program, facts, args.open_predicate)
        sets = enumerate_hypotheticals(clauses, facts, space, query)
    else:
        sets = answer(clauses, facts, query)

    if not sets:
        text = verbalizer.realize_no_answer(query, facts)
        print(verbalizer.realize_no_answer_html(query, facts) if args.html else text)
        return 0
    blocks = []
    for conclusion in _distinct(s.conclusion for s in sets):
        group = [s for s in sets if s.conclusion == conclusion]
        if args.html:
            blocks.append(verbalizer.realize_answer_html(conclusion, group))
        else:
            blocks.append(verbalizer.realize_answer(conclusion, group))
    print(("" if args.html else "\n\n").join(blocks))
    return 0


def _distinct(items) -> list:
    out = []
    for item in items:
        if item not in out:
            out.append(item)
    return out


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(persist_dir=args.persist, ui_dir=args.ui, morph=_morph(args.lexicon))
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


if __name__ == "__main__":
    sys.exit(main())
