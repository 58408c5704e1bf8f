"""English surface realization for questions, declaratives and answers.

Aggregation groups ground atoms by subject, orders a subject's predicates
copular-first then intransitive-before-transitive, and coordinates subjects
that share a full description of at least two predicates ("Alice and Bob are
players and participate in RPS"); a single shared predicate reads better as
separate clauses, so those stay apart. Multi-model answers split into a
common "all of the following" block and per-model "one of the following"
alternatives.
"""

from __future__ import annotations

import html as _html
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .asp import QuerySpec
from .lexicon import (
    Arg,
    LexiconTable,
    Lit,
    MorphLexicon,
    PhrasePlan,
    build_lexicon,
    indef_article,
    inflect_verb,
    is_animate,
)
from .sem import GroundAtom, NormalizedProgram, NormalizedPredicate
from .source import L4Error

EXISTENCE = "existence"
POLAR = "polar"
WH_OPEN = "whopen"
WH_ENUM = "whenum"


class RealizeError(L4Error):
    pass


class EmptyAnswer(RealizeError):
    pass


@dataclass
class InfoState:
    """Discourse referents mentioned so far; old information gets "the"."""

    mentioned: set[str] = field(default_factory=set)

    def mention(self, key: str) -> None:
        self.mentioned.add(key)

    def is_old(self, key: str) -> bool:
        return key in self.mentioned


# ── Syntax trees ─────────────────────────────────────────────────


@dataclass(frozen=True)
class VPhrase:
    """One predicate said of a subject; ``fixed_args`` hold the other slots."""

    predicate: str
    subject_pos: int
    fixed_args: tuple[tuple[int, str], ...]
    rank: int                   # 0 copular, 1 intransitive, 2 transitive
    text_sg: str
    text_pl: str

    @property
    def key(self) -> tuple:
        return (self.predicate, self.fixed_args)

    def render(self, plural: bool) -> str:
        return self.text_pl if plural else self.text_sg


@dataclass(frozen=True)
class Decl:
    """A declarative with possibly coordinated subjects and predicates."""

    subjects: tuple[str, ...]
    vps: tuple[VPhrase, ...]

    @property
    def predicate(self) -> str:
        return self.vps[0].predicate


def de_aggregate(decls: Iterable[Decl], arity_of: Callable[[str], int]) -> list[GroundAtom]:
    """Invert aggregation: every subject × predicate pair becomes an atom."""
    atoms = []
    for decl in decls:
        for subject in decl.subjects:
            for vp in decl.vps:
                args = [""] * arity_of(vp.predicate)
                args[vp.subject_pos] = subject
                for pos, const in vp.fixed_args:
                    args[pos] = const
                atoms.append(GroundAtom(vp.predicate, tuple(args)))
    return atoms


# ── Verbalizer ───────────────────────────────────────────────────


class Verbalizer:
    """Program-aware renderer; read-only and shareable once constructed."""

    def __init__(
        self,
        program: NormalizedProgram,
        lexicon: Optional[LexiconTable] = None,
        morph: Optional[MorphLexicon] = None,
        names: Optional[dict[str, str]] = None,
        auto_constants: Optional[set[str]] = None,
    ):
        self.program = program
        self.lexicon = lexicon if lexicon is not None else build_lexicon(program)
        self.morph = morph if morph is not None else MorphLexicon()
        self.names = dict(names or {})
        self.auto_constants = set(auto_constants or ())
        self._enumerated = {
            c for info in program.classes if info.is_enumerated for c in info.asp_constants
        }

    # naming

    def display(self, const: str) -> str:
        if const in self.names:
            return self.names[const]
        if const in self._enumerated:
            return const
        return const[:1].upper() + const[1:]

    def noun(self, class_name: str) -> str:
        return self.lexicon.noun_for(class_name)

    def plural_noun(self, class_name: str) -> str:
        return self.morph.noun_plural(self.noun(class_name))

    def animate(self, class_name: str) -> bool:
        return is_animate(class_name, self.morph) or self.morph.is_animate_noun(
            self.noun(class_name)
        )

    def _pred(self, asp_name: str) -> NormalizedPredicate:
        pred = self.program.predicate(asp_name)
        if pred is None:
            raise RealizeError(f"unknown predicate {asp_name}")
        return pred

    def decisive(self, atom: GroundAtom) -> bool:
        """Case-specific facts range over an enumerated class; typing facts and
        open-class links are scenario setup."""
        pred = self._pred(atom.predicate)
        return any(
            (info := self.program.class_info(c)) is not None and info.is_enumerated
            for c in pred.arg_classes
        )

    # ── verb phrases and declaratives ────────────────────────

    def _vphrase(self, atom: GroundAtom) -> VPhrase:
        pred = self._pred(atom.predicate)
        if pred.is_membership:
            noun = self.noun(pred.arg_classes[0])
            return VPhrase(
                atom.predicate,
                0,
                (),
                0,
                f"is {indef_article(noun)} {noun}",
                f"are {self.morph.noun_plural(noun)}",
            )
        plan = self.lexicon.plan(pred)
        subject_pos = plan.subject_arg
        fixed = tuple(
            (i, atom.args[i]) for i in range(pred.arity) if i != subject_pos
        )
        rank = 1 if pred.arity == 1 else 2
        render = lambda i: self.display(atom.args[i])  # noqa: E731
        return VPhrase(
            atom.predicate,
            subject_pos,
            fixed,
            rank,
            self._vp_text(plan, render, plural=False),
            self._vp_text(plan, render, plural=True),
        )

    def _vp_text(self, plan: PhrasePlan, render_arg: Callable[[int], str], plural: bool) -> str:
        parts = [inflect_verb(plan.verb_lemma, plural, self.morph)]
        for part in plan.tail:
            parts.append(part.text if isinstance(part, Lit) else render_arg(part.position))
        return " ".join(p for p in parts if p)

    def declarative(self, atom: GroundAtom) -> str:
        """One atom as a plain sentence body: "Alice wins RPS"."""
        vp = self._vphrase(atom)
        subject = atom.args[vp.subject_pos]
        return f"{self.display(subject)} {vp.render(plural=False)}"

    # ── aggregation ──────────────────────────────────────────

    def aggregate(self, atoms: Iterable[GroundAtom]) -> list[Decl]:
        per_subject: dict[str, list[VPhrase]] = {}
        for atom in atoms:
            vp = self._vphrase(atom)
            subject = atom.args[vp.subject_pos]
            bucket = per_subject.setdefault(subject, [])
            if all(vp.key != other.key for other in bucket):
                bucket.append(vp)
        for subject, vps in per_subject.items():
            per_subject[subject] = sorted(vps, key=lambda v: v.rank)

        decls: list[Decl] = []
        merged: dict[tuple, int] = {}
        for subject, vps in per_subject.items():
            signature = tuple(vp.key for vp in vps)
            if len(vps) >= 2 and signature in merged:
                i = merged[signature]
                decls[i] = Decl(decls[i].subjects + (subject,), decls[i].vps)
                continue
            merged[signature] = len(decls)
            decls.append(Decl((subject,), tuple(vps)))
        return decls

    def render_decl(self, decl: Decl) -> str:
        subjects = _join_and([self.display(s) for s in decl.subjects])
        plural = len(decl.subjects) > 1
        vps = _join_and([vp.render(plural) for vp in decl.vps])
        return f"{subjects} {vps}"

    # ── questions ────────────────────────────────────────────

    def realize_question(self, q, info: Optional[InfoState] = None) -> str:
        """Surface a question; prompts never fail, unknown templates fall back
        to the predicate name."""
        info = info if info is not None else InfoState()
        if q.kind == EXISTENCE:
            cls = self._pred(q.predicate).arg_classes[0]
            noun = self.noun(cls)
            info.mention(f"class:{cls}")
            if getattr(q, "plural", False):
                return f"Are there any {self.morph.noun_plural(noun)}?"
            return f"Is there {indef_article(noun)} {noun}?"

        pred = self._pred(q.predicate)
        if pred.is_membership:
            # open question naming members of a class
            cls = pred.arg_classes[0]
            noun = self.noun(cls)
            info.mention(f"class:{cls}")
            if self.animate(cls):
                return f"Who is {indef_article(noun)} {noun}?"
            return f"Which {self.morph.noun_plural(noun)} are there?"

        plan = self.lexicon.plan(pred)
        render = self._question_arg_renderer(q, pred, info)
        if q.kind == POLAR:
            subject = render(plan.subject_arg)
            tail = self._vp_tail(plan, render)
            return f"Does {subject} {plan.verb_lemma}{tail}?"

        asked = q.asked_arg
        asked_cls = pred.arg_classes[asked]
        if asked == plan.subject_arg:
            if self.animate(asked_cls):
                vp = self._vp_text(plan, render, plural=False)
                return f"Who {vp}?"
            if q.kind == WH_ENUM:
                vp = self._vp_text(plan, render, plural=False)
                return f"Which {self.noun(asked_cls)} {vp}?"
            vp = self._vp_text(plan, render, plural=True)
            return f"Which {self.plural_noun(asked_cls)} {vp}?"
        # object position: slash construction with do-support
        subject = render(plan.subject_arg)
        tail = self._vp_tail(plan, render, skip=asked)
        wh = "Who" if self.animate(asked_cls) else f"Which {self.noun(asked_cls)}"
        return f"{wh} does {subject} {plan.verb_lemma}{tail}?"

    def _vp_tail(self, plan: PhrasePlan, render: Callable[[int], str], skip: Optional[int] = None) -> str:
        parts = []
        for part in plan.tail:
            if isinstance(part, Lit):
                parts.append(part.text)
            elif part.position != skip:
                parts.append(render(part.position))
        return (" " + " ".join(parts)) if parts else ""

    def _question_arg_renderer(self, q, pred: NormalizedPredicate, info: InfoState):
        fixed = dict(getattr(q, "fixed_args", {}) or {})

        def render(position: int) -> str:
            value = fixed.get(position)
            cls = pred.arg_classes[position]
            if value is None or (isinstance(value, str) and value.startswith("@")):
                return f"[{cls}]" if value is None else self._class_np(cls, info)
            if value in self.auto_constants:
                return self._class_np(cls, info)
            return self.display(value)

        return render

    def _class_np(self, cls: str, info: InfoState) -> str:
        noun = self.noun(cls)
        key = f"class:{cls}"
        if info.is_old(key):
            return f"the {noun}"
        info.mention(key)
        return f"{indef_article(noun)} {noun}"

    def loop_prompt(self, class_name: str) -> str:
        return f"Are there more {self.plural_noun(class_name)}?"

    # ── answers ──────────────────────────────────────────────

    def realize_answer(self, conclusion: GroundAtom, answer_sets: list) -> str:
        if not answer_sets:
            raise EmptyAnswer("no answer sets to realize")
        conclusion_text = self.declarative(conclusion)
        supports = [list(s.support) for s in answer_sets]
        common = [a for a in supports[0] if all(a in s for s in supports[1:])]
        diffs = [[a for a in s if a not in common] for s in supports]

        if all(not d for d in diffs):
            groups = self._because_groups(supports[0])
            if not groups:
                return f"{conclusion_text}."
            bullets = [self._render_group(group) for group in groups]
            return f"{conclusion_text}, because\n" + _bullets(bullets, "and")

        common_text = _join_list([self.render_decl(d) for d in self.aggregate(common)], "and")
        alternatives = [self._render_alternative(d) for d in self._order_alternatives(diffs)]
        return (
            f"{conclusion_text}, if all of the following hold:\n"
            f"- {common_text},\n"
            f"and one of the following holds:\n" + _bullets(alternatives, "or")
        )

    def realize_answer_html(self, conclusion: GroundAtom, answer_sets: list) -> str:
        text = self.realize_answer(conclusion, answer_sets)
        return _text_to_html(text)

    def _because_groups(self, support: list[GroundAtom]) -> list[list[GroundAtom]]:
        kept = [a for a in support if self.decisive(a)]
        groups: list[list[GroundAtom]] = []
        for atom in kept:
            if groups and groups[-1][0].predicate == atom.predicate:
                groups[-1].append(atom)
            else:
                groups.append([atom])
        return groups

    def _render_group(self, atoms: list[GroundAtom]) -> str:
        return " and ".join(self.render_decl(d) for d in self.aggregate(atoms))

    def _order_alternatives(self, diffs: list[list[GroundAtom]]) -> list[list[GroundAtom]]:
        fact_index = {fact: i for i, fact in enumerate(self.program.facts)}

        def key(diff: list[GroundAtom]) -> tuple:
            hits = sorted(fact_index[a] for a in diff if a in fact_index)
            return (hits, [str(a) for a in diff])

        return sorted(diffs, key=key)

    def _render_alternative(self, diff: list[GroundAtom]) -> str:
        closed = [a for a in diff if self._closed_class(a)]
        rest = [a for a in diff if not self._closed_class(a)]
        decls = self.aggregate(closed) + self.aggregate(rest)
        return _join_runs(decls, self.render_decl)

    def _closed_class(self, atom: GroundAtom) -> bool:
        pred = self._pred(atom.predicate)
        return all(
            (info := self.program.class_info(c)) is not None and info.is_enumerated
            for c in pred.arg_classes
        )

    def realize_no_answer(self, query: QuerySpec, facts: Iterable[GroundAtom]) -> str:
        """Negative conclusion plus an echo of the decisive facts (or, failing
        those, of the scenario facts)."""
        facts = list(facts)
        pred = self._pred(query.predicate)
        primary = pred.owner_class
        info = self.program.class_info(primary)
        if info is not None and not info.is_enumerated:
            membership = self.program.membership_predicate(primary).asp_name
            if not any(f.predicate == membership for f in facts):
                return f"No {self.noun(primary)} exists."

        plan = self.lexicon.plan(pred)
        subject_cls = pred.arg_classes[plan.subject_arg]
        negative = "Nobody" if self.animate(subject_cls) else "Nothing"

        def render(position: int) -> str:
            if position in query.bound_args:
                return self.display(query.bound_args[position])
            cls = pred.arg_classes[position]
            instance = self._instance_of(cls, facts)
            return self.display(instance) if instance else f"the {self.noun(cls)}"

        vp = self._vp_text(plan, render, plural=False)
        first = f"{negative} {vp}."
        echo_atoms = [f for f in facts if self.decisive(f)] or facts
        if not echo_atoms:
            return first
        echo = _join_runs(self.aggregate(echo_atoms), self.render_decl, same=" and ", other=", and ")
        return f"{first} {echo}."

    def realize_no_answer_html(self, query: QuerySpec, facts: Iterable[GroundAtom]) -> str:
        return _text_to_html(self.realize_no_answer(query, facts))

    def _instance_of(self, cls: str, facts: list[GroundAtom]) -> Optional[str]:
        info = self.program.class_info(cls)
        if info is None:
            return None
        if info.is_enumerated:
            return None
        membership = self.program.membership_predicate(cls).asp_name
        for fact in facts:
            if fact.predicate == membership:
                return fact.args[0]
        return None


# ── plain-text helpers ───────────────────────────────────────────


def _join_and(parts: list[str]) -> str:
    if len(parts) <= 1:
        return "".join(parts)
    if len(parts) == 2:
        return f"{parts[0]} and {parts[1]}"
    return ", ".join(parts[:-1]) + f" and {parts[-1]}"


def _join_list(parts: list[str], conj: str) -> str:
    """House list style: comma-separated with ", and"/", or" before the last."""
    if len(parts) <= 1:
        return "".join(parts)
    return ", ".join(parts[:-1]) + f", {conj} {parts[-1]}"


def _join_runs(decls: list[Decl], render, same: str = " and ", other: str = ", ") -> str:
    out = ""
    previous: Optional[Decl] = None
    for decl in decls:
        if previous is not None:
            out += same if decl.predicate == previous.predicate else other
        out += render(decl)
        previous = decl
    return out


def _bullets(items: list[str], conj: str) -> str:
    lines = []
    for i, item in enumerate(items):
        if i == len(items) - 1:
            suffix = "."
        elif i == len(items) - 2:
            suffix = f", {conj}"
        else:
            suffix = ","
        lines.append(f"- {item}{suffix}")
    return "\n".join(lines)


def _text_to_html(text: str) -> str:
    lines = text.split("\n")
    out: list[str] = []
    items: list[str] = []

    def flush():
        if items:
            out.append("<ul>" + "".join(f"<li>{i}</li>" for i in items) + "</ul>")
            items.clear()

    for line in lines:
        if line.startswith("- "):
            items.append(_html.escape(line[2:]))
        else:
            flush()
            out.append(f"<p>{_html.escape(line)}</p>")
    flush()
    return "".join(out)
