"""Interview planning, LEXSIS emission and answer-ingesting sessions.

The plan starts from the goal's owner class (is there a game?), then walks
askable predicates grouped by owning class: open questions introduce the
instances that later per-instance questions range over, so question order is
always a topological order of prerequisite dependencies.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any, Optional

import yaml

from .asp import QuerySpec, compile_program, export_scasp, make_query
from .reasoner import AnswerSet, answer as run_query
from .realizer import EXISTENCE, POLAR, WH_ENUM, WH_OPEN, InfoState, Verbalizer
from .sem import (
    GroundAtom,
    Membership,
    NormalizedPredicate,
    NormalizedProgram,
    askable_predicates,
    mangle,
)
from .source import L4Error

LEXSIS_VERSION = 1


class InterviewError(L4Error):
    pass


class NoRuleForGoal(InterviewError):
    pass


class PlanError(InterviewError):
    pass


class WrongQuestion(InterviewError):
    pass


class InvalidOption(InterviewError):
    pass


class DuplicateConstant(InterviewError):
    pass


@dataclass(frozen=True)
class InstanceName:
    slug: str
    display: str


@dataclass
class InterviewConfig:
    """Auto-instance naming for classes whose existence question binds a
    singleton (fixtures name the game instance ``rps`` / "RPS")."""

    instances: dict[str, InstanceName] = field(default_factory=dict)

    @classmethod
    def from_dict(cls, raw: Optional[dict]) -> "InterviewConfig":
        out = cls()
        for class_name, spec in (raw or {}).get("instances", {}).items():
            out.instances[class_name] = InstanceName(spec["name"], spec.get("display", spec["name"]))
        return out

    def to_dict(self) -> dict:
        return {
            "instances": {
                cls: {"name": n.slug, "display": n.display} for cls, n in self.instances.items()
            }
        }


@dataclass
class Question:
    id: str
    kind: str
    predicate: str                      # clause-level predicate name
    fixed_args: dict[int, str] = field(default_factory=dict)
    asked_arg: Optional[int] = None
    options: Optional[list[str]] = None
    loop_prompt: Optional[str] = None
    prompt: str = ""
    owner_class: Optional[str] = None   # expand one question per instance
    plural: bool = False
    introduces: Optional[str] = None    # class the answers add members to


@dataclass
class QuestionPlan:
    goal: QuerySpec
    questions: list[Question]
    expansions: list[tuple[str, str]]   # (question id, per-instance class)
    config: InterviewConfig = field(default_factory=InterviewConfig)

    def question(self, template_id: str) -> Question:
        for q in self.questions:
            if q.id == template_id:
                return q
        raise KeyError(template_id)


def build_plan(
    program: NormalizedProgram,
    goal: "str | QuerySpec",
    config: Optional[InterviewConfig] = None,
    verbalizer: Optional[Verbalizer] = None,
) -> QuestionPlan:
    """Derive the ordered question plan for a goal.

    Raises :class:`NoRuleForGoal` when nothing concludes the goal; a goal that
    is fully determined by facts yields an empty plan.
    """
    goal_query = make_query(program, goal) if isinstance(goal, str) else goal
    goal_pred = program.predicate(goal_query.predicate)
    assert goal_pred is not None
    if not program.defining_rules(goal_pred) and not program.has_facts_for(goal_pred):
        raise NoRuleForGoal(f"nothing concludes {goal_pred.name}")

    config = config or InterviewConfig()
    verb = verbalizer or Verbalizer(program)
    askables = askable_predicates(program, goal_pred.asp_name)
    plan = QuestionPlan(goal_query, [], [], config)
    if not askables:
        return plan

    info = InfoState()
    counter = 0

    def next_id() -> str:
        nonlocal counter
        counter += 1
        return f"q{counter}"

    populated: set[str] = {c.name for c in program.classes if c.is_enumerated}
    primary = goal_pred.owner_class
    singleton_classes: set[str] = set()

    for pred in askables:
        if pred.is_membership:
            cls = pred.origin.class_name  # type: ignore[union-attr]
            multi = verb.animate(cls)
            exist = Question(
                next_id(), EXISTENCE, pred.asp_name, {}, None, ["yes", "no"], None,
                plural=multi, introduces=None if multi else cls,
            )
            exist.prompt = verb.realize_question(exist, info)
            plan.questions.append(exist)
            if multi:
                naming = Question(
                    next_id(), WH_OPEN, pred.asp_name, {}, 0, None,
                    verb.loop_prompt(cls), introduces=cls,
                )
                naming.prompt = verb.realize_question(naming, info)
                plan.questions.append(naming)
            else:
                singleton_classes.add(cls)
            populated.add(cls)
            continue

        if pred.arity > 2:
            raise PlanError(f"askable predicate {pred.name} has arity {pred.arity}; interviews support at most 2")

        owner = pred.owner_class
        singleton_owner = owner in singleton_classes
        fixed: dict[int, str] = {0: f"@{owner}"} if singleton_owner else {}
        owner_class = None if singleton_owner else owner

        if pred.arity == 1:
            q = Question(next_id(), POLAR, pred.asp_name, dict(fixed), None, ["yes", "no"], None, owner_class=owner_class)
            q.prompt = verb.realize_question(q, info)
            _append(plan, q)
            continue

        asked = 1
        asked_cls = pred.arg_classes[asked]
        asked_info = program.class_info(asked_cls)
        if asked_info is not None and asked_info.is_enumerated:
            q = Question(
                next_id(), WH_ENUM, pred.asp_name, dict(fixed), asked,
                list(asked_info.asp_constants), None, owner_class=owner_class,
            )
        elif asked_cls not in populated:
            q = Question(
                next_id(), WH_OPEN, pred.asp_name, dict(fixed), asked, None,
                verb.loop_prompt(asked_cls), owner_class=owner_class, introduces=asked_cls,
            )
            populated.add(asked_cls)
        else:
            q = Question(
                next_id(), POLAR, pred.asp_name, dict(fixed), asked, ["yes", "no"], None,
                owner_class=owner_class,
            )
        q.prompt = verb.realize_question(q, info)
        _append(plan, q)
    return plan


def _append(plan: QuestionPlan, q: Question) -> None:
    plan.questions.append(q)
    if q.owner_class is not None:
        plan.expansions.append((q.id, q.owner_class))


# ── LEXSIS ───────────────────────────────────────────────────────


def emit_lexsis(plan: QuestionPlan, source: str = "<memory>") -> str:
    """Serialize a plan to the declarative LEXSIS YAML document."""
    doc: dict[str, Any] = {
        "lexsis_version": LEXSIS_VERSION,
        "meta": {"goal": plan.goal.atom_text(), "source": source},
        "questions": [
            {
                "id": q.id,
                "kind": q.kind,
                "predicate": q.predicate,
                "asked_arg": q.asked_arg,
                "options": q.options,
                "loop": q.loop_prompt,
                "prompt": q.prompt,
            }
            for q in plan.questions
        ],
        "expansions": [
            {"question": qid, "per_class": cls} for qid, cls in plan.expansions
        ],
    }
    if plan.config.instances:
        doc["meta"]["instances"] = plan.config.to_dict()["instances"]
    return yaml.safe_dump(doc, sort_keys=False, allow_unicode=True)


def load_lexsis(text: str, program: NormalizedProgram) -> QuestionPlan:
    """Reload a LEXSIS document; hand-edited prompts replace generated ones."""
    doc = yaml.safe_load(text)
    if not isinstance(doc, dict) or doc.get("lexsis_version") != LEXSIS_VERSION:
        raise InterviewError("not a LEXSIS version 1 document")
    meta = doc.get("meta", {})
    config = InterviewConfig.from_dict({"instances": meta.get("instances", {})})
    goal = make_query(program, _goal_name(meta.get("goal", "")))
    expansions = [(e["question"], e["per_class"]) for e in doc.get("expansions", [])]
    per_class = dict(expansions)
    verb = Verbalizer(program)

    questions: list[Question] = []
    for raw in doc.get("questions", []):
        pred = program.predicate(raw["predicate"])
        if pred is None:
            raise InterviewError(f"LEXSIS names unknown predicate {raw['predicate']}")
        q = Question(
            raw["id"],
            raw["kind"],
            pred.asp_name,
            {},
            raw.get("asked_arg"),
            raw.get("options"),
            raw.get("loop"),
            raw.get("prompt", ""),
            owner_class=per_class.get(raw["id"]),
        )
        if pred.is_membership:
            cls = pred.arg_classes[0]
            if q.kind == EXISTENCE:
                q.plural = verb.animate(cls)
                if not q.plural:
                    q.introduces = cls
            else:
                q.introduces = cls
        else:
            if q.owner_class is None and pred.arity > 1:
                q.fixed_args = {0: f"@{pred.owner_class}"}
            if q.kind == WH_OPEN and q.asked_arg is not None:
                q.introduces = pred.arg_classes[q.asked_arg]
        questions.append(q)
    return QuestionPlan(goal, questions, expansions, config)


def _goal_name(goal_text: str) -> str:
    return goal_text.split("(", 1)[0].strip()


# ── Sessions ─────────────────────────────────────────────────────


def slugify(text: str) -> str:
    slug = re.sub(r"[^a-z0-9]+", "_", text.strip().lower()).strip("_")
    if not slug:
        raise InvalidOption(f"cannot derive a name from {text!r}")
    if slug[0].isdigit():
        slug = "c" + slug
    return slug


@dataclass
class IntroducedConstant:
    slug: str
    display: str
    class_name: str
    user_named: bool


class Session:
    """One interview run: applies answers, accumulates facts, concludes.

    Deterministic: replaying the same answer sequence reconstructs the same
    state, which is what the service's event log relies on.
    """

    def __init__(
        self,
        program: NormalizedProgram,
        plan: QuestionPlan,
        session_id: str = "local",
        morph=None,
    ):
        self.program = program
        self.plan = plan
        self.id = session_id
        self.morph = morph
        self.facts: list[GroundAtom] = []
        self.constants: dict[str, IntroducedConstant] = {}
        self.introduced: dict[str, list[str]] = {}      # class → slugs, in order
        self.history: list[dict[str, Any]] = []          # {question_id, template, prompt, value}
        self._dup_guard: dict[tuple[str, str], set[str]] = {}
        self._materialized_count: dict[str, int] = {}
        self.state = "awaiting"
        self.answer_sets: Optional[list[AnswerSet]] = None
        self.conclusion_text: Optional[str] = None
        self.conclusion_html: Optional[str] = None
        self.pending: Optional[Question] = None
        if not plan.questions:
            self._conclude()
        else:
            self.pending = self._next_question()
            if self.pending is None:
                self._conclude()

    # ── naming ───────────────────────────────────────────────

    def verbalizer(self) -> Verbalizer:
        names = {c.slug: c.display for c in self.constants.values()}
        auto = {c.slug for c in self.constants.values() if not c.user_named}
        return Verbalizer(self.program, morph=self.morph, names=names, auto_constants=auto)

    def display(self, slug: str) -> str:
        constant = self.constants.get(slug)
        return constant.display if constant else slug

    # ── question materialization ─────────────────────────────

    def _materialize(self, template: Question, fixed: dict[int, str], owner: Optional[str]) -> Question:
        count = self._materialized_count.get(template.id, 0) + 1
        prompt = template.prompt
        if owner is not None and template.owner_class is not None:
            prompt = prompt.replace(f"[{template.owner_class}]", self.display(owner))
        return Question(
            f"{template.id}.{count}",
            template.kind,
            template.predicate,
            fixed,
            template.asked_arg,
            template.options,
            template.loop_prompt,
            prompt,
            owner_class=template.owner_class,
            plural=template.plural,
            introduces=template.introduces,
        )

    def _answers_for(self, template_id: str) -> list[dict[str, Any]]:
        return [h for h in self.history if h["template"] == template_id]

    def _next_question(self) -> Optional[Question]:
        for template in self.plan.questions:
            q = self._next_for_template(template)
            if q is not None:
                return q
        return None

    def _next_for_template(self, template: Question) -> Optional[Question]:
        history = self._answers_for(template.id)
        if template.kind == EXISTENCE:
            return None if history else self._materialize(template, {}, None)
        if template.kind == POLAR and template.asked_arg is not None:
            return self._next_pair(template, history)
        if template.owner_class is None:
            return self._next_iteration(template, history, owner=None, fixed=dict(template.fixed_args))
        for owner in self.introduced.get(template.owner_class, []):
            owned = [h for h in history if h.get("owner") == owner]
            fixed = dict(template.fixed_args)
            fixed[0] = owner
            q = self._next_iteration(template, owned, owner=owner, fixed=fixed)
            if q is not None:
                return q
        return None

    def _next_iteration(self, template, history, owner, fixed) -> Optional[Question]:
        more_wanted = not history or _wants_more(history[-1]["value"])
        if template.kind == WH_OPEN and not more_wanted:
            return None
        if template.kind != WH_OPEN and history:
            return None
        return self._materialize(template, fixed, owner)

    def _next_pair(self, template: Question, history: list[dict]) -> Optional[Question]:
        """Yes/no questions over pairs: one per owner instance × asked-class member."""
        pred = self.program.predicate(template.predicate)
        assert pred is not None and template.asked_arg is not None
        asked_cls = pred.arg_classes[template.asked_arg]
        owners = (
            self.introduced.get(template.owner_class, [])
            if template.owner_class is not None
            else [None]
        )
        answered = {h.get("owner") for h in history}
        for owner in owners:
            for member in self.introduced.get(asked_cls, []):
                key = f"{owner or ''}|{member}"
                if key in answered:
                    continue
                fixed = dict(template.fixed_args)
                if owner is not None:
                    fixed[0] = owner
                fixed[template.asked_arg] = member
                q = self._materialize(template, fixed, owner)
                q.prompt = q.prompt.replace(f"[{asked_cls}]", self.display(member))
                q.pair_key = key  # type: ignore[attr-defined]
                return q
        return None

    # ── answering ────────────────────────────────────────────

    def answer(self, question_id: str, value: Any) -> "Session":
        if self.state == "concluded":
            raise WrongQuestion("session already concluded")
        assert self.pending is not None
        if question_id != self.pending.id:
            raise WrongQuestion(f"expected answer to {self.pending.id}, got {question_id}")
        q = self.pending
        self._apply(q, value)
        owner = getattr(q, "pair_key", None)
        if owner is None and q.owner_class is not None:
            owner = q.fixed_args.get(0)
        template_id = q.id.rsplit(".", 1)[0]
        self._materialized_count[template_id] = self._materialized_count.get(template_id, 0) + 1
        self.history.append(
            {"question_id": q.id, "template": template_id, "owner": owner, "prompt": q.prompt, "value": value}
        )
        if self.state != "concluded":
            self.pending = self._next_question()
            if self.pending is None:
                self._conclude()
        return self

    def _apply(self, q: Question, value: Any) -> None:
        if q.kind in (EXISTENCE, POLAR):
            flag = _yesno(value)
            if q.kind == EXISTENCE:
                if not flag:
                    self._conclude(empty=True)
                elif q.introduces is not None:
                    # singleton class: yes binds one auto-named instance
                    self._introduce_auto(q.introduces)
                return
            if flag:
                self._add_fact(q, dict(q.fixed_args))
            return
        if q.kind == WH_OPEN:
            text, _more = _free_text(value)
            slug = self._introduce_named(q, text)
            pred = self.program.predicate(q.predicate)
            assert pred is not None
            if not pred.is_membership:
                fixed = dict(q.fixed_args)
                fixed[q.asked_arg or 0] = slug
                self._add_fact(q, fixed)
            return
        if q.kind == WH_ENUM:
            if q.options is None or value not in q.options:
                raise InvalidOption(f"answer {value!r} is not one of {q.options}")
            fixed = dict(q.fixed_args)
            fixed[q.asked_arg or 0] = value
            self._add_fact(q, fixed)
            return
        raise InterviewError(f"unknown question kind {q.kind}")

    def _resolve_auto(self, slug_or_ref: str) -> str:
        if slug_or_ref.startswith("@"):
            cls = slug_or_ref[1:]
            members = self.introduced.get(cls, [])
            if not members:
                raise InterviewError(f"no instance of {cls} introduced yet")
            return members[0]
        return slug_or_ref

    def _add_fact(self, q: Question, fixed: dict[int, str]) -> None:
        pred = self.program.predicate(q.predicate)
        assert pred is not None
        args = tuple(self._resolve_auto(fixed[i]) for i in range(pred.arity))
        atom = GroundAtom(pred.asp_name, args)
        if atom not in self.facts:
            self.facts.append(atom)

    def _introduce_auto(self, class_name: str) -> str:
        named = self.plan.config.instances.get(class_name)
        if named is not None:
            slug, display = named.slug, named.display
        else:
            slug = f"{mangle(class_name)}1"
            display = slug[:1].upper() + slug[1:]
        return self._register(class_name, slug, display, user_named=False)

    def _introduce_named(self, q: Question, text: str) -> str:
        if not isinstance(text, str) or not text.strip():
            raise InvalidOption("free-text answer must be non-empty")
        pred = self.program.predicate(q.predicate)
        assert pred is not None
        class_name = q.introduces or pred.arg_classes[q.asked_arg or 0]
        slug = slugify(text)
        guard_key = (q.id.rsplit(".", 1)[0], q.fixed_args.get(0, ""))
        seen = self._dup_guard.setdefault(guard_key, set())
        if slug in seen:
            raise DuplicateConstant(f"{text.strip()!r} was already entered here")
        seen.add(slug)
        existing = self.constants.get(slug)
        if existing is not None:
            if existing.class_name != class_name:
                raise InvalidOption(
                    f"{text.strip()!r} already names a {existing.class_name.lower()}"
                )
            return slug
        return self._register(class_name, slug, text.strip(), user_named=True)

    def _register(self, class_name: str, slug: str, display: str, user_named: bool) -> str:
        if slug in self.constants:
            raise DuplicateConstant(f"{display!r} is already taken")
        self.constants[slug] = IntroducedConstant(slug, display, class_name, user_named)
        self.introduced.setdefault(class_name, []).append(slug)
        membership = self.program.membership_predicate(class_name)
        atom = GroundAtom(membership.asp_name, (slug,))
        if atom not in self.facts:
            self.facts.append(atom)
        return slug

    # ── conclusion ───────────────────────────────────────────

    def _conclude(self, empty: bool = False) -> None:
        self.state = "concluded"
        self.pending = None
        verb = self.verbalizer()
        if empty:
            self.answer_sets = []
        else:
            clauses = compile_program(self.program)
            self.answer_sets = run_query(clauses, self.facts, self.plan.goal)
        if not self.answer_sets:
            self.conclusion_text = verb.realize_no_answer(self.plan.goal, self.facts)
            self.conclusion_html = verb.realize_no_answer_html(self.plan.goal, self.facts)
            return
        blocks: list[str] = []
        html_blocks: list[str] = []
        for conclusion in _distinct(s.conclusion for s in self.answer_sets):
            group = [s for s in self.answer_sets if s.conclusion == conclusion]
            blocks.append(verb.realize_answer(conclusion, group))
            html_blocks.append(verb.realize_answer_html(conclusion, group))
        self.conclusion_text = "\n\n".join(blocks)
        self.conclusion_html = "".join(html_blocks)

    def scasp_export(self) -> str:
        clauses = compile_program(self.program)
        return export_scasp(clauses, self.plan.goal, extra_facts=self.facts)

    # ── views ────────────────────────────────────────────────

    def snapshot(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "session_id": self.id,
            "state": self.state,
            "goal": self.plan.goal.atom_text(),
            "transcript": [
                {"question_id": h["question_id"], "prompt": h["prompt"], "value": h["value"]}
                for h in self.history
            ],
        }
        if self.pending is not None:
            out["question"] = question_view(self.pending)
        if self.state == "concluded":
            out["conclusion"] = self.conclusion_view()
        return out

    def conclusion_view(self) -> dict[str, Any]:
        assert self.answer_sets is not None
        return {
            "text": self.conclusion_text,
            "html": self.conclusion_html,
            "answer_sets": [
                {
                    "conclusion": {"pred": s.conclusion.predicate, "args": list(s.conclusion.args)},
                    "binding": dict(s.binding),
                    "support": [{"pred": a.predicate, "args": list(a.args)} for a in s.support],
                }
                for s in self.answer_sets
            ],
            "scasp": self.scasp_export(),
        }


def question_view(q: Question) -> dict[str, Any]:
    """The UI-facing rendering of one question."""
    if q.kind in (EXISTENCE, POLAR):
        widget: dict[str, Any] = {"type": "yesno"}
    elif q.kind == WH_OPEN:
        widget = {"type": "text", "loop_prompt": q.loop_prompt}
    else:
        widget = {"type": "enum", "options": list(q.options or [])}
    return {"id": q.id, "kind": q.kind, "prompt": q.prompt, "input": widget}


def plan_view(plan: QuestionPlan) -> dict[str, Any]:
    return {
        "goal": plan.goal.atom_text(),
        "questions": [question_view(q) for q in plan.questions],
        "expansions": [{"question": qid, "per_class": cls} for qid, cls in plan.expansions],
    }


def _yesno(value: Any) -> bool:
    if isinstance(value, bool):
        return value
    if isinstance(value, str) and value.lower() in ("yes", "no"):
        return value.lower() == "yes"
    raise InvalidOption(f"expected yes or no, got {value!r}")


def _free_text(value: Any) -> tuple[str, bool]:
    if isinstance(value, str):
        return value, False
    if isinstance(value, dict) and "text" in value:
        return value["text"], bool(value.get("more", False))
    raise InvalidOption(f"expected free text (optionally with a 'more' flag), got {value!r}")


def _wants_more(value: Any) -> bool:
    return isinstance(value, dict) and bool(value.get("more", False))


def _distinct(items) -> list:
    seen = []
    for item in items:
        if item not in seen:
            seen.append(item)
    return seen
