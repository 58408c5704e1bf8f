"""Bottom-up evaluation of positive clause programs.

The least model is the fixed point of immediate-consequence iteration; the
programs produced by the compiler are positive Horn clauses, so the model is
unique and every derived atom carries a reconstructible justification: the
ground body of the first rule instance (under canonical grounding order:
rules in source order, constants in first-appearance order) that derives it.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .asp import Atom, Clause, Const, QuerySpec, Var
from .sem import GroundAtom, NormalizedProgram
from .source import L4Error


class ReasonerError(L4Error):
    pass


class UnknownPredicate(ReasonerError):
    pass


class OpenPredicateAlreadyGround(ReasonerError):
    pass


@dataclass(frozen=True)
class AnswerSet:
    """One ground query instance with the atoms that justify it."""

    conclusion: GroundAtom
    binding: dict[str, str] = field(default_factory=dict)
    support: tuple[GroundAtom, ...] = ()


@dataclass(frozen=True)
class HypotheticalSpace:
    """An open predicate whose chooser argument ranges over candidates.

    Each chooser instance (the remaining argument tuple) receives exactly one
    candidate per hypothetical model.
    """

    open_predicate: str
    chooser_arg: int
    candidates: tuple[str, ...]
    chooser_instances: tuple[tuple[str, ...], ...]


# ── Model computation ────────────────────────────────────────────


def _match(atom: Atom, fact: GroundAtom, binding: dict[str, str]) -> Optional[dict[str, str]]:
    if atom.predicate != fact.predicate or len(atom.args) != len(fact.args):
        return None
    out = binding
    copied = False
    for term, value in zip(atom.args, fact.args):
        if isinstance(term, Const):
            if term.name != value:
                return None
        else:
            bound = out.get(term.name)
            if bound is None:
                if not copied:
                    out = dict(out)
                    copied = True
                out[term.name] = value
            elif bound != value:
                return None
    return out if copied else dict(out)


def _substitute(atom: Atom, binding: dict[str, str]) -> GroundAtom:
    args = []
    for term in atom.args:
        if isinstance(term, Const):
            args.append(term.name)
        else:
            args.append(binding[term.name])
    return GroundAtom(atom.predicate, tuple(args))


class _Index:
    """Per-predicate fact lists kept in canonical (first-appearance) order."""

    def __init__(self, const_order: dict[str, int]):
        self.by_pred: dict[str, list[GroundAtom]] = {}
        self.atoms: set[GroundAtom] = set()
        self.const_order = const_order

    def key(self, atom: GroundAtom) -> tuple[int, ...]:
        return tuple(self.const_order.setdefault(a, len(self.const_order)) for a in atom.args)

    def add(self, atom: GroundAtom) -> bool:
        if atom in self.atoms:
            return False
        self.atoms.add(atom)
        bucket = self.by_pred.setdefault(atom.predicate, [])
        k = self.key(atom)
        lo = 0
        while lo < len(bucket) and self.key(bucket[lo]) <= k:
            lo += 1
        bucket.insert(lo, atom)
        return True

    def candidates(self, predicate: str) -> list[GroundAtom]:
        return self.by_pred.get(predicate, [])


def _body_bindings(body: tuple[Atom, ...], index: _Index, start: Optional[dict[str, str]] = None):
    bindings = [dict(start or {})]
    for atom in body:
        next_bindings = []
        for binding in bindings:
            for fact in index.candidates(atom.predicate):
                hit = _match(atom, fact, binding)
                if hit is not None:
                    next_bindings.append(hit)
        bindings = next_bindings
        if not bindings:
            return []
    return bindings


def _build_index(clauses: list[Clause], facts: Iterable[GroundAtom]) -> _Index:
    const_order: dict[str, int] = {}
    for clause in clauses:
        for atom in (clause.head, *clause.body):
            for term in atom.args:
                if isinstance(term, Const):
                    const_order.setdefault(term.name, len(const_order))
    index = _Index(const_order)
    for clause in clauses:
        if clause.is_fact:
            if any(isinstance(t, Var) for t in clause.head.args):
                raise ReasonerError(f"non-ground fact clause {clause}")
            index.add(_substitute(clause.head, {}))
    for fact in facts:
        index.add(fact)
    return index


def least_model(clauses: list[Clause], facts: Iterable[GroundAtom]) -> frozenset[GroundAtom]:
    """The unique least fixed point of bottom-up rule application."""
    index = _build_index(clauses, facts)
    rules = [c for c in clauses if not c.is_fact]
    changed = True
    while changed:
        changed = False
        for rule in rules:
            for binding in _body_bindings(rule.body, index):
                if index.add(_substitute(rule.head, binding)):
                    changed = True
    return frozenset(index.atoms)


# ── Query answering ──────────────────────────────────────────────


def answer(clauses: list[Clause], facts: Iterable[GroundAtom], query: QuerySpec) -> list[AnswerSet]:
    """One answer set per ground query instance in the least model."""
    facts = list(facts)
    known = {c.head.predicate for c in clauses} | {f.predicate for f in facts}
    for c in clauses:
        known.update(a.predicate for a in c.body)
    if query.predicate not in known:
        raise UnknownPredicate(f"unknown predicate {query.predicate}")

    index = _build_index(clauses, facts)
    rules = [c for c in clauses if not c.is_fact]
    changed = True
    while changed:
        changed = False
        for rule in rules:
            for binding in _body_bindings(rule.body, index):
                if index.add(_substitute(rule.head, binding)):
                    changed = True

    matches = [
        atom
        for atom in index.candidates(query.predicate)
        if len(atom.args) == query.arity
        and all(atom.args[i] == v for i, v in query.bound_args.items())
    ]
    out = []
    for conclusion in matches:
        binding = {
            query.var_names[i]: conclusion.args[i] for i in query.free_args
        }
        out.append(AnswerSet(conclusion, binding, _support(clauses, index, conclusion)))
    return out


def _support(clauses: list[Clause], index: _Index, conclusion: GroundAtom) -> tuple[GroundAtom, ...]:
    """Ground body of the first rule instance deriving ``conclusion``.

    Facts (given or clause-level) have empty support.
    """
    if conclusion in {_substitute(c.head, {}) for c in clauses if c.is_fact}:
        return ()
    for clause in clauses:
        if clause.is_fact:
            continue
        head_binding: Optional[dict[str, str]] = {}
        if clause.head.predicate != conclusion.predicate or len(clause.head.args) != len(conclusion.args):
            continue
        head_binding = _match(clause.head, conclusion, {})
        if head_binding is None:
            continue
        hits = _body_bindings(clause.body, index, head_binding)
        for binding in hits:
            if _substitute(clause.head, binding) == conclusion:
                return tuple(_substitute(a, binding) for a in clause.body)
    return ()


# ── Hypothetical enumeration ─────────────────────────────────────


def build_space(
    program: NormalizedProgram,
    facts: Iterable[GroundAtom],
    open_predicate: str,
    candidates: Optional[list[str]] = None,
) -> HypotheticalSpace:
    """Derive the chooser instances and candidate list for an open predicate."""
    pred = program.predicate(open_predicate)
    if pred is None:
        raise UnknownPredicate(f"unknown predicate {open_predicate}")
    chooser_arg = next(
        (
            i
            for i, cls in enumerate(pred.arg_classes)
            if (info := program.class_info(cls)) is not None and info.is_enumerated
        ),
        None,
    )
    if chooser_arg is None:
        raise ReasonerError(f"predicate {pred.name} has no enumerated argument class")
    if candidates is None:
        candidates = program.enumerated_asp_constants(pred.arg_classes[chooser_arg])

    facts = list(facts)
    instance_lists: list[list[str]] = []
    for i, cls in enumerate(pred.arg_classes):
        if i == chooser_arg:
            continue
        info = program.class_info(cls)
        members: list[str] = list(info.asp_constants) if info else []
        membership = program.membership_predicate(cls).asp_name if info else None
        for fact in facts:
            if fact.predicate == membership and fact.args[0] not in members:
                members.append(fact.args[0])
        instance_lists.append(members)
    instances = tuple(itertools.product(*instance_lists)) if instance_lists else ((),)
    return HypotheticalSpace(pred.asp_name, chooser_arg, tuple(candidates), instances)


def enumerate_hypotheticals(
    clauses: list[Clause],
    facts: Iterable[GroundAtom],
    space: HypotheticalSpace,
    query: QuerySpec,
) -> list[AnswerSet]:
    """Try every total assignment of candidates to chooser instances and keep
    the ones under which the query succeeds, in canonical candidate order."""
    facts = list(facts)
    if any(f.predicate == space.open_predicate for f in facts):
        raise OpenPredicateAlreadyGround(
            f"facts already fix {space.open_predicate}; hypothetical space must be open"
        )
    if not space.candidates:
        raise ReasonerError("hypothetical space has no candidates")

    out: list[AnswerSet] = []
    for combo in itertools.product(space.candidates, repeat=len(space.chooser_instances)):
        extra = []
        for instance, choice in zip(space.chooser_instances, combo):
            args = list(instance)
            args.insert(space.chooser_arg, choice)
            extra.append(GroundAtom(space.open_predicate, tuple(args)))
        out.extend(answer(clauses, facts + extra, query))
    return out


# ── Fact persistence ─────────────────────────────────────────────


def facts_to_json(atoms: Iterable[GroundAtom], names: Optional[dict[str, str]] = None) -> str:
    doc: dict = {"atoms": [{"pred": a.predicate, "args": list(a.args)} for a in atoms]}
    if names:
        doc["names"] = dict(names)
    return json.dumps(doc, indent=2) + "\n"


def facts_from_json(text: str) -> tuple[list[GroundAtom], dict[str, str]]:
    doc = json.loads(text)
    atoms = [GroundAtom(a["pred"], tuple(a["args"])) for a in doc.get("atoms", [])]
    return atoms, dict(doc.get("names", {}))
