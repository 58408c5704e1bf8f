"""Symbol table construction, predicate normalization and type checking.

Class fields with Bool-final types become standalone predicates with the
owner class prepended as first argument; one unary membership predicate is
synthesized per class (named with the lowercased class name) so that typing
facts like ``game(rps)`` can be stated and verbalised.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Union

from . import ast_nodes as ast
from .source import Diagnostic, L4Error, SemanticError, Span, NO_SPAN


@dataclass(frozen=True)
class Standalone:
    pass


@dataclass(frozen=True)
class FieldOf:
    owner: str


@dataclass(frozen=True)
class Membership:
    class_name: str


Origin = Union[Standalone, FieldOf, Membership]


@dataclass(frozen=True)
class NormalizedPredicate:
    name: str               # source spelling
    asp_name: str           # clause-level spelling
    arg_classes: tuple[str, ...]
    origin: Origin = Standalone()

    @property
    def arity(self) -> int:
        return len(self.arg_classes)

    @property
    def is_membership(self) -> bool:
        return isinstance(self.origin, Membership)

    @property
    def owner_class(self) -> str:
        return self.arg_classes[0]


@dataclass(frozen=True)
class ClassInfo:
    name: str
    constants: tuple[str, ...] = ()      # source spellings, declaration order
    asp_constants: tuple[str, ...] = ()
    is_enumerated: bool = False


@dataclass(frozen=True)
class GroundAtom:
    """A clause-level fact: predicate and constants in exported spelling."""

    predicate: str
    args: tuple[str, ...]

    def __str__(self) -> str:
        return f"{self.predicate}({', '.join(self.args)})"


class UnknownGoal(L4Error):
    pass


def mangle(name: str) -> str:
    """L4 CamelCase identifier → lowercase snake spelling for clause export."""
    out = re.sub(r"(?<=[a-z0-9])(?=[A-Z])", "_", name)
    return out.lower()


@dataclass
class NormalizedProgram:
    classes: tuple[ClassInfo, ...]
    predicates: tuple[NormalizedPredicate, ...]
    rules: tuple[ast.RuleDecl, ...]
    facts: tuple[GroundAtom, ...]
    fact_rules: tuple[ast.RuleDecl, ...] = field(default=(), compare=False)
    lexicon_entries: tuple[ast.LexiconDecl, ...] = ()
    _const_to_asp: dict = field(default_factory=dict, compare=False, repr=False)
    _asp_to_const: dict = field(default_factory=dict, compare=False, repr=False)

    # ── lookups ──────────────────────────────────────────────

    def class_info(self, name: str) -> Optional[ClassInfo]:
        for c in self.classes:
            if c.name == name:
                return c
        return None

    def predicate(self, name: str) -> Optional[NormalizedPredicate]:
        """Look a predicate up by source or clause-level name."""
        for p in self.predicates:
            if p.name == name:
                return p
        for p in self.predicates:
            if p.asp_name == name:
                return p
        return None

    def membership_predicate(self, class_name: str) -> NormalizedPredicate:
        for p in self.predicates:
            if isinstance(p.origin, Membership) and p.origin.class_name == class_name:
                return p
        raise KeyError(class_name)

    def user_predicates(self) -> list[NormalizedPredicate]:
        return [p for p in self.predicates if not p.is_membership]

    def asp_const(self, source_name: str) -> str:
        return self._const_to_asp[source_name]

    def const_class(self, source_name: str) -> Optional[str]:
        for c in self.classes:
            if source_name in c.constants:
                return c.name
        return None

    def enumerated_asp_constants(self, class_name: str) -> list[str]:
        info = self.class_info(class_name)
        return list(info.asp_constants) if info else []

    def defining_rules(self, pred: NormalizedPredicate) -> list[ast.RuleDecl]:
        out = []
        for rule in self.rules:
            conclusion = rule.conclusion
            if isinstance(conclusion, ast.Apply):
                target = self.predicate(conclusion.predicate)
                if target is pred or (target and target.asp_name == pred.asp_name):
                    out.append(rule)
        return out

    def has_facts_for(self, pred: NormalizedPredicate) -> bool:
        return any(f.predicate == pred.asp_name for f in self.facts)

    def fact_complete(self, pred: NormalizedPredicate) -> bool:
        """Given by facts: ranges only over enumerated classes and has facts."""
        enumerated = all(
            (info := self.class_info(c)) is not None and info.is_enumerated
            for c in pred.arg_classes
        )
        return enumerated and self.has_facts_for(pred)


# ── Normalization ────────────────────────────────────────────────


def normalize(program: ast.SourceProgram) -> NormalizedProgram:
    """Lower a parsed program to standalone predicates plus membership predicates.

    Raises :class:`SemanticError` on duplicate predicates/classes or unknown
    classes; idempotent on programs that are already in standalone form.
    """
    diags: list[Diagnostic] = []

    class_decls: list[ast.ClassDecl] = []
    value_decls: list[ast.ValueDecl] = []
    rules: list[ast.RuleDecl] = []
    lexicon: list[ast.LexiconDecl] = []
    for block in program.blocks:
        if isinstance(block, ast.ClassBlock):
            class_decls.extend(block.classes)
        elif isinstance(block, ast.DeclBlock):
            value_decls.extend(block.decls)
        elif isinstance(block, ast.RuleBlock):
            rules.append(block.rule)
        elif isinstance(block, ast.LexiconBlock):
            lexicon.extend(block.entries)

    class_names: list[str] = []
    for cls in class_decls:
        if cls.name in class_names:
            diags.append(_diag("duplicate-class", f"class {cls.name} declared twice", cls.span))
        else:
            class_names.append(cls.name)

    # constants, grouped per class in declaration order
    constants: dict[str, list[str]] = {name: [] for name in class_names}
    const_classes: dict[str, str] = {}
    for decl in value_decls:
        if not decl.is_constant():
            continue
        cls = decl.declared_type.name  # type: ignore[union-attr]
        if cls not in constants:
            diags.append(_diag("unknown-class", f"unknown class {cls} in declaration of {decl.name}", decl.span))
            continue
        if decl.name in const_classes:
            diags.append(_diag("duplicate-constant", f"constant {decl.name} declared twice", decl.span))
            continue
        constants[cls].append(decl.name)
        const_classes[decl.name] = cls

    # user predicates: class fields first (owner prepended), then standalone
    predicates: list[NormalizedPredicate] = []
    seen_names: set[str] = set()

    def add_predicate(name: str, arg_classes: tuple[str, ...], origin: Origin, span: Optional[Span]):
        if name in seen_names:
            diags.append(_diag("duplicate-predicate", f"predicate {name} declared twice", span))
            return
        for cls in arg_classes:
            if cls not in class_names:
                diags.append(_diag("unknown-class", f"unknown class {cls} in predicate {name}", span))
                return
        seen_names.add(name)
        predicates.append(NormalizedPredicate(name, "", arg_classes, origin))

    for cls in class_decls:
        seen_fields: set[str] = set()
        for f in cls.fields:
            if f.name in seen_fields:
                diags.append(_diag("duplicate-field", f"field {f.name} declared twice in class {cls.name}", f.span))
                continue
            seen_fields.add(f.name)
            args, result = ast.arrow_args(f.field_type)
            if not isinstance(result, ast.BoolType) or not all(isinstance(a, ast.ClassRef) for a in args):
                diags.append(_diag("unsupported-type", f"field {f.name} of {cls.name} is not a Bool-final predicate type", f.span))
                continue
            add_predicate(f.name, (cls.name, *[a.name for a in args]), FieldOf(cls.name), f.span)

    for decl in value_decls:
        if decl.is_constant():
            continue
        args, result = ast.arrow_args(decl.declared_type)
        if decl.is_predicate() and all(isinstance(a, ast.ClassRef) for a in args):
            add_predicate(decl.name, tuple(a.name for a in args), Standalone(), decl.span)
        else:
            diags.append(_diag("unsupported-type", f"declaration {decl.name} is neither a constant nor a predicate", decl.span))

    # membership predicates, one per class
    membership_names: dict[str, str] = {}
    for name in class_names:
        asp = mangle(name)
        membership_names[name] = asp
        if any(p.name == asp or p.name == name.lower() for p in predicates if not isinstance(p.origin, Membership)):
            # a user predicate already owns the lowercased class name
            diags.append(_diag("duplicate-predicate", f"predicate {asp} collides with the membership predicate of class {name}", NO_SPAN))

    if diags:
        raise SemanticError(diags)

    # clause-level names, numeric suffixes on collision
    asp_pred_names: dict[str, str] = {}
    taken: set[str] = set(membership_names.values())
    for p in predicates:
        base = mangle(p.name)
        asp = base
        n = 1
        while asp in taken:
            n += 1
            asp = f"{base}{n}"
        taken.add(asp)
        asp_pred_names[p.name] = asp
    predicates = [
        NormalizedPredicate(p.name, asp_pred_names[p.name], p.arg_classes, p.origin)
        for p in predicates
    ]
    for name in class_names:
        predicates.append(
            NormalizedPredicate(membership_names[name], membership_names[name], (name,), Membership(name))
        )

    const_to_asp: dict[str, str] = {}
    taken_consts: set[str] = set()
    for cls in class_names:
        for const in constants[cls]:
            base = mangle(const)
            asp = base
            n = 1
            while asp in taken_consts:
                n += 1
                asp = f"{base}{n}"
            taken_consts.add(asp)
            const_to_asp[const] = asp

    class_infos = tuple(
        ClassInfo(
            name,
            tuple(constants[name]),
            tuple(const_to_asp[c] for c in constants[name]),
            bool(constants[name]),
        )
        for name in class_names
    )

    pred_by_name = {p.name: p for p in predicates}
    fact_rules = tuple(r for r in rules if r.is_fact())
    proper_rules = tuple(r for r in rules if not r.is_fact())
    facts: list[GroundAtom] = []
    for rule in fact_rules:
        conclusion = rule.conclusion
        assert isinstance(conclusion, ast.Apply)
        pred = pred_by_name.get(conclusion.predicate)
        if pred is None or any(a.name not in const_to_asp for a in conclusion.args):
            continue  # left for the type checker to report
        facts.append(GroundAtom(pred.asp_name, tuple(const_to_asp[a.name] for a in conclusion.args)))

    out = NormalizedProgram(
        classes=class_infos,
        predicates=tuple(predicates),
        rules=proper_rules,
        facts=tuple(facts),
        fact_rules=fact_rules,
        lexicon_entries=tuple(lexicon),
    )
    out._const_to_asp = const_to_asp
    out._asp_to_const = {v: k for k, v in const_to_asp.items()}
    return out


def _diag(code: str, message: str, span: Optional[Span]) -> Diagnostic:
    return Diagnostic(code, message, span or NO_SPAN)


# ── Type checking ────────────────────────────────────────────────


def type_check(program: NormalizedProgram) -> list[Diagnostic]:
    """Check arities, argument classes and variable binding; returns diagnostics."""
    diags: list[Diagnostic] = []
    class_names = {c.name for c in program.classes}

    for rule in list(program.rules) + list(program.fact_rules):
        env: dict[str, str] = {}
        for binder in rule.binders:
            if binder.class_name not in class_names:
                diags.append(_diag("unknown-class", f"unknown class {binder.class_name} for binder {binder.var}", binder.span))
            if binder.var in env:
                diags.append(_diag("duplicate-binder", f"binder {binder.var} repeated in rule {rule.name}", binder.span))
            env[binder.var] = binder.class_name
        if rule.condition is not None:
            _check_expr(program, rule.condition, dict(env), class_names, diags)
        if isinstance(rule.conclusion, ast.Apply):
            _check_apply(program, rule.conclusion, env, diags)
        else:
            diags.append(_diag("invalid-conclusion", f"rule {rule.name} must conclude a single predicate application", rule.span))
    return diags


def _check_expr(program, expr, env: dict[str, str], class_names: set[str], diags: list[Diagnostic]):
    if isinstance(expr, ast.Conj):
        _check_expr(program, expr.left, env, class_names, diags)
        _check_expr(program, expr.right, env, class_names, diags)
    elif isinstance(expr, ast.Exists):
        if expr.class_name not in class_names:
            diags.append(_diag("unknown-class", f"unknown class {expr.class_name} for exists {expr.var}", expr.span))
        inner = dict(env)
        inner[expr.var] = expr.class_name
        _check_expr(program, expr.body, inner, class_names, diags)
    else:
        _check_apply(program, expr, env, diags)


def _check_apply(program: NormalizedProgram, apply: ast.Apply, env: dict[str, str], diags: list[Diagnostic]):
    pred = program.predicate(apply.predicate)
    if pred is None:
        diags.append(_diag("unknown-predicate", f"unknown predicate {apply.predicate}", apply.span))
        return
    if len(apply.args) != pred.arity:
        diags.append(
            _diag("arity-mismatch", f"{pred.name} expects {pred.arity} arguments, got {len(apply.args)}", apply.span)
        )
        return
    for expected, arg in zip(pred.arg_classes, apply.args):
        if isinstance(arg, ast.VarRef):
            got = env.get(arg.name)
            if got is None:
                diags.append(_diag("unbound-variable", f"unbound variable {arg.name}", apply.span))
            elif got != expected:
                diags.append(_diag("class-mismatch", f"{pred.name}: expected {expected}, got {got} ({arg.name})", apply.span))
        else:
            got = program.const_class(arg.name)
            if got is None:
                diags.append(_diag("unbound-variable", f"unknown constant or variable {arg.name}", apply.span))
            elif got != expected:
                diags.append(_diag("class-mismatch", f"{pred.name}: expected {expected}, got {got} ({arg.name})", apply.span))


# ── Interview-facing analysis ────────────────────────────────────


def askable_predicates(program: NormalizedProgram, goal: str) -> list[NormalizedPredicate]:
    """Predicates the interview must supply to decide ``goal``.

    A predicate is askable when it is reachable from the goal's defining
    rules, has no defining rule of its own and is not already given by a
    complete fact table. The membership predicate of the goal's owner class
    leads the list; other classes get their members introduced by the
    open questions themselves.
    """
    goal_pred = program.predicate(goal)
    if goal_pred is None:
        raise UnknownGoal(f"unknown goal predicate {goal}")
    defining = program.defining_rules(goal_pred)
    if not defining:
        return []

    rule_defined = {
        p.asp_name for p in program.predicates if program.defining_rules(p)
    }

    # predicates reachable through rule-defined predicates
    reachable: list[NormalizedPredicate] = []
    seen: set[str] = set()
    frontier = list(defining)
    visited_rules: set[int] = set()
    while frontier:
        rule = frontier.pop(0)
        if id(rule) in visited_rules:
            continue
        visited_rules.add(id(rule))
        if rule.condition is None:
            continue
        for atom in _condition_atoms(rule.condition):
            pred = program.predicate(atom.predicate)
            if pred is None or pred.asp_name in seen:
                continue
            seen.add(pred.asp_name)
            if pred.asp_name in rule_defined:
                frontier.extend(program.defining_rules(pred))
            else:
                reachable.append(pred)

    candidates = [
        p
        for p in reachable
        if not p.is_membership
        and p.asp_name != goal_pred.asp_name
        and not program.fact_complete(p)
    ]

    ordered: list[NormalizedPredicate] = []
    primary = goal_pred.owner_class
    primary_info = program.class_info(primary)
    if primary_info is not None and not primary_info.is_enumerated:
        ordered.append(program.membership_predicate(primary))

    populated = {c.name for c in program.classes if c.is_enumerated} | {primary}
    queue = [primary]
    remaining = [p for p in program.user_predicates() if p in candidates]
    while queue:
        cls = queue.pop(0)
        for pred in list(remaining):
            if pred.owner_class != cls:
                continue
            remaining.remove(pred)
            ordered.append(pred)
            for arg_cls in pred.arg_classes[1:]:
                info = program.class_info(arg_cls)
                if info is not None and not info.is_enumerated and arg_cls not in populated:
                    populated.add(arg_cls)
                    queue.append(arg_cls)
    ordered.extend(remaining)
    return ordered


def _condition_atoms(expr: ast.Expr) -> list[ast.Apply]:
    if isinstance(expr, ast.Conj):
        return _condition_atoms(expr.left) + _condition_atoms(expr.right)
    if isinstance(expr, ast.Exists):
        return _condition_atoms(expr.body)
    return [expr]


def standalone_source(program: NormalizedProgram) -> ast.SourceProgram:
    """Re-express a normalized program as standalone-form L4 source blocks."""
    blocks: list[ast.Block] = []
    class_block = ast.ClassBlock(tuple(ast.ClassDecl(c.name) for c in program.classes))
    blocks.append(class_block)
    const_decls = tuple(
        ast.ValueDecl(const, ast.ClassRef(c.name))
        for c in program.classes
        for const in c.constants
    )
    if const_decls:
        blocks.append(ast.DeclBlock(const_decls))
    pred_decls = []
    for p in program.user_predicates():
        t: ast.TypeExpr = ast.BOOL
        for cls in reversed(p.arg_classes):
            t = ast.Arrow(ast.ClassRef(cls), t)
        pred_decls.append(ast.ValueDecl(p.name, t))
    if pred_decls:
        blocks.append(ast.DeclBlock(tuple(pred_decls)))
    for rule in program.rules + program.fact_rules:
        blocks.append(ast.RuleBlock(rule))
    if program.lexicon_entries:
        blocks.append(ast.LexiconBlock(program.lexicon_entries))
    return ast.SourceProgram(tuple(blocks))
