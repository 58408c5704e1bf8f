"""Translation of normalized programs into clause form and s(CASP)-style text.

Each rule becomes one range-restricted clause: conjunctions flatten into body
atoms, existentials introduce fresh variables, and class-membership atoms are
added for head variables and existential variables of open (non-enumerated)
classes. Output text is Prolog-style: lowercase constants, capitalized
variables, facts before rules before the query.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from . import ast_nodes as ast
from .sem import GroundAtom, NormalizedProgram
from .source import L4Error


class CompileError(L4Error):
    pass


class NonRangeRestricted(CompileError):
    pass


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str


Term = Union[Var, Const]


@dataclass(frozen=True)
class Atom:
    predicate: str
    args: tuple[Term, ...]

    def __str__(self) -> str:
        if not self.args:
            return self.predicate
        rendered = ", ".join(t.name for t in self.args)
        return f"{self.predicate}({rendered})"


@dataclass(frozen=True)
class Clause:
    head: Atom
    body: tuple[Atom, ...] = ()

    @property
    def is_fact(self) -> bool:
        return not self.body

    def __str__(self) -> str:
        if self.is_fact:
            return f"{self.head}."
        body = ", ".join(str(a) for a in self.body)
        return f"{self.head} :- {body}."


@dataclass(frozen=True)
class QuerySpec:
    """A query atom: bound positions carry constants, free ones variable names."""

    predicate: str                       # clause-level predicate name
    bound_args: dict[int, str] = field(default_factory=dict)
    var_names: dict[int, str] = field(default_factory=dict)
    arity: int = 0

    @property
    def free_args(self) -> list[int]:
        return [i for i in range(self.arity) if i not in self.bound_args]

    def atom_text(self) -> str:
        parts = [
            self.bound_args.get(i, self.var_names.get(i, f"X{i}"))
            for i in range(self.arity)
        ]
        return f"{self.predicate}({', '.join(parts)})" if parts else self.predicate


def make_query(
    program: NormalizedProgram, goal: str, bound: Optional[dict[int, str]] = None
) -> QuerySpec:
    """Build a query for ``goal`` with class-derived variable names for free args."""
    pred = program.predicate(goal)
    if pred is None:
        raise CompileError(f"unknown predicate {goal}")
    bound = dict(bound or {})
    for position in bound:
        if position < 0 or position >= pred.arity:
            raise CompileError(f"query position {position} out of range for {pred.name}")
    names: dict[int, str] = {}
    used: set[str] = set()
    for i in range(pred.arity):
        if i in bound:
            continue
        base = _capitalize(pred.arg_classes[i])
        name = base
        n = 1
        while name in used:
            n += 1
            name = f"{base}{n}"
        used.add(name)
        names[i] = name
    return QuerySpec(pred.asp_name, bound, names, pred.arity)


def parse_query(program: NormalizedProgram, text: str) -> QuerySpec:
    """Parse ``win`` or ``win(rps, Player)``: lowercase args bind constants,
    capitalized ones stay free."""
    text = text.strip().rstrip(".")
    if "(" not in text:
        return make_query(program, text)
    name, _, rest = text.partition("(")
    if not rest.endswith(")"):
        raise CompileError(f"malformed query {text!r}")
    args = [a.strip() for a in rest[:-1].split(",")] if rest[:-1].strip() else []
    pred = program.predicate(name.strip())
    if pred is None:
        raise CompileError(f"unknown predicate {name.strip()}")
    if len(args) != pred.arity:
        raise CompileError(f"query {text!r} has {len(args)} arguments, {pred.name} expects {pred.arity}")
    bound = {i: a for i, a in enumerate(args) if a and not a[0].isupper() and a != "_"}
    return make_query(program, name.strip(), bound)


def _capitalize(name: str) -> str:
    return name[:1].upper() + name[1:]


# ── Compilation ──────────────────────────────────────────────────


def compile_program(program: NormalizedProgram) -> list[Clause]:
    """Lower facts and rules to clauses, facts first, rules in source order."""
    clauses: list[Clause] = [
        Clause(Atom(f.predicate, tuple(Const(a) for a in f.args))) for f in program.facts
    ]
    for rule in program.rules:
        clauses.append(_compile_rule(program, rule))
    return clauses


def _compile_rule(program: NormalizedProgram, rule: ast.RuleDecl) -> Clause:
    var_names: dict[str, str] = {}
    used: set[str] = set()

    def canon(var: str) -> str:
        if var not in var_names:
            base = _capitalize(var)
            name = base
            n = 1
            while name in used:
                n += 1
                name = f"{base}{n}"
            used.add(name)
            var_names[var] = name
        return var_names[var]

    binder_classes = {b.var: b.class_name for b in rule.binders}
    exists_vars: list[tuple[str, str]] = []
    condition_atoms: list[ast.Apply] = []

    def walk(expr: ast.Expr):
        if isinstance(expr, ast.Conj):
            walk(expr.left)
            walk(expr.right)
        elif isinstance(expr, ast.Exists):
            exists_vars.append((expr.var, expr.class_name))
            binder_classes.setdefault(expr.var, expr.class_name)
            walk(expr.body)
        else:
            condition_atoms.append(expr)

    if rule.condition is not None:
        walk(rule.condition)

    if not isinstance(rule.conclusion, ast.Apply):
        raise CompileError(f"rule {rule.name} has no single-atom conclusion")
    head = _atom(program, rule.conclusion, canon)

    body: list[Atom] = []
    emitted: set[str] = set()
    # membership atoms for head variables (head-argument order) ...
    for arg in rule.conclusion.args:
        if isinstance(arg, ast.VarRef) and arg.name not in emitted:
            emitted.add(arg.name)
            cls = binder_classes.get(arg.name)
            if cls is None:
                raise NonRangeRestricted(f"head variable {arg.name} of rule {rule.name} has no binder")
            atom = _membership_atom(program, cls, canon(arg.name))
            if atom is not None:
                body.append(atom)
            elif not _occurs_in(arg.name, condition_atoms):
                raise NonRangeRestricted(
                    f"head variable {arg.name} of rule {rule.name} is not bound by the condition"
                )
    # ... then for existential variables, in introduction order
    for var, cls in exists_vars:
        if var in emitted:
            continue
        emitted.add(var)
        atom = _membership_atom(program, cls, canon(var))
        if atom is not None:
            body.append(atom)

    for apply in condition_atoms:
        body.append(_atom(program, apply, canon))
    return Clause(head, tuple(body))


def _occurs_in(var: str, atoms: list[ast.Apply]) -> bool:
    return any(
        isinstance(a, ast.VarRef) and a.name == var for atom in atoms for a in atom.args
    )


def _membership_atom(program: NormalizedProgram, class_name: str, var: str) -> Optional[Atom]:
    info = program.class_info(class_name)
    if info is None or info.is_enumerated:
        # enumerated classes have no membership facts; the condition binds them
        return None
    pred = program.membership_predicate(class_name)
    return Atom(pred.asp_name, (Var(var),))


def _atom(program: NormalizedProgram, apply: ast.Apply, canon) -> Atom:
    pred = program.predicate(apply.predicate)
    if pred is None:
        raise CompileError(f"unknown predicate {apply.predicate}")
    args: list[Term] = []
    for arg in apply.args:
        if isinstance(arg, ast.VarRef):
            args.append(Var(canon(arg.name)))
        else:
            cls = program.const_class(arg.name)
            if cls is None:
                raise CompileError(f"unknown constant {arg.name}")
            args.append(Const(program.asp_const(arg.name)))
    return Atom(pred.asp_name, tuple(args))


# ── Export ───────────────────────────────────────────────────────


def export_scasp(
    clauses: list[Clause],
    query: Optional[QuerySpec] = None,
    extra_facts: Optional[list[GroundAtom]] = None,
) -> str:
    """Render clauses (facts, then rules) plus the query as s(CASP)-style text."""
    lines: list[str] = []
    for clause in clauses:
        if clause.is_fact:
            lines.append(str(clause))
    for fact in extra_facts or []:
        lines.append(str(Clause(Atom(fact.predicate, tuple(Const(a) for a in fact.args)))))
    for clause in clauses:
        if not clause.is_fact:
            lines.append(str(clause))
    if query is not None:
        lines.append(f"?- {query.atom_text()}.")
    return "\n".join(lines) + "\n"


def range_restricted(clause: Clause) -> bool:
    body_vars = {t.name for atom in clause.body for t in atom.args if isinstance(t, Var)}
    return all(
        t.name in body_vars for t in clause.head.args if isinstance(t, Var)
    )
