"""AST node types for L4 source programs.

Nodes compare structurally; spans are carried for diagnostics but excluded
from equality so that round-tripped programs compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .source import Span

# ── Types ────────────────────────────────────────────────────────


@dataclass(frozen=True)
class ClassRef:
    name: str


@dataclass(frozen=True)
class BoolType:
    pass


@dataclass(frozen=True)
class Arrow:
    """Right-associated function type: A → B → Bool is Arrow(A, Arrow(B, Bool))."""

    argument: "TypeExpr"
    result: "TypeExpr"


TypeExpr = Union[ClassRef, BoolType, Arrow]

BOOL = BoolType()


def arrow_args(t: TypeExpr) -> tuple[list[TypeExpr], TypeExpr]:
    """Split an arrow chain into its argument list and final result type."""
    args: list[TypeExpr] = []
    while isinstance(t, Arrow):
        args.append(t.argument)
        t = t.result
    return args, t


# ── Expressions ──────────────────────────────────────────────────


@dataclass(frozen=True)
class VarRef:
    name: str


@dataclass(frozen=True)
class ConstRef:
    name: str


@dataclass(frozen=True)
class Apply:
    """First-order application: arguments are variables or constants only."""

    predicate: str
    args: tuple[Union[VarRef, ConstRef], ...]
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Conj:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Exists:
    var: str
    class_name: str
    body: "Expr"
    span: Optional[Span] = field(default=None, compare=False, repr=False)


Expr = Union[Apply, Conj, Exists]


def conjuncts(expr: Expr) -> list[Expr]:
    """Flatten a left-nested conjunction into its operand list."""
    if isinstance(expr, Conj):
        return conjuncts(expr.left) + conjuncts(expr.right)
    return [expr]


def conjoin(operands: list[Expr]) -> Expr:
    out = operands[0]
    for op in operands[1:]:
        out = Conj(out, op)
    return out


# ── Declarations and blocks ──────────────────────────────────────


@dataclass(frozen=True)
class FieldDecl:
    name: str
    field_type: TypeExpr
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class ClassDecl:
    name: str
    fields: tuple[FieldDecl, ...] = ()
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class ValueDecl:
    name: str
    declared_type: TypeExpr
    span: Optional[Span] = field(default=None, compare=False, repr=False)

    def is_constant(self) -> bool:
        return isinstance(self.declared_type, ClassRef)

    def is_predicate(self) -> bool:
        args, result = arrow_args(self.declared_type)
        return bool(args) and isinstance(result, BoolType)


@dataclass(frozen=True)
class Binder:
    var: str
    class_name: str
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class RuleDecl:
    name: str
    binders: tuple[Binder, ...]
    condition: Optional[Expr]
    conclusion: Expr
    span: Optional[Span] = field(default=None, compare=False, repr=False)

    def is_fact(self) -> bool:
        """Ground condition-less rules are facts rather than defining rules."""
        return (
            not self.binders
            and self.condition is None
            and isinstance(self.conclusion, Apply)
            and all(isinstance(a, ConstRef) for a in self.conclusion.args)
        )


@dataclass(frozen=True)
class LexiconDecl:
    key: str
    surface: str
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class ClassBlock:
    classes: tuple[ClassDecl, ...]
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class DeclBlock:
    decls: tuple[ValueDecl, ...]
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class RuleBlock:
    rule: RuleDecl
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class LexiconBlock:
    entries: tuple[LexiconDecl, ...]
    span: Optional[Span] = field(default=None, compare=False, repr=False)


Block = Union[ClassBlock, DeclBlock, RuleBlock, LexiconBlock]


@dataclass(frozen=True)
class SourceProgram:
    """A parsed file: block order is preserved exactly as written."""

    blocks: tuple[Block, ...] = ()
