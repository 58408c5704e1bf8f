"""Canonical pretty printer; ``parse(pretty_print(p))`` equals ``p``."""

from __future__ import annotations

from . import ast_nodes as ast


def pretty_print(program: ast.SourceProgram) -> str:
    chunks = [_print_block(b) for b in program.blocks]
    return "\n\n".join(chunks) + ("\n" if chunks else "")


def _print_block(block: ast.Block) -> str:
    if isinstance(block, ast.ClassBlock):
        lines = ["class"]
        for cls in block.classes:
            if cls.fields:
                lines.append(f"  {cls.name} {{")
                for f in cls.fields:
                    lines.append(f"    {f.name} : {print_type(f.field_type)}")
                lines.append("  }")
            else:
                lines.append(f"  {cls.name}")
        return "\n".join(lines)
    if isinstance(block, ast.DeclBlock):
        lines = ["decl"]
        for decl in block.decls:
            lines.append(f"  {decl.name} : {print_type(decl.declared_type)}")
        return "\n".join(lines)
    if isinstance(block, ast.RuleBlock):
        rule = block.rule
        lines = [f"rule <{rule.name}>"]
        if rule.binders:
            binders = ", ".join(f"{b.var} : {b.class_name}" for b in rule.binders)
            lines.append(f"  for {binders}")
        if rule.condition is not None:
            lines.append(f"  if {print_expr(rule.condition)}")
        lines.append(f"  then {print_expr(rule.conclusion)}")
        return "\n".join(lines)
    if isinstance(block, ast.LexiconBlock):
        lines = ["lexicon"]
        for entry in block.entries:
            surface = entry.surface.replace("\\", "\\\\").replace('"', '\\"')
            lines.append(f'  {entry.key} @ "{surface}"')
        return "\n".join(lines)
    raise TypeError(f"unknown block {block!r}")


def print_type(t: ast.TypeExpr) -> str:
    if isinstance(t, ast.BoolType):
        return "Bool"
    if isinstance(t, ast.ClassRef):
        return t.name
    assert isinstance(t, ast.Arrow)
    left = print_type(t.argument)
    if isinstance(t.argument, ast.Arrow):
        left = f"({left})"
    return f"{left} → {print_type(t.result)}"


def print_expr(expr: ast.Expr) -> str:
    operands = ast.conjuncts(expr)
    parts = []
    for i, op in enumerate(operands):
        text = _print_operand(op)
        # a non-final exists must be parenthesized: bare exists extends right
        if isinstance(op, ast.Exists) and i < len(operands) - 1:
            text = f"({text})"
        parts.append(text)
    return " && ".join(parts)


def _print_operand(expr: ast.Expr) -> str:
    if isinstance(expr, ast.Apply):
        args = " ".join(a.name for a in expr.args)
        return f"{expr.predicate} {args}".rstrip()
    if isinstance(expr, ast.Exists):
        return f"exists {expr.var} : {expr.class_name} . {print_expr(expr.body)}"
    assert isinstance(expr, ast.Conj)
    return f"({print_expr(expr)})"
