#!/usr/bin/python3
"""Expression IR over the flattened variable vector.

Names are lowered to variable indices once, then each node is compiled to a
closure ``fn(cur, pre)`` where ``cur`` is the valuation being built by a
transition and ``pre`` the valuation it started from (read by ``Old``).
"""

import operator
from dataclasses import dataclass
from typing import Callable, Mapping

from tempock.fiacre import ast


@dataclass(frozen=True)
class Const:
    value: object


@dataclass(frozen=True)
class VarRef:
    index: int
    name: str


@dataclass(frozen=True)
class Old:
    """Value of a variable before the current step"""

    index: int
    name: str


@dataclass(frozen=True)
class UnOp:
    op: str  # "not" | "-"
    operand: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Ite:
    cond: object
    then: object
    orelse: object


TRUE = Const(True)
FALSE = Const(False)

_BINARY = {
    "+": operator.add, "-": operator.sub, "*": operator.mul,
    "=": operator.eq, "<>": operator.ne, "<": operator.lt, "<=": operator.le,
    ">": operator.gt, ">=": operator.ge,
}


def conj(*exprs):
    """Conjunction with constant folding of ``true``/``false`` operands"""
    parts = []
    for expr in exprs:
        if expr == FALSE:
            return FALSE
        if expr != TRUE:
            parts.append(expr)
    if not parts:
        return TRUE
    result = parts[0]
    for part in parts[1:]:
        result = BinOp("and", result, part)
    return result


def disj(*exprs):
    parts = []
    for expr in exprs:
        if expr == TRUE:
            return TRUE
        if expr != FALSE:
            parts.append(expr)
    if not parts:
        return FALSE
    result = parts[0]
    for part in parts[1:]:
        result = BinOp("or", result, part)
    return result


def negate(expr):
    if expr == TRUE:
        return FALSE
    if expr == FALSE:
        return TRUE
    if isinstance(expr, UnOp) and expr.op == "not":
        return expr.operand
    return UnOp("not", expr)


def equals(index: int, name: str, value):
    return BinOp("=", VarRef(index, name), Const(value))


def lower(expr: ast.Expr, names: Mapping[str, int], constants: Mapping[str, int],
          literals) -> object:
    """Lowers a source expression; ``names`` maps variable names to indices"""
    match expr:
        case ast.IntLit(value) | ast.BoolLit(value):
            return Const(value)
        case ast.Name(name):
            if name in names:
                return VarRef(names[name], name)
            if name in constants:
                return Const(constants[name])
            if name in literals:
                return Const(name)
            raise KeyError(name)
        case ast.Unary(op, operand):
            return UnOp(op, lower(operand, names, constants, literals))
        case ast.Binary(op, left, right):
            return BinOp(op, lower(left, names, constants, literals),
                         lower(right, names, constants, literals))
    raise TypeError("not an expression: {!r}".format(expr))


def compile_expr(node) -> Callable:
    match node:
        case Const(value):
            return lambda cur, pre: value
        case VarRef(index, _):
            return lambda cur, pre: cur[index]
        case Old(index, _):
            return lambda cur, pre: pre[index]
        case UnOp("not", operand):
            fn = compile_expr(operand)
            return lambda cur, pre: not fn(cur, pre)
        case UnOp(_, operand):
            fn = compile_expr(operand)
            return lambda cur, pre: -fn(cur, pre)
        case BinOp("and", left, right):
            lf, rf = compile_expr(left), compile_expr(right)
            return lambda cur, pre: lf(cur, pre) and rf(cur, pre)
        case BinOp("or", left, right):
            lf, rf = compile_expr(left), compile_expr(right)
            return lambda cur, pre: lf(cur, pre) or rf(cur, pre)
        case BinOp(op, left, right):
            lf, rf, fn = compile_expr(left), compile_expr(right), _BINARY[op]
            return lambda cur, pre: fn(lf(cur, pre), rf(cur, pre))
        case Ite(cond, then, orelse):
            cf, tf, ef = compile_expr(cond), compile_expr(then), compile_expr(orelse)
            return lambda cur, pre: tf(cur, pre) if cf(cur, pre) else ef(cur, pre)
    raise TypeError("not an IR node: {!r}".format(node))


def format_ir(node) -> str:
    """Fully parenthesised text, stable across runs (used by dumps)"""
    match node:
        case Const(True):
            return "true"
        case Const(False):
            return "false"
        case Const(value):
            return str(value)
        case VarRef(_, name):
            return name
        case Old(_, name):
            return "old({})".format(name)
        case UnOp("not", operand):
            return "not {}".format(format_ir(operand))
        case UnOp(op, operand):
            return "{}{}".format(op, format_ir(operand))
        case BinOp(op, left, right):
            return "({} {} {})".format(format_ir(left), op, format_ir(right))
        case Ite(cond, then, orelse):
            return "(if {} then {} else {})".format(
                format_ir(cond), format_ir(then), format_ir(orelse))
    raise TypeError("not an IR node: {!r}".format(node))
