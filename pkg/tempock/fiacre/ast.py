#!/usr/bin/python3
"""Abstract syntax of the specification language.

Nodes are frozen dataclasses. Source spans ride along as keyword-only fields
excluded from equality, so a printed-then-reparsed program compares equal to
the original.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union


def _span():
    return field(default=None, compare=False, repr=False, kw_only=True)


@dataclass(frozen=True)
class SourceSpan:
    file: str
    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def __str__(self):
        return "{}:{}:{}".format(self.file, self.start_line, self.start_col)

    @property
    def sort_key(self):
        return (self.file, self.start_line, self.start_col)

    def to(self, other: "SourceSpan") -> "SourceSpan":
        return SourceSpan(self.file, self.start_line, self.start_col,
                          other.end_line, other.end_col)


# ---------------------------------------------------------------- intervals

@dataclass(frozen=True)
class TimeInterval:
    """Static firing interval; ``upper is None`` stands for infinity"""

    lower: Fraction
    lower_strict: bool = False
    upper: Optional[Fraction] = None
    upper_strict: bool = True

    def __post_init__(self):
        object.__setattr__(self, "lower", Fraction(self.lower))
        if self.upper is None:
            object.__setattr__(self, "upper_strict", True)
        else:
            object.__setattr__(self, "upper", Fraction(self.upper))

    @classmethod
    def closed(cls, lower, upper):
        return cls(lower, False, upper, False)

    @classmethod
    def point(cls, value):
        return cls.closed(value, value)

    @classmethod
    def unbounded(cls, lower=0, strict=False):
        return cls(lower, strict, None, True)

    @property
    def is_infinite(self):
        return self.upper is None

    @property
    def is_point(self):
        return (self.upper is not None and self.lower == self.upper
                and not self.lower_strict and not self.upper_strict)

    @property
    def is_empty(self):
        if self.upper is None:
            return False
        if self.lower > self.upper:
            return True
        return self.lower == self.upper and (self.lower_strict or self.upper_strict)

    @property
    def has_strict_bound(self):
        return self.lower_strict or (self.upper is not None and self.upper_strict)

    def contains(self, value) -> bool:
        value = Fraction(value)
        if value < self.lower or (self.lower_strict and value == self.lower):
            return False
        if self.upper is None:
            return True
        return value < self.upper or (value == self.upper and not self.upper_strict)

    def __str__(self):
        lo = "]" if self.lower_strict else "["
        if self.upper is None:
            return "{}{},...[".format(lo, _num(self.lower))
        hi = "[" if self.upper_strict else "]"
        return "{}{},{}{}".format(lo, _num(self.lower), _num(self.upper), hi)


def _num(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return "{}/{}".format(value.numerator, value.denominator)


# ---------------------------------------------------------------- data types

@dataclass(frozen=True)
class NoneType:
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class BoolType:
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class RangeType:
    lo: int
    hi: int
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class EnumType:
    names: tuple[str, ...]
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class NamedType:
    name: str
    span: Optional[SourceSpan] = _span()


DataType = Union[NoneType, BoolType, RangeType, EnumType, NamedType]


# ---------------------------------------------------------------- expressions

@dataclass(frozen=True)
class IntLit:
    value: int
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class BoolLit:
    value: bool
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Name:
    """Variable, constant or enumeration literal"""

    name: str
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Unary:
    op: str  # "not" | "-"
    operand: "Expr"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"
    span: Optional[SourceSpan] = _span()


Expr = Union[IntLit, BoolLit, Name, Unary, Binary]

ARITH_OPS = ("+", "-", "*")
COMPARE_OPS = ("=", "<>", "<", "<=", ">", ">=")
BOOL_OPS = ("and", "or")

# binding strength used by the printer and the parser
PRECEDENCE = {"or": 1, "and": 2, "=": 3, "<>": 3, "<": 3, "<=": 3, ">": 3,
              ">=": 3, "+": 4, "-": 4, "*": 5}


def format_expr(expr: Expr, parent: int = 0) -> str:
    match expr:
        case IntLit(value):
            text = str(value)
            return "({})".format(text) if value < 0 else text
        case BoolLit(value):
            return "true" if value else "false"
        case Name(name):
            return name
        case Unary("not", operand):
            return "not {}".format(format_expr(operand, 6))
        case Unary(op, operand):
            return "{}{}".format(op, format_expr(operand, 6))
        case Binary(op, left, right):
            prec = PRECEDENCE[op]
            # left associative; comparisons do not chain
            right_prec = prec + 1
            left_prec = prec + 1 if op in COMPARE_OPS else prec
            text = "{} {} {}".format(format_expr(left, left_prec), op,
                                     format_expr(right, right_prec))
            return "({})".format(text) if prec < parent else text
    raise TypeError("not an expression: {!r}".format(expr))


# ---------------------------------------------------------------- statements

@dataclass(frozen=True)
class To:
    state: str
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Loop:
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Skip:
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Sync:
    port: str
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Assign:
    var: str
    expr: Expr
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class NondetAssign:
    """``var := any`` (domain None) or ``var := any in <type>``"""

    var: str
    domain: Optional[DataType] = None
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Wait:
    interval: TimeInterval
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class On:
    cond: Expr
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Seq:
    first: "Stmt"
    second: "Stmt"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class If:
    cond: Expr
    then: "Stmt"
    orelse: "Stmt"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Select:
    branches: tuple["Stmt", ...]
    unless: tuple["Stmt", ...] = ()
    span: Optional[SourceSpan] = _span()


Stmt = Union[To, Loop, Skip, Sync, Assign, NondetAssign, Wait, On, Seq, If, Select]

TERMINATORS = (To, Loop)


def seq(*stmts: Stmt) -> Stmt:
    """Right-nested sequence of one or more statements"""
    result = stmts[-1]
    for stmt in reversed(stmts[:-1]):
        result = Seq(stmt, result)
    return result


def flatten(stmt: Stmt) -> list[Stmt]:
    if isinstance(stmt, Seq):
        return flatten(stmt.first) + flatten(stmt.second)
    return [stmt]


# ---------------------------------------------------------------- declarations

@dataclass(frozen=True)
class TypeDecl:
    name: str
    type: DataType
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class ConstDecl:
    name: str
    value: int
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class PortDecl:
    name: str
    type: DataType
    interval: Optional[TimeInterval] = None
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class VarParam:
    name: str
    type: DataType
    mode: str = "read write"
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class VarDecl:
    name: str
    type: DataType
    init: Optional[Expr] = None
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class FromBlock:
    state: str
    body: Stmt
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class ProcessDecl:
    name: str
    port_params: tuple[PortDecl, ...]
    var_params: tuple[VarParam, ...]
    states: tuple[str, ...]
    locals: tuple[VarDecl, ...]
    init: Optional[Stmt]
    from_blocks: tuple[FromBlock, ...]
    span: Optional[SourceSpan] = _span()

    @property
    def blocks(self) -> dict[str, Stmt]:
        return {block.state: block.body for block in self.from_blocks}


@dataclass(frozen=True)
class Instance:
    target: str
    ports: tuple[str, ...] = ()
    vars: tuple[str, ...] = ()
    label: Optional[str] = None
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class ComponentDecl:
    name: str
    port_params: tuple[PortDecl, ...]
    var_params: tuple[VarParam, ...]
    ports: tuple[PortDecl, ...]
    shared_vars: tuple[VarDecl, ...]
    priorities: tuple[tuple[str, str], ...]
    instances: tuple[Instance, ...]
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class PropertyDecl:
    name: str
    body: object  # props.patterns.Pattern or props.formula.Formula
    span: Optional[SourceSpan] = _span()


@dataclass(frozen=True)
class Program:
    types: tuple[TypeDecl, ...] = ()
    consts: tuple[ConstDecl, ...] = ()
    processes: tuple[ProcessDecl, ...] = ()
    components: tuple[ComponentDecl, ...] = ()
    properties: tuple[PropertyDecl, ...] = ()
    root: Optional[str] = None

    @property
    def root_name(self) -> str:
        return self.root or "main"

    def process(self, name):
        return next((p for p in self.processes if p.name == name), None)

    def component(self, name):
        return next((c for c in self.components if c.name == name), None)

    def type_decl(self, name):
        return next((t for t in self.types if t.name == name), None)

    def property_decl(self, name):
        return next((p for p in self.properties if p.name == name), None)

    @property
    def constants(self) -> dict[str, int]:
        return {c.name: c.value for c in self.consts}

    def merge(self, other: "Program") -> "Program":
        """Concatenates declarations; the other program's root wins when set"""
        return Program(self.types + other.types, self.consts + other.consts,
                       self.processes + other.processes,
                       self.components + other.components,
                       self.properties + other.properties,
                       other.root or self.root)

    def with_properties(self, properties) -> "Program":
        return Program(self.types, self.consts, self.processes, self.components,
                       tuple(properties), self.root)
