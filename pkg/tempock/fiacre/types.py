#!/usr/bin/python3
"""Finite data types: resolution, value domains and expression typing"""

from tempock.fiacre import ast

INT = "int"
BOOL = "bool"


class TypeEnv:
    """Type lookups for one program"""

    def __init__(self, program: ast.Program):
        self.program = program
        self.constants = program.constants
        self.literals = {}
        for decl in program.types:
            self._collect(decl.type)
        for proc in program.processes:
            for var in proc.locals:
                self._collect(var.type)
        for comp in program.components:
            for var in comp.shared_vars:
                self._collect(var.type)

    def _collect(self, typ):
        if isinstance(typ, ast.EnumType):
            for name in typ.names:
                self.literals.setdefault(name, typ)

    def resolve(self, typ, seen=()):
        """Replaces named types by their definitions"""
        if isinstance(typ, ast.NamedType):
            if typ.name in seen:
                return None
            decl = self.program.type_decl(typ.name)
            if decl is None:
                return None
            return self.resolve(decl.type, seen + (typ.name,))
        return typ

    def values(self, typ) -> tuple:
        typ = self.resolve(typ)
        match typ:
            case ast.BoolType():
                return (False, True)
            case ast.RangeType(lo, hi):
                return tuple(range(lo, hi + 1))
            case ast.EnumType(names):
                return tuple(names)
        return ()

    def kind(self, typ):
        """INT, BOOL, an EnumType, or None for none/unknown"""
        typ = self.resolve(typ)
        match typ:
            case ast.BoolType():
                return BOOL
            case ast.RangeType():
                return INT
            case ast.EnumType():
                return typ
        return None

    def same(self, a, b) -> bool:
        ra, rb = self.resolve(a), self.resolve(b)
        if isinstance(ra, ast.RangeType) and isinstance(rb, ast.RangeType):
            return (ra.lo, ra.hi) == (rb.lo, rb.hi)
        return ra == rb

    def default_value(self, typ):
        values = self.values(typ)
        return values[0] if values else None

    def type_of(self, expr, variables: dict, errors: list):
        """Kind of an expression; ``variables`` maps names to declared types.

        Problems are appended to ``errors`` as (span, message) pairs.
        """
        match expr:
            case ast.IntLit():
                return INT
            case ast.BoolLit():
                return BOOL
            case ast.Name(name):
                if name in variables:
                    return self.kind(variables[name])
                if name in self.constants:
                    return INT
                if name in self.literals:
                    return self.literals[name]
                errors.append((expr.span, "unknown name '{}'".format(name)))
                return None
            case ast.Unary("not", operand):
                self._expect(operand, BOOL, variables, errors)
                return BOOL
            case ast.Unary(_, operand):
                self._expect(operand, INT, variables, errors)
                return INT
            case ast.Binary(op, left, right) if op in ast.BOOL_OPS:
                self._expect(left, BOOL, variables, errors)
                self._expect(right, BOOL, variables, errors)
                return BOOL
            case ast.Binary(op, left, right) if op in ast.ARITH_OPS:
                self._expect(left, INT, variables, errors)
                self._expect(right, INT, variables, errors)
                return INT
            case ast.Binary(op, left, right):
                lt = self.type_of(left, variables, errors)
                rt = self.type_of(right, variables, errors)
                if lt is not None and rt is not None and lt != rt:
                    errors.append((expr.span, "operands of '{}' have different types".format(op)))
                if op not in ("=", "<>") and lt not in (INT, None):
                    errors.append((expr.span, "'{}' needs integer operands".format(op)))
                return BOOL
        errors.append((getattr(expr, "span", None), "not an expression"))
        return None

    def _expect(self, expr, kind, variables, errors):
        found = self.type_of(expr, variables, errors)
        if found is not None and found != kind:
            errors.append((expr.span, "expected a {} expression".format(
                kind if isinstance(kind, str) else "enumeration")))

    def assignable(self, var_type, expr, variables, errors) -> bool:
        found = self.type_of(expr, variables, errors)
        expected = self.kind(var_type)
        return found is None or expected is None or found == expected


def free_names(expr) -> set:
    match expr:
        case ast.Name(name):
            return {name}
        case ast.Unary(_, operand):
            return free_names(operand)
        case ast.Binary(_, left, right):
            return free_names(left) | free_names(right)
    return set()


def rename(expr, mapping: dict):
    """Substitutes Name nodes whose name is a key of mapping"""
    match expr:
        case ast.Name(name) if name in mapping:
            return ast.Name(mapping[name], span=expr.span)
        case ast.Unary(op, operand):
            return ast.Unary(op, rename(operand, mapping), span=expr.span)
        case ast.Binary(op, left, right):
            return ast.Binary(op, rename(left, mapping), rename(right, mapping), span=expr.span)
    return expr
