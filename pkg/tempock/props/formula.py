#!/usr/bin/python3
"""State/event LTL formulas.

Precedence, loosest first: ``=>``, ``or``, ``and``, ``until``/``release``,
then the unary operators (``not``/``-``, ``[]``, ``<>``, ``X``).
"""

from __future__ import annotations

from dataclasses import dataclass


class Formula:
    pass


@dataclass(frozen=True)
class Atom(Formula):
    atom: object  # props.atoms.Observable or a resolved atom


@dataclass(frozen=True)
class TrueF(Formula):
    pass


@dataclass(frozen=True)
class FalseF(Formula):
    pass


@dataclass(frozen=True)
class Not(Formula):
    operand: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Next(Formula):
    operand: Formula


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Release(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Always(Formula):
    operand: Formula


@dataclass(frozen=True)
class Eventually(Formula):
    operand: Formula


def format_formula(formula: Formula) -> str:
    """Fully parenthesised text that re-parses to the same formula"""
    match formula:
        case Atom(atom):
            return str(atom)
        case TrueF():
            return "true"
        case FalseF():
            return "false"
        case Not(f):
            return "not ({})".format(format_formula(f))
        case Next(f):
            return "X ({})".format(format_formula(f))
        case Always(f):
            return "[] ({})".format(format_formula(f))
        case Eventually(f):
            return "<> ({})".format(format_formula(f))
        case And(l, r):
            return "({} and {})".format(format_formula(l), format_formula(r))
        case Or(l, r):
            return "({} or {})".format(format_formula(l), format_formula(r))
        case Implies(l, r):
            return "({} => {})".format(format_formula(l), format_formula(r))
        case Until(l, r):
            return "({} until {})".format(format_formula(l), format_formula(r))
        case Release(l, r):
            return "({} release {})".format(format_formula(l), format_formula(r))
    raise ValueError("unsupported formula: {!r}".format(formula))


def map_atoms(formula: Formula, fn) -> Formula:
    """Rebuilds the formula with every atom payload replaced by fn(payload)"""
    match formula:
        case Atom(atom):
            return Atom(fn(atom))
        case TrueF() | FalseF():
            return formula
        case Not(f) | Next(f) | Always(f) | Eventually(f):
            return type(formula)(map_atoms(f, fn))
        case And(l, r) | Or(l, r) | Implies(l, r) | Until(l, r) | Release(l, r):
            return type(formula)(map_atoms(l, fn), map_atoms(r, fn))
    raise ValueError("unsupported formula: {!r}".format(formula))


def atoms_of(formula: Formula) -> list:
    found = []

    def visit(atom):
        if atom not in found:
            found.append(atom)
        return atom

    map_atoms(formula, visit)
    return found


def is_propositional(formula: Formula) -> bool:
    match formula:
        case Atom() | TrueF() | FalseF():
            return True
        case Not(f):
            return is_propositional(f)
        case And(l, r) | Or(l, r) | Implies(l, r):
            return is_propositional(l) and is_propositional(r)
    return False


def nnf(formula: Formula, negate: bool = False) -> Formula:
    """Negation normal form over atoms, true/false, and, or, X, U, R.

    ``[] f`` becomes ``false R f`` and ``<> f`` becomes ``true U f``.
    """
    match formula:
        case Atom():
            return Not(formula) if negate else formula
        case TrueF():
            return FalseF() if negate else formula
        case FalseF():
            return TrueF() if negate else formula
        case Not(f):
            return nnf(f, not negate)
        case And(l, r):
            ctor = Or if negate else And
            return ctor(nnf(l, negate), nnf(r, negate))
        case Or(l, r):
            ctor = And if negate else Or
            return ctor(nnf(l, negate), nnf(r, negate))
        case Implies(l, r):
            return nnf(Or(Not(l), r), negate)
        case Next(f):
            return Next(nnf(f, negate))
        case Until(l, r):
            ctor = Release if negate else Until
            return ctor(nnf(l, negate), nnf(r, negate))
        case Release(l, r):
            ctor = Until if negate else Release
            return ctor(nnf(l, negate), nnf(r, negate))
        case Always(f):
            return nnf(Release(FalseF(), f), negate)
        case Eventually(f):
            return nnf(Until(TrueF(), f), negate)
    raise ValueError("unsupported formula: {!r}".format(formula))
