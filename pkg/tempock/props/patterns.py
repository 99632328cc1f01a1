#!/usr/bin/python3
"""Realtime specification patterns"""

from __future__ import annotations

from dataclasses import dataclass

from tempock.fiacre.ast import TimeInterval
from tempock.props.formula import Atom, Formula, format_formula


class Pattern:
    pass


@dataclass(frozen=True)
class LeadsTo(Pattern):
    """Every trigger is followed by a response within the interval.

    ``latest`` switches from watching the earliest pending trigger to
    restarting the window on every new trigger.
    """

    trigger: Formula
    response: Formula
    interval: TimeInterval
    latest: bool = False


@dataclass(frozen=True)
class AbsentAfter(Pattern):
    """No ``forbidden`` occurrence inside the window opened by a trigger"""

    forbidden: Formula
    trigger: Formula
    interval: TimeInterval


@dataclass(frozen=True)
class Absent(Pattern):
    forbidden: Formula


@dataclass(frozen=True)
class NoGlobalDeadlock(Pattern):
    pass


@dataclass(frozen=True)
class Unreachable(Pattern):
    target: Formula


@dataclass(frozen=True)
class Resettable(Pattern):
    target: Formula


@dataclass(frozen=True)
class RawLtl(Pattern):
    formula: Formula


def _operand(formula: Formula) -> str:
    text = format_formula(formula)
    if isinstance(formula, Atom):
        return "({})".format(text)
    return text if text.startswith("(") else "({})".format(text)


def format_pattern(pattern) -> str:
    match pattern:
        case LeadsTo(trigger, response, interval, latest):
            text = "{} leadsto {} within {}".format(
                _operand(trigger), _operand(response), interval)
            return text + " latest" if latest else text
        case AbsentAfter(forbidden, trigger, interval):
            return "absent {} after {} within {}".format(
                _operand(forbidden), _operand(trigger), interval)
        case Absent(forbidden):
            return "absent {}".format(_operand(forbidden))
        case NoGlobalDeadlock():
            return "NoGlobalDeadlock"
        case Unreachable(target):
            return "Unreachable {}".format(_operand(target))
        case Resettable(target):
            return "Resettable {}".format(_operand(target))
        case RawLtl(formula):
            return "ltl {}".format(format_formula(formula))
        case Formula():
            return "ltl {}".format(format_formula(pattern))
    raise ValueError("unsupported pattern: {!r}".format(pattern))


def map_pattern_atoms(pattern, fn):
    """Applies fn to every atom payload of the pattern's formulas"""
    from tempock.props.formula import map_atoms

    match pattern:
        case LeadsTo(trigger, response, interval, latest):
            return LeadsTo(map_atoms(trigger, fn), map_atoms(response, fn), interval, latest)
        case AbsentAfter(forbidden, trigger, interval):
            return AbsentAfter(map_atoms(forbidden, fn), map_atoms(trigger, fn), interval)
        case Absent(f):
            return Absent(map_atoms(f, fn))
        case NoGlobalDeadlock():
            return pattern
        case Unreachable(f):
            return Unreachable(map_atoms(f, fn))
        case Resettable(f):
            return Resettable(map_atoms(f, fn))
        case RawLtl(f):
            return RawLtl(map_atoms(f, fn))
    raise ValueError("unsupported pattern: {!r}".format(pattern))
