#!/usr/bin/python3
"""Observables: the path form written in properties and its resolved form.

A property names things relative to the root component, e.g.
``main/1/event c`` or ``t/value (st = p_rdy)``. Resolution against the
instance tree turns an ``Observable`` into one of the resolved atoms below,
which carry flattened identifiers (``main:c1``, ``main/1``, ``main/1.st``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from tempock.fiacre.ast import Expr, SourceSpan, format_expr

OBSERVABLE_KINDS = ("event", "state", "value", "start", "enter", "leave", "change")


@dataclass(frozen=True)
class Observable:
    path: tuple[str, ...]
    kind: str
    name: Optional[str] = None
    predicate: Optional[Expr] = None
    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False, kw_only=True)

    def __str__(self):
        head = "/".join(self.path) + "/" + self.kind
        if self.kind == "value":
            return "{} ({})".format(head, format_expr(self.predicate))
        if self.name is None:
            return head
        return "{} {}".format(head, self.name)


@dataclass(frozen=True)
class DeadAtom:
    """Holds on classes without firable transitions"""

    def __str__(self):
        return "dead"


@dataclass(frozen=True)
class EventAtom:
    port: str
    instance: str

    def __str__(self):
        return "{}/event {}".format(self.instance, self.port.rpartition(":")[2])


@dataclass(frozen=True)
class StateAtom:
    instance: str
    state: str

    def __str__(self):
        return "{}/state {}".format(self.instance, self.state)


@dataclass(frozen=True)
class ValueAtom:
    """Boolean predicate over flattened variable identifiers"""

    instance: str
    predicate: Expr

    def __str__(self):
        return "{}/value ({})".format(self.instance, format_expr(self.predicate))


@dataclass(frozen=True)
class StartAtom:
    instance: str

    def __str__(self):
        return "{}/start".format(self.instance)


@dataclass(frozen=True)
class EnterAtom:
    instance: str
    state: str

    def __str__(self):
        return "{}/enter {}".format(self.instance, self.state)


@dataclass(frozen=True)
class LeaveAtom:
    instance: str
    state: str

    def __str__(self):
        return "{}/leave {}".format(self.instance, self.state)


@dataclass(frozen=True)
class ChangeAtom:
    instance: str
    var: str

    def __str__(self):
        return "{}/change {}".format(self.instance, self.var.rpartition(".")[2])


ResolvedAtom = Union[DeadAtom, EventAtom, StateAtom, ValueAtom, StartAtom,
                     EnterAtom, LeaveAtom, ChangeAtom]

# atoms read on a step (edge) rather than on a configuration
STEP_ATOMS = (EventAtom, EnterAtom, LeaveAtom, ChangeAtom)
STATE_ATOMS = (StateAtom, ValueAtom)


def is_step_atom(atom) -> bool:
    return isinstance(atom, STEP_ATOMS)
