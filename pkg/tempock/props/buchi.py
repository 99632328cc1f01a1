#!/usr/bin/python3
"""LTL to Büchi automata by tableau expansion.

The formula is put in negation normal form and expanded into a
generalised automaton, one acceptance set per ``until`` subformula, then
degeneralised with a round-robin counter. Labels sit on states: a run reads
a letter when it enters a state whose literals the letter satisfies.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

from tempock import settings
from tempock.errors import SizeExceeded
from tempock.props.formula import (And, Atom, FalseF, Next, Not, Or, Release, TrueF,
                                   Until, format_formula, nnf)

logger = logging.getLogger(__name__)

INIT = "init"


@dataclass
class _Node:
    incoming: set
    new: list
    old: frozenset = frozenset()
    next: frozenset = frozenset()


@dataclass(frozen=True)
class Literal:
    atom: object
    positive: bool = True

    def __str__(self):
        return str(self.atom) if self.positive else "not {}".format(self.atom)


@dataclass
class BuchiAutomaton:
    labels: list = field(default_factory=list)  # state -> tuple of Literals
    successors: list = field(default_factory=list)  # state -> list of states
    initial: list = field(default_factory=list)
    accepting: set = field(default_factory=set)

    def __len__(self):
        return len(self.labels)

    @property
    def is_empty(self) -> bool:
        return not self.initial or not self.accepting

    def dump(self) -> str:
        lines = []
        for q, label in enumerate(self.labels):
            flags = "".join([" initial" if q in self.initial else "",
                             " accepting" if q in self.accepting else ""])
            text = " and ".join(str(lit) for lit in label) or "true"
            lines.append("q{}{} [{}] -> {}".format(
                q, flags, text, " ".join("q{}".format(s) for s in self.successors[q])))
        return "\n".join(lines) + "\n"


def _literal(f) -> Optional[Literal]:
    match f:
        case Atom(atom):
            return Literal(atom, True)
        case Not(Atom(atom)):
            return Literal(atom, False)
    return None


def _expand(formula, budget):
    """Generalised tableau nodes as (name, incoming, old, next)"""
    nodes = {}  # (old, next) -> [name, incoming]
    stack = [_Node({INIT}, [formula])]
    while stack:
        node = stack.pop()
        if not node.new:
            key = (node.old, node.next)
            if key in nodes:
                nodes[key][1] |= node.incoming
                continue
            name = len(nodes)
            nodes[key] = [name, set(node.incoming)]
            if len(nodes) > budget:
                raise SizeExceeded("more than {} tableau nodes".format(budget))
            stack.append(_Node({name}, sorted(node.next, key=format_formula)))
            continue
        f, rest = node.new[0], node.new[1:]
        if f in node.old:
            stack.append(_Node(node.incoming, rest, node.old, node.next))
            continue
        lit = _literal(f)
        if lit is not None or isinstance(f, (TrueF, FalseF)):
            if isinstance(f, FalseF):
                continue
            if lit is not None and Literal(lit.atom, not lit.positive) in _literals(node.old):
                continue
            stack.append(_Node(node.incoming, rest, node.old | {f}, node.next))
            continue
        old = node.old | {f}
        match f:
            case And(l, r):
                stack.append(_Node(node.incoming, [l, r] + rest, old, node.next))
            case Or(l, r):
                stack.append(_Node(node.incoming, [l] + rest, old, node.next))
                stack.append(_Node(node.incoming, [r] + rest, old, node.next))
            case Until(l, r):
                stack.append(_Node(node.incoming, [l] + rest, old, node.next | {f}))
                stack.append(_Node(node.incoming, [r] + rest, old, node.next))
            case Release(l, r):
                stack.append(_Node(node.incoming, [r] + rest, old, node.next | {f}))
                stack.append(_Node(node.incoming, [l, r] + rest, old, node.next))
            case Next(g):
                stack.append(_Node(node.incoming, rest, old, node.next | {g}))
            case _:
                raise ValueError("not in negation normal form: {}".format(format_formula(f)))
    return [(name, incoming, old, nxt) for (old, nxt), (name, incoming) in nodes.items()]


def _literals(formulas):
    return {lit for lit in map(_literal, formulas) if lit is not None}


def _untils(formula) -> list:
    found = []

    def visit(f):
        match f:
            case Until(l, r):
                if f not in found:
                    found.append(f)
                visit(l)
                visit(r)
            case And(l, r) | Or(l, r) | Release(l, r):
                visit(l)
                visit(r)
            case Next(g) | Not(g):
                visit(g)

    visit(formula)
    return found


def to_buchi(formula, budget: Optional[int] = None) -> BuchiAutomaton:
    """Automaton accepting exactly the runs that satisfy ``formula``.

    Checking a property means building the automaton of its negation.
    """
    budget = budget or settings.BUCHI_NODES
    f = nnf(formula)
    nodes = sorted(_expand(f, budget), key=lambda n: n[0])
    untils = _untils(f)
    acceptance = []
    for u in untils:
        acceptance.append({name for name, _, old, _ in nodes
                           if u not in old or u.right in old})
    rounds = max(1, len(acceptance))
    if not acceptance:
        acceptance = [{name for name, _, _, _ in nodes}]

    automaton = BuchiAutomaton()
    index = {}
    for name, _, old, _ in nodes:
        label = tuple(sorted(_literals(old), key=str))
        for i in range(rounds):
            index[(name, i)] = len(automaton.labels)
            automaton.labels.append(label)
            automaton.successors.append([])
            if len(automaton.labels) > budget:
                raise SizeExceeded("more than {} automaton states".format(budget))
    for name, incoming, _, _ in nodes:
        for i in range(rounds):
            q = index[(name, i)]
            if i == 0 and name in acceptance[0]:
                automaton.accepting.add(q)
            if INIT in incoming and i == 0:
                automaton.initial.append(q)
    for name, incoming, _, _ in nodes:
        for src in incoming:
            if src == INIT:
                continue
            for i in range(rounds):
                j = (i + 1) % rounds if src in acceptance[i] else i
                automaton.successors[index[(src, i)]].append(index[(name, j)])
    for succs in automaton.successors:
        succs.sort()
    automaton.initial.sort()
    logger.debug("automaton of %s: %d states, %d accepting",
                 format_formula(formula), len(automaton), len(automaton.accepting))
    return automaton
