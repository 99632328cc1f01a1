#!/usr/bin/python3
"""State/event LTL checking over a class graph.

A letter is a graph edge ``(source, transition, target)``: state atoms read
the source class, step atoms read the firing. Dead classes carry an
implicit stutter letter on which every step atom is false, so finite runs
are checked as infinite ones. The product with the automaton of the
negated property is searched for an accepting lasso by nested depth-first
search.
"""

import logging
import time
from collections import deque
from dataclasses import dataclass
from typing import Optional

from tempock import settings
from tempock.errors import LimitExceeded, SizeExceeded
from tempock.explorer.classes import build_graph
from tempock.fiacre.instances import InstanceTree
from tempock.props import atoms as A
from tempock.props.buchi import to_buchi
from tempock.props.counterexample import Counterexample, build_counterexample
from tempock.props.evaluation import AtomEvaluator
from tempock.props.formula import (Always, And, Atom, FalseF, Implies, Not, Or, TrueF,
                                   atoms_of, is_propositional)
from tempock.props.observers import compile_pattern
from tempock.tts.compiler import compile_program

logger = logging.getLogger(__name__)

HOLDS = "holds"
VIOLATED = "violated"
EXHAUSTED = "exhausted"

INIT = -1


@dataclass
class Verdict:
    status: str
    counterexample: Optional[Counterexample] = None
    detail: str = ""
    classes: int = 0
    edges: int = 0
    wall_time: float = 0.0

    @property
    def holds(self) -> bool:
        return self.status == HOLDS

    @property
    def violated(self) -> bool:
        return self.status == VIOLATED

    def to_dict(self):
        return {"status": self.status, "detail": self.detail, "classes": self.classes,
                "edges": self.edges, "wall_time": round(self.wall_time, 3),
                "counterexample": (self.counterexample.to_dict()
                                   if self.counterexample is not None else None)}


class _Letters:
    """Literal evaluation on graph letters"""

    def __init__(self, graph):
        self.graph = graph
        self.ev = AtomEvaluator(graph.tts)

    def letters(self, c):
        out = [(c, tid, dst) for tid, dst in self.graph.out[c]]
        if self.graph.is_dead(c):
            out.append((c, None, c))
        return out

    def atom(self, atom, letter, first) -> bool:
        src, tid, dst = letter
        classes = self.graph.classes
        match atom:
            case A.DeadAtom():
                return self.graph.is_dead(src)
            case A.StartAtom():
                return first
        if A.is_step_atom(atom):
            return self.ev.holds_on(atom, classes[src].discrete, tid, classes[dst].discrete)
        return self.ev.holds_in(atom, classes[src].discrete)

    def label(self, literals, letter, first) -> bool:
        return all(self.atom(lit.atom, letter, first) == lit.positive for lit in literals)

    def formula(self, f, letter, first) -> bool:
        match f:
            case Atom(atom):
                return self.atom(atom, letter, first)
            case TrueF():
                return True
            case FalseF():
                return False
            case Not(g):
                return not self.formula(g, letter, first)
            case And(l, r):
                return self.formula(l, letter, first) and self.formula(r, letter, first)
            case Or(l, r):
                return self.formula(l, letter, first) or self.formula(r, letter, first)
            case Implies(l, r):
                return not self.formula(l, letter, first) or self.formula(r, letter, first)
        raise ValueError("not a propositional formula: {!r}".format(f))


def _path_to(graph, target_of):
    """Breadth-first edge path from the initial class to the first class
    (or letter) accepted by ``target_of``"""
    parents = {graph.initial: None}
    queue = deque([graph.initial])
    while queue:
        c = queue.popleft()
        hit = target_of(c)
        if hit is not None:
            path = []
            node = c
            while parents[node] is not None:
                path.append(parents[node])
                node = parents[node][0]
            path.reverse()
            if hit is not True:
                path.append(hit)
            return path
        for tid, dst in graph.out[c]:
            if dst not in parents:
                parents[dst] = (c, tid, dst)
                queue.append(dst)
    return None


def _check_invariant(graph, letters: _Letters, invariant) -> Optional[list]:
    """Path to a letter falsifying a propositional invariant"""
    def violation(c):
        for letter in letters.letters(c):
            if not letters.formula(invariant, letter, first=False):
                return letter
        return None

    return _path_to(graph, violation)


def _nested_dfs(graph, automaton, letters: _Letters, limit: int):
    """Accepting lasso of the product as (prefix edges, cycle edges), or None"""
    def successors(node):
        c, q = node
        first = q == INIT
        targets = automaton.initial if first else automaton.successors[q]
        for letter in letters.letters(c):
            for q2 in targets:
                if letters.label(automaton.labels[q2], letter, first):
                    yield letter, (letter[2], q2)

    def accepting(node):
        return node[1] in automaton.accepting

    root = (graph.initial, INIT)
    visited, flagged = {root}, set()
    on_stack = {root: 0}
    stack = [(root, None, successors(root))]
    while stack:
        node, _, it = stack[-1]
        advanced = False
        for letter, succ in it:
            if succ not in visited:
                visited.add(succ)
                if len(visited) > limit:
                    raise SizeExceeded("more than {} product states".format(limit))
                on_stack[succ] = len(stack)
                stack.append((succ, letter, successors(succ)))
                advanced = True
                break
        if advanced:
            continue
        if accepting(node):
            cycle = _inner_dfs(node, successors, on_stack, flagged)
            if cycle is not None:
                target, inner = cycle
                depth = on_stack[target]
                prefix = [entry[1] for entry in stack[1:depth + 1]]
                outer = [entry[1] for entry in stack[depth + 1:]]
                return prefix, outer + inner
        stack.pop()
        del on_stack[node]
    return None


def _inner_dfs(seed, successors, on_stack, flagged):
    """Letters from seed back to a node of the outer stack"""
    stack = [(seed, None, successors(seed))]
    while stack:
        node, _, it = stack[-1]
        advanced = False
        for letter, succ in it:
            if succ in on_stack:
                path = [entry[1] for entry in stack[1:]] + [letter]
                return succ, path
            if succ not in flagged:
                flagged.add(succ)
                stack.append((succ, letter, successors(succ)))
                advanced = True
                break
        if not advanced:
            stack.pop()
    return None


def check(graph, formula, product_states: Optional[int] = None) -> Verdict:
    """Holds, or Violated with a (lasso) counterexample"""
    started = time.monotonic()
    tts = graph.tts
    letters = _Letters(graph)
    result = _finish(graph, started)
    invariant = _as_invariant(formula)
    try:
        if invariant is not None:
            path = _check_invariant(graph, letters, invariant)
            if path is not None:
                result.status = VIOLATED
                result.counterexample = build_counterexample(tts, graph, path)
        else:
            automaton = to_buchi(Not(formula))
            lasso = _nested_dfs(graph, automaton, letters,
                                product_states or settings.PRODUCT_STATES)
            if lasso is not None:
                result.status = VIOLATED
                result.counterexample = build_counterexample(tts, graph, *lasso)
    except SizeExceeded as e:
        result.status = EXHAUSTED
        result.detail = e.description
        logger.warning("check exhausted: %s", e.description)
    result.wall_time = time.monotonic() - started
    return result


def _as_invariant(formula):
    """``p`` of a formula ``[] p`` with p propositional and start-free"""
    if not isinstance(formula, Always) or not is_propositional(formula.operand):
        return None
    if any(isinstance(a, A.StartAtom) for a in atoms_of(formula.operand)):
        return None
    return formula.operand


def _finish(graph, started) -> Verdict:
    return Verdict(HOLDS, classes=len(graph.classes), edges=len(graph.edges),
                   wall_time=time.monotonic() - started)


def check_safety(graph, product) -> Verdict:
    """Holds when no class of the composed graph is an observer error"""
    started = time.monotonic()
    result = _finish(graph, started)
    path = _path_to(graph, lambda c: True if product.is_error(graph.classes[c].discrete)
                    else None)
    if path is not None:
        result.status = VIOLATED
        result.counterexample = build_counterexample(graph.tts, graph, path)
    result.wall_time = time.monotonic() - started
    return result


def verify(product, max_classes=None, time_budget=None, threads=None) -> Verdict:
    """Builds the product's class graph and decides its verdict"""
    started = time.monotonic()
    try:
        graph = build_graph(product.tts, max_classes, time_budget, threads)
    except LimitExceeded as e:
        partial = e.graph
        return Verdict(EXHAUSTED, detail=e.description,
                       classes=len(partial.classes) if partial is not None else 0,
                       edges=len(partial.edges) if partial is not None else 0,
                       wall_time=time.monotonic() - started)
    if product.has_observer:
        verdict = check_safety(graph, product)
    else:
        verdict = check(graph, product.formula)
    verdict.wall_time = time.monotonic() - started
    logger.info("%s after %d classes", verdict.status, verdict.classes)
    return verdict


def check_property(program, body, tts=None, tree=None, max_classes=None,
                   time_budget=None, threads=None) -> Verdict:
    """Resolves a pattern or formula against the program and verifies it"""
    tree = tree or InstanceTree(program)
    resolved = tree.resolve_body(body)
    tts = tts or compile_program(program)
    return verify(compile_pattern(resolved, tts), max_classes, time_budget, threads)
