#!/usr/bin/python3
"""Static checks run between parsing and compilation"""

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Optional

from tempock.errors import IllFormedProgram, ResolutionError, UnknownInstance
from tempock.fiacre import ast
from tempock.fiacre.types import BOOL, TypeEnv, free_names
from tempock.props import patterns as P
from tempock.props.atoms import DeadAtom
from tempock.props.formula import atoms_of

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Diagnostic:
    span: Optional[ast.SourceSpan]
    message: str

    def __str__(self):
        if self.span is None:
            return self.message
        return "{}: {}".format(self.span, self.message)

    @property
    def sort_key(self):
        if self.span is None:
            return (1, ("", 0, 0), self.message)
        return (0, self.span.sort_key, self.message)


class _Checker:

    def __init__(self, program: ast.Program):
        self.program = program
        self.types = TypeEnv(program)
        self.diagnostics: list[Diagnostic] = []

    def report(self, span, message):
        self.diagnostics.append(Diagnostic(span, message))

    def report_errors(self, errors):
        for span, message in errors:
            self.report(span, message)

    # ------------------------------------------------------------ program

    def run(self):
        program = self.program
        self.check_unique("type", program.types)
        self.check_unique("constant", program.consts)
        self.check_unique("process", program.processes)
        self.check_unique("component", program.components)
        self.check_unique("property", program.properties)
        for proc in program.processes:
            if program.component(proc.name) is not None:
                self.report(proc.span, "'{}' names both a process and a component".format(proc.name))
        for decl in program.types:
            self.check_type(decl.type)
        for proc in program.processes:
            self.check_process(proc)
        for comp in program.components:
            self.check_component(comp)
        self.check_recursion()
        root_ok = self.check_root()
        if root_ok:
            self.check_properties()
        return sorted(self.diagnostics, key=lambda d: d.sort_key)

    def check_unique(self, what, decls):
        counts = Counter(d.name for d in decls)
        seen = set()
        for decl in decls:
            if counts[decl.name] > 1 and decl.name in seen:
                self.report(decl.span, "duplicate {} '{}'".format(what, decl.name))
            seen.add(decl.name)

    def check_root(self) -> bool:
        name = self.program.root_name
        if self.program.component(name) is not None:
            return True
        if self.program.root is not None and self.program.process(name) is not None:
            self.report(None, "root '{}' is a process, not a component".format(name))
        else:
            self.report(None, "missing root component")
        return False

    def check_type(self, typ):
        match typ:
            case ast.RangeType(lo, hi) if lo > hi:
                self.report(typ.span, "empty range {}..{}".format(lo, hi))
            case ast.EnumType(names):
                for name, count in Counter(names).items():
                    if count > 1:
                        self.report(typ.span, "duplicate enumeration literal '{}'".format(name))
            case ast.NamedType(name):
                if self.types.resolve(typ) is None:
                    self.report(typ.span, "unknown type '{}'".format(name))

    def check_interval(self, interval, span, what):
        if interval is not None and interval.is_empty:
            self.report(span, "empty {} interval {}".format(what, interval))

    def check_closed_init(self, var):
        if var.init is None:
            return
        for name in free_names(var.init):
            if name not in self.types.constants and name not in self.types.literals:
                self.report(var.init.span or var.span,
                            "initializer of '{}' is not a closed expression".format(var.name))
                return
        errors = []
        if not self.types.assignable(var.type, var.init, {}, errors):
            self.report(var.span, "initializer of '{}' has the wrong type".format(var.name))
        self.report_errors(errors)

    # ------------------------------------------------------------ processes

    def check_process(self, proc: ast.ProcessDecl):
        for name, count in Counter(proc.states).items():
            if count > 1:
                self.report(proc.span, "duplicate state '{}' in '{}'".format(name, proc.name))
        self.check_unique("port parameter", proc.port_params)
        for port in proc.port_params:
            self.check_type(port.type)
            if port.interval is not None:
                self.report(port.span, "port parameter '{}' is re-timed; time intervals "
                            "belong to component port declarations".format(port.name))
        names = [v.name for v in proc.var_params] + [v.name for v in proc.locals]
        for name, count in Counter(names).items():
            if count > 1:
                self.report(proc.span, "duplicate variable '{}' in '{}'".format(name, proc.name))
        for var in proc.locals:
            self.check_type(var.type)
            self.check_closed_init(var)
        for param in proc.var_params:
            self.check_type(param.type)
        scope = _Scope(proc)
        seen = set()
        for block in proc.from_blocks:
            if block.state not in proc.states:
                self.report(block.span, "from block of undeclared state '{}'".format(block.state))
            if block.state in seen:
                self.report(block.span, "second from block for state '{}'".format(block.state))
            seen.add(block.state)
            self.check_stmt(block.body, scope, in_init=False)
            if self.falls_through(block.body):
                self.report(block.span, "a path of 'from {}' does not end in 'to' or 'loop'"
                            .format(block.state))
        if proc.init is not None:
            self.check_stmt(proc.init, scope, in_init=True)
            if self.falls_through(proc.init):
                self.report(proc.span, "a path of the init statement does not end in 'to'")

    def falls_through(self, stmt) -> bool:
        """True when some path through stmt continues past its end"""
        match stmt:
            case ast.To() | ast.Loop():
                return False
            case ast.Seq(first, second):
                if not self.falls_through(first):
                    self.report(second.span, "unreachable statement")
                    return False
                return self.falls_through(second)
            case ast.If(_, then, orelse):
                results = [self.falls_through(then), self.falls_through(orelse)]
                return any(results)
            case ast.Select(branches, unless):
                return any([self.falls_through(b) for b in branches + unless])
        return True

    def check_stmt(self, stmt, scope, in_init):
        match stmt:
            case ast.To(state):
                if state not in scope.proc.states:
                    self.report(stmt.span, "'to' targets undeclared state '{}'".format(state))
            case ast.Loop():
                if in_init:
                    self.report(stmt.span, "'loop' is not allowed in the init statement")
            case ast.Sync(port):
                if port not in scope.ports:
                    self.report(stmt.span, "undeclared port '{}'".format(port))
            case ast.Assign(var, expr):
                if self.check_writable(stmt, var, scope):
                    errors = []
                    if not self.types.assignable(scope.variables[var], expr, scope.variables, errors):
                        self.report(stmt.span, "assignment to '{}' has the wrong type".format(var))
                    self.report_errors(errors)
                else:
                    self.report_errors(_type_errors(self.types, expr, scope.variables))
            case ast.NondetAssign(var, domain):
                if self.check_writable(stmt, var, scope) and domain is not None:
                    self.check_type(domain)
                    allowed = set(self.types.values(scope.variables[var]))
                    if not set(self.types.values(domain)) <= allowed:
                        self.report(stmt.span, "'any in' domain exceeds the type of '{}'".format(var))
            case ast.Wait(interval):
                self.check_interval(interval, stmt.span, "wait")
            case ast.On(cond):
                self.check_condition(cond, scope)
            case ast.Seq(first, second):
                self.check_stmt(first, scope, in_init)
                self.check_stmt(second, scope, in_init)
            case ast.If(cond, then, orelse):
                self.check_condition(cond, scope)
                self.check_stmt(then, scope, in_init)
                self.check_stmt(orelse, scope, in_init)
            case ast.Select(branches, unless):
                if not branches:
                    self.report(stmt.span, "select needs at least one branch")
                for branch in branches + unless:
                    self.check_stmt(branch, scope, in_init)

    def check_writable(self, stmt, var, scope) -> bool:
        if var not in scope.variables:
            self.report(stmt.span, "undeclared variable '{}'".format(var))
            return False
        if var in scope.read_only:
            self.report(stmt.span, "variable parameter '{}' is read only".format(var))
        return True

    def check_condition(self, cond, scope):
        errors = []
        kind = self.types.type_of(cond, scope.variables, errors)
        self.report_errors(errors)
        if kind is not None and kind != BOOL:
            self.report(cond.span, "condition is not boolean")

    # ------------------------------------------------------------ components

    def check_component(self, comp: ast.ComponentDecl):
        names = [p.name for p in comp.port_params] + [p.name for p in comp.ports]
        for name, count in Counter(names).items():
            if count > 1:
                self.report(comp.span, "duplicate port '{}' in '{}'".format(name, comp.name))
        for port in comp.port_params:
            if port.interval is not None:
                self.report(port.span, "port parameter '{}' is re-timed; nested re-timing "
                            "is not supported".format(port.name))
        for port in comp.ports:
            self.check_type(port.type)
            self.check_interval(port.interval, port.span, "port")
        var_names = [v.name for v in comp.var_params] + [v.name for v in comp.shared_vars]
        for name, count in Counter(var_names).items():
            if count > 1:
                self.report(comp.span, "duplicate variable '{}' in '{}'".format(name, comp.name))
        for var in comp.shared_vars:
            self.check_type(var.type)
            self.check_closed_init(var)
        port_types = {p.name: p.type for p in comp.port_params + comp.ports}
        var_types = {v.name: v.type for v in comp.var_params + comp.shared_vars}
        for hi, lo in comp.priorities:
            for name in (hi, lo):
                if name not in port_types:
                    self.report(comp.span, "priority names undeclared port '{}'".format(name))
        cycle = _find_cycle(comp.priorities)
        if cycle:
            self.report(comp.span, "priority cycle: {}".format(" > ".join(cycle)))
        for inst in comp.instances:
            self.check_instance(inst, port_types, var_types)

    def check_instance(self, inst, port_types, var_types):
        decl = self.program.process(inst.target) or self.program.component(inst.target)
        if decl is None:
            self.report(inst.span, "no process or component '{}'".format(inst.target))
            return
        if len(inst.ports) != len(decl.port_params):
            self.report(inst.span, "'{}' expects {} port arguments, got {}".format(
                inst.target, len(decl.port_params), len(inst.ports)))
        for arg, formal in zip(inst.ports, decl.port_params):
            if arg not in port_types:
                self.report(inst.span, "undeclared port '{}'".format(arg))
            elif not self.types.same(port_types[arg], formal.type):
                self.report(inst.span, "port '{}' does not match the type of '{}'".format(
                    arg, formal.name))
        if len(inst.vars) != len(decl.var_params):
            self.report(inst.span, "'{}' expects {} variable arguments, got {}".format(
                inst.target, len(decl.var_params), len(inst.vars)))
        for arg, formal in zip(inst.vars, decl.var_params):
            if arg not in var_types:
                self.report(inst.span, "undeclared shared variable '{}'".format(arg))
            elif not self.types.same(var_types[arg], formal.type):
                self.report(inst.span, "variable '{}' does not match the type of '{}'".format(
                    arg, formal.name))

    def check_recursion(self):
        graph = {c.name: [i.target for i in c.instances if self.program.component(i.target)]
                 for c in self.program.components}
        cycle = _find_cycle([(a, b) for a, targets in graph.items() for b in targets])
        if cycle:
            comp = self.program.component(cycle[0])
            self.report(comp.span, "recursive component instantiation: {}".format(
                " -> ".join(cycle)))

    # ------------------------------------------------------------ properties

    def check_properties(self):
        from tempock.fiacre.instances import InstanceTree

        try:
            tree = InstanceTree(self.program)
        except UnknownInstance as e:
            self.report(None, e.description)
            return
        for prop in self.program.properties:
            try:
                body = tree.resolve_body(prop.body)
            except ResolutionError as e:
                self.report(prop.span, e.description)
                continue
            if isinstance(body, (P.LeadsTo, P.AbsentAfter)):
                formulas = (body.trigger, body.response) if isinstance(body, P.LeadsTo) \
                    else (body.forbidden, body.trigger)
                if any(isinstance(a, DeadAtom) for f in formulas for a in atoms_of(f)):
                    self.report(prop.span, "'dead' is only allowed in untimed properties")


class _Scope:
    """Names visible inside one process body"""

    def __init__(self, proc: ast.ProcessDecl):
        self.proc = proc
        self.ports = {p.name for p in proc.port_params}
        self.variables = {v.name: v.type for v in proc.locals}
        self.variables.update({v.name: v.type for v in proc.var_params})
        self.read_only = {v.name for v in proc.var_params if "write" not in v.mode}


def _type_errors(types, expr, variables):
    errors = []
    types.type_of(expr, variables, errors)
    return errors


def _find_cycle(pairs) -> list:
    """A cycle of the relation as a node list closed on its start, or []"""
    graph = {}
    for a, b in pairs:
        graph.setdefault(a, []).append(b)
        graph.setdefault(b, [])
    state = {}

    def visit(node, stack):
        state[node] = "open"
        stack.append(node)
        for succ in graph[node]:
            if state.get(succ) == "open":
                return stack[stack.index(succ):] + [succ]
            if succ not in state:
                found = visit(succ, stack)
                if found:
                    return found
        stack.pop()
        state[node] = "done"
        return []

    for node in graph:
        if node not in state:
            found = visit(node, [])
            if found:
                return found
    return []


def check_wellformed(program: ast.Program) -> list[Diagnostic]:
    """Every well-formedness violation, ordered by source location"""
    return _Checker(program).run()


def ensure_wellformed(program: ast.Program) -> ast.Program:
    diagnostics = check_wellformed(program)
    if diagnostics:
        for diagnostic in diagnostics:
            logger.debug("ill-formed: %s", diagnostic)
        raise IllFormedProgram(diagnostics)
    return program


