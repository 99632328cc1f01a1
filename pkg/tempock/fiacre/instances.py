#!/usr/bin/python3
"""Flattened instance tree of the root component and observable resolution.

Instances are addressed by 1-based positional paths (``main/1``,
``main/2/1``); instance labels are an alias layer (``main/t1``). Ports are
identified as ``<component path>:<port>``, shared variables as
``<component path>.<var>`` and process-local variables as
``<instance path>.<var>``.
"""

import logging
from dataclasses import dataclass, field

from tempock.errors import (IllTypedPredicate, UnknownInstance, UnknownPort,
                            UnknownState, UnknownVariable)
from tempock.fiacre import ast
from tempock.fiacre.types import BOOL, TypeEnv, free_names, rename
from tempock.props import atoms as A
from tempock.props.formula import Formula, map_atoms
from tempock.props.patterns import map_pattern_atoms

logger = logging.getLogger(__name__)

DEFAULT_INTERVAL = ast.TimeInterval.unbounded(0)


@dataclass
class PortInfo:
    id: str
    decl: ast.PortDecl
    component: str

    @property
    def interval(self) -> ast.TimeInterval:
        return self.decl.interval or DEFAULT_INTERVAL


@dataclass
class SharedVar:
    id: str
    decl: ast.VarDecl
    component: str


@dataclass
class ProcessInstance:
    path: str
    process: ast.ProcessDecl
    ports: dict  # formal port -> port id
    shared: dict  # formal var parameter -> shared variable id
    labels: tuple = ()

    @property
    def loc_var(self) -> str:
        return self.path + "#loc"

    def var_id(self, name: str) -> str:
        if name in self.shared:
            return self.shared[name]
        return "{}.{}".format(self.path, name)

    def var_types(self) -> dict:
        types = {v.name: v.type for v in self.process.locals}
        types.update({v.name: v.type for v in self.process.var_params})
        return types

    @property
    def initial_location(self) -> str:
        if self.process.init is not None:
            return "#init"
        return self.process.states[0]


@dataclass
class ComponentInstance:
    path: str
    component: ast.ComponentDecl
    ports: dict  # local port name -> port id
    shared: dict  # local variable name -> shared variable id
    children: list = field(default_factory=list)


class InstanceTree:
    """Instances of the root component, flattened in declaration order"""

    def __init__(self, program: ast.Program):
        self.program = program
        self.types = TypeEnv(program)
        self.root = program.root_name
        self.processes: list[ProcessInstance] = []
        self.components: dict[str, ComponentInstance] = {}
        self.ports: dict[str, PortInfo] = {}
        self.shared_vars: dict[str, SharedVar] = {}
        self.priorities: list[tuple[str, str]] = []
        self.aliases: dict[str, str] = {}
        root = program.component(self.root)
        if root is None:
            raise UnknownInstance("no root component '{}'".format(self.root))
        self._expand_component(root, self.root, {}, {}, (self.root,))

    # ------------------------------------------------------------ building

    def _expand_component(self, comp, path, port_args, var_args, stack):
        ports = dict(port_args)
        shared = dict(var_args)
        for decl in comp.ports:
            pid = "{}:{}".format(path, decl.name)
            self.ports[pid] = PortInfo(pid, decl, path)
            ports[decl.name] = pid
        for decl in comp.shared_vars:
            vid = "{}.{}".format(path, decl.name)
            self.shared_vars[vid] = SharedVar(vid, decl, path)
            shared[decl.name] = vid
        node = ComponentInstance(path, comp, ports, shared)
        self.components[path] = node
        for hi, lo in comp.priorities:
            if hi in ports and lo in ports:
                self.priorities.append((ports[hi], ports[lo]))
        for n, inst in enumerate(comp.instances, start=1):
            child = "{}/{}".format(path, n)
            node.children.append(child)
            if inst.label:
                self.aliases["{}/{}".format(path, inst.label)] = child
            self._expand_instance(inst, child, ports, shared, stack)

    def _expand_instance(self, inst, path, scope_ports, scope_vars, stack):
        proc = self.program.process(inst.target)
        comp = self.program.component(inst.target)
        if proc is None and comp is None:
            raise UnknownInstance("{}: no process or component '{}'".format(
                inst.span, inst.target))
        decl = proc if proc is not None else comp
        formals = [p.name for p in decl.port_params]
        port_args = {f: scope_ports.get(a, a) for f, a in zip(formals, inst.ports)}
        var_formals = [v.name for v in decl.var_params]
        var_args = {f: scope_vars.get(a, a) for f, a in zip(var_formals, inst.vars)}
        if proc is not None:
            labels = ()
            if inst.label:
                labels = (path.rpartition("/")[0] + "/" + inst.label,)
            self.processes.append(ProcessInstance(path, proc, port_args, var_args, labels))
        else:
            if comp.name in stack:
                raise UnknownInstance("recursive instantiation of '{}'".format(comp.name))
            self._expand_component(comp, path, port_args, var_args, stack + (comp.name,))

    # ------------------------------------------------------------ lookups

    def process_at(self, path: str):
        return next((p for p in self.processes if p.path == path), None)

    def holders(self, port_id: str) -> list[ProcessInstance]:
        """Process instances synchronising on the port, in tree order"""
        return [p for p in self.processes if port_id in p.ports.values()]

    def var_types(self) -> dict:
        """Every flattened variable identifier mapped to its declared type"""
        types = {vid: v.decl.type for vid, v in self.shared_vars.items()}
        for inst in self.processes:
            for var in inst.process.locals:
                types[inst.var_id(var.name)] = var.type
        return types

    def lookup(self, segments) -> str:
        """Canonical path of an instance path written with indices or labels"""
        segments = list(segments)
        if not segments or segments[0] != self.root:
            raise UnknownInstance("instance path '{}' does not start at '{}'".format(
                "/".join(segments), self.root))
        current = self.root
        for seg in segments[1:]:
            candidate = "{}/{}".format(current, seg)
            if candidate in self.aliases:
                candidate = self.aliases[candidate]
            if candidate not in self.components and self.process_at(candidate) is None:
                raise UnknownInstance("no instance '{}' in '{}'".format(
                    "/".join(segments), self.root))
            current = candidate
        return current

    # ------------------------------------------------------------ resolution

    def resolve(self, obs):
        """Resolved atom of an Observable; resolved atoms pass through"""
        if not isinstance(obs, A.Observable):
            return obs
        where = "{}: ".format(obs.span) if obs.span is not None else ""
        path = self.lookup(obs.path)
        inst = self.process_at(path)
        if obs.kind == "event":
            if inst is None:
                comp = self.components[path]
                if obs.name not in comp.ports:
                    raise UnknownPort("{}no port '{}' on '{}'".format(where, obs.name, path))
                return A.EventAtom(comp.ports[obs.name], path)
            if obs.name not in inst.ports:
                raise UnknownPort("{}no port '{}' on '{}'".format(where, obs.name, path))
            return A.EventAtom(inst.ports[obs.name], path)
        if inst is None:
            raise UnknownInstance("{}'{}' is a component, not a process instance".format(
                where, "/".join(obs.path)))
        match obs.kind:
            case "state" | "enter" | "leave":
                if obs.name not in inst.process.states:
                    raise UnknownState("{}no state '{}' on '{}'".format(where, obs.name, path))
                ctor = {"state": A.StateAtom, "enter": A.EnterAtom, "leave": A.LeaveAtom}[obs.kind]
                return ctor(path, obs.name)
            case "start":
                return A.StartAtom(path)
            case "change":
                if obs.name not in inst.var_types():
                    raise UnknownVariable("{}no variable '{}' on '{}'".format(
                        where, obs.name, path))
                return A.ChangeAtom(path, inst.var_id(obs.name))
            case "value":
                return A.ValueAtom(path, self._resolve_predicate(inst, obs.predicate, where))
        raise UnknownVariable("{}unknown observable kind '{}'".format(where, obs.kind))

    def _resolve_predicate(self, inst, predicate, where):
        local_types = inst.var_types()
        for name in free_names(predicate):
            if (name not in local_types and name not in self.types.constants
                    and name not in self.types.literals):
                raise UnknownVariable("{}no variable '{}' on '{}'".format(
                    where, name, inst.path))
        errors = []
        kind = self.types.type_of(predicate, local_types, errors)
        if errors or kind != BOOL:
            raise IllTypedPredicate("{}value predicate is not a boolean expression".format(where))
        return rename(predicate, {name: inst.var_id(name) for name in local_types})

    def resolve_body(self, body):
        """Resolves every observable of a pattern or formula"""
        if isinstance(body, Formula):
            return map_atoms(body, self.resolve)
        return map_pattern_atoms(body, self.resolve)


def resolve_observable(program: ast.Program, observable: A.Observable):
    """Resolves one observable against the program's root component"""
    return InstanceTree(program).resolve(observable)
