#!/usr/bin/python3
"""Pretty printer; its output parses back to an equal program"""

from tempock.fiacre import ast
from tempock.fiacre.ast import format_expr
from tempock.props.patterns import format_pattern

INDENT = "  "


def format_type(typ) -> str:
    match typ:
        case ast.NoneType():
            return "none"
        case ast.BoolType():
            return "bool"
        case ast.RangeType(lo, hi):
            return "{}..{}".format(lo, hi)
        case ast.EnumType(names):
            return "union {} end".format(" | ".join(names))
        case ast.NamedType(name):
            return name
    raise TypeError("not a type: {!r}".format(typ))


def format_port(port: ast.PortDecl) -> str:
    text = "{} : {}".format(port.name, format_type(port.type))
    if port.interval is not None:
        text += " in {}".format(port.interval)
    return text


def format_var(var: ast.VarDecl) -> str:
    text = "{} : {}".format(var.name, format_type(var.type))
    if var.init is not None:
        text += " := {}".format(format_expr(var.init))
    return text


def format_var_param(param: ast.VarParam) -> str:
    return "&{} : {} {}".format(param.name, param.mode, format_type(param.type))


def _header(name, ports, var_params) -> str:
    text = name
    if ports:
        text += " [{}]".format(", ".join(format_port(p) for p in ports))
    if var_params:
        text += " ({})".format(", ".join(format_var_param(v) for v in var_params))
    return text


def format_stmt(stmt, depth: int) -> list[str]:
    """Lines of a statement sequence at the given indentation depth"""
    pad = INDENT * depth
    items = ast.flatten(stmt)
    lines = []
    for n, item in enumerate(items):
        sep = ";" if n < len(items) - 1 else ""
        block = _format_simple(item, depth)
        block[-1] += sep
        lines.extend(block)
    return lines or [pad + "null"]


def _format_simple(stmt, depth: int) -> list[str]:
    pad = INDENT * depth
    match stmt:
        case ast.To(state):
            return [pad + "to " + state]
        case ast.Loop():
            return [pad + "loop"]
        case ast.Skip():
            return [pad + "null"]
        case ast.Sync(port):
            return [pad + port]
        case ast.Assign(var, expr):
            return [pad + "{} := {}".format(var, format_expr(expr))]
        case ast.NondetAssign(var, None):
            return [pad + "{} := any".format(var)]
        case ast.NondetAssign(var, domain):
            return [pad + "{} := any in {}".format(var, format_type(domain))]
        case ast.Wait(interval):
            return [pad + "wait {}".format(interval)]
        case ast.On(cond):
            return [pad + "on {}".format(format_expr(cond))]
        case ast.If(cond, then, orelse):
            lines = [pad + "if {} then".format(format_expr(cond))]
            lines += format_stmt(then, depth + 1)
            if not isinstance(orelse, ast.Skip):
                lines.append(pad + "else")
                lines += format_stmt(orelse, depth + 1)
            lines.append(pad + "end")
            return lines
        case ast.Select(branches, unless):
            lines = [pad + "select"]
            for n, branch in enumerate(branches):
                if n:
                    lines.append(pad + "[]")
                lines += format_stmt(branch, depth + 1)
            for n, branch in enumerate(unless):
                lines.append(pad + ("unless" if n == 0 else "[]"))
                lines += format_stmt(branch, depth + 1)
            lines.append(pad + "end")
            return lines
    raise TypeError("not a statement: {!r}".format(stmt))


def format_process(proc: ast.ProcessDecl) -> list[str]:
    lines = ["process {} is".format(_header(proc.name, proc.port_params, proc.var_params))]
    lines.append(INDENT + "states " + ", ".join(proc.states))
    if proc.locals:
        lines.append(INDENT + "var " + ", ".join(format_var(v) for v in proc.locals))
    if proc.init is not None:
        lines.append(INDENT + "init")
        lines += format_stmt(proc.init, 2)
    for block in proc.from_blocks:
        lines.append(INDENT + "from " + block.state)
        lines += format_stmt(block.body, 2)
    return lines


def format_instance(inst: ast.Instance) -> str:
    text = "{} : {}".format(inst.label, inst.target) if inst.label else inst.target
    if inst.ports:
        text += " [{}]".format(", ".join(inst.ports))
    if inst.vars:
        text += " ({})".format(", ".join("&" + v for v in inst.vars))
    return text


def format_component(comp: ast.ComponentDecl) -> list[str]:
    lines = ["component {} is".format(_header(comp.name, comp.port_params, comp.var_params))]
    if comp.ports:
        lines.append(INDENT + "port " + ", ".join(format_port(p) for p in comp.ports))
    if comp.shared_vars:
        lines.append(INDENT + "var " + ", ".join(format_var(v) for v in comp.shared_vars))
    if comp.priorities:
        lines.append(INDENT + "priority " + ", ".join(
            "{} > {}".format(hi, lo) for hi, lo in comp.priorities))
    lines.append(INDENT + "par")
    for n, inst in enumerate(comp.instances):
        prefix = INDENT * 2 if n == 0 else INDENT + "|| "
        lines.append(prefix + format_instance(inst))
    lines.append(INDENT + "end")
    return lines


def format_property(prop: ast.PropertyDecl) -> str:
    return "property {} is {}".format(prop.name, format_pattern(prop.body))


def pretty_print(program: ast.Program) -> str:
    chunks = []
    for decl in program.types:
        chunks.append(["type {} is {}".format(decl.name, format_type(decl.type))])
    for decl in program.consts:
        chunks.append(["const {} : int is {}".format(decl.name, decl.value)])
    for proc in program.processes:
        chunks.append(format_process(proc))
    for comp in program.components:
        chunks.append(format_component(comp))
    if program.properties:
        chunks.append([format_property(p) for p in program.properties])
    if program.root is not None:
        chunks.append([program.root])
    return "\n\n".join("\n".join(chunk) for chunk in chunks) + "\n"
