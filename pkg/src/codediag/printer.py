"""Canonical source rendering; parse(pretty_print(ast)) is a fixed point."""

from __future__ import annotations

from .syntax import (
    Assign,
    Binary,
    Block,
    Call,
    CharLit,
    Decl,
    Empty,
    ExprStmt,
    FloatLit,
    For,
    FuncDef,
    Ident,
    If,
    IncDec,
    Index,
    InitList,
    IntLit,
    Node,
    Program,
    Return,
    StrLit,
    Unary,
    While,
)

_PRECEDENCE = {
    "||": 1, "&&": 2, "|": 3, "^": 4, "&": 5,
    "==": 6, "!=": 6,
    "<": 7, "<=": 7, ">": 7, ">=": 7,
    "<<": 8, ">>": 8,
    "+": 9, "-": 9,
    "*": 10, "/": 10, "%": 10,
}
_UNARY_PRECEDENCE = 11

_CHAR_ESCAPES = {0: "\\0", 10: "\\n", 9: "\\t", 13: "\\r", 39: "\\'", 92: "\\\\"}
_STR_ESCAPES = {"\n": "\\n", "\t": "\\t", "\0": "\\0", "\r": "\\r", '"': '\\"', "\\": "\\\\"}


def _escape_string(s: str) -> str:
    return "".join(_STR_ESCAPES.get(c, c) for c in s)


def _escape_char(code: int) -> str:
    if code in _CHAR_ESCAPES:
        return _CHAR_ESCAPES[code]
    if 32 <= code < 127:
        return chr(code)
    return f"\\{code:o}"


def format_expr(expr: Node, parent_prec: int = 0, right_side: bool = False) -> str:
    if isinstance(expr, IntLit):
        if expr.base == 16 and expr.value >= 0:
            text = f"0x{expr.value:X}"
        else:
            text = str(expr.value)
        return text
    if isinstance(expr, FloatLit):
        return repr(expr.value)
    if isinstance(expr, CharLit):
        return f"'{_escape_char(expr.value)}'"
    if isinstance(expr, StrLit):
        return f'"{_escape_string(expr.value)}"'
    if isinstance(expr, Ident):
        return expr.name
    if isinstance(expr, Index):
        return f"{expr.base.name}[{format_expr(expr.index)}]"
    if isinstance(expr, Unary):
        inner = format_expr(expr.operand, _UNARY_PRECEDENCE)
        # guard '- -x' and '& &x' from fusing into one token
        sep = " " if inner.startswith(expr.op[0]) else ""
        return f"{expr.op}{sep}{inner}"
    if isinstance(expr, Binary):
        prec = _PRECEDENCE[expr.op]
        left = format_expr(expr.left, prec, right_side=False)
        right = format_expr(expr.right, prec, right_side=True)
        text = f"{left} {expr.op} {right}"
        if prec < parent_prec or (prec == parent_prec and right_side):
            return f"({text})"
        return text
    if isinstance(expr, Call):
        args = ", ".join(format_expr(a) for a in expr.args)
        return f"{expr.name}({args})"
    if isinstance(expr, InitList):
        return "{" + ", ".join(format_expr(i) for i in expr.items) + "}"
    raise TypeError(f"cannot format {expr.kind}")


def _format_decl(decl: Decl) -> str:
    ct = decl.ctype
    if ct.name == "file":
        head = f"FILE *{decl.name}"
    elif ct.is_array:
        head = f"{ct.name} {decl.name}[{ct.size}]"
    else:
        head = f"{ct.name} {decl.name}"
    if decl.init is not None:
        return f"{head} = {format_expr(decl.init)};"
    return f"{head};"


def _format_clause(stmt: Node) -> str:
    """for-header clauses: an assignment or ++/-- without the ';'."""
    if isinstance(stmt, Assign):
        return f"{format_expr(stmt.target)} = {format_expr(stmt.value)}"
    if isinstance(stmt, IncDec):
        return f"{format_expr(stmt.target)}{stmt.op}"
    raise TypeError(f"bad for-clause {stmt.kind}")


class _Writer:
    def __init__(self):
        self.lines: list = []
        self.depth = 0

    def emit(self, text: str):
        self.lines.append("    " * self.depth + text)

    def statement(self, stmt: Node):
        if isinstance(stmt, Decl):
            self.emit(_format_decl(stmt))
        elif isinstance(stmt, Assign):
            self.emit(f"{format_expr(stmt.target)} = {format_expr(stmt.value)};")
        elif isinstance(stmt, IncDec):
            self.emit(f"{format_expr(stmt.target)}{stmt.op};")
        elif isinstance(stmt, ExprStmt):
            self.emit(f"{format_expr(stmt.expr)};")
        elif isinstance(stmt, Return):
            if stmt.value is None:
                self.emit("return;")
            else:
                self.emit(f"return {format_expr(stmt.value)};")
        elif isinstance(stmt, Empty):
            self.emit(";")
        elif isinstance(stmt, Block):
            self.emit("{")
            self.depth += 1
            for s in stmt.stmts:
                self.statement(s)
            self.depth -= 1
            self.emit("}")
        elif isinstance(stmt, If):
            self.emit(f"if ({format_expr(stmt.cond)}) {{")
            self.depth += 1
            self.body(stmt.then)
            self.depth -= 1
            if stmt.els is None:
                self.emit("}")
            elif isinstance(stmt.els, If):
                # keep else-if chains flat
                self.emit(f"}} else if ({format_expr(stmt.els.cond)}) {{")
                self.depth += 1
                self.body(stmt.els.then)
                self.depth -= 1
                els = stmt.els.els
                while isinstance(els, If):
                    self.emit(f"}} else if ({format_expr(els.cond)}) {{")
                    self.depth += 1
                    self.body(els.then)
                    self.depth -= 1
                    els = els.els
                if els is not None:
                    self.emit("} else {")
                    self.depth += 1
                    self.body(els)
                    self.depth -= 1
                self.emit("}")
            else:
                self.emit("} else {")
                self.depth += 1
                self.body(stmt.els)
                self.depth -= 1
                self.emit("}")
        elif isinstance(stmt, While):
            self.emit(f"while ({format_expr(stmt.cond)}) {{")
            self.depth += 1
            self.body(stmt.body)
            self.depth -= 1
            self.emit("}")
        elif isinstance(stmt, For):
            init = _format_clause(stmt.init) if stmt.init is not None else ""
            cond = format_expr(stmt.cond) if stmt.cond is not None else ""
            update = _format_clause(stmt.update) if stmt.update is not None else ""
            self.emit(f"for ({init}; {cond}; {update}) {{")
            self.depth += 1
            self.body(stmt.body)
            self.depth -= 1
            self.emit("}")
        else:
            raise TypeError(f"cannot print statement {stmt.kind}")

    def body(self, stmt: Node):
        """Body of a control statement; blocks are flattened into the braces."""
        if isinstance(stmt, Block):
            for s in stmt.stmts:
                self.statement(s)
        else:
            self.statement(stmt)


def pretty_print(node: Node) -> str:
    """Render a Program (or single function) back to canonical source."""
    w = _Writer()
    if isinstance(node, Program):
        chunks = []
        for f in node.funcs:
            chunks.append(pretty_print(f))
        return "\n".join(chunks)
    if isinstance(node, FuncDef):
        w.emit(f"{node.ret_type} {node.name}() {{")
        w.depth += 1
        for s in node.body.stmts:
            w.statement(s)
        w.depth -= 1
        w.emit("}")
        return "\n".join(w.lines) + "\n"
    w.statement(node)
    return "\n".join(w.lines) + "\n"
