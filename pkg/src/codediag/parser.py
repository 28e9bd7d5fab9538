"""Lexer and recursive-descent parser for the course C subset.

Error handling is panic-mode at statement level: a syntax error is recorded
and scanning resumes at the next ``;`` or ``}`` so several errors can be
reported in one pass.  A semantic pass then resolves identifiers, checks the
stdio format strings, and rejects constructs outside the subset (pointers,
structs, ...) with precise spans.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .syntax import (
    Assign,
    Binary,
    Block,
    Call,
    CharLit,
    CType,
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
    SourceSpan,
    StrLit,
    Unary,
    While,
    walk,
)

KEYWORDS = {
    "int", "unsigned", "char", "float", "if", "else", "while", "for",
    "return", "FILE", "void",
}
UNSUPPORTED_KEYWORDS = {
    "struct", "union", "typedef", "switch", "case", "default", "do", "goto",
    "static", "const", "double", "long", "short", "break", "continue",
    "enum", "sizeof", "malloc", "free",
}
BUILTIN_CALLS = {"scanf", "printf", "fopen", "fscanf"}
BUILTIN_CONSTANTS = {"EOF": -1, "NULL": 0}

FORMAT_CODES = "duxcsf"

_PUNCT = [
    "<<", ">>", "<=", ">=", "==", "!=", "&&", "||", "++", "--",
    "+", "-", "*", "/", "%", "<", ">", "=", "&", "|", "^", "~", "!",
    "(", ")", "{", "}", "[", "]", ";", ",",
]

_TOKEN_RE = re.compile(
    r"""
    (?P<float>\d+\.\d+)
  | (?P<hex>0[xX][0-9a-fA-F]+)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<char>'(\\.|[^'\\])')
  | (?P<string>"(\\.|[^"\\])*")
  | (?P<punct>%s)
    """
    % "|".join(re.escape(p) for p in _PUNCT),
    re.VERBOSE,
)

_ESCAPES = {"n": "\n", "t": "\t", "0": "\0", "r": "\r", "\\": "\\", "'": "'", '"': '"'}


@dataclass(frozen=True)
class Token:
    typ: str  # 'int', 'float', 'char', 'string', 'ident', 'kw', or the punct itself
    text: str
    line: int
    col: int

    def span(self, file_id: str) -> SourceSpan:
        end_col = self.col + max(len(self.text), 1) - 1
        return SourceSpan(file_id, self.line, self.col, self.line, end_col)


@dataclass(frozen=True)
class ParseError:
    code: str  # lexical | syntax | semantic
    message: str
    span: SourceSpan

    def to_dict(self) -> dict:
        return {"code": self.code, "message": self.message, "span": self.span.to_dict()}


class ParseFailure(Exception):
    def __init__(self, errors: List[ParseError]):
        self.errors = errors
        super().__init__("; ".join(f"{e.code}: {e.message}" for e in errors[:4]))


def _unescape(body: str) -> str:
    out = []
    i = 0
    while i < len(body):
        c = body[i]
        if c == "\\" and i + 1 < len(body):
            out.append(_ESCAPES.get(body[i + 1], body[i + 1]))
            i += 2
        else:
            out.append(c)
            i += 1
    return "".join(out)


def tokenize(source: str, file_id: str) -> Tuple[List[Token], List[ParseError]]:
    tokens: List[Token] = []
    errors: List[ParseError] = []
    line, col = 1, 1
    i = 0
    n = len(source)
    while i < n:
        c = source[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if c == "#":  # preprocessor lines are skipped, not interpreted
            while i < n and source[i] != "\n":
                i += 1
            continue
        if source.startswith("//", i):
            while i < n and source[i] != "\n":
                i += 1
            continue
        if source.startswith("/*", i):
            end = source.find("*/", i + 2)
            if end == -1:
                errors.append(
                    ParseError("lexical", "unterminated comment", SourceSpan(file_id, line, col, line, col))
                )
                break
            skipped = source[i : end + 2]
            line += skipped.count("\n")
            col = (len(skipped) - skipped.rfind("\n")) if "\n" in skipped else col + len(skipped)
            i = end + 2
            continue
        m = _TOKEN_RE.match(source, i)
        if not m:
            errors.append(
                ParseError(
                    "lexical",
                    f"unexpected character {c!r}",
                    SourceSpan(file_id, line, col, line, col),
                )
            )
            i += 1
            col += 1
            continue
        text = m.group(0)
        if m.lastgroup == "ident":
            typ = "kw" if text in KEYWORDS else "ident"
        elif m.lastgroup == "hex":
            typ = "int"
        elif m.lastgroup == "punct":
            typ = text
        else:
            typ = m.lastgroup or "?"
        tokens.append(Token(typ, text, line, col))
        col += len(text)
        i = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens, errors


class _SyntaxAbort(Exception):
    """Internal signal: statement-level panic recovery takes over."""


class Parser:
    def __init__(self, tokens: List[Token], file_id: str):
        self.toks = tokens
        self.pos = 0
        self.file_id = file_id
        self.errors: List[ParseError] = []

    # token plumbing

    def peek(self, ahead: int = 0) -> Token:
        return self.toks[min(self.pos + ahead, len(self.toks) - 1)]

    def advance(self) -> Token:
        t = self.toks[self.pos]
        if t.typ != "eof":
            self.pos += 1
        return t

    def check(self, typ: str, text: Optional[str] = None) -> bool:
        t = self.peek()
        return t.typ == typ and (text is None or t.text == text)

    def accept(self, typ: str, text: Optional[str] = None) -> Optional[Token]:
        if self.check(typ, text):
            return self.advance()
        return None

    def expect(self, typ: str, what: str) -> Token:
        t = self.peek()
        if t.typ == typ:
            return self.advance()
        self.error("syntax", f"expected {what}, found {t.text or 'end of file'!r}", t)
        raise _SyntaxAbort()

    def error(self, code: str, message: str, tok: Token):
        self.errors.append(ParseError(code, message, tok.span(self.file_id)))

    def span_from(self, start: Token) -> SourceSpan:
        prev = self.toks[max(self.pos - 1, 0)]
        end_col = prev.col + max(len(prev.text), 1) - 1
        return SourceSpan(self.file_id, start.line, start.col, prev.line, max(end_col, prev.col))

    def sync_statement(self):
        """Panic-mode: skip to just past the next ';' or up to the next '}'."""
        depth = 0
        while not self.check("eof"):
            t = self.peek()
            if t.typ == ";" and depth == 0:
                self.advance()
                return
            if t.typ == "{":
                depth += 1
            elif t.typ == "}":
                if depth == 0:
                    return
                depth -= 1
            self.advance()

    # grammar

    def parse_program(self) -> Program:
        start = self.peek()
        funcs: List[FuncDef] = []
        while not self.check("eof"):
            before = self.pos
            try:
                funcs.append(self.parse_func())
            except _SyntaxAbort:
                self.sync_statement()
            if self.pos == before:  # guarantee progress on malformed input
                self.advance()
        prog = Program(funcs, self.file_id, self.span_from(start))
        return prog

    def parse_type(self, allow_file: bool = True) -> Tuple[CType, Token]:
        t = self.peek()
        if t.typ == "kw" and t.text == "unsigned":
            self.advance()
            t2 = self.peek()
            if t2.typ == "kw" and t2.text in ("int", "char"):
                self.advance()
                return CType(f"unsigned {t2.text}"), t
            self.error("syntax", "expected 'int' or 'char' after 'unsigned'", t2)
            raise _SyntaxAbort()
        if t.typ == "kw" and t.text in ("int", "char", "float"):
            self.advance()
            return CType(t.text), t
        if allow_file and t.typ == "kw" and t.text == "FILE":
            self.advance()
            if not self.accept("*"):
                self.error("syntax", "expected '*' after FILE", self.peek())
                raise _SyntaxAbort()
            return CType("file"), t
        self.error("syntax", "expected a type name", t)
        raise _SyntaxAbort()

    def parse_func(self) -> FuncDef:
        start = self.peek()
        if start.typ == "ident" and start.text in UNSUPPORTED_KEYWORDS:
            self.error("semantic", f"unsupported construct: {start.text!r}", start)
            raise _SyntaxAbort()
        ctype, _ = self.parse_type(allow_file=False)
        name = self.expect("ident", "function name")
        self.expect("(", "'('")
        if self.accept("kw", "void"):
            pass
        self.expect(")", "')'")
        body = self.parse_block()
        return FuncDef(ctype, name.text, body, self.span_from(start))

    def parse_block(self) -> Block:
        start = self.expect("{", "'{'")
        stmts: List[Node] = []
        while not self.check("}") and not self.check("eof"):
            before = self.pos
            try:
                stmts.append(self.parse_statement())
            except _SyntaxAbort:
                self.sync_statement()
            if self.pos == before:
                self.advance()
        self.expect("}", "'}'")
        return Block(stmts, self.span_from(start))

    def at_type(self) -> bool:
        t = self.peek()
        return t.typ == "kw" and t.text in ("int", "unsigned", "char", "float", "FILE")

    def parse_statement(self) -> Node:
        t = self.peek()
        if t.typ == "ident" and t.text in UNSUPPORTED_KEYWORDS:
            self.error("semantic", f"unsupported construct: {t.text!r}", t)
            raise _SyntaxAbort()
        if self.at_type():
            return self.parse_decl()
        if t.typ == "ident" and self.peek(1).typ == "ident":
            # `variable value;` style: a declaration whose type is not a type
            self.error("semantic", f"missing type: {t.text!r} is not a type name", t)
            raise _SyntaxAbort()
        if t.typ == "kw":
            if t.text == "if":
                return self.parse_if()
            if t.text == "while":
                return self.parse_while()
            if t.text == "for":
                return self.parse_for()
            if t.text == "return":
                self.advance()
                value = None if self.check(";") else self.parse_expr()
                self.expect(";", "';'")
                return Return(value, self.span_from(t))
        if t.typ == "{":
            return self.parse_block()
        if t.typ == ";":
            self.advance()
            return Empty(t.span(self.file_id))
        return self.parse_simple_statement()

    def parse_decl(self) -> Node:
        start = self.peek()
        ctype, _ = self.parse_type()
        if self.check("*"):
            self.error("semantic", "unsupported construct: pointer declaration", self.peek())
            raise _SyntaxAbort()
        name = self.expect("ident", "variable name")
        size = None
        if self.accept("["):
            size_tok = self.expect("int", "array size")
            size = int(size_tok.text, 0)
            self.expect("]", "']'")
        if size is not None:
            if size <= 0:
                self.error("semantic", "array size must be positive", start)
                raise _SyntaxAbort()
            ctype = CType(ctype.name, size)
        init = None
        if self.accept("="):
            if self.check("{"):
                init = self.parse_init_list()
            else:
                init = self.parse_expr()
        self.expect(";", "';'")
        return Decl(ctype, name.text, init, self.span_from(start))

    def parse_init_list(self) -> InitList:
        start = self.expect("{", "'{'")
        items = [self.parse_expr()]
        while self.accept(","):
            items.append(self.parse_expr())
        self.expect("}", "'}'")
        return InitList(items, self.span_from(start))

    def _as_block(self, stmt: Node) -> Block:
        """Control bodies are canonicalized to blocks at parse time."""
        if isinstance(stmt, Block):
            return stmt
        return Block([stmt], stmt.span)

    def parse_if(self) -> If:
        start = self.advance()
        self.expect("(", "'('")
        cond = self.parse_expr()
        self.expect(")", "')'")
        then = self._as_block(self.parse_statement())
        els: Optional[Node] = None
        if self.accept("kw", "else"):
            branch = self.parse_statement()
            els = branch if isinstance(branch, If) else self._as_block(branch)
        return If(cond, then, els, self.span_from(start))

    def parse_while(self) -> While:
        start = self.advance()
        self.expect("(", "'('")
        cond = self.parse_expr()
        self.expect(")", "')'")
        body = self._as_block(self.parse_statement())
        return While(cond, body, self.span_from(start))

    def parse_for(self) -> For:
        start = self.advance()
        self.expect("(", "'('")
        init = None if self.check(";") else self.parse_assign_clause()
        self.expect(";", "';'")
        cond = None if self.check(";") else self.parse_expr()
        self.expect(";", "';'")
        update = None if self.check(")") else self.parse_assign_clause()
        self.expect(")", "')'")
        body = self._as_block(self.parse_statement())
        return For(init, cond, update, body, self.span_from(start))

    def parse_assign_clause(self) -> Node:
        start = self.peek()
        lv = self.parse_lvalue()
        if self.check("++") or self.check("--"):
            op = self.advance()
            return IncDec(lv, op.typ, self.span_from(start))
        self.expect("=", "'='")
        value = self.parse_expr()
        return Assign(lv, value, self.span_from(start))

    def parse_simple_statement(self) -> Node:
        start = self.peek()
        if start.typ == "ident" and self.peek(1).typ == "(":
            call = self.parse_call()
            self.expect(";", "';'")
            return ExprStmt(call, self.span_from(start))
        lv = self.parse_lvalue()
        if self.check("++") or self.check("--"):
            op = self.advance()
            self.expect(";", "';'")
            return IncDec(lv, op.typ, self.span_from(start))
        if self.accept("="):
            value = self.parse_expr()
            self.expect(";", "';'")
            return Assign(lv, value, self.span_from(start))
        self.error("syntax", "expected assignment, '++', or '--'", self.peek())
        raise _SyntaxAbort()

    def parse_lvalue(self) -> Node:
        start = self.peek()
        name = self.expect("ident", "variable name")
        ident = Ident(name.text, name.span(self.file_id))
        if self.accept("["):
            index = self.parse_expr()
            self.expect("]", "']'")
            return Index(ident, index, self.span_from(start))
        return ident

    def parse_call(self) -> Call:
        start = self.expect("ident", "function name")
        self.expect("(", "'('")
        args: List[Node] = []
        if not self.check(")"):
            args.append(self.parse_expr())
            while self.accept(","):
                args.append(self.parse_expr())
        self.expect(")", "')'")
        return Call(start.text, args, self.span_from(start))

    # expression precedence ladder

    def parse_expr(self) -> Node:
        return self.parse_or()

    def _binary_level(self, ops: Tuple[str, ...], sub) -> Node:
        start = self.peek()
        left = sub()
        while self.peek().typ in ops:
            op = self.advance()
            right = sub()
            left = Binary(op.typ, left, right, self.span_from(start))
        return left

    def parse_or(self) -> Node:
        return self._binary_level(("||",), self.parse_and)

    def parse_and(self) -> Node:
        return self._binary_level(("&&",), self.parse_bitor)

    def parse_bitor(self) -> Node:
        return self._binary_level(("|",), self.parse_bitxor)

    def parse_bitxor(self) -> Node:
        return self._binary_level(("^",), self.parse_bitand)

    def parse_bitand(self) -> Node:
        return self._binary_level(("&",), self.parse_equality)

    def parse_equality(self) -> Node:
        return self._binary_level(("==", "!="), self.parse_relational)

    def parse_relational(self) -> Node:
        return self._binary_level(("<", "<=", ">", ">="), self.parse_shift)

    def parse_shift(self) -> Node:
        return self._binary_level(("<<", ">>"), self.parse_additive)

    def parse_additive(self) -> Node:
        return self._binary_level(("+", "-"), self.parse_multiplicative)

    def parse_multiplicative(self) -> Node:
        return self._binary_level(("*", "/", "%"), self.parse_unary)

    def parse_unary(self) -> Node:
        t = self.peek()
        if t.typ in ("-", "!", "~", "&"):
            self.advance()
            operand = self.parse_unary()
            return Unary(t.typ, operand, self.span_from(t))
        return self.parse_postfix()

    def parse_postfix(self) -> Node:
        start = self.peek()
        node = self.parse_primary()
        while self.check("["):
            if not isinstance(node, Ident):
                self.error("semantic", "indexing requires an array variable", self.peek())
                raise _SyntaxAbort()
            self.advance()
            index = self.parse_expr()
            self.expect("]", "']'")
            node = Index(node, index, self.span_from(start))
        return node

    def parse_primary(self) -> Node:
        t = self.peek()
        if t.typ == "int":
            self.advance()
            base = 16 if t.text.lower().startswith("0x") else 10
            return IntLit(int(t.text, 0), t.span(self.file_id), base)
        if t.typ == "float":
            self.advance()
            return FloatLit(float(t.text), t.span(self.file_id))
        if t.typ == "char":
            self.advance()
            body = _unescape(t.text[1:-1])
            return CharLit(ord(body), t.span(self.file_id))
        if t.typ == "string":
            self.advance()
            return StrLit(_unescape(t.text[1:-1]), t.span(self.file_id))
        if t.typ == "ident":
            if t.text in BUILTIN_CONSTANTS:
                self.advance()
                return IntLit(BUILTIN_CONSTANTS[t.text], t.span(self.file_id))
            if self.peek(1).typ == "(":
                return self.parse_call()
            self.advance()
            return Ident(t.text, t.span(self.file_id))
        if t.typ == "(":
            self.advance()
            inner = self.parse_expr()
            self.expect(")", "')'")
            return inner
        if t.typ == "kw" and t.text in UNSUPPORTED_KEYWORDS:
            self.error("semantic", f"unsupported construct: {t.text!r}", t)
            raise _SyntaxAbort()
        self.error("syntax", f"expected an expression, found {t.text or 'end of file'!r}", t)
        raise _SyntaxAbort()


# --- semantic pass ----------------------------------------------------------


def _format_slots(fmt: str) -> List[str]:
    slots = []
    i = 0
    while i < len(fmt):
        if fmt[i] == "%" and i + 1 < len(fmt):
            c = fmt[i + 1]
            if c == "%":
                i += 2
                continue
            slots.append(c)
            i += 2
        else:
            i += 1
    return slots


class _Scope:
    def __init__(self, parent: Optional["_Scope"] = None):
        self.parent = parent
        self.vars: dict = {}

    def declare(self, name: str, ctype: CType) -> bool:
        if name in self.vars:
            return False
        self.vars[name] = ctype
        return True

    def lookup(self, name: str) -> Optional[CType]:
        scope: Optional[_Scope] = self
        while scope is not None:
            if name in scope.vars:
                return scope.vars[name]
            scope = scope.parent
        return None


class _Analyzer:
    """Resolution and subset checks; collects semantic errors."""

    def __init__(self, program: Program, file_id: str):
        self.program = program
        self.file_id = file_id
        self.errors: List[ParseError] = []
        self.functions = {f.name for f in program.funcs}

    def fail(self, message: str, node: Node):
        self.errors.append(ParseError("semantic", message, node.span))

    def run(self) -> List[ParseError]:
        names = set()
        for f in self.program.funcs:
            if f.name in names:
                self.fail(f"duplicate function {f.name!r}", f)
            names.add(f.name)
        for f in self.program.funcs:
            self.visit_block(f.body, _Scope())
        return self.errors

    def visit_block(self, block: Block, scope: _Scope):
        inner = _Scope(scope)
        for stmt in block.stmts:
            self.visit_stmt(stmt, inner)

    def visit_stmt(self, stmt: Node, scope: _Scope):
        if isinstance(stmt, Decl):
            if stmt.init is not None:
                if isinstance(stmt.init, InitList):
                    if not stmt.ctype.is_array:
                        self.fail("initializer list requires an array", stmt)
                    for item in stmt.init.items:
                        self.visit_expr(item, scope)
                elif isinstance(stmt.init, StrLit):
                    if not (stmt.ctype.is_array and stmt.ctype.is_char_family):
                        self.fail("string initializer requires a char array", stmt)
                    elif len(stmt.init.value) + 1 > (stmt.ctype.size or 0):
                        self.fail("string initializer exceeds array capacity", stmt)
                else:
                    self.visit_expr(stmt.init, scope)
            if not scope.declare(stmt.name, stmt.ctype):
                self.fail(f"redeclaration of {stmt.name!r}", stmt)
        elif isinstance(stmt, Assign):
            self.visit_lvalue(stmt.target, scope)
            if isinstance(stmt.value, Call) and stmt.value.name == "fopen":
                self.visit_call(stmt.value, scope)
                tname = stmt.target
                if isinstance(tname, Ident):
                    ct = scope.lookup(tname.name)
                    if ct is not None and ct.name != "file":
                        self.fail("fopen result must be stored in a FILE * variable", stmt)
            else:
                self.visit_expr(stmt.value, scope)
        elif isinstance(stmt, IncDec):
            self.visit_lvalue(stmt.target, scope)
        elif isinstance(stmt, If):
            self.visit_expr(stmt.cond, scope)
            self.visit_stmt(stmt.then, scope)
            if stmt.els is not None:
                self.visit_stmt(stmt.els, scope)
        elif isinstance(stmt, While):
            self.visit_expr(stmt.cond, scope)
            self.visit_stmt(stmt.body, scope)
        elif isinstance(stmt, For):
            if stmt.init is not None:
                self.visit_stmt(stmt.init, scope)
            if stmt.cond is not None:
                self.visit_expr(stmt.cond, scope)
            if stmt.update is not None:
                self.visit_stmt(stmt.update, scope)
            self.visit_stmt(stmt.body, scope)
        elif isinstance(stmt, Block):
            self.visit_block(stmt, scope)
        elif isinstance(stmt, ExprStmt):
            if isinstance(stmt.expr, Call):
                self.visit_call(stmt.expr, scope)
            else:
                self.fail("expression statement must be a call", stmt)
        elif isinstance(stmt, Return):
            if stmt.value is not None:
                self.visit_expr(stmt.value, scope)
        elif isinstance(stmt, Empty):
            pass
        else:
            self.fail(f"unsupported statement {stmt.kind}", stmt)

    def visit_lvalue(self, lv: Node, scope: _Scope):
        if isinstance(lv, Ident):
            ct = scope.lookup(lv.name)
            if ct is None:
                self.fail(f"undeclared identifier {lv.name!r}", lv)
            elif ct.is_array:
                self.fail(f"cannot assign whole array {lv.name!r}", lv)
        elif isinstance(lv, Index):
            ct = scope.lookup(lv.base.name)
            if ct is None:
                self.fail(f"undeclared identifier {lv.base.name!r}", lv.base)
            elif not ct.is_array:
                self.fail(f"{lv.base.name!r} is not an array", lv.base)
            self.visit_expr(lv.index, scope)
        else:
            self.fail("invalid assignment target", lv)

    def visit_expr(self, expr: Node, scope: _Scope):
        if isinstance(expr, Ident):
            if scope.lookup(expr.name) is None:
                self.fail(f"undeclared identifier {expr.name!r}", expr)
        elif isinstance(expr, Index):
            self.visit_lvalue(expr, scope)
        elif isinstance(expr, Unary):
            if expr.op == "&":
                self.fail("'&' address-of is only valid inside scanf/fscanf arguments", expr)
            self.visit_expr(expr.operand, scope)
        elif isinstance(expr, Binary):
            self.visit_expr(expr.left, scope)
            self.visit_expr(expr.right, scope)
        elif isinstance(expr, Call):
            self.visit_call(expr, scope)
        elif isinstance(expr, (IntLit, FloatLit, CharLit, StrLit)):
            pass
        elif isinstance(expr, InitList):
            self.fail("initializer list outside a declaration", expr)
        else:
            self.fail(f"unsupported expression {expr.kind}", expr)

    def visit_call(self, call: Call, scope: _Scope):
        name = call.name
        if name == "fopen":
            if len(call.args) != 2 or not all(isinstance(a, StrLit) for a in call.args):
                self.fail("fopen takes (\"name\", \"mode\") string literals", call)
            return
        if name in ("scanf", "fscanf"):
            args = list(call.args)
            if name == "fscanf":
                if not args or not isinstance(args[0], Ident):
                    self.fail("fscanf needs a FILE * variable first", call)
                    return
                ct = scope.lookup(args[0].name)
                if ct is None:
                    self.fail(f"undeclared identifier {args[0].name!r}", args[0])
                elif ct.name != "file":
                    self.fail(f"{args[0].name!r} is not a FILE * variable", args[0])
                args = args[1:]
            if not args or not isinstance(args[0], StrLit):
                self.fail(f"{name} needs a format string", call)
                return
            self.check_scan_targets(call, args[0].value, args[1:], scope)
            return
        if name == "printf":
            if not call.args or not isinstance(call.args[0], StrLit):
                self.fail("printf needs a format string", call)
                return
            slots = _format_slots(call.args[0].value)
            rest = call.args[1:]
            bad = [c for c in slots if c not in FORMAT_CODES]
            if bad:
                self.fail(f"unsupported format descriptor %{bad[0]}", call)
            if len(slots) != len(rest):
                self.fail(
                    f"printf format expects {len(slots)} value(s), got {len(rest)}", call
                )
            for value in rest:
                self.visit_expr(value, scope)
            return
        if name in self.functions:
            if call.args:
                self.fail(f"helper {name!r} takes no arguments", call)
            return
        self.fail(f"unknown function {name!r}", call)

    def check_scan_targets(self, call: Call, fmt: str, targets: List[Node], scope: _Scope):
        slots = _format_slots(fmt)
        bad = [c for c in slots if c not in FORMAT_CODES]
        if bad:
            self.fail(f"unsupported format descriptor %{bad[0]}", call)
            return
        if len(slots) != len(targets):
            self.fail(f"format expects {len(slots)} target(s), got {len(targets)}", call)
            return
        for code, target in zip(slots, targets):
            if code == "s":
                if not isinstance(target, Ident):
                    self.fail("%s target must be a char array name", call)
                    continue
                ct = scope.lookup(target.name)
                if ct is None:
                    self.fail(f"undeclared identifier {target.name!r}", target)
                elif not (ct.is_array and ct.is_char_family):
                    self.fail(f"%s target {target.name!r} must be a char array", target)
                continue
            if not (isinstance(target, Unary) and target.op == "&"):
                self.fail(f"%{code} target needs '&' before the variable", call)
                continue
            inner = target.operand
            if isinstance(inner, Ident):
                ct = scope.lookup(inner.name)
                if ct is None:
                    self.fail(f"undeclared identifier {inner.name!r}", inner)
                elif ct.is_array:
                    self.fail(f"cannot scan into whole array {inner.name!r}", inner)
                # descriptor/type disagreement is a runtime fault, not a
                # semantic error: such programs compile in C and misbehave
            elif isinstance(inner, Index):
                ct = scope.lookup(inner.base.name)
                if ct is None:
                    self.fail(f"undeclared identifier {inner.base.name!r}", inner.base)
                elif not ct.is_array:
                    self.fail(f"{inner.base.name!r} is not an array", inner.base)
            else:
                self.fail(f"%{code} target must be a variable", call)


def parse(source: str, file_id: str = "<input>") -> Program:
    """Parse and semantically check; raises ParseFailure with all errors."""
    program, errors = try_parse(source, file_id)
    if errors:
        raise ParseFailure(errors)
    assert program is not None
    return program


def try_parse(source: str, file_id: str = "<input>") -> Tuple[Optional[Program], List[ParseError]]:
    """Like parse() but returns (program_or_None, errors) without raising."""
    tokens, lex_errors = tokenize(source, file_id)
    parser = Parser(tokens, file_id)
    program = parser.parse_program()
    errors = lex_errors + parser.errors
    if not errors:
        if not any(f.name == "main" for f in program.funcs):
            errors.append(
                ParseError("semantic", "program has no main()", SourceSpan(file_id, 1, 1, 1, 1))
            )
        else:
            errors.extend(_Analyzer(program, file_id).run())
    if errors:
        return None, errors
    return program, []


def ast_to_dict(node: Node) -> dict:
    """JSON-friendly dump: node kind, span, salient fields, children."""
    d: dict = {"kind": node.kind, "span": node.span.to_dict()}
    for attr in ("name", "op", "value", "base"):
        if attr == "base" and isinstance(node, IntLit):
            continue
        if hasattr(node, attr):
            val = getattr(node, attr)
            if isinstance(val, (str, int, float)) and not isinstance(val, bool):
                d[attr] = val
    if isinstance(node, Decl):
        d["type"] = str(node.ctype)
    if isinstance(node, FuncDef):
        d["type"] = str(node.ret_type)
    kids = [ast_to_dict(c) for c in node.children()]
    if kids:
        d["children"] = kids
    return d
