"""Deterministic tree-walking interpreter with statement-level value traces.

Integer arithmetic wraps at the declared width (8-bit char family, 32-bit
otherwise), chars are ASCII codes, and every simple statement appends a
snapshot of all in-scope variables to the trace.  Loop condition evaluations
count against the step limit so non-terminating loops always surface as
``step-limit-exceeded``.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

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

INT_MIN, INT_MAX = -(2**31), 2**31 - 1

RUNTIME_ERROR_KINDS = (
    "division-by-zero",
    "array-out-of-bounds",
    "read-past-input",
    "format-mismatch",
    "uninitialized-read",
    "file-not-found",
    "invalid-shift",
)


@dataclass
class TestCase:
    id: str
    stdin_tokens: List = field(default_factory=list)
    input_files: Dict[str, str] = field(default_factory=dict)
    expected_stdout: Optional[str] = None
    tags: List[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        d = {"id": self.id, "stdin": list(self.stdin_tokens), "files": dict(self.input_files)}
        if self.expected_stdout is not None:
            d["expected_stdout"] = self.expected_stdout
        if self.tags:
            d["tags"] = list(self.tags)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "TestCase":
        return cls(
            id=str(d["id"]),
            stdin_tokens=list(d.get("stdin", [])),
            input_files=dict(d.get("files", {})),
            expected_stdout=d.get("expected_stdout"),
            tags=list(d.get("tags", [])),
        )


def load_tests(path: str | Path) -> List[TestCase]:
    with open(path, "r", encoding="utf-8") as fh:
        return [TestCase.from_dict(d) for d in json.load(fh)]


def dump_tests(tests: List[TestCase], path: str | Path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump([t.to_dict() for t in tests], fh, indent=2)
        fh.write("\n")


@dataclass
class TraceStep:
    span: SourceSpan
    snapshot: Dict[str, object]


@dataclass
class ExecutionTrace:
    steps: List[TraceStep]
    stdout: str
    outcome: str  # completed | step-limit-exceeded | runtime-error
    error_kind: Optional[str] = None
    error_span: Optional[SourceSpan] = None

    @property
    def completed(self) -> bool:
        return self.outcome == "completed"

    def final_snapshot(self) -> Dict[str, object]:
        return self.steps[-1].snapshot if self.steps else {}


class _Fault(Exception):
    def __init__(self, kind: str, span: SourceSpan):
        self.kind = kind
        self.span = span
        super().__init__(kind)


class _StepLimit(Exception):
    pass


class _ReturnSignal(Exception):
    def __init__(self, value):
        self.value = value


def _wrap(value: int, tname: str) -> int:
    if tname == "unsigned int":
        return value % 2**32
    if tname == "char":
        return ((value + 128) % 256) - 128
    if tname == "unsigned char":
        return value % 256
    return ((value + 2**31) % 2**32) - 2**31  # int


def _trunc_div(a: int, b: int) -> int:
    q = abs(a) // abs(b)
    return q if (a < 0) == (b < 0) else -q


def _trunc_mod(a: int, b: int) -> int:
    m = abs(a) % abs(b)
    return m if a >= 0 else -m


class _Scalar:
    __slots__ = ("ctype", "value", "initialized")

    def __init__(self, ctype: CType):
        self.ctype = ctype
        self.value = 0
        self.initialized = False


class _Array:
    __slots__ = ("ctype", "values", "init")

    def __init__(self, ctype: CType):
        self.ctype = ctype
        self.values = [0] * (ctype.size or 0)
        self.init = [False] * (ctype.size or 0)


class _File:
    __slots__ = ("name", "text", "pos", "readable")

    def __init__(self, name: str, text: str, readable: bool):
        self.name = name
        self.text = text
        self.pos = 0
        self.readable = readable

    def snapshot(self) -> str:
        mode = "r" if self.readable else "w"
        return f"<file {self.name}:{mode}@{self.pos}>"


class Interpreter:
    def __init__(self, program: Program, test: TestCase, step_limit: int, record_trace: bool = True):
        self.program = program
        self.test = test
        self.step_limit = step_limit
        self.record_trace = record_trace
        self.steps: List[TraceStep] = []
        self.stdout: List[str] = []
        self.step_count = 0
        self.stdin_pos = 0
        self.scopes: List[List[dict]] = []  # one list of block scopes per frame
        self.functions = {f.name: f for f in program.funcs}

    # environment

    def push_frame(self):
        self.scopes.append([{}])

    def pop_frame(self):
        self.scopes.pop()

    def push_scope(self):
        self.scopes[-1].append({})

    def pop_scope(self):
        self.scopes[-1].pop()

    def declare(self, decl: Decl):
        cell = _Array(decl.ctype) if decl.ctype.is_array else _Scalar(decl.ctype)
        self.scopes[-1][-1][decl.name] = cell

    def lookup(self, name: str, span: SourceSpan):
        for scope in reversed(self.scopes[-1]):
            if name in scope:
                return scope[name]
        raise _Fault("uninitialized-read", span)  # unresolved at runtime

    def bind(self, name: str, cell):
        self.scopes[-1][-1][name] = cell

    def rebind(self, name: str, cell, span: SourceSpan):
        for scope in reversed(self.scopes[-1]):
            if name in scope:
                scope[name] = cell
                return
        raise _Fault("uninitialized-read", span)

    def snapshot(self) -> Dict[str, object]:
        snap: Dict[str, object] = {}
        for scope in self.scopes[-1]:
            for name, cell in scope.items():
                if isinstance(cell, _Scalar):
                    snap[name] = cell.value if cell.initialized else None
                elif isinstance(cell, _Array):
                    snap[name] = tuple(
                        v if ok else None for v, ok in zip(cell.values, cell.init)
                    )
                elif isinstance(cell, _File):
                    snap[name] = cell.snapshot()
        return snap

    # bookkeeping

    def tick(self, span: SourceSpan):
        self.step_count += 1
        if self.step_count > self.step_limit:
            raise _StepLimit()

    def record(self, span: SourceSpan):
        if self.record_trace:
            self.steps.append(TraceStep(span, self.snapshot()))

    # entry

    def run(self) -> ExecutionTrace:
        try:
            main = self.program.main()
        except LookupError:
            return ExecutionTrace([], "", "runtime-error", "format-mismatch", None)
        self.push_frame()
        outcome, kind, span = "completed", None, None
        try:
            try:
                self.exec_block(main.body, new_scope=False)
            except _ReturnSignal:
                pass
        except _Fault as f:
            outcome, kind, span = "runtime-error", f.kind, f.span
        except _StepLimit:
            outcome = "step-limit-exceeded"
        return ExecutionTrace(self.steps, "".join(self.stdout), outcome, kind, span)

    def call_helper(self, func: FuncDef, span: SourceSpan):
        self.push_frame()
        try:
            self.exec_block(func.body, new_scope=False)
        except _ReturnSignal as r:
            return r.value if r.value is not None else ("int", 0)
        finally:
            self.pop_frame()
        return ("int", 0)

    # statements

    def exec_block(self, block: Block, new_scope: bool = True):
        if new_scope:
            self.push_scope()
        try:
            for stmt in block.stmts:
                self.exec_stmt(stmt)
        finally:
            if new_scope:
                self.pop_scope()

    def exec_stmt(self, stmt: Node):
        self.tick(stmt.span)
        if isinstance(stmt, Decl):
            self.declare(stmt)
            if stmt.init is not None:
                self.init_cell(stmt)
            self.record(stmt.span)
        elif isinstance(stmt, Assign):
            self.do_assign(stmt.target, self.eval(stmt.value))
            self.record(stmt.span)
        elif isinstance(stmt, IncDec):
            tag, value = self.load_lvalue(stmt.target)
            delta = 1 if stmt.op == "++" else -1
            self.do_assign(stmt.target, (tag, value + delta))
            self.record(stmt.span)
        elif isinstance(stmt, ExprStmt):
            self.eval(stmt.expr)
            self.record(stmt.span)
        elif isinstance(stmt, Return):
            value = self.eval(stmt.value) if stmt.value is not None else None
            self.record(stmt.span)
            raise _ReturnSignal(value)
        elif isinstance(stmt, Empty):
            pass
        elif isinstance(stmt, Block):
            self.exec_block(stmt)
        elif isinstance(stmt, If):
            if self.truthy(self.eval(stmt.cond)):
                self.exec_stmt(stmt.then)
            elif stmt.els is not None:
                self.exec_stmt(stmt.els)
        elif isinstance(stmt, While):
            while True:
                self.tick(stmt.cond.span)
                if not self.truthy(self.eval(stmt.cond)):
                    break
                self.exec_stmt(stmt.body)
        elif isinstance(stmt, For):
            if stmt.init is not None:
                self.exec_stmt(stmt.init)
            while True:
                if stmt.cond is not None:
                    self.tick(stmt.cond.span)
                    if not self.truthy(self.eval(stmt.cond)):
                        break
                else:
                    self.tick(stmt.span)
                self.exec_stmt(stmt.body)
                if stmt.update is not None:
                    self.exec_stmt(stmt.update)
        else:
            raise _Fault("format-mismatch", stmt.span)

    def init_cell(self, decl: Decl):
        cell = self.lookup(decl.name, decl.span)
        if isinstance(cell, _Array):
            if isinstance(decl.init, StrLit):
                text = decl.init.value
                for i, ch in enumerate(text):
                    cell.values[i] = _wrap(ord(ch), cell.ctype.name)
                    cell.init[i] = True
                for i in range(len(text), cell.ctype.size or 0):
                    cell.values[i] = 0
                    cell.init[i] = True
            elif isinstance(decl.init, InitList):
                if len(decl.init.items) > (cell.ctype.size or 0):
                    raise _Fault("array-out-of-bounds", decl.span)
                for i, item in enumerate(decl.init.items):
                    tag, value = self.eval(item)
                    cell.values[i] = self.convert(tag, value, cell.ctype.name)
                    cell.init[i] = True
                for i in range(len(decl.init.items), cell.ctype.size or 0):
                    cell.values[i] = 0
                    cell.init[i] = True
            else:
                raise _Fault("format-mismatch", decl.span)
        else:
            if isinstance(decl.init, Call) and decl.init.name == "fopen":
                self.bind(decl.name, self.eval_fopen(decl.init))
                return
            tag, value = self.eval(decl.init)
            cell.value = self.convert(tag, value, cell.ctype.name)
            cell.initialized = True

    def do_assign(self, target: Node, tagged: Tuple[str, object]):
        tag, value = tagged
        if isinstance(target, Ident):
            cell = self.lookup(target.name, target.span)
            if isinstance(cell, _File) or (isinstance(cell, _Scalar) and cell.ctype.name == "file"):
                raise _Fault("format-mismatch", target.span)
            if isinstance(cell, _Array):
                raise _Fault("format-mismatch", target.span)
            cell.value = self.convert(tag, value, cell.ctype.name)
            cell.initialized = True
        elif isinstance(target, Index):
            cell = self.lookup(target.base.name, target.base.span)
            if not isinstance(cell, _Array):
                raise _Fault("array-out-of-bounds", target.span)
            idx = self.int_value(self.eval(target.index), target.index.span)
            if idx < 0 or idx >= len(cell.values):
                raise _Fault("array-out-of-bounds", target.span)
            cell.values[idx] = self.convert(tag, value, cell.ctype.name)
            cell.init[idx] = True
        else:
            raise _Fault("format-mismatch", target.span)

    def assign_file(self, target: Node, handle: _File):
        if not isinstance(target, Ident):
            raise _Fault("format-mismatch", target.span)
        self.bind(target.name, handle)

    # expressions

    def convert(self, tag: str, value, tname: str):
        if tname == "float":
            return float(value)
        if tag == "float":
            value = int(value)  # trunc toward zero
        return _wrap(int(value), tname)

    def truthy(self, tagged: Tuple[str, object]) -> bool:
        return tagged[1] != 0

    def int_value(self, tagged: Tuple[str, object], span: SourceSpan) -> int:
        tag, value = tagged
        if tag == "float":
            return int(value)
        return int(value)

    def load_lvalue(self, lv: Node) -> Tuple[str, object]:
        return self.eval(lv)

    def eval(self, expr: Node) -> Tuple[str, object]:
        if isinstance(expr, IntLit):
            return ("int", expr.value)
        if isinstance(expr, FloatLit):
            return ("float", expr.value)
        if isinstance(expr, CharLit):
            return ("int", expr.value)
        if isinstance(expr, StrLit):
            return ("str", expr.value)
        if isinstance(expr, Ident):
            cell = self.lookup(expr.name, expr.span)
            if isinstance(cell, _File):
                return ("file", cell)
            if isinstance(cell, _Array):
                return ("array", cell)
            if not cell.initialized:
                raise _Fault("uninitialized-read", expr.span)
            tag = "unsigned int" if cell.ctype.name == "unsigned int" else "int"
            if cell.ctype.name == "float":
                tag = "float"
            return (tag, cell.value)
        if isinstance(expr, Index):
            cell = self.lookup(expr.base.name, expr.base.span)
            if not isinstance(cell, _Array):
                raise _Fault("array-out-of-bounds", expr.span)
            idx = self.int_value(self.eval(expr.index), expr.index.span)
            if idx < 0 or idx >= len(cell.values):
                raise _Fault("array-out-of-bounds", expr.span)
            if not cell.init[idx]:
                raise _Fault("uninitialized-read", expr.span)
            tag = "float" if cell.ctype.name == "float" else (
                "unsigned int" if cell.ctype.name == "unsigned int" else "int"
            )
            return (tag, cell.values[idx])
        if isinstance(expr, Unary):
            if expr.op == "&":
                raise _Fault("format-mismatch", expr.span)  # guarded semantically
            tag, value = self.eval(expr.operand)
            if expr.op == "-":
                if tag == "float":
                    return ("float", -value)
                return (tag, _wrap(-int(value), tag))
            if expr.op == "!":
                return ("int", 0 if value != 0 else 1)
            if expr.op == "~":
                if tag == "float":
                    raise _Fault("format-mismatch", expr.span)
                return (tag, _wrap(~int(value), tag))
        if isinstance(expr, Binary):
            return self.eval_binary(expr)
        if isinstance(expr, Call):
            return self.eval_call(expr)
        raise _Fault("format-mismatch", expr.span)

    def eval_binary(self, expr: Binary) -> Tuple[str, object]:
        op = expr.op
        if op == "&&":
            if not self.truthy(self.eval(expr.left)):
                return ("int", 0)
            return ("int", 1 if self.truthy(self.eval(expr.right)) else 0)
        if op == "||":
            if self.truthy(self.eval(expr.left)):
                return ("int", 1)
            return ("int", 1 if self.truthy(self.eval(expr.right)) else 0)

        ltag, lval = self.eval(expr.left)
        rtag, rval = self.eval(expr.right)
        if ltag in ("str", "file", "array") or rtag in ("str", "file", "array"):
            raise _Fault("format-mismatch", expr.span)

        if op in ("==", "!=", "<", "<=", ">", ">="):
            result = {
                "==": lval == rval,
                "!=": lval != rval,
                "<": lval < rval,
                "<=": lval <= rval,
                ">": lval > rval,
                ">=": lval >= rval,
            }[op]
            return ("int", 1 if result else 0)

        if ltag == "float" or rtag == "float":
            if op in ("&", "|", "^", "<<", ">>", "%"):
                raise _Fault("format-mismatch", expr.span)
            lf, rf = float(lval), float(rval)
            if op == "+":
                return ("float", lf + rf)
            if op == "-":
                return ("float", lf - rf)
            if op == "*":
                return ("float", lf * rf)
            if op == "/":
                if rf == 0.0:
                    raise _Fault("division-by-zero", expr.span)
                return ("float", lf / rf)

        out_tag = "unsigned int" if "unsigned int" in (ltag, rtag) else "int"
        li, ri = int(lval), int(rval)
        if op == "+":
            return (out_tag, _wrap(li + ri, out_tag))
        if op == "-":
            return (out_tag, _wrap(li - ri, out_tag))
        if op == "*":
            return (out_tag, _wrap(li * ri, out_tag))
        if op == "/":
            if ri == 0:
                raise _Fault("division-by-zero", expr.span)
            return (out_tag, _wrap(_trunc_div(li, ri), out_tag))
        if op == "%":
            if ri == 0:
                raise _Fault("division-by-zero", expr.span)
            return (out_tag, _wrap(_trunc_mod(li, ri), out_tag))
        if op in ("&", "|", "^"):
            lu = _wrap(li, "unsigned int")
            ru = _wrap(ri, "unsigned int")
            value = {"&": lu & ru, "|": lu | ru, "^": lu ^ ru}[op]
            return (out_tag, _wrap(value, out_tag))
        if op in ("<<", ">>"):
            if ri < 0:
                raise _Fault("invalid-shift", expr.span)
            count = min(ri, 64)
            out_tag = ltag if ltag in ("int", "unsigned int") else "int"
            if op == "<<":
                return (out_tag, _wrap(li << count, out_tag))
            base = _wrap(li, "unsigned int") if out_tag == "unsigned int" else li
            return (out_tag, _wrap(base >> count, out_tag))
        raise _Fault("format-mismatch", expr.span)

    # built-in calls

    def eval_call(self, call: Call) -> Tuple[str, object]:
        if call.name == "printf":
            return self.eval_printf(call)
        if call.name == "scanf":
            return ("int", self.do_scan(call, call.args[0], call.args[1:], source=None))
        if call.name == "fscanf":
            handle = self.eval(call.args[0])[1]
            if not isinstance(handle, _File):
                raise _Fault("format-mismatch", call.span)
            return ("int", self.do_scan(call, call.args[1], call.args[2:], source=handle))
        if call.name == "fopen":
            return ("file", self.eval_fopen(call))
        func = self.functions.get(call.name)
        if func is None:
            raise _Fault("format-mismatch", call.span)
        return self.call_helper(func, call.span)

    def eval_fopen(self, call: Call) -> _File:
        name = call.args[0].value  # validated as StrLit
        mode = call.args[1].value
        if mode.startswith("r"):
            if name not in self.test.input_files:
                raise _Fault("file-not-found", call.span)
            return _File(name, self.test.input_files[name], readable=True)
        return _File(name, "", readable=False)

    def eval_printf(self, call: Call) -> Tuple[str, object]:
        fmt = call.args[0].value
        values = call.args[1:]
        out = []
        vi = 0
        i = 0
        while i < len(fmt):
            c = fmt[i]
            if c == "%" and i + 1 < len(fmt):
                code = fmt[i + 1]
                i += 2
                if code == "%":
                    out.append("%")
                    continue
                arg = values[vi]
                vi += 1
                tag, value = self.eval(arg)
                if code == "d":
                    if tag == "float":
                        raise _Fault("format-mismatch", call.span)
                    out.append(str(_wrap(int(value), "int")))
                elif code == "u":
                    if tag == "float":
                        raise _Fault("format-mismatch", call.span)
                    out.append(str(_wrap(int(value), "unsigned int")))
                elif code == "x":
                    if tag == "float":
                        raise _Fault("format-mismatch", call.span)
                    out.append(format(_wrap(int(value), "unsigned int"), "x"))
                elif code == "c":
                    if tag == "float":
                        raise _Fault("format-mismatch", call.span)
                    out.append(chr(int(value) % 256))
                elif code == "f":
                    if tag not in ("int", "unsigned int", "float"):
                        raise _Fault("format-mismatch", call.span)
                    out.append(f"{float(value):.6f}")
                elif code == "s":
                    if tag != "array":
                        raise _Fault("format-mismatch", call.span)
                    out.append(self.read_string(value, arg.span))
                else:
                    raise _Fault("format-mismatch", call.span)
            else:
                out.append(c)
                i += 1
        self.stdout.append("".join(out))
        return ("int", sum(len(s) for s in out))

    def read_string(self, cell: _Array, span: SourceSpan) -> str:
        chars = []
        for value, ok in zip(cell.values, cell.init):
            if not ok:
                raise _Fault("uninitialized-read", span)
            if value == 0:
                return "".join(chars)
            chars.append(chr(value % 256))
        raise _Fault("array-out-of-bounds", span)  # no terminator in bounds

    # scanf / fscanf

    def do_scan(self, call: Call, fmt_node: Node, targets: List[Node], source: Optional[_File]) -> int:
        fmt = fmt_node.value
        codes = []
        i = 0
        while i < len(fmt):
            if fmt[i] == "%" and i + 1 < len(fmt):
                if fmt[i + 1] != "%":
                    codes.append(fmt[i + 1])
                i += 2
            else:
                i += 1
        converted = 0
        for code, target in zip(codes, targets):
            ok = self.scan_one(call, code, target, source)
            if ok is None:  # end of input on a file stream
                return converted if converted else -1
            converted += 1
        return converted

    def scan_one(self, call: Call, code: str, target: Node, source: Optional[_File]) -> Optional[bool]:
        if source is not None and not source.readable:
            return None  # reading a write-mode stream converts nothing
        if code == "s":
            word = self.next_word(call, source)
            if word is None:
                return None
            cell = self.lookup(target.name, target.span)
            if not isinstance(cell, _Array) or not cell.ctype.is_char_family:
                raise _Fault("format-mismatch", target.span)
            if len(word) + 1 > len(cell.values):
                raise _Fault("array-out-of-bounds", target.span)
            for i, ch in enumerate(word):
                cell.values[i] = _wrap(ord(ch), cell.ctype.name)
                cell.init[i] = True
            cell.values[len(word)] = 0
            cell.init[len(word)] = True
            return True

        inner = target.operand  # Unary('&', ...) guaranteed by the analyzer
        if code == "c":
            ch = self.next_char(call, source)
            if ch is None:
                return None
            self.store_scan(inner, code, ord(ch))
            return True
        if code in ("d", "u", "x"):
            text = self.next_number_text(call, source, hex_ok=(code == "x"))
            if text is None:
                return None
            value = int(text, 16) if code == "x" else int(text, 10)
            self.store_scan(inner, code, value)
            return True
        if code == "f":
            text = self.next_number_text(call, source, float_ok=True)
            if text is None:
                return None
            self.store_scan(inner, code, float(text))
            return True
        raise _Fault("format-mismatch", call.span)

    def store_scan(self, lv: Node, code: str, value):
        if isinstance(lv, Ident):
            cell = self.lookup(lv.name, lv.span)
            if not isinstance(cell, _Scalar):
                raise _Fault("format-mismatch", lv.span)
            ctype = cell.ctype
        elif isinstance(lv, Index):
            cell = self.lookup(lv.base.name, lv.base.span)
            if not isinstance(cell, _Array):
                raise _Fault("format-mismatch", lv.span)
            ctype = CType(cell.ctype.name)
        else:
            raise _Fault("format-mismatch", lv.span)
        compatible = {
            "d": ctype.name == "int",
            "u": ctype.name == "unsigned int",
            "x": ctype.name in ("int", "unsigned int"),
            "c": ctype.is_char_family,
            "f": ctype.name == "float",
        }[code]
        if not compatible:
            raise _Fault("format-mismatch", lv.span)
        if isinstance(lv, Ident):
            cell.value = self.convert("float" if code == "f" else "int", value, ctype.name)
            cell.initialized = True
        else:
            idx = self.int_value(self.eval(lv.index), lv.index.span)
            if idx < 0 or idx >= len(cell.values):
                raise _Fault("array-out-of-bounds", lv.span)
            cell.values[idx] = self.convert("float" if code == "f" else "int", value, ctype.name)
            cell.init[idx] = True

    # token sources

    def next_char(self, call: Call, source: Optional[_File]) -> Optional[str]:
        if source is not None:
            if source.pos >= len(source.text):
                return None
            ch = source.text[source.pos]
            source.pos += 1
            return ch
        if self.stdin_pos >= len(self.test.stdin_tokens):
            raise _Fault("read-past-input", call.span)
        tok = self.test.stdin_tokens[self.stdin_pos]
        self.stdin_pos += 1
        if not isinstance(tok, str) or len(tok) != 1:
            raise _Fault("format-mismatch", call.span)
        return tok

    def next_word(self, call: Call, source: Optional[_File]) -> Optional[str]:
        if source is not None:
            while source.pos < len(source.text) and source.text[source.pos] in " \t\n\r":
                source.pos += 1
            if source.pos >= len(source.text):
                return None
            start = source.pos
            while source.pos < len(source.text) and source.text[source.pos] not in " \t\n\r":
                source.pos += 1
            return source.text[start : source.pos]
        if self.stdin_pos >= len(self.test.stdin_tokens):
            raise _Fault("read-past-input", call.span)
        tok = self.test.stdin_tokens[self.stdin_pos]
        self.stdin_pos += 1
        if not isinstance(tok, str):
            raise _Fault("format-mismatch", call.span)
        return tok

    def next_number_text(self, call: Call, source: Optional[_File], hex_ok: bool = False, float_ok: bool = False) -> Optional[str]:
        if source is not None:
            word = self.next_word(call, source)
            if word is None:
                return None
            return word
        if self.stdin_pos >= len(self.test.stdin_tokens):
            raise _Fault("read-past-input", call.span)
        tok = self.test.stdin_tokens[self.stdin_pos]
        self.stdin_pos += 1
        if isinstance(tok, bool):
            raise _Fault("format-mismatch", call.span)
        if float_ok and isinstance(tok, (int, float)):
            return repr(tok)
        if isinstance(tok, int):
            return format(tok, "x") if hex_ok else str(tok)
        raise _Fault("format-mismatch", call.span)


def execute(program: Program, test: TestCase, step_limit: int = 100_000, record_trace: bool = True) -> ExecutionTrace:
    """Run the program on one test case; always returns a trace."""
    return Interpreter(program, test, step_limit, record_trace).run()


# --- stub extraction ---------------------------------------------------------


class StubError(Exception):
    def __init__(self, kind: str, message: str):
        self.kind = kind
        super().__init__(message)


@dataclass
class Stub:
    """A code fragment plus the harness state that makes it runnable."""

    fragment: List[Node]
    harness: Dict[str, Tuple[CType, object]]  # name -> (type, seed snapshot value)
    span: SourceSpan
    probes: List[TestCase] = field(default_factory=list)


def _block_runs(root: Node):
    """Yield (block, start_index, end_index) spans of contiguous statements."""
    for node in walk(root):
        if isinstance(node, Block):
            yield node


def _find_fragment(program: Program, span: SourceSpan) -> Optional[List[Node]]:
    for block in _block_runs(program):
        stmts = block.stmts
        for i in range(len(stmts)):
            if (stmts[i].span.start_line, stmts[i].span.start_col) != (span.start_line, span.start_col):
                continue
            for j in range(i, len(stmts)):
                if (stmts[j].span.end_line, stmts[j].span.end_col) == (span.end_line, span.end_col):
                    return stmts[i : j + 1]
    return None


def _free_variables(fragment: List[Node]) -> List[str]:
    declared = set()
    used: List[str] = []
    builtin = {"scanf", "printf", "fopen", "fscanf"}
    for stmt in fragment:
        for n in walk(stmt):
            if isinstance(n, Decl):
                declared.add(n.name)
            elif isinstance(n, Call):
                continue
            elif isinstance(n, Ident) and n.name not in builtin:
                if n.name not in declared and n.name not in used:
                    used.append(n.name)
    call_names = set()
    for stmt in fragment:
        for n in walk(stmt):
            if isinstance(n, Call):
                call_names.add(n.name)
    return [u for u in used if u not in call_names]


def make_stub(program: Program, fragment_span: SourceSpan, seed_trace: ExecutionTrace) -> Stub:
    """Wrap the statements covered by ``fragment_span`` with seeded state.

    Free variables are initialized from the snapshot immediately preceding
    the first trace step that falls inside the fragment.
    """
    fragment = _find_fragment(program, fragment_span)
    if fragment is None:
        raise StubError("fragment-not-extractable", "span does not cover whole statements")

    entry_idx = None
    for k, step in enumerate(seed_trace.steps):
        if fragment_span.contains(step.span):
            entry_idx = k
            break
    if entry_idx is None:
        raise StubError("fragment-not-reached", "seed trace never enters the fragment")
    seed_snapshot = seed_trace.steps[entry_idx - 1].snapshot if entry_idx > 0 else {}

    types: Dict[str, CType] = {}
    for n in walk(program):
        if isinstance(n, Decl):
            types[n.name] = n.ctype

    harness: Dict[str, Tuple[CType, object]] = {}
    for name in _free_variables(fragment):
        ctype = types.get(name)
        if ctype is None:
            raise StubError("fragment-not-extractable", f"unknown free variable {name!r}")
        if ctype.name == "file":
            raise StubError("fragment-not-extractable", f"free FILE * variable {name!r}")
        harness[name] = (ctype, seed_snapshot.get(name))
    return Stub(fragment, harness, fragment_span)


def execute_stub(stub: Stub, test: TestCase, step_limit: int = 100_000, record_trace: bool = True) -> ExecutionTrace:
    """Run a stub standalone: harness state is seeded without trace steps."""
    shell = Program([FuncDef(CType("int"), "main", Block(list(stub.fragment)))])
    interp = Interpreter(shell, test, step_limit, record_trace)
    interp.push_frame()
    for name, (ctype, seeded) in stub.harness.items():
        if ctype.is_array:
            cell = _Array(ctype)
            if isinstance(seeded, (tuple, list)):
                for i, v in enumerate(seeded[: len(cell.values)]):
                    if v is not None:
                        cell.values[i] = v
                        cell.init[i] = True
        else:
            cell = _Scalar(ctype)
            if seeded is not None:
                cell.value = seeded
                cell.initialized = True
        interp.bind(name, cell)
    outcome, kind, span = "completed", None, None
    try:
        try:
            for stmt in stub.fragment:
                interp.exec_stmt(stmt)
        except _ReturnSignal:
            pass
    except _Fault as f:
        outcome, kind, span = "runtime-error", f.kind, f.span
    except _StepLimit:
        outcome = "step-limit-exceeded"
    return ExecutionTrace(interp.steps, "".join(interp.stdout), outcome, kind, span)


# --- test generation ---------------------------------------------------------


def _comparison_constants(program: Program) -> Tuple[List[int], List[int]]:
    """(int constants, char codes) appearing in relational comparisons."""
    ints: List[int] = []
    chars: List[int] = []
    for n in walk(program):
        if isinstance(n, Binary) and n.op in ("==", "!=", "<", "<=", ">", ">="):
            for side in (n.left, n.right):
                if isinstance(side, IntLit) and side.value not in ints:
                    ints.append(side.value)
                elif isinstance(side, CharLit) and side.value not in chars:
                    chars.append(side.value)
    return ints, chars


def _read_plan(program: Program) -> Tuple[List[str], Optional[str], bool]:
    """stdin format codes in order, plus (input file name, file-reads flag)."""
    codes: List[str] = []
    file_name: Optional[str] = None
    reads_file = False
    for n in walk(program):
        if isinstance(n, Call):
            if n.name == "scanf" and n.args and isinstance(n.args[0], StrLit):
                fmt = n.args[0].value
                i = 0
                while i < len(fmt):
                    if fmt[i] == "%" and i + 1 < len(fmt) and fmt[i + 1] != "%":
                        codes.append(fmt[i + 1])
                        i += 2
                    else:
                        i += 1
            elif n.name == "fopen" and n.args and isinstance(n.args[0], StrLit):
                file_name = n.args[0].value
            elif n.name == "fscanf":
                reads_file = True
    return codes, file_name, reads_file


def _uses_shifts(program: Program) -> bool:
    return any(isinstance(n, Binary) and n.op in ("<<", ">>") for n in walk(program))


_BIT_BOUNDARY_PAIRS = [(0, 2), (3, 2), (6, 2), (0, 1), (7, 1), (2, 4), (0, 8)]


def generate_tests(program: Program, budget: int, seed: int) -> List[TestCase]:
    """Deterministic test generation: boundary values for every comparison
    constant (value, value±1), boundary placements for compared characters,
    bit-position edge pairs for shift-based programs, then random fill."""
    if budget < 1:
        raise ValueError("budget must be >= 1")
    rng = random.Random(seed)
    ints, chars = _comparison_constants(program)
    codes, file_name, reads_file = _read_plan(program)

    tests: List[TestCase] = []

    def add(stdin: List, files: Dict[str, str], tag: str):
        if len(tests) >= budget:
            return
        tests.append(TestCase(f"gen-{len(tests)}", stdin, files, tags=[tag]))

    word_chars = [chr(c) for c in chars if chr(c).isprintable() and c != 0] or ["p", "a"]
    fillers = [c for c in word_chars] + ["b"]

    def random_word(length: int) -> str:
        return "".join(rng.choice(fillers) for _ in range(length))

    def make_file_text(words: List[str]) -> str:
        seps = [" ", "\n", "\t"]
        parts = []
        for k, w in enumerate(words):
            parts.append(w)
            if k < len(words) - 1:
                parts.append(seps[k % len(seps)])
        return "".join(parts) + "\n"

    def stdin_for_codes(int_pool: List[int]) -> List:
        stdin: List = []
        for code in codes:
            if code in ("d", "u"):
                stdin.append(rng.choice(int_pool))
            elif code == "x":
                stdin.append(rng.randrange(0, 256))
            elif code == "c":
                stdin.append(rng.choice(fillers))
            elif code == "s":
                stdin.append(random_word(rng.randrange(1, 8)))
            elif code == "f":
                stdin.append(round(rng.uniform(-10, 10), 3))
        return stdin

    int_pool = sorted({v for c in ints for v in (c - 1, c, c + 1)} | {0, 1})

    needs_file = file_name is not None or reads_file
    fname = file_name or "input.txt"

    if needs_file:
        # boundary placements: each compared char first / middle / last
        for ch in word_chars:
            if len(tests) >= budget:
                break
            mid = random_word(2)
            words = [ch + random_word(2), mid[0] + ch + mid[1], random_word(2) + ch]
            add([], {fname: make_file_text(words)}, "boundary-placement")
    if _uses_shifts(program) and len(codes) >= 2:
        # the trailing int slots sweep bit groups at begin / middle / end
        for p, n in _BIT_BOUNDARY_PAIRS:
            if len(tests) >= budget:
                break
            stdin = stdin_for_codes(int_pool)
            d_slots = [k for k, code in enumerate(codes) if code in ("d", "u")]
            if len(d_slots) >= 2:
                stdin[d_slots[-2]] = p
                stdin[d_slots[-1]] = n
            add(stdin, {fname: make_file_text([random_word(4)])} if needs_file else {}, "bit-boundary")
    elif codes:
        for v in int_pool:
            if len(tests) >= budget:
                break
            stdin = stdin_for_codes(int_pool)
            d_slots = [k for k, code in enumerate(codes) if code in ("d", "u")]
            if d_slots:
                stdin[d_slots[0]] = v
            add(stdin, {}, "comparison-boundary")

    while len(tests) < budget:
        stdin = stdin_for_codes(int_pool) if codes else []
        files = {}
        if needs_file:
            words = [random_word(rng.randrange(1, 9)) for _ in range(rng.randrange(1, 5))]
            files[fname] = make_file_text(words)
        add(stdin, files, "random")
    return tests
