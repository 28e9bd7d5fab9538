"""AST for the course C subset: node types, spans, and the concept map.

The subset covers what the two shipped exercises and their seeded faults
need: scalar and array declarations, assignments, if/while/for, the stdio
built-ins (scanf/printf/fopen/fscanf), and integer/bitwise/relational
expressions.  Pointers, structs and the preprocessor are out; a program
using them is rejected with a semantic error, never a crash.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, List, Optional, Tuple


@dataclass(frozen=True)
class SourceSpan:
    file_id: str
    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def __post_init__(self):
        if (self.end_line, self.end_col) < (self.start_line, self.start_col):
            raise ValueError("span end precedes start")

    def contains(self, other: "SourceSpan") -> bool:
        return (
            self.file_id == other.file_id
            and (self.start_line, self.start_col) <= (other.start_line, other.start_col)
            and (other.end_line, other.end_col) <= (self.end_line, self.end_col)
        )

    def to_dict(self) -> dict:
        return {
            "file_id": self.file_id,
            "start_line": self.start_line,
            "start_col": self.start_col,
            "end_line": self.end_line,
            "end_col": self.end_col,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SourceSpan":
        return cls(d["file_id"], d["start_line"], d["start_col"], d["end_line"], d["end_col"])


DUMMY_SPAN = SourceSpan("<synthetic>", 1, 1, 1, 1)

SCALAR_TYPES = ("int", "unsigned int", "char", "unsigned char", "float", "file")
INT_FAMILY = ("int", "unsigned int", "char", "unsigned char")


@dataclass(frozen=True)
class CType:
    """Scalar type, or a fixed-size array of a scalar when ``size`` is set."""

    name: str
    size: Optional[int] = None

    def __post_init__(self):
        if self.name not in SCALAR_TYPES:
            raise ValueError(f"unknown type {self.name!r}")
        if self.size is not None and self.size <= 0:
            raise ValueError("array size must be positive")

    @property
    def is_array(self) -> bool:
        return self.size is not None

    @property
    def is_integer(self) -> bool:
        return self.size is None and self.name in INT_FAMILY

    @property
    def is_char_family(self) -> bool:
        return self.name in ("char", "unsigned char")

    def __str__(self) -> str:
        if self.name == "file":
            return "FILE *"
        if self.is_array:
            return f"{self.name}[{self.size}]"
        return self.name


class Concept(str, Enum):
    """Closed inventory of programming concepts a node can belong to."""

    VARIABLE_DECLARATION = "variable-declaration"
    INPUT_READ = "input-read"
    OUTPUT_WRITE = "output-write"
    IF_CONDITION = "if-condition"
    LOOP_CONTROL = "loop-control"
    ARRAY_INDEX = "array-index"
    BITWISE_MASK = "bitwise-mask"
    ACCUMULATOR_UPDATE = "accumulator-update"
    FILE_OPEN = "file-open"
    PATTERN_SCAN = "pattern-scan"


class Node:
    """Base class; every node carries a source span."""

    span: SourceSpan

    def children(self) -> Iterator["Node"]:
        return iter(())

    @property
    def kind(self) -> str:
        return type(self).__name__


# --- expressions -----------------------------------------------------------


@dataclass
class IntLit(Node):
    value: int
    span: SourceSpan = DUMMY_SPAN
    base: int = 10  # 10 or 16; printing detail only


@dataclass
class FloatLit(Node):
    value: float
    span: SourceSpan = DUMMY_SPAN


@dataclass
class CharLit(Node):
    value: int  # ASCII code
    span: SourceSpan = DUMMY_SPAN


@dataclass
class StrLit(Node):
    value: str
    span: SourceSpan = DUMMY_SPAN


@dataclass
class Ident(Node):
    name: str
    span: SourceSpan = DUMMY_SPAN


@dataclass
class Index(Node):
    base: Ident
    index: Node
    span: SourceSpan = DUMMY_SPAN

    def children(self):
        yield self.base
        yield self.index


@dataclass
class Unary(Node):
    op: str  # - ! ~ &
    operand: Node
    span: SourceSpan = DUMMY_SPAN

    def children(self):
        yield self.operand


@dataclass
class Binary(Node):
    op: str
    left: Node
    right: Node
    span: SourceSpan = DUMMY_SPAN

    def children(self):
        yield self.left
        yield self.right


@dataclass
class Call(Node):
    name: str  # scanf, printf, fopen, fscanf, or a zero-arg helper
    args: List[Node] = field(default_factory=list)
    span: SourceSpan = DUMMY_SPAN

    def children(self):
        yield from self.args


@dataclass
class InitList(Node):
    items: List[Node] = field(default_factory=list)
    span: SourceSpan = DUMMY_SPAN

    def children(self):
        yield from self.items


# --- statements ------------------------------------------------------------


@dataclass
class Decl(Node):
    ctype: CType
    name: str
    init: Optional[Node] = None
    span: SourceSpan = DUMMY_SPAN

    def children(self):
        if self.init is not None:
            yield self.init


@dataclass
class Assign(Node):
    target: Node  # Ident or Index
    value: Node
    span: SourceSpan = DUMMY_SPAN

    def children(self):
        yield self.target
        yield self.value


@dataclass
class IncDec(Node):
    target: Node
    op: str  # ++ or --
    span: SourceSpan = DUMMY_SPAN

    def children(self):
        yield self.target


@dataclass
class If(Node):
    cond: Node
    then: Node
    els: Optional[Node] = None
    span: SourceSpan = DUMMY_SPAN

    def children(self):
        yield self.cond
        yield self.then
        if self.els is not None:
            yield self.els


@dataclass
class While(Node):
    cond: Node
    body: Node
    span: SourceSpan = DUMMY_SPAN

    def children(self):
        yield self.cond
        yield self.body


@dataclass
class For(Node):
    init: Optional[Node]
    cond: Optional[Node]
    update: Optional[Node]
    body: Node
    span: SourceSpan = DUMMY_SPAN

    def children(self):
        for part in (self.init, self.cond, self.update):
            if part is not None:
                yield part
        yield self.body


@dataclass
class Block(Node):
    stmts: List[Node] = field(default_factory=list)
    span: SourceSpan = DUMMY_SPAN

    def children(self):
        yield from self.stmts


@dataclass
class ExprStmt(Node):
    expr: Node  # a Call used for its effect
    span: SourceSpan = DUMMY_SPAN

    def children(self):
        yield self.expr


@dataclass
class Return(Node):
    value: Optional[Node] = None
    span: SourceSpan = DUMMY_SPAN

    def children(self):
        if self.value is not None:
            yield self.value


@dataclass
class Empty(Node):
    span: SourceSpan = DUMMY_SPAN


@dataclass
class FuncDef(Node):
    ret_type: CType
    name: str
    body: Block = field(default_factory=Block)
    span: SourceSpan = DUMMY_SPAN

    def children(self):
        yield self.body


@dataclass
class Program(Node):
    funcs: List[FuncDef] = field(default_factory=list)
    file_id: str = "<input>"
    span: SourceSpan = DUMMY_SPAN

    def children(self):
        yield from self.funcs

    def main(self) -> FuncDef:
        for f in self.funcs:
            if f.name == "main":
                return f
        raise LookupError("program has no main()")


STATEMENT_KINDS = (
    "Decl", "Assign", "IncDec", "If", "While", "For", "Block",
    "ExprStmt", "Return", "Empty",
)
EXPRESSION_KINDS = (
    "IntLit", "FloatLit", "CharLit", "StrLit", "Ident", "Index",
    "Unary", "Binary", "Call", "InitList",
)
ALL_NODE_KINDS = STATEMENT_KINDS + EXPRESSION_KINDS + ("FuncDef", "Program")

BITWISE_OPS = ("&", "|", "^", "<<", ">>")
RELATIONAL_OPS = ("==", "!=", "<", "<=", ">", ">=")
LOGICAL_OPS = ("&&", "||")
ARITH_OPS = ("+", "-", "*", "/", "%")

READ_CALLS = ("scanf", "fscanf")
WRITE_CALLS = ("printf",)


def walk(node: Node) -> Iterator[Node]:
    """Pre-order traversal of the subtree rooted at ``node``."""
    yield node
    for child in node.children():
        yield from walk(child)


def _contains_bitwise(expr: Node) -> bool:
    for n in walk(expr):
        if isinstance(n, Binary) and n.op in BITWISE_OPS:
            return True
        if isinstance(n, Unary) and n.op == "~":
            return True
    return False


def _references(expr: Node, name: str) -> bool:
    return any(isinstance(n, Ident) and n.name == name for n in walk(expr))


def _target_name(target: Node) -> Optional[str]:
    if isinstance(target, Ident):
        return target.name
    if isinstance(target, Index):
        return target.base.name
    return None


def _char_operand(expr: Binary) -> bool:
    for side in (expr.left, expr.right):
        if isinstance(side, CharLit):
            return True
        if isinstance(side, Index):
            return True
    return False


def concept_of(node: Node) -> Concept:
    """Map any AST node to its programming concept (total and deterministic).

    The inventory is the closure of the concepts the course exercises touch;
    container nodes land on the concept of their dominant role.
    """
    if isinstance(node, Decl):
        return Concept.VARIABLE_DECLARATION
    if isinstance(node, Assign):
        if _contains_bitwise(node.value):
            return Concept.BITWISE_MASK
        name = _target_name(node.target)
        if name is not None and _references(node.value, name):
            return Concept.ACCUMULATOR_UPDATE
        return Concept.VARIABLE_DECLARATION  # plain (re)initialization
    if isinstance(node, IncDec):
        return Concept.ACCUMULATOR_UPDATE
    if isinstance(node, If):
        return Concept.IF_CONDITION
    if isinstance(node, (While, For)):
        return Concept.LOOP_CONTROL
    if isinstance(node, Block):
        return Concept.LOOP_CONTROL  # grouping exists for control flow
    if isinstance(node, ExprStmt):
        return concept_of(node.expr)
    if isinstance(node, Return):
        return Concept.OUTPUT_WRITE
    if isinstance(node, Empty):
        return Concept.LOOP_CONTROL
    if isinstance(node, Call):
        if node.name in READ_CALLS:
            return Concept.INPUT_READ
        if node.name in WRITE_CALLS:
            return Concept.OUTPUT_WRITE
        if node.name == "fopen":
            return Concept.FILE_OPEN
        return Concept.LOOP_CONTROL  # helper call: control transfer
    if isinstance(node, Index):
        return Concept.ARRAY_INDEX
    if isinstance(node, Binary):
        if node.op in BITWISE_OPS:
            return Concept.BITWISE_MASK
        if node.op in RELATIONAL_OPS:
            return Concept.PATTERN_SCAN if _char_operand(node) else Concept.IF_CONDITION
        if node.op in LOGICAL_OPS:
            return Concept.IF_CONDITION
        return Concept.ACCUMULATOR_UPDATE  # arithmetic feeds accumulation
    if isinstance(node, Unary):
        if node.op == "~":
            return Concept.BITWISE_MASK
        if node.op == "&":
            return Concept.INPUT_READ  # address-of appears in scanf args only
        if node.op == "!":
            return Concept.IF_CONDITION
        return concept_of(node.operand)
    if isinstance(node, CharLit):
        return Concept.PATTERN_SCAN
    if isinstance(node, StrLit):
        return Concept.OUTPUT_WRITE  # format/message text
    if isinstance(node, (IntLit, FloatLit, Ident, InitList)):
        return Concept.VARIABLE_DECLARATION
    if isinstance(node, (FuncDef, Program)):
        return Concept.LOOP_CONTROL
    raise TypeError(f"unmapped node kind {type(node).__name__}")


def structure_key(node: Optional[Node]) -> Tuple:
    """Span-free structural fingerprint; equal keys mean equal structure."""
    if node is None:
        return ("<none>",)
    if isinstance(node, IntLit):
        return ("IntLit", node.value)
    if isinstance(node, FloatLit):
        return ("FloatLit", node.value)
    if isinstance(node, CharLit):
        return ("CharLit", node.value)
    if isinstance(node, StrLit):
        return ("StrLit", node.value)
    if isinstance(node, Ident):
        return ("Ident", node.name)
    if isinstance(node, Index):
        return ("Index", structure_key(node.base), structure_key(node.index))
    if isinstance(node, Unary):
        return ("Unary", node.op, structure_key(node.operand))
    if isinstance(node, Binary):
        return ("Binary", node.op, structure_key(node.left), structure_key(node.right))
    if isinstance(node, Call):
        return ("Call", node.name) + tuple(structure_key(a) for a in node.args)
    if isinstance(node, InitList):
        return ("InitList",) + tuple(structure_key(i) for i in node.items)
    if isinstance(node, Decl):
        return ("Decl", str(node.ctype), node.name, structure_key(node.init))
    if isinstance(node, Assign):
        return ("Assign", structure_key(node.target), structure_key(node.value))
    if isinstance(node, IncDec):
        return ("IncDec", node.op, structure_key(node.target))
    if isinstance(node, If):
        return ("If", structure_key(node.cond), structure_key(node.then), structure_key(node.els))
    if isinstance(node, While):
        return ("While", structure_key(node.cond), structure_key(node.body))
    if isinstance(node, For):
        return (
            "For",
            structure_key(node.init),
            structure_key(node.cond),
            structure_key(node.update),
            structure_key(node.body),
        )
    if isinstance(node, Block):
        return ("Block",) + tuple(structure_key(s) for s in node.stmts)
    if isinstance(node, ExprStmt):
        return ("ExprStmt", structure_key(node.expr))
    if isinstance(node, Return):
        return ("Return", structure_key(node.value))
    if isinstance(node, Empty):
        return ("Empty",)
    if isinstance(node, FuncDef):
        return ("FuncDef", str(node.ret_type), node.name, structure_key(node.body))
    if isinstance(node, Program):
        return ("Program",) + tuple(structure_key(f) for f in node.funcs)
    raise TypeError(f"unfingerprintable node {type(node).__name__}")


def structurally_equal(a: Optional[Node], b: Optional[Node]) -> bool:
    return structure_key(a) == structure_key(b)


def node_histogram(root: Node) -> dict:
    """Count of nodes per kind; used by round-trip checks."""
    hist: dict = {}
    for n in walk(root):
        hist[n.kind] = hist.get(n.kind, 0) + 1
    return hist


def count_statements(root: Node) -> int:
    return sum(1 for n in walk(root) if n.kind in STATEMENT_KINDS)


def executable_statements(func: FuncDef) -> List[Node]:
    """Non-declaration, non-return, non-empty statements in a function body."""
    out = []
    for n in walk(func.body):
        if n.kind in ("Assign", "IncDec", "If", "While", "For", "ExprStmt"):
            out.append(n)
    return out


def rename_variables(node: Node, mapping: dict) -> Node:
    """Copy of the subtree with variable names substituted per ``mapping``."""
    import copy

    dup = copy.deepcopy(node)
    for n in walk(dup):
        if isinstance(n, Ident) and n.name in mapping:
            n.name = mapping[n.name]
        elif isinstance(n, Decl) and n.name in mapping:
            n.name = mapping[n.name]
    return dup


def declared_variables(func: FuncDef) -> List[Decl]:
    return [n for n in walk(func.body) if isinstance(n, Decl)]


def find_statement_at(root: Node, span: SourceSpan) -> Optional[Node]:
    """Innermost statement whose span equals or covers ``span`` exactly."""
    best = None
    for n in walk(root):
        if n.kind in STATEMENT_KINDS and n.span.contains(span):
            if best is None or best.span.contains(n.span):
                best = n
    return best
