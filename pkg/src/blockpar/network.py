"""Boolean automata networks: expression locals, text format, block updates.

A network is ``n`` local functions, one per automaton, each an expression
tree over the variables ``x0..x(n-1)``.  Configurations are plain integers:
bit ``i`` of the integer is the state of automaton ``i``.  In the textual
form a configuration is a bitstring whose *leftmost* character is automaton 0.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Union

from .errors import NetworkSyntaxError

# Printing precedences, loosest to tightest.
_PREC_OR, _PREC_XOR, _PREC_AND, _PREC_NOT, _PREC_ATOM = 1, 2, 3, 4, 5


@dataclass(frozen=True)
class Var:
    index: int

    precedence = _PREC_ATOM

    def evaluate(self, x: int) -> int:
        return (x >> self.index) & 1

    def source(self) -> str:
        return f"(x>>{self.index}&1)"

    def text(self) -> str:
        return f"x{self.index}"

    def variables(self) -> frozenset[int]:
        return frozenset((self.index,))


@dataclass(frozen=True)
class Const:
    value: int

    precedence = _PREC_ATOM

    def evaluate(self, x: int) -> int:
        return self.value

    def source(self) -> str:
        return str(self.value)

    def text(self) -> str:
        return str(self.value)

    def variables(self) -> frozenset[int]:
        return frozenset()


@dataclass(frozen=True)
class Not:
    operand: "Expr"

    precedence = _PREC_NOT

    def evaluate(self, x: int) -> int:
        return self.operand.evaluate(x) ^ 1

    def source(self) -> str:
        return f"({self.operand.source()}^1)"

    def text(self) -> str:
        inner = self.operand.text()
        if self.operand.precedence < _PREC_NOT:
            inner = f"({inner})"
        return f"!{inner}"

    def variables(self) -> frozenset[int]:
        return self.operand.variables()


class _Binary:
    __slots__ = ()
    symbol = "?"
    precedence = 0

    def text(self) -> str:
        left = self.left.text()
        if self.left.precedence < self.precedence:
            left = f"({left})"
        right = self.right.text()
        if self.right.precedence <= self.precedence:
            right = f"({right})"
        return f"{left} {self.symbol} {right}"

    def source(self) -> str:
        return f"({self.left.source()}{self.symbol}{self.right.source()})"

    def variables(self) -> frozenset[int]:
        return self.left.variables() | self.right.variables()


@dataclass(frozen=True)
class And(_Binary):
    left: "Expr"
    right: "Expr"

    symbol = "&"
    precedence = _PREC_AND

    def evaluate(self, x: int) -> int:
        return self.left.evaluate(x) & self.right.evaluate(x)


@dataclass(frozen=True)
class Or(_Binary):
    left: "Expr"
    right: "Expr"

    symbol = "|"
    precedence = _PREC_OR

    def evaluate(self, x: int) -> int:
        return self.left.evaluate(x) | self.right.evaluate(x)


@dataclass(frozen=True)
class Xor(_Binary):
    left: "Expr"
    right: "Expr"

    symbol = "^"
    precedence = _PREC_XOR

    def evaluate(self, x: int) -> int:
        return self.left.evaluate(x) ^ self.right.evaluate(x)


Expr = Union[Var, Const, Not, And, Or, Xor]


def and_chain(exprs: Iterable[Expr]) -> Expr:
    """Left-assoc conjunction of ``exprs``; the empty chain is constant 1."""
    result: Optional[Expr] = None
    for e in exprs:
        result = e if result is None else And(result, e)
    return Const(1) if result is None else result


class BooleanNetwork:
    """``n`` expression locals over ``n`` automata.  Immutable after creation."""

    __slots__ = ("n", "locals", "_compiled")

    def __init__(self, locals_: Iterable[Expr]):
        self.locals = tuple(locals_)
        self.n = len(self.locals)
        if self.n == 0:
            raise ValueError("a network needs at least one automaton")
        for i, expr in enumerate(self.locals):
            bad = [v for v in expr.variables() if v >= self.n]
            if bad:
                raise ValueError(
                    f"local function {i} references x{min(bad)} but n={self.n}"
                )
        self._compiled = None

    def compiled(self) -> tuple[Callable[[int], int], ...]:
        """Locals compiled to bitmask lambdas; built once, cached."""
        if self._compiled is None:
            self._compiled = tuple(
                eval(f"lambda x: {expr.source()}") for expr in self.locals
            )
        return self._compiled

    def __eq__(self, other) -> bool:
        if not isinstance(other, BooleanNetwork):
            return NotImplemented
        return self.locals == other.locals

    def __hash__(self) -> int:
        return hash(self.locals)

    def __repr__(self) -> str:
        return f"BooleanNetwork({self.n} automata)"

    def __reduce__(self):
        return (BooleanNetwork, (self.locals,))


def identity_network(n: int) -> BooleanNetwork:
    return BooleanNetwork(Var(i) for i in range(n))


def eval_local(f: BooleanNetwork, i: int, x: int) -> int:
    """Value of local function ``i`` at configuration ``x``."""
    if not 0 <= i < f.n:
        raise IndexError(f"automaton {i} out of range for n={f.n}")
    return f.compiled()[i](x)


def update_block(f: BooleanNetwork, block: Iterable[int], x: int) -> int:
    """Simultaneously update the automata in ``block``; all locals read ``x``."""
    compiled = f.compiled()
    out = x
    updated = False
    for i in block:
        if not 0 <= i < f.n:
            raise IndexError(f"automaton {i} out of range for n={f.n}")
        updated = True
        if compiled[i](x):
            out |= 1 << i
        else:
            out &= ~(1 << i)
    if not updated:
        raise ValueError("update block must be non-empty")
    return out


# ---------------------------------------------------------------------------
# Configurations

def parse_config(text: str, n: Optional[int] = None) -> int:
    """Bitstring to configuration; leftmost character is automaton 0."""
    if not text or any(c not in "01" for c in text):
        raise ValueError(f"configuration must match [01]+, got {text!r}")
    if n is not None and len(text) != n:
        raise ValueError(f"configuration {text!r} has length {len(text)}, expected {n}")
    value = 0
    for i, c in enumerate(text):
        if c == "1":
            value |= 1 << i
    return value


def format_config(x: int, n: int) -> str:
    """Configuration to bitstring; automaton 0 leftmost."""
    return "".join("1" if (x >> i) & 1 else "0" for i in range(n))


# ---------------------------------------------------------------------------
# Network text format

_TOKEN = re.compile(r"x(\d+)|([01])|([!&^|()=])|(\S)")


def _tokenize(line: str, lineno: int) -> list[tuple[str, object, int]]:
    tokens = []
    for match in _TOKEN.finditer(line):
        col = match.start() + 1
        if match.group(1) is not None:
            tokens.append(("var", int(match.group(1)), col))
        elif match.group(2) is not None:
            tokens.append(("const", int(match.group(2)), col))
        elif match.group(3) is not None:
            tokens.append((match.group(3), match.group(3), col))
        else:
            raise NetworkSyntaxError(
                f"unexpected character {match.group(4)!r}", lineno, col
            )
    return tokens


class _ExprParser:
    """Recursive descent over one line of tokens; ``|`` loosest, ``!`` tightest."""

    def __init__(self, tokens, lineno: int, line_length: int):
        self.tokens = tokens
        self.pos = 0
        self.lineno = lineno
        self.end_col = line_length + 1

    def _peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _fail(self, message: str):
        token = self._peek()
        col = token[2] if token else self.end_col
        raise NetworkSyntaxError(message, self.lineno, col)

    def _accept(self, kind: str) -> bool:
        token = self._peek()
        if token and token[0] == kind:
            self.pos += 1
            return True
        return False

    def parse(self) -> Expr:
        expr = self._or()
        if self._peek() is not None:
            self._fail(f"unexpected {self._peek()[1]!r} after expression")
        return expr

    def _or(self) -> Expr:
        expr = self._xor()
        while self._accept("|"):
            expr = Or(expr, self._xor())
        return expr

    def _xor(self) -> Expr:
        expr = self._and()
        while self._accept("^"):
            expr = Xor(expr, self._and())
        return expr

    def _and(self) -> Expr:
        expr = self._unary()
        while self._accept("&"):
            expr = And(expr, self._unary())
        return expr

    def _unary(self) -> Expr:
        if self._accept("!"):
            return Not(self._unary())
        return self._atom()

    def _atom(self) -> Expr:
        token = self._peek()
        if token is None:
            self._fail("expected expression")
        kind, value, _ = token
        if kind == "var":
            self.pos += 1
            return Var(value)
        if kind == "const":
            self.pos += 1
            return Const(value)
        if kind == "(":
            self.pos += 1
            expr = self._or()
            if not self._accept(")"):
                self._fail("expected ')'")
            return expr
        self._fail(f"expected expression, found {value!r}")


_HEADER = re.compile(r"^\s*n\s*=\s*(\d+)\s*$")


def parse_network(text: str) -> BooleanNetwork:
    """Parse the network text format.

    One ``x<i> = <expr>`` assignment per line; ``#`` starts a comment; an
    optional ``n=<int>`` header (before any assignment) fixes the size.
    Unassigned automata default to the identity ``x<i>``.  Without a header,
    ``n`` is one more than the largest index mentioned.
    """
    assignments: dict[int, Expr] = {}
    assignment_lines: dict[int, int] = {}
    declared_n: Optional[int] = None
    max_index = -1

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        header = _HEADER.match(line)
        if header:
            if assignments:
                raise NetworkSyntaxError(
                    "size header must come before assignments", lineno, 1
                )
            if declared_n is not None:
                raise NetworkSyntaxError("duplicate size header", lineno, 1)
            declared_n = int(header.group(1))
            if declared_n < 1:
                raise NetworkSyntaxError("size must be positive", lineno, 1)
            continue
        tokens = _tokenize(line, lineno)
        if not tokens or tokens[0][0] != "var":
            col = tokens[0][2] if tokens else 1
            raise NetworkSyntaxError("expected 'x<i> =' assignment", lineno, col)
        target = tokens[0][1]
        if len(tokens) < 2 or tokens[1][0] != "=":
            col = tokens[1][2] if len(tokens) > 1 else len(line) + 1
            raise NetworkSyntaxError("expected '=' after assignment target", lineno, col)
        if target in assignments:
            raise NetworkSyntaxError(
                f"duplicate assignment to x{target}"
                f" (first assigned on line {assignment_lines[target]})",
                lineno, tokens[0][2],
            )
        expr = _ExprParser(tokens[2:], lineno, len(line)).parse()
        assignments[target] = expr
        assignment_lines[target] = lineno
        max_index = max(max_index, target, *(expr.variables() or (-1,)))

    if declared_n is None and max_index < 0:
        raise NetworkSyntaxError("network text contains no assignments and no header")
    n = declared_n if declared_n is not None else max_index + 1
    if max_index >= n:
        offenders = sorted(
            i for i, e in assignments.items()
            if i >= n or any(v >= n for v in e.variables())
        )
        where = assignment_lines[offenders[0]]
        raise NetworkSyntaxError(
            f"index x{max_index} out of range for declared n={n}", where, 1
        )
    locals_ = [assignments.get(i, Var(i)) for i in range(n)]
    return BooleanNetwork(locals_)


def serialize_network(f: BooleanNetwork) -> str:
    """Canonical text for a network: explicit header and every assignment."""
    lines = [f"n={f.n}"]
    lines.extend(f"x{i} = {expr.text()}" for i, expr in enumerate(f.locals))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Seeded random networks for property sweeps

def random_expression(n: int, rng: random.Random, depth: int = 4) -> Expr:
    """Uniform pick over node kinds, leaves forced at depth 0."""
    if depth <= 0:
        if rng.random() < 0.8:
            return Var(rng.randrange(n))
        return Const(rng.randrange(2))
    kind = rng.randrange(6)
    if kind == 0:
        return Var(rng.randrange(n))
    if kind == 1:
        return Const(rng.randrange(2))
    if kind == 2:
        return Not(random_expression(n, rng, depth - 1))
    left = random_expression(n, rng, depth - 1)
    right = random_expression(n, rng, depth - 1)
    if kind == 3:
        return And(left, right)
    if kind == 4:
        return Or(left, right)
    return Xor(left, right)


def random_network(n: int, rng: random.Random, depth: int = 4) -> BooleanNetwork:
    """A network of bounded-depth random expression locals."""
    return BooleanNetwork(random_expression(n, rng, depth) for _ in range(n))
