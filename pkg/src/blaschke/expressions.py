"""Input language for building finite Blaschke products.

Grammar (whitespace-insensitive)::

    expr    := comp
    comp    := prod ("@" prod)*        # left-associative; f @ g means f after g
    prod    := pow ("*" pow)*
    pow     := atom ("^" uint)?
    atom    := "z" | "mobius(" complex ")" | "(" expr ")"
    complex := signed float, optionally with a second signed float and the
               suffix "i" on the imaginary part ("0.5", "-0.3+0.1i", "0.4i")

``parse_expr`` produces a small AST; ``to_product`` flattens it to a
:class:`~blaschke.products.FiniteBlaschkeProduct`; ``expr_text`` prints an
AST back to a string that reparses to the identical tree.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .errors import ExpressionSyntaxError, ParameterOutOfDisk
from .products import FiniteBlaschkeProduct, compose

__all__ = [
    "ZPower",
    "Moebius",
    "Product",
    "Compose",
    "Power",
    "ProductExpression",
    "parse_expr",
    "to_product",
    "expr_text",
]

# The Moebius-parameter margin mirrors the FiniteBlaschkeProduct constructor,
# so out-of-range parameters are rejected at parse time with a position.
PARAMETER_MARGIN = 1e-3


@dataclass(frozen=True)
class ZPower:
    """The power map z^k (k >= 1)."""

    k: int


@dataclass(frozen=True)
class Moebius:
    """Single disk-automorphism factor (a - z) / (1 - conj(a) z)."""

    a: complex


@dataclass(frozen=True)
class Product:
    """Pointwise product of two or more factors."""

    children: tuple["ProductExpression", ...]


@dataclass(frozen=True)
class Compose:
    """Functional composition: outer applied after inner."""

    outer: "ProductExpression"
    inner: "ProductExpression"


@dataclass(frozen=True)
class Power:
    """Pointwise k-th power of a subexpression (k >= 1)."""

    child: "ProductExpression"
    k: int


ProductExpression = Union[ZPower, Moebius, Product, Compose, Power]

_FLOAT = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_NUMBER_RE = re.compile(rf"[+-]?(?:(?:{_FLOAT})i?|i)")
_UINT_RE = re.compile(r"\d+")


class _Scanner:
    """Character scanner with whitespace skipping and positioned errors."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str, pos: int | None = None) -> ExpressionSyntaxError:
        return ExpressionSyntaxError(message, self.pos if pos is None else pos)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def accept(self, literal: str) -> bool:
        self.skip_ws()
        if self.text.startswith(literal, self.pos):
            self.pos += len(literal)
            return True
        return False

    def expect(self, literal: str, what: str) -> None:
        if not self.accept(literal):
            raise self.error(f"expected {what}")

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)


def _scan_term(scanner: _Scanner) -> tuple[float, bool]:
    """One signed float with optional trailing "i"; returns (value, imaginary)."""
    scanner.skip_ws()
    match = _NUMBER_RE.match(scanner.text, scanner.pos)
    if match is None:
        raise scanner.error("expected a number")
    token = match.group(0)
    scanner.pos = match.end()
    if token.endswith("i"):
        body = token[:-1]
        if body in ("", "+"):
            return 1.0, True
        if body == "-":
            return -1.0, True
        return float(body), True
    return float(token), False


def _scan_complex(scanner: _Scanner) -> complex:
    start = scanner.pos
    first, first_imag = _scan_term(scanner)
    scanner.skip_ws()
    if scanner.pos < len(scanner.text) and scanner.text[scanner.pos] in "+-":
        sign = -1.0 if scanner.text[scanner.pos] == "-" else 1.0
        scanner.pos += 1
        second, second_imag = _scan_term(scanner)
        if first_imag or not second_imag:
            raise scanner.error(
                "complex literal must be real part then imaginary part", start
            )
        return complex(first, sign * second)
    return complex(0.0, first) if first_imag else complex(first, 0.0)


def _scan_uint(scanner: _Scanner, what: str) -> int:
    scanner.skip_ws()
    match = _UINT_RE.match(scanner.text, scanner.pos)
    if match is None:
        raise scanner.error(f"expected {what}")
    scanner.pos = match.end()
    return int(match.group(0))


def _parse_atom(scanner: _Scanner) -> ProductExpression:
    scanner.skip_ws()
    start = scanner.pos
    if scanner.accept("mobius"):
        scanner.expect("(", '"(" after mobius')
        a = _scan_complex(scanner)
        scanner.expect(")", '")" closing the mobius parameter')
        if abs(a) >= 1.0 - PARAMETER_MARGIN:
            raise ParameterOutOfDisk(
                f"mobius parameter {a} has modulus {abs(a):.6g}; "
                f"it must lie strictly inside the unit disk "
                f"(margin {PARAMETER_MARGIN})",
                start,
            )
        return Moebius(a)
    if scanner.accept("z"):
        return ZPower(1)
    if scanner.accept("("):
        inner = _parse_comp(scanner)
        scanner.expect(")", '")"')
        return inner
    raise scanner.error('expected "z", "mobius(...)", or "("')


def _parse_pow(scanner: _Scanner) -> ProductExpression:
    atom = _parse_atom(scanner)
    if not scanner.accept("^"):
        return atom
    exp_pos = scanner.pos
    k = _scan_uint(scanner, "a positive integer exponent")
    if k < 1:
        raise scanner.error("exponent must be a positive integer", exp_pos)
    if isinstance(atom, ZPower):
        return ZPower(atom.k * k)
    return Power(atom, k)


def _parse_prod(scanner: _Scanner) -> ProductExpression:
    factors = [_parse_pow(scanner)]
    while scanner.accept("*"):
        factors.append(_parse_pow(scanner))
    if len(factors) == 1:
        return factors[0]
    return Product(tuple(factors))


def _parse_comp(scanner: _Scanner) -> ProductExpression:
    node = _parse_prod(scanner)
    while scanner.accept("@"):
        node = Compose(node, _parse_prod(scanner))
    return node


def parse_expr(text: str) -> ProductExpression:
    """Parse the expression language into an AST.

    Raises :class:`ExpressionSyntaxError` (with a character position) on
    malformed input and :class:`ParameterOutOfDisk` when a Moebius
    parameter is not strictly inside the unit disk.
    """
    scanner = _Scanner(text)
    node = _parse_comp(scanner)
    if not scanner.at_end():
        raise scanner.error("unexpected trailing input")
    return node


def expression_order(node: ProductExpression) -> int:
    """Order of the product the AST flattens to."""
    if isinstance(node, ZPower):
        return node.k
    if isinstance(node, Moebius):
        return 1
    if isinstance(node, Product):
        return sum(expression_order(c) for c in node.children)
    if isinstance(node, Power):
        return node.k * expression_order(node.child)
    if isinstance(node, Compose):
        return expression_order(node.outer) * expression_order(node.inner)
    raise TypeError(f"not an expression node: {node!r}")


def to_product(node: ProductExpression) -> FiniteBlaschkeProduct:
    """Flatten an AST to a single finite Blaschke product."""
    if isinstance(node, ZPower):
        # z^k = (-1)^k * prod (0 - z) / (1 - 0), a k-fold zero at the origin.
        return FiniteBlaschkeProduct(
            zeros=(0.0,) * node.k, unimodular_factor=(-1.0) ** node.k
        )
    if isinstance(node, Moebius):
        return FiniteBlaschkeProduct(zeros=(node.a,))
    if isinstance(node, Product):
        zeros: list[complex] = []
        factor = complex(1.0)
        for child in node.children:
            part = to_product(child)
            zeros.extend(part.zeros)
            factor *= part.unimodular_factor
        return FiniteBlaschkeProduct(zeros=tuple(zeros), unimodular_factor=factor)
    if isinstance(node, Power):
        base = to_product(node.child)
        return FiniteBlaschkeProduct(
            zeros=base.zeros * node.k,
            unimodular_factor=base.unimodular_factor**node.k,
        )
    if isinstance(node, Compose):
        return compose(to_product(node.outer), to_product(node.inner))
    raise TypeError(f"not an expression node: {node!r}")


def _format_float(x: float) -> str:
    text = repr(float(x))
    return text[:-2] if text.endswith(".0") else text


def _format_complex(a: complex) -> str:
    re_part, im_part = float(a.real), float(a.imag)
    if im_part == 0.0:
        return _format_float(re_part)
    if re_part == 0.0:
        return f"{_format_float(im_part)}i"
    sign = "+" if im_part > 0 else "-"
    return f"{_format_float(re_part)}{sign}{_format_float(abs(im_part))}i"


def expr_text(node: ProductExpression) -> str:
    """Print an AST so that ``parse_expr(expr_text(t)) == t``."""
    if isinstance(node, ZPower):
        return "z" if node.k == 1 else f"z^{node.k}"
    if isinstance(node, Moebius):
        return f"mobius({_format_complex(node.a)})"
    if isinstance(node, Power):
        child = expr_text(node.child)
        if not isinstance(node.child, Moebius):
            child = f"({child})"
        return f"{child}^{node.k}"
    if isinstance(node, Product):
        parts = [
            f"({expr_text(c)})" if isinstance(c, (Compose, Product)) else expr_text(c)
            for c in node.children
        ]
        return " * ".join(parts)
    if isinstance(node, Compose):
        left = expr_text(node.outer)
        right = expr_text(node.inner)
        if isinstance(node.inner, Compose):
            right = f"({right})"
        return f"{left} @ {right}"
    raise TypeError(f"not an expression node: {node!r}")
