"""Tiny exact expression language for the table and witness data files.

Expressions are sums/products of integers, rationals and named symbols
(q1..q6 for p-power exponents, c4..c6 for free coefficients), e.g.

    (q1+q3)/3      2*q1      -1/2      (1/2)*(c5-3*c4)      c4*(c4-3)

Values are polynomials with Fraction coefficients over the symbols,
represented as {exponent-dict-as-sorted-tuple: Fraction}.  Evaluation at a
symbol assignment produces an exact Fraction.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

SymPoly = dict  # {tuple[(symbol, exponent), ...]: Fraction}


def poly_const(c) -> SymPoly:
    c = Fraction(c)
    return {(): c} if c else {}


def poly_sym(name: str) -> SymPoly:
    return {((name, 1),): Fraction(1)}


def poly_add(a: SymPoly, b: SymPoly) -> SymPoly:
    out = dict(a)
    for k, v in b.items():
        s = out.get(k, Fraction(0)) + v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def poly_neg(a: SymPoly) -> SymPoly:
    return {k: -v for k, v in a.items()}


def poly_mul(a: SymPoly, b: SymPoly) -> SymPoly:
    out: SymPoly = {}
    for k1, v1 in a.items():
        d1 = dict(k1)
        for k2, v2 in b.items():
            d = dict(d1)
            for sym, e in k2:
                d[sym] = d.get(sym, 0) + e
            key = tuple(sorted(d.items()))
            s = out.get(key, Fraction(0)) + v1 * v2
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


def poly_div(a: SymPoly, b: SymPoly) -> SymPoly:
    if list(b.keys()) not in ([()], []):
        raise ValueError("division only by constants")
    c = b.get((), Fraction(0))
    if not c:
        raise ZeroDivisionError("division by zero in expression")
    return {k: v / c for k, v in a.items()}


def poly_eval(a: SymPoly, env: Mapping[str, object]) -> Fraction:
    total = Fraction(0)
    for k, v in a.items():
        term = v
        for sym, e in k:
            if sym not in env:
                raise ValueError(f"symbol {sym} unassigned")
            term *= Fraction(env[sym]) ** e
        total += term
    return total


def poly_symbols(a: SymPoly) -> set[str]:
    return {sym for k in a for sym, _ in k}


def poly_is_zero(a: SymPoly) -> bool:
    return not a


class ExprError(ValueError):
    pass


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str):
        raise ExprError(f"{msg} at {self.pos} in {self.text!r}")

    def peek(self) -> str:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expr(self) -> SymPoly:
        ch = self.peek()
        neg = False
        if ch in "+-":
            neg = ch == "-"
            self.pos += 1
        out = self.term()
        if neg:
            out = poly_neg(out)
        while True:
            ch = self.peek()
            if ch == "+":
                self.pos += 1
                out = poly_add(out, self.term())
            elif ch == "-":
                self.pos += 1
                out = poly_add(out, poly_neg(self.term()))
            else:
                return out

    def term(self) -> SymPoly:
        out = self.factor()
        while True:
            ch = self.peek()
            if ch == "*":
                self.pos += 1
                out = poly_mul(out, self.factor())
            elif ch == "/":
                self.pos += 1
                out = poly_div(out, self.factor())
            elif ch == "(" or ch.isalpha():
                # implicit multiplication: 2q1, (1/2)c5, c4(c4-3)
                out = poly_mul(out, self.factor())
            else:
                return out

    def factor(self) -> SymPoly:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            out = self.expr()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
            return out
        if ch.isdigit():
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            return poly_const(int(self.text[start : self.pos]))
        if ch.isalpha():
            start = self.pos
            while self.pos < len(self.text) and (
                self.text[self.pos].isalnum() or self.text[self.pos] == "_"
            ):
                self.pos += 1
            return poly_sym(self.text[start : self.pos])
        self.error("unexpected character")
        raise AssertionError  # unreachable

    def parse(self) -> SymPoly:
        out = self.expr()
        if self.peek():
            self.error("trailing input")
        return out


def parse_expr(text: str) -> SymPoly:
    return _Parser(text).parse()
