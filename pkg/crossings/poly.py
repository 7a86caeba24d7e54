"""
Sparse multivariate polynomials with exact rational coefficients.

Variables are numbered x1..xm (1-based everywhere in the public API). Terms are
kept in graded lexicographic order, leading term first, so equal polynomials
are equal values and serialize identically.
"""
from __future__ import annotations

import ast
import re
from dataclasses import dataclass
from functools import cached_property
from math import comb
from typing import Iterable, Mapping, Sequence

from sympy import Integer, Poly, QQ, S, SympifyError, symbols
from sympy.parsing.sympy_parser import auto_number, parse_expr
from sympy.polys.polyerrors import BasePolynomialError

from .exactla import ONE, ZERO, to_rational
from .exceptions import InvalidInput, PreconditionViolation, ResourceLimitExceeded

Monomial = tuple  # exponent vector, one nonnegative int per variable


def is_square_free(monomial: Monomial) -> bool:
    return all(e in (0, 1) for e in monomial)


def support_of(monomial: Monomial) -> frozenset[int]:
    """Variables (1-based) with a positive exponent."""
    return frozenset(j + 1 for j, e in enumerate(monomial) if e)


def _grlex_key(item):
    exps = item[0]
    return (sum(exps), exps)


def _check_monomial(exps, nvars: int) -> Monomial:
    exps = tuple(exps)
    if len(exps) != nvars:
        raise InvalidInput(f'monomial {list(exps)} does not have {nvars} exponents')
    if any(isinstance(e, bool) or not isinstance(e, int) or e < 0 for e in exps):
        raise InvalidInput(f'monomial {list(exps)} must have nonnegative integer exponents')
    return exps


def _check_vars(variables: Iterable[int], nvars: int) -> frozenset[int]:
    variables = frozenset(variables)
    bad = sorted(v for v in variables if not 1 <= v <= nvars)
    if bad:
        raise InvalidInput(f'variable indices {bad} out of range 1..{nvars}')
    return variables


# Bounds on polynomials read from expression text
MAX_EXPR_LENGTH = 2000
MAX_EXPR_DEGREE = 100
MAX_EXPR_TERMS = 50_000
MAX_COEFFICIENT_BITS = 4096

_EXPR_ALPHABET = re.compile(r'[0-9x+\-*/^()\s]*')
_VARIABLE_NAME = re.compile(r'x([1-9][0-9]*)')


@dataclass(frozen=True)
class _ExprSize:
    """Upper bounds for the expansion of a subexpression."""
    degree: int
    terms: int
    bits: int


def _checked_source(text: str, nvars: int) -> str:
    """
    Validate expression text and return it with ``^`` spelled ``**``.

    Raises ``InvalidInput`` for anything outside the polynomial grammar and
    ``ResourceLimitExceeded`` when the expansion could grow past the bounds above.
    """
    if len(text) > MAX_EXPR_LENGTH:
        raise ResourceLimitExceeded(f'expression longer than {MAX_EXPR_LENGTH} characters',
                                    limit='expr_length', value=len(text))
    if not _EXPR_ALPHABET.fullmatch(text):
        raise InvalidInput(f'{text!r} may only use integers, x1..x{nvars}, + - * / ** ^ and parentheses')
    source = text.replace('^', '**')
    try:
        tree = ast.parse(source.strip(), mode='eval')
        _measure(tree.body, nvars)
    except (SyntaxError, RecursionError, MemoryError) as exc:
        raise InvalidInput(f'cannot read {text!r} as a polynomial in x1..x{nvars}') from exc
    return source.strip()


def _measure(node, nvars: int) -> _ExprSize:
    if isinstance(node, ast.Constant) and type(node.value) is int:
        size = _ExprSize(0, 1, node.value.bit_length())
    elif isinstance(node, ast.Name):
        match = _VARIABLE_NAME.fullmatch(node.id)
        if not match or int(match.group(1)) > nvars:
            raise InvalidInput(f'unknown variable {node.id!r}; expected x1..x{nvars}')
        size = _ExprSize(1, 1, 0)
    elif isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.UAdd, ast.USub)):
        size = _measure(node.operand, nvars)
    elif isinstance(node, ast.BinOp) and isinstance(node.op, ast.Pow):
        exponent = node.right
        if not (isinstance(exponent, ast.Constant) and type(exponent.value) is int):
            raise InvalidInput('exponents must be nonnegative integer literals')
        base, e = _measure(node.left, nvars), exponent.value
        if e > MAX_EXPR_DEGREE:
            raise ResourceLimitExceeded(f'exponent {e} exceeds {MAX_EXPR_DEGREE}', limit='degree', value=e)
        size = _ExprSize(base.degree * e, min(base.terms ** e, MAX_EXPR_TERMS + 1), base.bits * e)
    elif isinstance(node, ast.BinOp) and isinstance(node.op, (ast.Add, ast.Sub, ast.Mult, ast.Div)):
        left, right = _measure(node.left, nvars), _measure(node.right, nvars)
        if isinstance(node.op, ast.Mult):
            size = _ExprSize(left.degree + right.degree, left.terms * right.terms, left.bits + right.bits)
        elif isinstance(node.op, ast.Div):
            if right.degree:
                raise InvalidInput('only division by constants is allowed')
            size = _ExprSize(left.degree, left.terms, left.bits + right.bits)
        else:
            size = _ExprSize(max(left.degree, right.degree), left.terms + right.terms,
                             max(left.bits, right.bits) + 1)
    else:
        raise InvalidInput(f'unsupported syntax {type(node).__name__}')

    size = _ExprSize(size.degree, min(size.terms, comb(nvars + size.degree, nvars)), size.bits)
    if size.degree > MAX_EXPR_DEGREE:
        raise ResourceLimitExceeded(f'degree may reach {size.degree}, above {MAX_EXPR_DEGREE}',
                                    limit='degree', value=size.degree)
    if size.terms > MAX_EXPR_TERMS:
        raise ResourceLimitExceeded(f'expansion may reach {size.terms} terms, above {MAX_EXPR_TERMS}',
                                    limit='terms', value=size.terms)
    if size.bits > MAX_COEFFICIENT_BITS:
        raise ResourceLimitExceeded(f'coefficients may reach {size.bits} bits, above {MAX_COEFFICIENT_BITS}',
                                    limit='coefficient_bits', value=size.bits)
    return size


@dataclass(frozen=True)
class SparsePoly:
    nvars: int
    terms: tuple  # ((monomial, coefficient), ...) in descending grlex order, no zero coefficients

    @classmethod
    def from_dict(cls, nvars: int, mapping: Mapping | Iterable) -> SparsePoly:
        if nvars < 1:
            raise InvalidInput('a polynomial needs at least one variable')
        items = mapping.items() if isinstance(mapping, Mapping) else mapping
        collected = {}
        for exps, coeff in items:
            exps = _check_monomial(exps, nvars)
            collected[exps] = collected.get(exps, ZERO) + to_rational(coeff)
        kept = [(exps, c) for exps, c in collected.items() if c != 0]
        return cls(nvars, tuple(sorted(kept, key=_grlex_key, reverse=True)))

    @classmethod
    def zero(cls, nvars: int) -> SparsePoly:
        return cls(nvars, ())

    @classmethod
    def constant(cls, value, nvars: int) -> SparsePoly:
        return cls.from_dict(nvars, {(0,) * nvars: value})

    @classmethod
    def variable(cls, index: int, nvars: int) -> SparsePoly:
        return cls.monomial_of({index}, nvars)

    @classmethod
    def monomial_of(cls, support: Iterable[int], nvars: int, coeff=ONE) -> SparsePoly:
        """The square-free monomial coeff · Π_{j in support} x_j."""
        support = _check_vars(support, nvars)
        return cls.from_dict(nvars, {tuple(1 if j + 1 in support else 0 for j in range(nvars)): coeff})

    @classmethod
    def parse(cls, text: str, nvars: int) -> SparsePoly:
        """
        Read an expression such as ``"x1**2*x2 - 3/2*x3"`` exactly over QQ.

        Only integer literals, the variables x1..x<nvars>, ``+ - * / ** ^`` and
        parentheses are accepted. The size of the expansion is bounded from the
        syntax tree before sympy sees the text.
        """
        gens = symbols(f'x1:{nvars + 1}')
        source = _checked_source(text, nvars)
        try:
            expr = parse_expr(source, local_dict={str(g): g for g in gens}, global_dict={'Integer': Integer},
                              transformations=(auto_number,))
            if expr.has(S.ComplexInfinity, S.NaN):
                raise ValueError('division by zero')
            poly = Poly(expr, *gens, domain=QQ)
        except (SympifyError, BasePolynomialError, TypeError, ValueError, SyntaxError, NameError,
                ZeroDivisionError) as exc:
            raise InvalidInput(f'cannot read {text!r} as a polynomial in x1..x{nvars}') from exc
        return cls.from_dict(nvars, dict(poly.terms()))

    @cached_property
    def coefficients(self) -> dict:
        return dict(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self):
        """Total degree; the zero polynomial has degree -oo."""
        if not self.terms:
            return S.NegativeInfinity
        return max(sum(exps) for exps, _ in self.terms)

    @property
    def is_homogeneous(self) -> bool:
        return len({sum(exps) for exps, _ in self.terms}) <= 1

    def support(self) -> frozenset[int]:
        used = set()
        for exps, _ in self.terms:
            used |= support_of(exps)
        return frozenset(used)

    def _compatible(self, other: SparsePoly):
        if not isinstance(other, SparsePoly):
            raise InvalidInput(f'cannot combine a polynomial with {type(other).__name__}')
        if other.nvars != self.nvars:
            raise InvalidInput(f'variable count mismatch: {self.nvars} vs {other.nvars}')

    def __add__(self, other: SparsePoly) -> SparsePoly:
        self._compatible(other)
        return SparsePoly.from_dict(self.nvars, list(self.terms) + list(other.terms))

    def __neg__(self) -> SparsePoly:
        return SparsePoly(self.nvars, tuple((exps, -c) for exps, c in self.terms))

    def __sub__(self, other: SparsePoly) -> SparsePoly:
        self._compatible(other)
        return self + (-other)

    def __mul__(self, other) -> SparsePoly:
        if not isinstance(other, SparsePoly):
            return self.scale(other)
        self._compatible(other)
        products = [
            (tuple(a + b for a, b in zip(e1, e2)), c1 * c2)
            for e1, c1 in self.terms
            for e2, c2 in other.terms
        ]
        return SparsePoly.from_dict(self.nvars, products)

    def scale(self, factor) -> SparsePoly:
        factor = to_rational(factor)
        if factor == 0:
            return SparsePoly.zero(self.nvars)
        return SparsePoly(self.nvars, tuple((exps, c * factor) for exps, c in self.terms))

    __rmul__ = scale

    def eval(self, point: Sequence):
        if len(point) != self.nvars:
            raise InvalidInput(f'point of length {len(point)} for a polynomial in {self.nvars} variables')
        point = [to_rational(x) for x in point]
        total = ZERO
        for exps, coeff in self.terms:
            value = coeff
            for x, e in zip(point, exps):
                if e:
                    value *= x ** e
            total += value
        return total

    def substitute_zero(self, variables: Iterable[int]) -> SparsePoly:
        """Compose with the projection that sets the given coordinates to zero."""
        variables = _check_vars(variables, self.nvars)
        if not variables:
            return self
        return SparsePoly(self.nvars, tuple(
            (exps, c) for exps, c in self.terms if all(exps[v - 1] == 0 for v in variables)
        ))

    def variable_quotient(self, index: int) -> SparsePoly:
        """The exact quotient self / x_index; every term must contain x_index."""
        _check_vars({index}, self.nvars)
        lowered = []
        for exps, c in self.terms:
            if exps[index - 1] == 0:
                raise PreconditionViolation(
                    f'term {_format_term(exps, c)} is not divisible by x{index}', variable=index)
            exps = list(exps)
            exps[index - 1] -= 1
            lowered.append((tuple(exps), c))
        return SparsePoly.from_dict(self.nvars, lowered)

    def __str__(self):
        if not self.terms:
            return '0'
        text = ''
        for i, (exps, c) in enumerate(self.terms):
            term = _format_term(exps, abs(c))
            if i == 0:
                text = ('-' if c < 0 else '') + term
            else:
                text += (' - ' if c < 0 else ' + ') + term
        return text


def _format_term(exps: Monomial, coeff) -> str:
    factors = [f'x{j + 1}' if e == 1 else f'x{j + 1}^{e}' for j, e in enumerate(exps) if e]
    if not factors:
        return str(coeff)
    if coeff == 1:
        return '*'.join(factors)
    return str(coeff) + '*' + '*'.join(factors)
