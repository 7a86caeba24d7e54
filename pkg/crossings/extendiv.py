"""
Polynomials on unions of coordinate linear varieties.

* ``extend_inclusion_exclusion`` glues compatible pieces h_i (one per
  component) into one polynomial H = Σ_I (-1)^(#I+1) h ∘ π_I on Q^m.
* ``divide_on_crossings`` writes a polynomial that vanishes on the union as
  Σ_σ f_σ x^σ over transversals σ of the type, by induction on the number of
  components and on the variables, splitting f = f1 · x_v + f(x_v = 0).
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .exceptions import InvalidInput, PreconditionViolation
from .monomideal import TypeLambda, associated_monomials, canonical, ideal_membership, minimalize_in_order
from .poly import SparsePoly

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PiecewisePoly:
    """Piece i lives on component i as x ↦ h_i(π_i(x))."""
    type_lambda: TypeLambda
    pieces: tuple[SparsePoly, ...]

    def __post_init__(self):
        if len(self.pieces) != self.type_lambda.s:
            raise InvalidInput(f'{len(self.pieces)} pieces for {self.type_lambda.s} components')
        for piece in self.pieces:
            if piece.nvars != self.type_lambda.ambient:
                raise InvalidInput(f'piece in {piece.nvars} variables on Q^{self.type_lambda.ambient}')

    def restricted(self, i: int) -> SparsePoly:
        return self.pieces[i - 1].substitute_zero(self.type_lambda.components[i - 1])


def combine(alpha, first: PiecewisePoly, beta, second: PiecewisePoly) -> PiecewisePoly:
    if first.type_lambda != second.type_lambda:
        raise InvalidInput('linear combinations need pieces on the same type')
    return PiecewisePoly(first.type_lambda, tuple(
        a * alpha + b * beta for a, b in zip(first.pieces, second.pieces)
    ))


def check_compatible(type_lambda: TypeLambda, pieces: Sequence[SparsePoly]) -> bool:
    """Pieces agree on every pairwise overlap L_i ∩ L_j."""
    piecewise = PiecewisePoly(type_lambda, tuple(pieces))
    components = type_lambda.components
    for i, j in itertools.combinations(range(type_lambda.s), 2):
        overlap = components[i] | components[j]
        if piecewise.pieces[i].substitute_zero(overlap) != piecewise.pieces[j].substitute_zero(overlap):
            logger.debug('pieces %d and %d disagree on their overlap', i + 1, j + 1)
            return False
    return True


def extend_inclusion_exclusion(piecewise: PiecewisePoly,
                               representative: Callable[[tuple[int, ...]], int] | None = None) -> SparsePoly:
    """
    H = Σ_{∅≠I} (-1)^(#I+1) h_r(π_I) where π_I zeroes every variable of the
    components in I and r ∈ I is ``representative(I)`` (by default min I).
    """
    type_lambda = piecewise.type_lambda
    if not check_compatible(type_lambda, piecewise.pieces):
        raise PreconditionViolation('pieces do not agree on the overlaps of their components')
    pick = representative or min
    total = SparsePoly.zero(type_lambda.ambient)
    for size in range(1, type_lambda.s + 1):
        sign = 1 if size % 2 else -1
        for index in itertools.combinations(range(1, type_lambda.s + 1), size):
            r = pick(index)
            if r not in index:
                raise InvalidInput(f'representative {r} is not in {list(index)}')
            zeroed = frozenset().union(*(type_lambda.components[i - 1] for i in index))
            total = total + piecewise.pieces[r - 1].substitute_zero(zeroed).scale(sign)
    return total


def lemma_easy_split(f: SparsePoly, v: int) -> tuple[SparsePoly, SparsePoly]:
    """f = f1 · x_v + g with g = f(x_v = 0)."""
    g = f.substitute_zero({v})
    return (f - g).variable_quotient(v), g


@dataclass(frozen=True)
class Decomposition:
    nvars: int
    degree: object  # degree of the divided polynomial, -oo for zero
    entries: tuple  # ((σ, f_σ), ...) in canonical σ order, nonzero f_σ only

    def as_dict(self) -> dict:
        return dict(self.entries)

    def recombine(self) -> SparsePoly:
        total = SparsePoly.zero(self.nvars)
        for sigma, coeff in self.entries:
            total = total + coeff * SparsePoly.monomial_of(sigma, self.nvars)
        return total

    @property
    def max_sigma(self) -> int:
        return max((len(sigma) for sigma, _ in self.entries), default=0)


def _accumulate(into: dict, sigma: frozenset[int], coeff: SparsePoly):
    if coeff.is_zero:
        return
    into[sigma] = into[sigma] + coeff if sigma in into else coeff


def _divide(components: tuple[frozenset[int], ...], f: SparsePoly) -> dict:
    if f.is_zero:
        return {}
    if not components:
        # nothing to vanish on: f itself is the coefficient of the empty monomial
        return {frozenset(): f}

    entries = {}
    if len(components) == 1:
        remainder = f
        for v in sorted(components[0]):
            quotient, remainder = lemma_easy_split(remainder, v)
            _accumulate(entries, frozenset({v}), quotient)
        if not remainder.is_zero:
            raise PreconditionViolation('not in ideal: polynomial does not vanish on a component')
        return entries

    v = min(components[0])
    f1, g = lemma_easy_split(f, v)
    # f1 vanishes on the components that do not use x_v
    missing = tuple(lam for lam in components if v not in lam)
    logger.debug('divide: split on x%d, %d components without it', v, len(missing))
    for tau, coeff in _divide(missing, f1).items():
        _accumulate(entries, tau | {v}, coeff)

    if g.is_zero:
        return entries
    if frozenset({v}) in components:
        raise PreconditionViolation(f'not in ideal: polynomial does not vanish on {{x{v} = 0}}')
    # g lives on {x_v = 0}, where component λ reads λ ∖ {v}; the next split uses the first of them
    restricted = minimalize_in_order(lam - {v} for lam in components)
    for sigma, coeff in _divide(restricted, g).items():
        _accumulate(entries, sigma, coeff)
    return entries


def _fold(entries: dict, generators: tuple[frozenset[int], ...], nvars: int) -> dict:
    folded = {}
    for sigma, coeff in entries.items():
        target = next(g for g in generators if g <= sigma)
        extra = sigma - target
        if extra:
            coeff = coeff * SparsePoly.monomial_of(extra, nvars)
        _accumulate(folded, target, coeff)
    return folded


def divide_on_crossings(type_lambda: TypeLambda, f: SparsePoly, fold_to_minimal: bool = False) -> Decomposition:
    if f.nvars != type_lambda.ambient:
        raise InvalidInput(f'polynomial in {f.nvars} variables on Q^{type_lambda.ambient}')
    ideal = associated_monomials(type_lambda)
    if not ideal_membership(f, ideal):
        raise PreconditionViolation('not in ideal: polynomial does not vanish on the union of components')
    entries = _divide(type_lambda.components, f)
    if fold_to_minimal:
        entries = _fold(entries, ideal.generators, f.nvars)
    ordered = tuple((sigma, entries[sigma]) for sigma in canonical(entries))
    return Decomposition(f.nvars, f.degree, ordered)


def loss_constant(m: int, n: int, divisor: bool = False) -> int:
    """Differentiability classes lost when approximating maps into a crossing target."""
    if m < 1 or n < 1:
        raise InvalidInput('dimensions must be positive')
    if divisor:
        return m * (n - 1)
    return m * (math.comb(n, n // 2) - 1)
