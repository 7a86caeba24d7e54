"""
Square-free monomial ideals and unions of coordinate linear varieties.

A square-free monomial x^σ is encoded by its variable set σ (1-based indices),
an ideal by the antichain of its minimal generators, and a union of coordinate
varieties by its type: the antichain of vanishing-variable sets of the
components. Generators of the ideal and components of the zero set are dual to
each other through minimal transversals.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Iterable

from .exceptions import InvalidInput, ResourceLimitExceeded
from .poly import SparsePoly, support_of

logger = logging.getLogger(__name__)

TRANSVERSAL_GUARD = 20


def index_set(values: Iterable[int], ambient: int | None = None) -> frozenset[int]:
    values = list(values)
    if any(isinstance(v, bool) or not isinstance(v, int) for v in values):
        raise InvalidInput(f'{values} is not a list of variable indices')
    result = frozenset(values)
    if len(result) != len(values):
        raise InvalidInput(f'repeated index in {values}')
    if ambient is not None and not result <= set(range(1, ambient + 1)):
        raise InvalidInput(f'{sorted(result)} has indices outside 1..{ambient}')
    return result


def canonical_key(subset: frozenset[int]):
    return (len(subset), tuple(sorted(subset)))


def canonical(sets: Iterable[frozenset[int]]) -> tuple[frozenset[int], ...]:
    return tuple(sorted(set(sets), key=canonical_key))


def is_antichain(sets: Iterable[frozenset[int]]) -> bool:
    sets = list(sets)
    return not any(i != j and a <= b for i, a in enumerate(sets) for j, b in enumerate(sets))


def minimalize(sets: Iterable[frozenset[int]]) -> tuple[frozenset[int], ...]:
    """Drop duplicates and every set that contains another one."""
    ordered = canonical(frozenset(s) for s in sets)
    kept = []
    for candidate in ordered:
        if not any(k <= candidate for k in kept):
            kept.append(candidate)
    return tuple(kept)


def minimalize_in_order(sets: Iterable[frozenset[int]]) -> tuple[frozenset[int], ...]:
    """``minimalize`` that keeps the survivors in their first-seen order."""
    unique = list(dict.fromkeys(frozenset(s) for s in sets))
    return tuple(a for a in unique if not any(b < a for b in unique))


@dataclass(frozen=True)
class TypeLambda:
    """
    A type Λ = (λ_1, …, λ_s): component i is the coordinate variety
    {x_j = 0 : j ∈ λ_i} of dimension m - #λ_i. Component order is kept.
    """
    ambient: int
    components: tuple[frozenset[int], ...]

    def __post_init__(self):
        if self.ambient < 1:
            raise InvalidInput('ambient dimension must be at least 1')
        if not self.components:
            raise InvalidInput('a type needs at least one component')
        for lam in self.components:
            if not lam:
                raise InvalidInput('empty component: the whole space is not a crossing component')
            if not lam <= set(range(1, self.ambient + 1)):
                raise InvalidInput(f'component {sorted(lam)} has variables outside 1..{self.ambient}')
        if not is_antichain(self.components):
            raise InvalidInput('components must form an antichain (no immersed components)')

    @classmethod
    def of(cls, ambient: int, components: Iterable[Iterable[int]]) -> TypeLambda:
        return cls(ambient, tuple(index_set(c, ambient) for c in components))

    @property
    def s(self) -> int:
        return len(self.components)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(self.ambient - len(lam) for lam in self.components)

    def normalized(self) -> frozenset[frozenset[int]]:
        return frozenset(self.components)

    def as_lists(self) -> list[list[int]]:
        return [sorted(lam) for lam in self.components]


@dataclass(frozen=True)
class SquareFreeIdeal:
    """Minimal generators in canonical order; equal ideals are equal values."""
    ambient: int
    generators: tuple[frozenset[int], ...]

    def __post_init__(self):
        if self.ambient < 1:
            raise InvalidInput('ambient dimension must be at least 1')
        if not self.generators:
            raise InvalidInput('the zero ideal has no square-free generators')
        for sigma in self.generators:
            if not sigma:
                raise InvalidInput('the unit ideal is not a square-free monomial ideal here')
            if not sigma <= set(range(1, self.ambient + 1)):
                raise InvalidInput(f'generator {sorted(sigma)} has variables outside 1..{self.ambient}')
        if not is_antichain(self.generators):
            raise InvalidInput('generators must be pairwise incomparable')

    @classmethod
    def of(cls, ambient: int, generators: Iterable[Iterable[int]], minimal: bool = False) -> SquareFreeIdeal:
        sets = [index_set(g, ambient) for g in generators]
        if minimal:
            sets = minimalize(sets)
        return cls(ambient, canonical(sets))

    def contains_monomial(self, support: Iterable[int]) -> bool:
        support = frozenset(support)
        return any(sigma <= support for sigma in self.generators)

    def as_polys(self) -> list[SparsePoly]:
        return [SparsePoly.monomial_of(sigma, self.ambient) for sigma in self.generators]

    def as_lists(self) -> list[list[int]]:
        return [sorted(sigma) for sigma in self.generators]


def associated_products(type_lambda: TypeLambda) -> frozenset[frozenset[int]]:
    """One vanishing variable per component, repeated variables taken once."""
    return frozenset(
        frozenset(choice)
        for choice in itertools.product(*(sorted(lam) for lam in type_lambda.components))
    )


def associated_monomials(type_lambda: TypeLambda) -> SquareFreeIdeal:
    products = associated_products(type_lambda)
    ideal = SquareFreeIdeal(type_lambda.ambient, minimalize(products))
    logger.debug('associated monomials: %d raw products, %d minimal', len(products), len(ideal.generators))
    return ideal


def minimal_transversals(hypergraph: Iterable[Iterable[int]], guard: int = TRANSVERSAL_GUARD):
    """
    All inclusion-minimal sets meeting every edge, by enumerating subsets of
    the vertex set in order of size.
    """
    edges = [frozenset(e) for e in hypergraph]
    if not edges or not all(edges):
        raise InvalidInput('transversals need a nonempty family of nonempty sets')
    universe = sorted(frozenset().union(*edges))
    if len(universe) > guard:
        logger.warning('transversal enumeration refused: %d vertices, guard %d', len(universe), guard)
        raise ResourceLimitExceeded(
            f'{len(universe)} variables exceed the transversal guard of {guard}',
            variables=len(universe), guard=guard)
    found = []
    for size in range(1, len(universe) + 1):
        for combo in itertools.combinations(universe, size):
            candidate = frozenset(combo)
            if any(f <= candidate for f in found):
                continue
            if all(candidate & edge for edge in edges):
                found.append(candidate)
    return canonical(found)


def _decompose(generators: tuple[frozenset[int], ...]) -> tuple[frozenset[int], ...]:
    if all(len(sigma) == 1 for sigma in generators):
        return (frozenset().union(*generators),)

    common = frozenset.intersection(*generators)
    if common:
        # I = (x_v) ∩ (σ ∖ {v} : σ)
        v = min(common)
        logger.debug('decompose %s: common variable x%d', _show(generators), v)
        rest = minimalize(sigma - {v} for sigma in generators)
        return minimalize((frozenset({v}),) + _decompose(rest))

    # I = (x_v, τ : v ∉ τ) ∩ (σ ∖ {v}, τ : v ∉ τ) for a variable of a non-linear generator
    v = min(j for sigma in generators if len(sigma) >= 2 for j in sigma)
    logger.debug('decompose %s: split on x%d', _show(generators), v)
    without = [sigma for sigma in generators if v not in sigma]
    reduced = [sigma - {v} for sigma in generators if v in sigma]
    left = minimalize([frozenset({v})] + without)
    right = minimalize(reduced + without)
    return minimalize(_decompose(left) + _decompose(right))


def _show(generators) -> str:
    return '(' + ', '.join(''.join(f'x{j}' for j in sorted(s)) for s in generators) + ')'


def prime_decomposition(ideal: SquareFreeIdeal) -> tuple[frozenset[int], ...]:
    """
    Variable sets P_k with I = ∩_k (x_j : j ∈ P_k), by induction on the number
    of variable occurrences in the generators.
    """
    return canonical(_decompose(ideal.generators))


def zero_set(ideal: SquareFreeIdeal) -> TypeLambda:
    return TypeLambda(ideal.ambient, prime_decomposition(ideal))


def ideal_membership(f: SparsePoly, ideal: SquareFreeIdeal) -> bool:
    """Termwise: every term's variable support must contain a generator."""
    if f.nvars != ideal.ambient:
        raise InvalidInput(f'polynomial in {f.nvars} variables, ideal in {ideal.ambient}')
    return all(ideal.contains_monomial(support_of(exps)) for exps, _ in f.terms)


def colon_by_variable(ideal: SquareFreeIdeal, v: int) -> SquareFreeIdeal | None:
    """I : x_v. ``None`` stands for the unit ideal (x_v is itself a generator)."""
    index_set([v], ideal.ambient)
    if frozenset({v}) in ideal.generators:
        return None
    return SquareFreeIdeal(ideal.ambient, minimalize(sigma - {v} for sigma in ideal.generators))


def is_nonzerodivisor(ideal: SquareFreeIdeal, v: int) -> bool:
    """x_v is a non zero divisor mod I exactly when I : x_v = I."""
    return colon_by_variable(ideal, v) == ideal
