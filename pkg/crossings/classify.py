"""
Germ-level classification.

A germ is described by its arithmetic shadow: the tangent spaces of its
(non-singular, irreducible) components and the dimension of every intersection
of components. Non-singularity of the components cannot be read from that
shadow and is taken on trust.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Mapping

from .exceptions import InvalidInput, PreconditionViolation, ResourceLimitExceeded
from .families import (
    DEFAULT_PERM_BUDGET, LinearFamily, component_intersection, is_extremal, load_signature, nonempty_subsets,
)
from .monomideal import TypeLambda

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GermDescriptor:
    ambient: int
    tangents: LinearFamily
    germ_dims: tuple  # ((I, dim), ...) over every nonempty I, canonical order

    def __post_init__(self):
        if self.tangents.ambient != self.ambient:
            raise InvalidInput('tangent family lives in a different ambient space')
        dims = dict(self.germ_dims)
        expected = set(nonempty_subsets(self.tangents.s))
        if set(dims) != expected:
            raise InvalidInput('germ dimensions must be given for every nonempty index set')
        for i, member in enumerate(self.tangents.members, 1):
            if dims[frozenset({i})] != member.dim:
                raise InvalidInput(f'component {i} has dimension {dims[frozenset({i})]} '
                                   f'but its tangent space has dimension {member.dim}')
        for index, dim in dims.items():
            if dim < 0:
                raise InvalidInput(f'negative dimension for {sorted(index)}')
            for k in index:
                smaller = index - {k}
                if smaller and dims[smaller] < dim:
                    raise InvalidInput(f'germ dimension grows from {sorted(smaller)} to {sorted(index)}')

    @classmethod
    def of(cls, tangents: LinearFamily, germ_dims: Mapping | None = None) -> GermDescriptor:
        """Unlisted index sets take the dimension of the tangent intersection."""
        given = {frozenset(k): v for k, v in (germ_dims or {}).items()}
        for index in given:
            tangents.check_index_set(index)
        table = tuple(
            (index, given[index] if index in given else component_intersection(tangents, index).dim)
            for index in nonempty_subsets(tangents.s)
        )
        return cls(tangents.ambient, tangents, table)

    @classmethod
    def from_type(cls, type_lambda: TypeLambda) -> GermDescriptor:
        return cls.of(LinearFamily.from_type(type_lambda))

    def dim(self, index) -> int:
        return dict(self.germ_dims)[frozenset(index)]


@dataclass(frozen=True)
class SingularityVerdict:
    result: bool
    witness: dict | None = None

    def __bool__(self):
        return self.result


def is_monomial_singularity(descriptor: GermDescriptor) -> SingularityVerdict:
    """Extremal tangent cone and every germ intersection as large as the tangent one."""
    certificate = is_extremal(descriptor.tangents)
    if not certificate.extremal:
        row = certificate.first_failure
        return SingularityVerdict(False, {
            'reason': 'tangent cone is not extremal', 'level': row.level, 'lhs': row.lhs, 'rhs': row.rhs,
        })
    for index, germ in descriptor.germ_dims:
        tangent = component_intersection(descriptor.tangents, index).dim
        if germ != tangent:
            logger.debug('germ intersection %s has dimension %d, tangent %d', sorted(index), germ, tangent)
            return SingularityVerdict(False, {
                'reason': 'intersection dimension mismatch', 'I': sorted(index), 'germ': germ, 'tangent': tangent,
            })
    return SingularityVerdict(True)


def multiplicity(type_lambda: TypeLambda) -> int:
    if len({len(lam) for lam in type_lambda.components}) != 1:
        raise PreconditionViolation('multiplicity is defined for pure-dimensional types only',
                                    dims=list(type_lambda.dims))
    return type_lambda.s


def _column_key(signature: dict, i: int):
    return tuple(sorted((len(index), w) for index, w in signature.items() if i in index))


def type_invariant(type_lambda: TypeLambda, budget: int = DEFAULT_PERM_BUDGET) -> tuple:
    """
    (m, s, encoding) where encoding lists w(I) over every nonempty I after the
    lexicographically smallest relabelling of the components. Components are
    first sorted by (dimension, signature column); only ties are permuted.
    """
    family = LinearFamily.from_type(type_lambda)
    signature = load_signature(family).as_dict()
    s = type_lambda.s
    keys = {i: (family.members[i - 1].dim, _column_key(signature, i)) for i in range(1, s + 1)}
    order = sorted(range(1, s + 1), key=keys.get)
    blocks = [list(group) for _, group in itertools.groupby(order, key=keys.get)]
    subsets = nonempty_subsets(s)

    best = None
    visited = 0
    for arrangement in itertools.product(*(itertools.permutations(block) for block in blocks)):
        visited += 1
        if visited > budget:
            raise ResourceLimitExceeded(f'type invariant search exceeded its budget of {budget}', budget=budget)
        # position k of the canonical labelling holds original component relabel[k]
        relabel = [i for block in arrangement for i in block]
        encoding = tuple(signature[frozenset(relabel[k - 1] for k in index)] for index in subsets)
        if best is None or encoding < best:
            best = encoding
    logger.debug('type invariant over %d relabellings', visited)
    return (type_lambda.ambient, s, best)


def types_equivalent(first: TypeLambda, second: TypeLambda, budget: int = DEFAULT_PERM_BUDGET) -> bool:
    if first.ambient != second.ambient:
        return False
    return type_invariant(first, budget) == type_invariant(second, budget)
