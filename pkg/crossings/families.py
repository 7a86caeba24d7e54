"""
Finite families of linear subspaces of Q^m.

For a family L_1, …, L_s and a nonempty index set I ⊆ {1..s} (1-based):

    L_I     = ∩_{i ∈ I} L_i
    L^(p)   = Σ_{#I = p} L_I,  with L^(s+1) = {0}
    V_I     = L^(p+1) ∩ L_I   for #I = p
    W_I     = a supplement of V_I in L_I, chosen greedily and deterministically

The family is extremal when dim L^(p) reaches its upper bound
dim L^(p+1) + Σ_{#I=p} (dim L_I - dim Σ_{#J=p, J≠I} L_J ∩ L_I) at every level.
Extremal families are exactly those with an adapted basis, and two of them are
linearly equivalent exactly when their W-dimensions agree.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from sympy import ImmutableMatrix

from .exactla import (
    Subspace, Vector, apply, canonicalize, columns_matrix, coordinate_subspace,
    extend_to_basis, intersect, rank, sum_all, zero,
)
from .exceptions import InvalidInput, PreconditionViolation, ResourceLimitExceeded
from .monomideal import TypeLambda

logger = logging.getLogger(__name__)

DEFAULT_PERM_BUDGET = 10 ** 6


def nonempty_subsets(s: int) -> list[frozenset[int]]:
    """Every nonempty I ⊆ {1..s}, by size then lexicographically."""
    return [
        frozenset(combo)
        for p in range(1, s + 1)
        for combo in itertools.combinations(range(1, s + 1), p)
    ]


def subsets_of_size(s: int, p: int) -> list[frozenset[int]]:
    return [frozenset(combo) for combo in itertools.combinations(range(1, s + 1), p)]


@dataclass(frozen=True)
class LinearFamily:
    ambient: int
    members: tuple[Subspace, ...]

    def __post_init__(self):
        if not self.members:
            raise InvalidInput('a family needs at least one subspace')
        for member in self.members:
            if member.ambient != self.ambient:
                raise InvalidInput(f'member of Q^{member.ambient} in a family of Q^{self.ambient}')
        for i, a in enumerate(self.members, 1):
            for j, b in enumerate(self.members, 1):
                if i != j and a.is_subspace_of(b):
                    raise InvalidInput(f'member {i} is contained in member {j} (immersed component)',
                                       members=[i, j])

    @classmethod
    def of(cls, ambient: int, bases: Iterable[Iterable[Sequence]], minimal: bool = False) -> LinearFamily:
        members = [canonicalize(basis, ambient) for basis in bases]
        if minimal:
            members = _drop_immersed(members)
        return cls(ambient, tuple(members))

    @classmethod
    def from_type(cls, type_lambda: TypeLambda) -> LinearFamily:
        """The coordinate family of a type: L_i = {x_j = 0 : j ∈ λ_i}."""
        return cls(type_lambda.ambient, tuple(
            coordinate_subspace(type_lambda.ambient, lam) for lam in type_lambda.components
        ))

    @property
    def s(self) -> int:
        return len(self.members)

    def image(self, matrix: ImmutableMatrix) -> LinearFamily:
        return LinearFamily(matrix.rows, tuple(apply(matrix, member) for member in self.members))

    @cached_property
    def levels(self) -> LevelData:
        return LevelData(self)

    def check_index_set(self, index) -> frozenset[int]:
        index = frozenset(index)
        if not index:
            raise InvalidInput('index sets must be nonempty')
        if not index <= set(range(1, self.s + 1)):
            raise InvalidInput(f'index set {sorted(index)} outside 1..{self.s}')
        return index


def _drop_immersed(members: list[Subspace]) -> list[Subspace]:
    kept = []
    for i, member in enumerate(members):
        immersed = any(
            j != i and member.is_subspace_of(other) and (member != other or j < i)
            for j, other in enumerate(members)
        )
        if immersed:
            logger.debug('dropping immersed member %d', i + 1)
        else:
            kept.append(member)
    return kept


class LevelData:
    """All L_I, L^(p), V_I and W_I of a family, computed once."""

    def __init__(self, family: LinearFamily):
        s, m = family.s, family.ambient
        self.intersections = {}
        for index in nonempty_subsets(s):
            last = max(index)
            if len(index) == 1:
                self.intersections[index] = family.members[last - 1]
            else:
                self.intersections[index] = intersect(self.intersections[index - {last}],
                                                      family.members[last - 1])

        self.levels = {s + 1: zero(m)}
        for p in range(s, 0, -1):
            self.levels[p] = sum_all((self.intersections[i] for i in subsets_of_size(s, p)), m)

        self.v = {}
        self.w = {}
        self.overlaps = {}
        for index in nonempty_subsets(s):
            p = len(index)
            lifted = self.intersections[index]
            self.v[index] = intersect(self.levels[p + 1], lifted)
            self.w[index] = _supplement(self.v[index], lifted)
            # Σ_{#J=p, J≠I} L_J ∩ L_I = Σ_{j∉I} L_{I ∪ {j}}: every such I ∪ J contains some I ∪ {j}
            self.overlaps[index] = sum_all(
                (self.intersections[index | {j}] for j in range(1, s + 1) if j not in index), m)


def _supplement(inner: Subspace, outer: Subspace) -> Subspace:
    """Greedy supplement of ``inner`` in ``outer`` over the canonical rows of ``outer``."""
    held = list(inner.rows)
    chosen = []
    for row in outer.rows:
        if len(held) == outer.dim:
            break
        if rank(held + [row]) > len(held):
            held.append(row)
            chosen.append(row)
    return canonicalize(chosen, outer.ambient)


def component_intersection(family: LinearFamily, index: Iterable[int]) -> Subspace:
    return family.levels.intersections[family.check_index_set(index)]


def level_space(family: LinearFamily, p: int) -> Subspace:
    if not 1 <= p <= family.s + 1:
        raise InvalidInput(f'level {p} outside 1..{family.s + 1}')
    return family.levels.levels[p]


def supplement_W(family: LinearFamily, index: Iterable[int]) -> Subspace:
    return family.levels.w[family.check_index_set(index)]


@dataclass(frozen=True)
class LevelRow:
    level: int
    lhs: int
    rhs: int

    @property
    def tight(self) -> bool:
        return self.lhs == self.rhs


@dataclass(frozen=True)
class ExtremalityCertificate:
    rows: tuple[LevelRow, ...]

    @property
    def extremal(self) -> bool:
        return all(row.tight for row in self.rows)

    @property
    def first_failure(self) -> LevelRow | None:
        return next((row for row in self.rows if not row.tight), None)

    def __bool__(self):
        return self.extremal


def is_extremal(family: LinearFamily) -> ExtremalityCertificate:
    data = family.levels
    rows = []
    for p in range(1, family.s + 1):
        bound = data.levels[p + 1].dim + sum(
            data.intersections[i].dim - data.overlaps[i].dim for i in subsets_of_size(family.s, p)
        )
        rows.append(LevelRow(p, data.levels[p].dim, bound))
    certificate = ExtremalityCertificate(tuple(rows))
    logger.debug('extremality of %d subspaces in Q^%d: %s', family.s, family.ambient,
                 [(r.level, r.lhs, r.rhs) for r in rows])
    if certificate.extremal:
        assert family.s <= sperner_bound(family.ambient), 'extremal family beyond the Sperner bound'
    return certificate


@dataclass(frozen=True)
class AdaptedBasis:
    vectors: tuple[Vector, ...]
    blocks: tuple  # ((I, (vector, ...)), ...) spanning each nonzero W_I, largest I first

    def block(self, index: Iterable[int]) -> tuple[Vector, ...]:
        index = frozenset(index)
        return next((vectors for key, vectors in self.blocks if key == index), ())


def _block_order(index: frozenset[int]):
    return (-len(index), tuple(sorted(index)))


def _blocks(family: LinearFamily):
    w = family.levels.w
    return tuple(
        (index, w[index].rows)
        for index in sorted(w, key=_block_order)
        if w[index].dim
    )


def verify_adapted(family: LinearFamily, vectors: Sequence[Vector]) -> bool:
    """B is a basis of Q^m and B ∩ L_i spans L_i for every member."""
    vectors = list(vectors)
    if len(vectors) != family.ambient or rank(vectors) != family.ambient:
        return False
    for member in family.members:
        inside = [v for v in vectors if member.contains(v)]
        if len(inside) != member.dim:
            return False
    return True


def adapted_basis(family: LinearFamily) -> AdaptedBasis | None:
    """Bases of all W_I (largest I first) extended to Q^m; ``None`` when not extremal."""
    if not is_extremal(family):
        return None
    blocks = _blocks(family)
    gathered = [v for _, vectors in blocks for v in vectors]
    basis = AdaptedBasis(extend_to_basis(gathered, family.ambient), blocks)
    if not verify_adapted(family, basis.vectors):
        raise ArithmeticError('constructed basis is not adapted to an extremal family')
    return basis


def load_of_collection(family: LinearFamily, collection: Iterable[Iterable[int]]) -> int:
    """dim(L_{I_1} + ⋯ + L_{I_r}) for distinct nonempty I_1, …, I_r."""
    sets = [family.check_index_set(index) for index in collection]
    if not sets:
        raise InvalidInput('a collection needs at least one index set')
    if len(set(sets)) != len(sets):
        raise InvalidInput('index sets of a collection must be distinct')
    return sum_all((family.levels.intersections[i] for i in sets), family.ambient).dim


@dataclass(frozen=True)
class LoadSignature:
    s: int
    values: tuple  # ((I, dim W_I), ...) over every nonempty I, canonical order

    def __getitem__(self, index) -> int:
        index = frozenset(index)
        return next(dim for key, dim in self.values if key == index)

    def as_dict(self) -> dict:
        return dict(self.values)

    @property
    def total(self) -> int:
        return sum(dim for _, dim in self.values)

    def predicted_load(self, collection: Iterable[Iterable[int]]) -> int:
        """Σ w(J) over every J containing one of the I_k."""
        sets = [frozenset(index) for index in collection]
        return sum(dim for key, dim in self.values if any(index <= key for index in sets))


def load_signature(family: LinearFamily) -> LoadSignature:
    if not is_extremal(family):
        raise PreconditionViolation('load signatures are defined for extremal families only')
    w = family.levels.w
    return LoadSignature(family.s, tuple((index, w[index].dim) for index in nonempty_subsets(family.s)))


def _member_invariant(family: LinearFamily, i: int):
    data = family.levels.intersections
    return (
        family.members[i - 1].dim,
        tuple(sorted(data[frozenset({i, j})].dim for j in range(1, family.s + 1) if j != i)),
    )


def families_equivalent(first: LinearFamily, second: LinearFamily, reorder: bool = False,
                        budget: int = DEFAULT_PERM_BUDGET) -> tuple[int, ...] | None:
    """
    A permutation π with w_first(I) = w_second(π(I)) for every I, or ``None``.
    Without ``reorder`` only the identity is tried.
    """
    if first.ambient != second.ambient or first.s != second.s:
        return None
    ours, theirs = load_signature(first), load_signature(second)
    s = first.s
    identity = tuple(range(1, s + 1))
    if ours == theirs:
        return identity
    if not reorder:
        return None

    ours, theirs = ours.as_dict(), theirs.as_dict()
    candidates = {
        i: [j for j in identity if _member_invariant(second, j) == _member_invariant(first, i)]
        for i in identity
    }
    image = {}
    visited = 0

    def consistent(i: int) -> bool:
        # every I ⊆ {1..i} that contains i
        for size in range(0, i):
            for rest in itertools.combinations(range(1, i), size):
                index = frozenset(rest) | {i}
                if ours[index] != theirs[frozenset(image[k] for k in index)]:
                    return False
        return True

    def search(i: int) -> bool:
        nonlocal visited
        if i > s:
            return True
        for j in candidates[i]:
            if j in image.values():
                continue
            visited += 1
            if visited > budget:
                raise ResourceLimitExceeded(f'permutation search exceeded its budget of {budget}',
                                            budget=budget)
            image[i] = j
            if consistent(i) and search(i + 1):
                return True
            del image[i]
        return False

    found = search(1)
    logger.debug('reorder search over %d members: %d nodes, found=%s', s, visited, found)
    return tuple(image[i] for i in identity) if found else None


def build_isomorphism(first: LinearFamily, second: LinearFamily) -> ImmutableMatrix:
    """An invertible f with f(first.L_i) = second.L_i, sending W_I bases onto W'_I bases."""
    if families_equivalent(first, second, reorder=False) is None:
        raise PreconditionViolation('the families do not have the same load in this ordering')
    source, target = adapted_basis(first), adapted_basis(second)
    f = columns_matrix(target.vectors) * columns_matrix(source.vectors).inv()
    f = ImmutableMatrix(f)
    for i, (a, b) in enumerate(zip(first.members, second.members), 1):
        if apply(f, a) != b:
            raise ArithmeticError(f'isomorphism does not map member {i} onto its partner')
    return f


def coordinate_model(family: LinearFamily) -> TypeLambda:
    """Read the family in adapted coordinates: λ_i = positions of basis vectors outside L_i."""
    basis = adapted_basis(family)
    if basis is None:
        raise PreconditionViolation('only extremal families have a coordinate model')
    components = []
    for member in family.members:
        lam = frozenset(k for k, v in enumerate(basis.vectors, 1) if not member.contains(v))
        if not lam:
            raise PreconditionViolation('the whole space is not a crossing component')
        components.append(lam)
    return TypeLambda(family.ambient, tuple(components))


def sperner_bound(m: int) -> int:
    if m < 1:
        raise InvalidInput('ambient dimension must be at least 1')
    return math.comb(m, m // 2)
