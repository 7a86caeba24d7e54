"""
Exact linear algebra over the rationals.

A subspace of Q^m is stored through the rows of its reduced row echelon basis,
so two ``Subspace`` values describe the same subspace exactly when they compare
equal. Elimination is delegated to sympy's ``DomainMatrix`` over ``QQ``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from sympy import ImmutableMatrix, Matrix, QQ, Rational
from sympy.polys.matrices import DomainMatrix

from .exceptions import InvalidInput

Vector = tuple  # tuple of sympy Rational, one entry per coordinate

ZERO = Rational(0)
ONE = Rational(1)


def to_rational(value) -> Rational:
    """Read an int, a Fraction, a sympy number or a ``"p/q"`` string exactly."""
    if isinstance(value, (bool, float)):
        raise InvalidInput(f'{value!r} is not an exact rational')
    try:
        result = Rational(value)
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f'{value!r} is not a rational number') from exc
    if not result.is_Rational:
        raise InvalidInput(f'{value!r} is not a rational number')
    return result


def vector(values: Iterable, ambient: int | None = None) -> Vector:
    result = tuple(to_rational(v) for v in values)
    if ambient is not None and len(result) != ambient:
        raise InvalidInput(f'vector of length {len(result)} in an ambient space of dimension {ambient}')
    return result


def unit(index: int, ambient: int) -> Vector:
    """The standard vector e_index (1-based)."""
    return tuple(ONE if j == index else ZERO for j in range(1, ambient + 1))


def _rref(rows: Sequence[Vector]) -> tuple[list[Vector], tuple[int, ...]]:
    if not rows:
        return [], ()
    reduced, pivots = DomainMatrix.from_Matrix(Matrix(list(rows))).convert_to(QQ).rref()
    reduced = reduced.to_Matrix()
    return [tuple(reduced.row(i)) for i in range(len(pivots))], tuple(pivots)


def rank(rows: Sequence[Vector]) -> int:
    return len(_rref(rows)[1])


def kernel(rows: Sequence[Vector], ncols: int) -> list[Vector]:
    """Basis of {c : rows · c = 0}, one vector per free column."""
    reduced, pivots = _rref(rows)
    basis = []
    for free in range(ncols):
        if free in pivots:
            continue
        entries = [ZERO] * ncols
        entries[free] = ONE
        for r, pivot in enumerate(pivots):
            entries[pivot] = -reduced[r][free]
        basis.append(tuple(entries))
    return basis


@dataclass(frozen=True)
class Subspace:
    ambient: int
    rows: tuple[Vector, ...]

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def is_zero(self) -> bool:
        return not self.rows

    @cached_property
    def matrix(self) -> ImmutableMatrix:
        if not self.rows:
            return ImmutableMatrix.zeros(0, self.ambient)
        return ImmutableMatrix(self.rows)

    def contains(self, v: Sequence) -> bool:
        v = vector(v, self.ambient)
        if all(x == 0 for x in v):
            return True
        return rank(self.rows + (v,)) == self.dim

    def is_subspace_of(self, other: Subspace) -> bool:
        _same_ambient(self, other)
        return all(other.contains(row) for row in self.rows)

    def __repr__(self):
        basis = ', '.join('(' + ','.join(str(x) for x in row) + ')' for row in self.rows)
        return f'Subspace(Q^{self.ambient}: {{{basis}}})'


def canonicalize(vectors: Iterable[Sequence], ambient: int) -> Subspace:
    """Span of ``vectors`` in canonical reduced row echelon form."""
    if ambient < 1:
        raise InvalidInput('ambient dimension must be at least 1')
    rows = [vector(v, ambient) for v in vectors]
    reduced, _ = _rref(rows)
    return Subspace(ambient, tuple(reduced))


def zero(ambient: int) -> Subspace:
    return Subspace(ambient, ())


def whole(ambient: int) -> Subspace:
    return Subspace(ambient, tuple(unit(j, ambient) for j in range(1, ambient + 1)))


def coordinate_subspace(ambient: int, zero_vars: Iterable[int]) -> Subspace:
    """The coordinate linear variety {x_j = 0 : j in zero_vars}."""
    zero_vars = set(zero_vars)
    if not zero_vars <= set(range(1, ambient + 1)):
        raise InvalidInput(f'variables {sorted(zero_vars)} out of range 1..{ambient}')
    return Subspace(ambient, tuple(unit(j, ambient) for j in range(1, ambient + 1) if j not in zero_vars))


def _same_ambient(a: Subspace, b: Subspace):
    if a.ambient != b.ambient:
        raise InvalidInput(f'ambient mismatch: Q^{a.ambient} vs Q^{b.ambient}')


def sum_spaces(a: Subspace, b: Subspace) -> Subspace:
    _same_ambient(a, b)
    if b.is_zero or b.is_subspace_of(a):
        return a
    return canonicalize(a.rows + b.rows, a.ambient)


def sum_all(spaces: Iterable[Subspace], ambient: int) -> Subspace:
    rows = []
    for space in spaces:
        if space.ambient != ambient:
            raise InvalidInput(f'ambient mismatch: Q^{space.ambient} vs Q^{ambient}')
        rows.extend(space.rows)
    return canonicalize(rows, ambient)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """
    a ∩ b through the kernel of [Aᵀ | -Bᵀ]: every kernel vector (c, d) gives
    the common vector cᵀA = dᵀB.
    """
    _same_ambient(a, b)
    if a.is_zero or b.is_zero:
        return zero(a.ambient)
    m, k = a.ambient, a.dim
    stacked = [
        tuple(a.rows[j][i] for j in range(k)) + tuple(-b.rows[j][i] for j in range(b.dim))
        for i in range(m)
    ]
    common = []
    for c in kernel(stacked, k + b.dim):
        common.append(tuple(sum((c[j] * a.rows[j][i] for j in range(k)), ZERO) for i in range(m)))
    return canonicalize(common, m)


def extend_to_basis(independent: Iterable[Sequence], ambient: int) -> tuple[Vector, ...]:
    """
    Complete ``independent`` to a basis of Q^m, scanning e_1, …, e_m in order
    and keeping each standard vector that is independent of those already held.
    """
    held = [vector(v, ambient) for v in independent]
    if rank(held) != len(held):
        raise InvalidInput('vectors to extend are linearly dependent')
    for j in range(1, ambient + 1):
        if len(held) == ambient:
            break
        candidate = unit(j, ambient)
        if rank(held + [candidate]) > len(held):
            held.append(candidate)
    return tuple(held)


def as_matrix(rows: Sequence[Sequence]) -> ImmutableMatrix:
    rows = [vector(r) for r in rows]
    if not rows or not rows[0]:
        raise InvalidInput('a matrix needs at least one row and one column')
    if any(len(r) != len(rows[0]) for r in rows):
        raise InvalidInput('ragged matrix rows')
    return ImmutableMatrix(rows)


def columns_matrix(columns: Sequence[Vector]) -> ImmutableMatrix:
    """The matrix whose j-th column is ``columns[j]``."""
    return ImmutableMatrix(columns).T


def is_invertible(matrix: ImmutableMatrix) -> bool:
    if matrix.rows != matrix.cols:
        return False
    return rank([tuple(matrix.row(i)) for i in range(matrix.rows)]) == matrix.rows


def apply(matrix: ImmutableMatrix, space: Subspace) -> Subspace:
    """The image f(space) of a subspace under x ↦ matrix · x."""
    if matrix.cols != space.ambient:
        raise InvalidInput(f'a {matrix.rows}x{matrix.cols} matrix cannot act on Q^{space.ambient}')
    images = [tuple(matrix * Matrix(row)) for row in space.rows]
    return canonicalize(images, matrix.rows)
