"""
Seeded generators for the property tests.

Every helper takes a ``random.Random`` so a failing case can be replayed from
its seed.
"""
import itertools
import random

from sympy import ImmutableMatrix, Rational

from crossings.exactla import canonicalize
from crossings.families import LinearFamily, nonempty_subsets, sperner_bound
from crossings.monomideal import TypeLambda, associated_monomials, minimalize
from crossings.poly import SparsePoly


def rng(seed):
    return random.Random(seed)


def rational(gen, bound=3):
    return Rational(gen.randint(-bound, bound), gen.randint(1, bound))


def vectors(gen, count, ambient, bound=3):
    return [tuple(rational(gen, bound) for _ in range(ambient)) for _ in range(count)]


def subspace(gen, ambient):
    return canonicalize(vectors(gen, gen.randint(0, ambient), ambient), ambient)


def invertible(gen, ambient, bound=3):
    while True:
        matrix = ImmutableMatrix([[gen.randint(-bound, bound) for _ in range(ambient)] for _ in range(ambient)])
        if matrix.det() != 0:
            return matrix


def variable_set(gen, ambient, max_size=None):
    size = gen.randint(1, max_size or ambient)
    return frozenset(gen.sample(range(1, ambient + 1), size))


def antichain(gen, ambient, max_members, max_size=None):
    """A random nonempty antichain of nonempty subsets of {1..ambient}."""
    sets = [variable_set(gen, ambient, max_size) for _ in range(gen.randint(1, max_members))]
    return list(minimalize(sets))


def all_antichains(ambient):
    """Every nonempty antichain of nonempty subsets of {1..ambient}."""
    subsets = nonempty_subsets(ambient)
    found = []

    def grow(start, chosen):
        if chosen:
            found.append(list(chosen))
        for k in range(start, len(subsets)):
            candidate = subsets[k]
            if all(not (c <= candidate or candidate <= c) for c in chosen):
                chosen.append(candidate)
                grow(k + 1, chosen)
                chosen.pop()

    grow(0, [])
    return found


def type_lambda(gen, ambient, max_components):
    components = antichain(gen, ambient, max_components)
    gen.shuffle(components)
    return TypeLambda(ambient, tuple(components))


def coordinate_family(gen, ambient, max_components=4):
    """A coordinate family with s ≤ min(max_components, sperner_bound(ambient))."""
    cap = min(max_components, sperner_bound(ambient))
    return LinearFamily.from_type(type_lambda(gen, ambient, cap))


def middle_layer_family(gen, ambient, members=None, max_members=None):
    """
    A coordinate family whose components are distinct ⌈m/2⌉-subsets.

    The layer has sperner_bound(ambient) sets, so every s up to that bound can be drawn.
    """
    layer = [frozenset(c) for c in itertools.combinations(range(1, ambient + 1), (ambient + 1) // 2)]
    if members is None:
        members = gen.randint(1, min(len(layer), max_members or len(layer)))
    return LinearFamily.from_type(TypeLambda(ambient, tuple(gen.sample(layer, members))))


def small_antichains(ambient, max_members):
    """Every antichain of at most ``max_members`` nonempty subsets of {1..ambient}."""
    subsets = nonempty_subsets(ambient)
    return [
        list(chosen)
        for r in range(1, max_members + 1)
        for chosen in itertools.combinations(subsets, r)
        if all(not (a <= b or b <= a) for a, b in itertools.combinations(chosen, 2))
    ]


def poly(gen, nvars, terms=4, max_degree=3, bound=3):
    mapping = {}
    for _ in range(terms):
        degree = gen.randint(0, max_degree)
        exps = [0] * nvars
        for _ in range(degree):
            exps[gen.randrange(nvars)] += 1
        mapping[tuple(exps)] = rational(gen, bound)
    return SparsePoly.from_dict(nvars, mapping)


def ideal_combination(gen, type_lambda, max_degree=6):
    """Σ c_σ x^σ over the minimal generators with random c_σ; deg ≤ max_degree."""
    ideal = associated_monomials(type_lambda)
    total = SparsePoly.zero(type_lambda.ambient)
    for sigma in ideal.generators:
        room = max_degree - len(sigma)
        if room < 0 or gen.random() < 0.3:
            continue
        coeff = poly(gen, type_lambda.ambient, terms=3, max_degree=min(room, 3))
        total = total + coeff * SparsePoly.monomial_of(sigma, type_lambda.ambient)
    return total


def compatible_pieces(gen, type_lambda):
    """Restrictions of one global polynomial, perturbed by multiples of each component's variables."""
    m = type_lambda.ambient
    base = poly(gen, m, terms=5, max_degree=3)
    pieces = []
    for lam in type_lambda.components:
        noise = SparsePoly.zero(m)
        for j in sorted(lam):
            noise = noise + poly(gen, m, terms=2, max_degree=2) * SparsePoly.variable(j, m)
        pieces.append(base + noise)
    return pieces


def point(gen, nvars, bound=3):
    return [rational(gen, bound) for _ in range(nvars)]


def square_free_monomials(ambient):
    """Every variable set, the empty one (the monomial 1) included."""
    return [frozenset(c) for p in range(ambient + 1) for c in itertools.combinations(range(1, ambient + 1), p)]
