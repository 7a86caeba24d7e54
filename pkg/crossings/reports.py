"""
Command registry shared by the management command and the HTTP mirror.

Each command validates its case file with a serializer, runs one library
operation under the active resource limits and returns a plain report dict.
Negative verdicts are ordinary reports; only ``CrossingsError`` subclasses
signal failure.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

from rest_framework.renderers import JSONRenderer

from . import serializers as s
from .classify import is_monomial_singularity, multiplicity, types_equivalent
from .exceptions import CrossingsError, InvalidInput, ResourceLimitExceeded
from .extendiv import PiecewisePoly, divide_on_crossings, extend_inclusion_exclusion, lemma_easy_split, loss_constant
from .families import (
    adapted_basis, build_isomorphism, coordinate_model, families_equivalent, is_extremal, load_of_collection,
    load_signature, sperner_bound,
)
from .limits import Limits
from .monomideal import (
    associated_monomials, associated_products, ideal_membership, minimal_transversals, prime_decomposition,
    zero_set,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Command:
    name: str
    serializer_class: type
    handler: Callable
    flags: tuple = ()


COMMANDS = {}


def command(name, serializer_class, flags=()):
    def register(handler):
        COMMANDS[name] = Command(name, serializer_class, handler, tuple(flags))
        return handler
    return register


def run(name, payload, flags=None, limits=None):
    """
    Validate ``payload`` for command ``name`` and return its report.

    ``flags`` are switches given outside the case file (``fold_minimal``,
    ``reorder``, ``divisor``); ``limits`` are overrides that win over both the
    settings and the case file's own ``"limits"`` object.
    """
    try:
        cmd = COMMANDS[name]
    except KeyError:
        raise InvalidInput(f'unknown command {name!r}', commands=sorted(COMMANDS))
    if not isinstance(payload, dict):
        raise InvalidInput('a case must be a JSON object')

    payload = dict(payload)
    for flag in cmd.flags:
        if (flags or {}).get(flag):
            payload[flag] = True

    serializer = cmd.serializer_class(data=payload)
    if not serializer.is_valid():
        raise InvalidInput('malformed input', errors=serializer.errors)
    case = serializer.validated_data

    active = Limits.from_settings().override(**case.get('limits', {})).override(**(limits or {}))
    logger.info('running %s', name)
    return cmd.handler(case, active)


def run_case(case, flags=None, limits=None, default_command=None):
    """One batch entry: ``(report, exit_code)``, errors reported inline."""
    try:
        if not isinstance(case, dict):
            raise InvalidInput('a batch entry must be a JSON object')
        payload = dict(case)
        name = payload.pop('command', default_command)
        if name is None:
            raise InvalidInput('a batch entry needs a "command" key')
        return run(name, payload, flags, limits), 0
    except CrossingsError as exc:
        logger.info('batch case failed: %s', exc.message)
        return dict(exc.as_report(), exit=exc.exit_code), exc.exit_code


def run_batch(cases, flags=None, limits=None, workers=4, default_command=None):
    """Run independent cases in parallel; results keep the input order."""
    if not isinstance(cases, list):
        raise InvalidInput('batch input must be a JSON array of cases')
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(lambda case: run_case(case, flags, limits, default_command), cases))


def render(report, pretty=False):
    context = {'indent': 2} if pretty else {}
    return JSONRenderer().render(report, renderer_context=context).decode('utf-8')


def _certificate_rows(certificate):
    return [{'level': row.level, 'lhs': row.lhs, 'rhs': row.rhs} for row in certificate.rows]


def _check_family(limits, family):
    limits.check(family.ambient, family.s)


# Linear families

@command('extremal', s.FamilyCaseSerializer)
def extremal(case, limits):
    family = case['family']
    _check_family(limits, family)
    certificate = is_extremal(family)
    report = {'result': certificate.extremal}
    if not certificate.extremal:
        row = certificate.first_failure
        report.update(level=row.level, lhs=row.lhs, rhs=row.rhs)
    report['certificate'] = _certificate_rows(certificate)
    return report


@command('basis', s.FamilyCaseSerializer)
def basis(case, limits):
    family = case['family']
    _check_family(limits, family)
    adapted = adapted_basis(family)
    if adapted is None:
        row = is_extremal(family).first_failure
        return {'result': False, 'witness': {'level': row.level, 'lhs': row.lhs, 'rhs': row.rhs}}
    return {
        'result': True,
        'basis': [s.encode_vector(v) for v in adapted.vectors],
        'blocks': [
            {'I': sorted(index), 'vectors': [s.encode_vector(v) for v in vectors]}
            for index, vectors in adapted.blocks
        ],
    }


@command('load', s.LoadCaseSerializer)
def load(case, limits):
    family = case['family']
    _check_family(limits, family)
    return {'result': load_of_collection(family, case['collection'])}


@command('signature', s.FamilyCaseSerializer)
def signature(case, limits):
    family = case['family']
    _check_family(limits, family)
    sig = load_signature(family)
    return {
        'result': [{'I': sorted(index), 'w': w} for index, w in sig.values],
        'total': sig.total,
    }


@command('equiv', s.EquivCaseSerializer, flags=('reorder',))
def equiv(case, limits):
    first, second = case['first'], case['second']
    _check_family(limits, first)
    _check_family(limits, second)
    permutation = families_equivalent(first, second, reorder=case['reorder'], budget=limits.perm_budget)
    if permutation is None:
        return {'result': False}
    return {'result': True, 'permutation': list(permutation)}


@command('iso', s.IsoCaseSerializer)
def iso(case, limits):
    source, target = case['source'], case['target']
    _check_family(limits, source)
    _check_family(limits, target)
    return {'result': s.encode_matrix(build_isomorphism(source, target))}


@command('model', s.FamilyCaseSerializer)
def model(case, limits):
    family = case['family']
    _check_family(limits, family)
    return {'result': s.encode_type(coordinate_model(family))}


# Square-free monomial ideals

@command('ideal', s.TypeCaseSerializer)
def ideal(case, limits):
    type_lambda = case['type']
    limits.check(type_lambda.ambient, type_lambda.s)
    raw = math.prod(len(lam) for lam in type_lambda.components)
    if raw > limits.perm_budget:
        raise ResourceLimitExceeded(f'{raw} raw products exceed the enumeration budget of {limits.perm_budget}',
                                    limit='perm', value=raw)
    return {
        'result': s.encode_ideal(associated_monomials(type_lambda)),
        'raw_products': len(associated_products(type_lambda)),
    }


@command('decompose-primes', s.IdealCaseSerializer)
def decompose_primes(case, limits):
    ideal = case['ideal']
    limits.check(ideal.ambient)
    primes = prime_decomposition(ideal)
    # the prime components are the minimal vertex covers of the generators
    if minimal_transversals(ideal.generators, limits.transversal_guard) != primes:
        raise ArithmeticError('prime decomposition disagrees with the minimal transversals')
    return {'result': [sorted(p) for p in primes]}


@command('zeroset', s.IdealCaseSerializer)
def zeroset(case, limits):
    ideal = case['ideal']
    limits.check(ideal.ambient)
    return {'result': s.encode_type(zero_set(ideal))}


@command('member', s.MemberCaseSerializer)
def member(case, limits):
    limits.check(case['ideal'].ambient)
    return {'result': ideal_membership(case['poly'], case['ideal'])}


# Extension and division

@command('extend', s.ExtendCaseSerializer)
def extend(case, limits):
    type_lambda = case['type']
    limits.check(type_lambda.ambient, type_lambda.s)
    piecewise = PiecewisePoly(type_lambda, tuple(case['pieces']))
    return {'result': s.encode_poly(extend_inclusion_exclusion(piecewise))}


@command('split', s.SplitCaseSerializer)
def split(case, limits):
    poly = case['poly']
    limits.check(poly.nvars)
    f1, g = lemma_easy_split(poly, case['variable'])
    return {'f1': s.encode_poly(f1), 'g': s.encode_poly(g)}


@command('divide', s.DivideCaseSerializer, flags=('fold_minimal',))
def divide(case, limits):
    type_lambda = case['type']
    limits.check(type_lambda.ambient, type_lambda.s)
    decomposition = divide_on_crossings(type_lambda, case['poly'], fold_to_minimal=case['fold_minimal'])
    return {
        'degree': None if case['poly'].is_zero else int(decomposition.degree),
        'entries': [
            {'sigma': sorted(sigma), 'coeff_poly': s.encode_poly(coeff)}
            for sigma, coeff in decomposition.entries
        ],
        'max_sigma': decomposition.max_sigma,
    }


@command('loss', s.LossCaseSerializer, flags=('divisor',))
def loss(case, limits):
    return {'result': loss_constant(case['m'], case['n'], divisor=case['divisor'])}


# Classification

@command('classify', s.ClassifyCaseSerializer)
def classify(case, limits):
    descriptor = case['descriptor']
    _check_family(limits, descriptor.tangents)
    verdict = is_monomial_singularity(descriptor)
    if verdict:
        return {'result': True}
    return {'result': False, 'witness': verdict.witness}


@command('multiplicity', s.TypeCaseSerializer)
def multiplicity_(case, limits):
    type_lambda = case['type']
    limits.check(type_lambda.ambient, type_lambda.s)
    return {'result': multiplicity(type_lambda)}


@command('type-equiv', s.TypePairCaseSerializer)
def type_equiv(case, limits):
    first, second = case['first'], case['second']
    limits.check(first.ambient, first.s)
    limits.check(second.ambient, second.s)
    return {'result': types_equivalent(first, second, budget=limits.perm_budget)}


@command('bound', s.BoundCaseSerializer)
def bound(case, limits):
    return {'result': sperner_bound(case['m'])}
