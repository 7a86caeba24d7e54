from rest_framework import serializers

from .classify import GermDescriptor
from .exactla import to_rational
from .exceptions import InvalidInput
from .families import LinearFamily
from .monomideal import SquareFreeIdeal, TypeLambda, index_set
from .poly import SparsePoly


def _domain(build, *args, **kwargs):
    """Call a domain constructor, turning its input errors into validation errors."""
    try:
        return build(*args, **kwargs)
    except InvalidInput as exc:
        raise serializers.ValidationError(exc.message)


class StrictSerializer(serializers.Serializer):
    """Rejects keys the schema does not declare."""

    def to_internal_value(self, data):
        if isinstance(data, dict):
            unknown = sorted(set(data) - set(self.fields))
            if unknown:
                raise serializers.ValidationError({key: ['Unknown field.'] for key in unknown})
        return super().to_internal_value(data)


class RationalField(serializers.Field):
    default_error_messages = {
        'invalid': 'Expected an integer or a "p/q" string, got {value!r}.',
    }

    def to_internal_value(self, data):
        # floats never reach the exact layer
        if isinstance(data, bool) or not isinstance(data, (int, str)):
            self.fail('invalid', value=data)
        try:
            return to_rational(data)
        except InvalidInput:
            self.fail('invalid', value=data)

    def to_representation(self, value):
        return str(value)


class VectorField(serializers.ListField):
    child = RationalField()


class IndexListField(serializers.ListField):
    """A nonempty list of 1-based indices."""
    child = serializers.IntegerField(min_value=1)

    def __init__(self, **kwargs):
        kwargs.setdefault('allow_empty', False)
        super().__init__(**kwargs)


class SubspaceSerializer(StrictSerializer):
    basis = serializers.ListField(child=VectorField(), allow_empty=True)


# Field sets shared by the nested shapes and the top-level case files

class FamilyFields(StrictSerializer):
    ambient = serializers.IntegerField(min_value=1)
    subspaces = SubspaceSerializer(many=True, allow_empty=False)
    minimalize = serializers.BooleanField(required=False, default=False)

    def to_family(self, attrs):
        return _domain(
            LinearFamily.of,
            attrs.pop('ambient'),
            [s['basis'] for s in attrs.pop('subspaces')],
            minimal=attrs.pop('minimalize'),
        )


class TypeLambdaFields(StrictSerializer):
    ambient = serializers.IntegerField(min_value=1)
    components = serializers.ListField(child=IndexListField(), allow_empty=False)

    def to_type(self, attrs):
        return _domain(TypeLambda.of, attrs.pop('ambient'), attrs.pop('components'))


class IdealFields(StrictSerializer):
    ambient = serializers.IntegerField(min_value=1)
    generators = serializers.ListField(child=IndexListField(), allow_empty=False)
    minimalize = serializers.BooleanField(required=False, default=False)

    def to_ideal(self, attrs):
        return _domain(SquareFreeIdeal.of, attrs.pop('ambient'), attrs.pop('generators'),
                       minimal=attrs.pop('minimalize'))


# Nested shapes; validated_data is the domain value itself

class FamilySerializer(FamilyFields):
    def validate(self, attrs):
        return self.to_family(attrs)


class TypeLambdaSerializer(TypeLambdaFields):
    def validate(self, attrs):
        return self.to_type(attrs)


class IdealSerializer(IdealFields):
    def validate(self, attrs):
        return self.to_ideal(attrs)


class GermDimSerializer(StrictSerializer):
    I = IndexListField()
    dim = serializers.IntegerField(min_value=0)


class GermDescriptorFields(StrictSerializer):
    """Unlisted index sets default to the tangent intersection dimension."""
    ambient = serializers.IntegerField(min_value=1)
    tangents = FamilySerializer()
    germ_dims = GermDimSerializer(many=True, required=False)

    def to_descriptor(self, attrs):
        tangents = attrs.pop('tangents')
        if tangents.ambient != attrs.pop('ambient'):
            raise serializers.ValidationError({'ambient': ['Does not match the tangent family.']})
        table = {}
        for entry in attrs.pop('germ_dims', []):
            index = _domain(index_set, entry['I'])
            if index in table:
                raise serializers.ValidationError({'germ_dims': [f'{sorted(index)} is listed twice.']})
            table[index] = entry['dim']
        return _domain(GermDescriptor.of, tangents, table)


class GermDescriptorSerializer(GermDescriptorFields):
    def validate(self, attrs):
        return self.to_descriptor(attrs)


class TermSerializer(StrictSerializer):
    coeff = RationalField()
    exps = serializers.ListField(child=serializers.IntegerField(min_value=0))


class PolynomialSerializer(StrictSerializer):
    """Either the term list or an ``expr`` string in x1..xm."""
    nvars = serializers.IntegerField(min_value=1)
    terms = TermSerializer(many=True, required=False)
    expr = serializers.CharField(required=False)

    def validate(self, attrs):
        if ('terms' in attrs) == ('expr' in attrs):
            raise serializers.ValidationError('Give exactly one of "terms" or "expr".')
        if 'expr' in attrs:
            return _domain(SparsePoly.parse, attrs['expr'], attrs['nvars'])
        return _domain(SparsePoly.from_dict, attrs['nvars'],
                       [(term['exps'], term['coeff']) for term in attrs['terms']])


class LimitsSerializer(StrictSerializer):
    max_m = serializers.IntegerField(min_value=1, required=False)
    max_s = serializers.IntegerField(min_value=1, required=False)
    perm_budget = serializers.IntegerField(min_value=1, required=False)
    transversal_guard = serializers.IntegerField(min_value=1, required=False)


# Case files, one per command shape

class CaseSerializer(StrictSerializer):
    seed = serializers.IntegerField(required=False)
    limits = LimitsSerializer(required=False)


class FamilyCaseSerializer(FamilyFields, CaseSerializer):
    def validate(self, attrs):
        attrs['family'] = self.to_family(attrs)
        return attrs


class LoadCaseSerializer(FamilyCaseSerializer):
    collection = serializers.ListField(child=IndexListField(), allow_empty=False)


class EquivCaseSerializer(CaseSerializer):
    first = FamilySerializer()
    second = FamilySerializer()
    reorder = serializers.BooleanField(required=False, default=False)


class IsoCaseSerializer(CaseSerializer):
    source = FamilySerializer()
    target = FamilySerializer()


class TypeCaseSerializer(TypeLambdaFields, CaseSerializer):
    def validate(self, attrs):
        attrs['type'] = self.to_type(attrs)
        return attrs


class TypePairCaseSerializer(CaseSerializer):
    first = TypeLambdaSerializer()
    second = TypeLambdaSerializer()


class IdealCaseSerializer(IdealFields, CaseSerializer):
    def validate(self, attrs):
        attrs['ideal'] = self.to_ideal(attrs)
        return attrs


class MemberCaseSerializer(CaseSerializer):
    ideal = IdealSerializer()
    poly = PolynomialSerializer()

    def validate(self, attrs):
        if attrs['poly'].nvars != attrs['ideal'].ambient:
            raise serializers.ValidationError({'poly': ['Variable count differs from the ideal ambient.']})
        return attrs


class ExtendCaseSerializer(CaseSerializer):
    type = TypeLambdaSerializer()
    pieces = PolynomialSerializer(many=True, allow_empty=False)


class SplitCaseSerializer(CaseSerializer):
    poly = PolynomialSerializer()
    variable = serializers.IntegerField(min_value=1)

    def validate(self, attrs):
        if attrs['variable'] > attrs['poly'].nvars:
            raise serializers.ValidationError({'variable': [f'Must be at most {attrs["poly"].nvars}.']})
        return attrs


class DivideCaseSerializer(CaseSerializer):
    type = TypeLambdaSerializer()
    poly = PolynomialSerializer()
    fold_minimal = serializers.BooleanField(required=False, default=False)


class ClassifyCaseSerializer(GermDescriptorFields, CaseSerializer):
    def validate(self, attrs):
        attrs['descriptor'] = self.to_descriptor(attrs)
        return attrs


class BoundCaseSerializer(CaseSerializer):
    m = serializers.IntegerField(min_value=1)


class LossCaseSerializer(CaseSerializer):
    m = serializers.IntegerField(min_value=1)
    n = serializers.IntegerField(min_value=1)
    divisor = serializers.BooleanField(required=False, default=False)


# Report encoders

def encode_vector(vector):
    return [str(x) for x in vector]


def encode_matrix(matrix):
    return [encode_vector(matrix.row(i)) for i in range(matrix.rows)]


def encode_poly(poly):
    return {
        'nvars': poly.nvars,
        'terms': [{'coeff': str(coeff), 'exps': list(exps)} for exps, coeff in poly.terms],
    }


def encode_type(type_lambda):
    return {'ambient': type_lambda.ambient, 'components': type_lambda.as_lists()}


def encode_ideal(ideal):
    return {'ambient': ideal.ambient, 'generators': ideal.as_lists()}


def encode_family(family):
    return {
        'ambient': family.ambient,
        'subspaces': [{'basis': [encode_vector(row) for row in member.rows]} for member in family.members],
    }
