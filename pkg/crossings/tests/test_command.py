import json
from io import StringIO

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from crossings.exactla import to_rational
from crossings.serializers import PolynomialSerializer, TypeLambdaSerializer

F3COP = {'ambient': 3, 'subspaces': [{'basis': [[1, 0, 0]]}, {'basis': [[0, 1, 0]]}, {'basis': [[1, 1, 0]]}]}
F3GEN = {'ambient': 3, 'subspaces': [{'basis': [[1, 0, 0]]}, {'basis': [[0, 1, 0]]}, {'basis': [[1, 1, 1]]}]}
AXES_2 = {'ambient': 2, 'subspaces': [{'basis': [[1, 0]]}, {'basis': [[0, 1]]}]}
LINE_AND_PLANE = {'ambient': 3, 'subspaces': [{'basis': [[1, 0, 0]]}, {'basis': [[0, 1, 0], [0, 0, 1]]}]}
PLANE_AND_LINE = {'ambient': 3, 'subspaces': [{'basis': [[0, 1, 0], [0, 0, 1]]}, {'basis': [[1, 0, 0]]}]}
NOT_IN_IDEAL = {'type': {'ambient': 2, 'components': [[1], [2]]}, 'poly': {'nvars': 2, 'expr': 'x2'}}


class CrossingsCommandTestCase(SimpleTestCase):

    def run_command(self, *args, payload=None, **options):
        self.out = StringIO()
        stdin = StringIO(payload if isinstance(payload, str) else json.dumps(payload))
        call_command('crossings', *args, stdin=stdin, stdout=self.out, **options)
        return self.out.getvalue()

    def call(self, *args, payload=None, **options):
        return json.loads(self.run_command(*args, payload=payload, **options))

    def call_failing(self, *args, payload=None, **options):
        """Run a case that must fail; returns (exit code, error report)."""
        with self.assertRaises(CommandError) as cm:
            self.run_command(*args, payload=payload, **options)
        return cm.exception.returncode, json.loads(self.out.getvalue())

    def lines(self):
        return [json.loads(line) for line in self.out.getvalue().splitlines()]


class ReportTest(CrossingsCommandTestCase):
    """One report per command, on small hand-checked cases."""

    def test_extremal_on_coplanar_lines(self):
        self.assertEqual(self.call('extremal', payload=F3COP), {
            'result': False, 'level': 1, 'lhs': 2, 'rhs': 3,
            'certificate': [
                {'level': 1, 'lhs': 2, 'rhs': 3},
                {'level': 2, 'lhs': 0, 'rhs': 0},
                {'level': 3, 'lhs': 0, 'rhs': 0},
            ],
        })

    def test_extremal_on_generating_lines(self):
        self.assertTrue(self.call('extremal', payload=F3GEN)['result'])

    def test_bound(self):
        self.assertEqual(self.call('bound', payload={'m': 4}), {'result': 6})
        self.assertEqual(self.out.getvalue(), '{"result":6}\n')

    def test_basis(self):
        report = self.call('basis', payload=F3GEN)
        self.assertEqual(report['basis'], [['1', '0', '0'], ['0', '1', '0'], ['1', '1', '1']])
        self.assertEqual(report['blocks'][2], {'I': [3], 'vectors': [['1', '1', '1']]})
        self.assertEqual(self.call('basis', payload=F3COP),
                         {'result': False, 'witness': {'level': 1, 'lhs': 2, 'rhs': 3}})

    def test_load(self):
        self.assertEqual(self.call('load', payload=dict(F3COP, collection=[[1], [2], [3]])), {'result': 2})

    def test_signature(self):
        self.assertEqual(self.call('signature', payload=AXES_2), {
            'result': [{'I': [1], 'w': 1}, {'I': [2], 'w': 1}, {'I': [1, 2], 'w': 0}],
            'total': 2,
        })

    def test_equiv_with_and_without_reorder(self):
        payload = {'first': LINE_AND_PLANE, 'second': PLANE_AND_LINE}
        self.assertEqual(self.call('equiv', payload=payload), {'result': False})
        self.assertEqual(self.call('equiv', payload=payload, reorder=True), {'result': True, 'permutation': [2, 1]})

    def test_iso(self):
        payload = {'source': {'ambient': 2, 'subspaces': [{'basis': [[1, 0]]}, {'basis': [[1, 1]]}]},
                   'target': AXES_2}
        self.assertEqual(self.call('iso', payload=payload), {'result': [['1', '-1'], ['0', '1']]})

    def test_model(self):
        self.assertEqual(self.call('model', payload=LINE_AND_PLANE),
                         {'result': {'ambient': 3, 'components': [[2, 3], [1]]}})

    def test_ideal(self):
        self.assertEqual(self.call('ideal', payload={'ambient': 3, 'components': [[1, 2], [1, 3]]}), {
            'result': {'ambient': 3, 'generators': [[1], [2, 3]]},
            'raw_products': 4,
        })

    def test_decompose_primes_and_zeroset(self):
        payload = {'ambient': 3, 'generators': [[1, 2], [1, 3]]}
        self.assertEqual(self.call('decompose-primes', payload=payload), {'result': [[1], [2, 3]]})
        self.assertEqual(self.call('zeroset', payload=payload),
                         {'result': {'ambient': 3, 'components': [[1], [2, 3]]}})

    def test_member(self):
        ideal = {'ambient': 3, 'generators': [[1, 2], [1, 3]]}
        self.assertEqual(self.call('member', payload={'ideal': ideal, 'poly': {'nvars': 3, 'expr': 'x1*x2 - x1*x3'}}),
                         {'result': True})
        self.assertEqual(self.call('member', payload={'ideal': ideal, 'poly': {'nvars': 3, 'expr': 'x2*x3'}}),
                         {'result': False})

    def test_extend(self):
        payload = {'type': {'ambient': 2, 'components': [[1], [2]]},
                   'pieces': [{'nvars': 2, 'expr': 'x2'}, {'nvars': 2, 'expr': 'x1'}]}
        self.assertEqual(self.call('extend', payload=payload), {'result': {
            'nvars': 2, 'terms': [{'coeff': '1', 'exps': [1, 0]}, {'coeff': '1', 'exps': [0, 1]}],
        }})

    def test_split(self):
        payload = {'poly': {'nvars': 2, 'terms': [{'coeff': 1, 'exps': [2, 0]}, {'coeff': '1', 'exps': [0, 1]}]},
                   'variable': 1}
        self.assertEqual(self.call('split', payload=payload), {
            'f1': {'nvars': 2, 'terms': [{'coeff': '1', 'exps': [1, 0]}]},
            'g': {'nvars': 2, 'terms': [{'coeff': '1', 'exps': [0, 1]}]},
        })

    def test_divide_and_fold(self):
        payload = {'type': {'ambient': 3, 'components': [[1, 2], [2, 3]]}, 'poly': {'nvars': 3, 'expr': 'x1*x2'}}
        self.assertEqual(self.call('divide', payload=payload), {
            'degree': 2,
            'entries': [{'sigma': [1, 2], 'coeff_poly': {'nvars': 3, 'terms': [{'coeff': '1', 'exps': [0, 0, 0]}]}}],
            'max_sigma': 2,
        })
        folded = {
            'degree': 2,
            'entries': [{'sigma': [2], 'coeff_poly': {'nvars': 3, 'terms': [{'coeff': '1', 'exps': [1, 0, 0]}]}}],
            'max_sigma': 1,
        }
        self.assertEqual(self.call('divide', payload=payload, fold_minimal=True), folded)
        self.assertEqual(self.call('divide', payload=dict(payload, fold_minimal=True)), folded)

    def test_divide_zero_polynomial(self):
        payload = {'type': {'ambient': 2, 'components': [[1], [2]]}, 'poly': {'nvars': 2, 'terms': []}}
        self.assertEqual(self.call('divide', payload=payload), {'degree': None, 'entries': [], 'max_sigma': 0})

    def test_loss(self):
        self.assertEqual(self.call('loss', payload={'m': 2, 'n': 4}), {'result': 10})
        self.assertEqual(self.call('loss', payload={'m': 2, 'n': 4}, divisor=True), {'result': 6})

    def test_classify(self):
        payload = {
            'ambient': 4,
            'tangents': {'ambient': 4, 'subspaces': [{'basis': [[1, 0, 0, 0], [0, 1, 0, 0]]},
                                                     {'basis': [[1, 0, 0, 0], [0, 0, 1, 0]]}]},
            'germ_dims': [{'I': [1, 2], 'dim': 0}],
        }
        self.assertEqual(self.call('classify', payload=payload), {'result': False, 'witness': {
            'reason': 'intersection dimension mismatch', 'I': [1, 2], 'germ': 0, 'tangent': 1,
        }})
        del payload['germ_dims']
        self.assertEqual(self.call('classify', payload=payload), {'result': True})

    def test_multiplicity_and_type_equiv(self):
        axes = {'ambient': 3, 'components': [[2, 3], [1, 3], [1, 2]]}
        self.assertEqual(self.call('multiplicity', payload=axes), {'result': 3})
        payload = {'first': {'ambient': 3, 'components': [[1, 2], [1, 3]]},
                   'second': {'ambient': 3, 'components': [[1, 2], [2, 3]]}}
        self.assertEqual(self.call('type-equiv', payload=payload), {'result': True})


class ExitCodeTest(CrossingsCommandTestCase):
    """Exit 2 for malformed input, 3 for violated preconditions, 4 for exceeded guards."""

    def test_not_in_ideal(self):
        code, report = self.call_failing('divide', payload=NOT_IN_IDEAL)
        self.assertEqual(code, 3)
        self.assertEqual(report['error'], 'precondition_violation')
        self.assertIn('not in ideal', report['message'])

    def test_malformed_inputs(self):
        cases = [
            ('bound', {'m': 0}),
            ('bound', {'m': 4, 'extra': 1}),
            ('bound', '{"m": '),
            ('bound', [1, 2]),
            ('extremal', {'ambient': 2, 'subspaces': [{'basis': [[0.5, 1]]}]}),
            ('extremal', {'ambient': 3, 'subspaces': [{'basis': [[1, 0, 0]]}, {'basis': [[1, 0, 0], [0, 1, 0]]}]}),
            ('ideal', {'ambient': 3, 'components': [[1], [1, 2]]}),
            ('member', {'ideal': {'ambient': 2, 'generators': [[1]]}, 'poly': {'nvars': 3, 'expr': 'x1'}}),
            ('split', {'poly': {'nvars': 2, 'expr': 'x1', 'terms': []}, 'variable': 1}),
            ('split', {'poly': {'nvars': 2, 'expr': 'x1'}, 'variable': 3}),
            ('loss', {'m': 2, 'n': True}),
            ('member', {'ideal': {'ambient': 2, 'generators': [[1]]},
                        'poly': {'nvars': 2, 'expr': "__import__('os').system('true') + x1"}}),
        ]
        for name, payload in cases:
            with self.subTest(name=name, payload=payload):
                code, report = self.call_failing(name, payload=payload)
                self.assertEqual(code, 2)
                self.assertEqual(report['error'], 'invalid_input')

    def test_missing_command_and_unreadable_file(self):
        self.assertEqual(self.call_failing(payload={'m': 4})[0], 2)
        self.assertEqual(self.call_failing('bound', input_path='/nonexistent/case.json')[0], 2)

    def test_violated_preconditions(self):
        cases = [
            ('signature', F3COP),
            ('model', F3COP),
            ('iso', {'source': LINE_AND_PLANE, 'target': PLANE_AND_LINE}),
            ('multiplicity', {'ambient': 3, 'components': [[1], [2, 3]]}),
            ('extend', {'type': {'ambient': 2, 'components': [[1], [2]]},
                        'pieces': [{'nvars': 2, 'expr': '1'}, {'nvars': 2, 'expr': '0'}]}),
        ]
        for name, payload in cases:
            with self.subTest(name=name):
                self.assertEqual(self.call_failing(name, payload=payload)[0], 3)

    def test_exceeded_guards(self):
        cases = [
            ('extremal', F3COP, {'limits': 'm=2'}),
            ('extremal', dict(F3COP, limits={'max_s': 2}), {}),
            ('ideal', {'ambient': 4, 'components': [[1, 2], [3, 4]]}, {'limits': 'perm=3'}),
            ('decompose-primes', {'ambient': 4, 'generators': [[1, 2], [3, 4]]}, {'limits': 'transversal=2'}),
            ('equiv', {'first': LINE_AND_PLANE, 'second': PLANE_AND_LINE}, {'reorder': True, 'limits': 'perm=1'}),
            ('split', {'poly': {'nvars': 1, 'expr': '(x1 + 1)**100000'}, 'variable': 1}, {}),
        ]
        for name, payload, options in cases:
            with self.subTest(name=name):
                code, report = self.call_failing(name, payload=payload, **options)
                self.assertEqual(code, 4)
                self.assertEqual(report['error'], 'resource_limit_exceeded')

    def test_unknown_limit_flag(self):
        self.assertEqual(self.call_failing('bound', payload={'m': 4}, limits='depth=3')[0], 2)

    def test_command_line_limits_win_over_the_case_file(self):
        payload = dict(F3COP, limits={'max_m': 2})
        self.assertEqual(self.call_failing('extremal', payload=payload)[0], 4)
        self.assertFalse(self.call('extremal', payload=payload, limits='m=3')['result'])


class OutputTest(CrossingsCommandTestCase):

    def test_pretty_output(self):
        self.assertEqual(self.call('bound', payload={'m': 5}, pretty=True), {'result': 10})
        self.assertIn('\n  "result"', self.out.getvalue())

    def test_output_is_deterministic(self):
        first = self.call('basis', payload=F3GEN)
        text = self.out.getvalue()
        self.assertEqual(self.call('basis', payload=F3GEN), first)
        self.assertEqual(self.out.getvalue(), text)

    def test_reports_parse_back(self):
        basis = self.call('basis', payload=F3GEN)
        self.assertEqual([to_rational(x) for x in basis['basis'][2]], [1, 1, 1])

        model = self.call('model', payload=F3GEN)['result']
        self.assertTrue(TypeLambdaSerializer(data=model).is_valid())

        divided = self.call('divide', payload={'type': {'ambient': 3, 'components': [[1], [2, 3]]},
                                               'poly': {'nvars': 3, 'expr': 'x1*x2/2 + x1*x3'}})
        for entry in divided['entries']:
            self.assertTrue(PolynomialSerializer(data=entry['coeff_poly']).is_valid())


class BatchTest(CrossingsCommandTestCase):

    def test_results_keep_the_input_order(self):
        cases = [
            {'command': 'bound', 'm': 4},
            dict(NOT_IN_IDEAL, command='divide'),
            {'command': 'loss', 'm': 2, 'n': 3},
            dict(F3COP, command='extremal', limits={'max_m': 2}),
            {'m': 3},
        ]
        with self.assertRaises(CommandError) as cm:
            self.run_command(payload=cases, batch=True, workers=3)
        self.assertEqual(cm.exception.returncode, 4)
        lines = self.lines()
        self.assertEqual(len(lines), 5)
        self.assertEqual(lines[0], {'result': 6})
        self.assertEqual((lines[1]['error'], lines[1]['exit']), ('precondition_violation', 3))
        self.assertEqual(lines[2], {'result': 4})
        self.assertEqual((lines[3]['error'], lines[3]['exit']), ('resource_limit_exceeded', 4))
        self.assertEqual((lines[4]['error'], lines[4]['exit']), ('invalid_input', 2))

    def test_default_command(self):
        self.run_command('bound', payload=[{'m': m} for m in range(1, 7)], batch=True)
        self.assertEqual([line['result'] for line in self.lines()], [1, 2, 3, 6, 10, 20])

    def test_batch_needs_a_list(self):
        self.assertEqual(self.call_failing('bound', payload={'m': 4}, batch=True)[0], 2)

    def test_worker_count_does_not_change_the_output(self):
        cases = [{'command': 'bound', 'm': m} for m in range(1, 9)]
        self.run_command(payload=cases, batch=True, workers=1)
        serial = self.out.getvalue()
        self.run_command(payload=cases, batch=True, workers=4)
        self.assertEqual(self.out.getvalue(), serial)
