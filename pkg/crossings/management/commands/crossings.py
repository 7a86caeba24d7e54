import json
import sys

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from crossings import reports
from crossings.exceptions import CrossingsError, InvalidInput
from crossings.limits import Limits


class Command(BaseCommand):
    """Run one analysis case (or a batch of them) and print the JSON report."""

    help = 'Exact analysis of linear families, crossing types and polynomials on monomial crossings.'
    stealth_options = ('stdin',)

    def add_arguments(self, parser):
        parser.add_argument('command', nargs='?', choices=sorted(reports.COMMANDS),
                            help='Analysis to run; in batch mode, the default for cases without one.')
        parser.add_argument('--input', dest='input_path', help='Case file to read (default: stdin).')
        parser.add_argument('--pretty', action='store_true', help='Indent the JSON report.')
        parser.add_argument('--limits', help='Resource guard overrides, e.g. m=6,s=4,perm=1000.')
        parser.add_argument('--fold-minimal', action='store_true',
                            help='divide: fold transversals onto minimal generators.')
        parser.add_argument('--reorder', action='store_true',
                            help='equiv: search over relabellings of the second family.')
        parser.add_argument('--divisor', action='store_true',
                            help='loss: the target is a normal crossing divisor.')
        parser.add_argument('--batch', action='store_true',
                            help='The input is a JSON array of cases, each with a "command" key.')
        parser.add_argument('--workers', type=int, default=settings.CROSSINGS['BATCH_WORKERS'],
                            help='Threads used in batch mode.')

    def handle(self, *args, **options):
        flags = {
            'fold_minimal': options['fold_minimal'],
            'reorder': options['reorder'],
            'divisor': options['divisor'],
        }
        pretty = options['pretty']
        try:
            limits = Limits.parse_flag(options['limits']) if options['limits'] else {}
            payload = self.read_input(options['input_path'], options.get('stdin'))
            if options['batch']:
                return self.handle_batch(payload, options['command'], flags, limits, options['workers'], pretty)
            if not options['command']:
                raise InvalidInput('name a command to run')
            report = reports.run(options['command'], payload, flags, limits)
        except CrossingsError as exc:
            self.stdout.write(reports.render(exc.as_report(), pretty))
            raise CommandError(exc.message, returncode=exc.exit_code)
        self.stdout.write(reports.render(report, pretty))

    def handle_batch(self, cases, default_command, flags, limits, workers, pretty):
        if workers < 1:
            raise InvalidInput('--workers must be at least 1')
        results = reports.run_batch(cases, flags, limits, workers=workers, default_command=default_command)
        for report, _ in results:
            self.stdout.write(reports.render(report, pretty))
        worst = max((code for _, code in results), default=0)
        if worst:
            raise CommandError(f'{sum(1 for _, code in results if code)} of {len(results)} cases failed',
                               returncode=worst)

    def read_input(self, path, stdin=None):
        try:
            if path:
                with open(path, encoding='utf-8') as handle:
                    return json.load(handle)
            return json.load(stdin or sys.stdin)
        except OSError as exc:
            raise InvalidInput(f'cannot read {path}: {exc.strerror}')
        except json.JSONDecodeError as exc:
            raise InvalidInput(f'input is not valid JSON: {exc.msg}', line=exc.lineno, column=exc.colno)
