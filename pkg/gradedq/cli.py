"""
Command line driver.

    gq run FILE [--report out.json] [--steps N] [--tolerance T] [--seed S] [--timing]
    gq check NAME [...]
    gq fmt FILE

Exit codes: 0 when every check passes, 1 when any fails, 2 on parse or
semantic errors.
"""
import argparse
import logging
import os
import sys

from gradedq import __version__
from gradedq.exceptions import SourceError
from gradedq.language.checks import CANNED, Options, execute
from gradedq.language.parser import parse, render_source
from gradedq.language.report import Report, render

logger = logging.getLogger('gradedq')

EXIT_OK, EXIT_FAIL, EXIT_SOURCE = 0, 1, 2


def _numeric(parser):
    parser.add_argument('--report', metavar='OUT', help='write the machine report to OUT')
    parser.add_argument('--steps', type=int, help='integration steps per unit time')
    parser.add_argument('--tolerance', type=float, help='tolerance for numeric checks')
    parser.add_argument('--seed', type=int, help='seed for randomized checks')
    parser.add_argument('--timing', action='store_true', help='keep timings in the machine report')
    parser.add_argument('-v', '--verbose', action='count', default=0)


def build_parser():
    parser = argparse.ArgumentParser(prog='gq', description='Verify graded NQ-manifold facts.')
    parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    sub = parser.add_subparsers(dest='command')
    sub.required = True

    run = sub.add_parser('run', help='run a .gq program')
    run.add_argument('file')
    _numeric(run)

    check = sub.add_parser('check', help='run one canned check')
    check.add_argument('names', nargs='+', metavar='NAME', choices=sorted(CANNED))
    _numeric(check)

    fmt = sub.add_parser('fmt', help='print a program in canonical form')
    fmt.add_argument('file')
    return parser


def _options(args, base_dir='.'):
    return Options(steps=args.steps, tolerance=args.tolerance, seed=args.seed,
                   timing=args.timing, base_dir=base_dir)


def _run(sources, label, args, base_dir='.'):
    report = Report()
    try:
        for source in sources:
            report.extend(execute(parse(source), _options(args, base_dir)))
    except SourceError as e:
        sys.stderr.write('%s:%s\n' % (label, e))
        return EXIT_SOURCE
    logger.debug('%s: %d checks, %d failed', label, len(report), len(report.failures))
    sys.stdout.write(render(report, 'text').decode('utf-8'))
    if args.report:
        with open(args.report, 'wb') as fh:
            fh.write(render(report, 'machine', timing=args.timing))
    return report.exit_code


def _read(path):
    with open(path, encoding='utf-8') as fh:
        return fh.read()


def main(argv=None):
    args = build_parser().parse_args(argv)
    level = logging.WARNING
    if getattr(args, 'verbose', 0) == 1:
        level = logging.INFO
    elif getattr(args, 'verbose', 0) > 1:
        level = logging.DEBUG
    logging.basicConfig(level=level, format='%(levelname)s %(name)s: %(message)s')

    if args.command == 'check':
        # canned programs reuse names, so each runs in its own session
        sources = [CANNED[name] for name in args.names]
        return _run(sources, '<check %s>' % ' '.join(args.names), args)
    try:
        source = _read(args.file)
    except IOError as e:
        sys.stderr.write('%s: %s\n' % (args.file, e.strerror))
        return EXIT_SOURCE
    if args.command == 'fmt':
        try:
            sys.stdout.write(render_source(parse(source)))
        except SourceError as e:
            sys.stderr.write('%s:%s\n' % (args.file, e))
            return EXIT_SOURCE
        return EXIT_OK
    return _run([source], args.file, args, os.path.dirname(os.path.abspath(args.file)))


if __name__ == '__main__':
    sys.exit(main())
