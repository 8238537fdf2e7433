"""
Check records and their text and machine renderings.

    >>> r = Report([Record('q2', ('Q',), 'pass')])
    >>> render(r, 'text')
    b'PASS q2 Q (0 ms)\\n'
    >>> r.exit_code
    0

The machine format is JSON with sorted keys, described by
``report.schema.json`` next to this module.  Timing is left out unless
asked for, so two runs with the same seed give identical bytes.
"""
import json
import os
from dataclasses import dataclass, field

from gradedq import settings

VERDICTS = ('pass', 'fail', 'degraded-mode')
LABELS = {'pass': 'PASS', 'fail': 'FAIL', 'degraded-mode': 'DEGRADED'}
SCHEMA_PATH = os.path.join(os.path.dirname(__file__), 'report.schema.json')


@dataclass
class Record:
    name: str
    inputs: tuple
    verdict: str
    expected: str = 'pass'
    witness: str = None
    residuals: dict = field(default_factory=dict)
    explanation: str = ''
    ms: int = 0

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError('unknown verdict %r' % self.verdict)

    @property
    def ok(self):
        if self.expected == 'fail':
            return self.verdict == 'fail'
        return self.verdict != 'fail'

    @property
    def label(self):
        if self.expected == 'fail':
            return 'XFAIL' if self.ok else 'XPASS'
        return LABELS[self.verdict]

    def __str__(self):
        return settings.GQ_TEXT_LINE % {
            'verdict': self.label,
            'name': self.name,
            'inputs': ' '.join(self.inputs),
            'ms': self.ms,
        }

    def as_dict(self, timing=False):
        out = {
            'name': self.name,
            'inputs': list(self.inputs),
            'verdict': self.verdict,
            'expected': self.expected,
            'ok': self.ok,
            'witness': self.witness,
            'residuals': dict(self.residuals),
            'explanation': self.explanation,
        }
        if timing:
            out['ms'] = self.ms
        return out


class Report(list):
    """Records in execution order."""

    @property
    def ok(self):
        return all(r.ok for r in self)

    @property
    def failures(self):
        return [r for r in self if not r.ok]

    @property
    def exit_code(self):
        return 0 if self.ok else 1

    def as_dict(self, timing=False):
        return {
            'schema_version': settings.GQ_REPORT_SCHEMA_VERSION,
            'ok': self.ok,
            'total': len(self),
            'failed': len(self.failures),
            'records': [r.as_dict(timing) for r in self],
        }


def render_text(report):
    return ''.join('%s\n' % r for r in report)


def render_machine(report, timing=False):
    return json.dumps(report.as_dict(timing), sort_keys=True, indent=2) + '\n'


def render(report, format='text', timing=False):
    if format == 'text':
        out = render_text(report)
    elif format in ('machine', 'json'):
        out = render_machine(report, timing)
    else:
        raise ValueError('unknown report format %r' % format)
    return out.encode('utf-8')


def load_schema():
    with open(SCHEMA_PATH) as fh:
        return json.load(fh)
