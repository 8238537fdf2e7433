# These dictionaries drive every run, change them w/ care
import importlib
import os

# Optional user module with overrides, named by GRADEDQ_SETTINGS
_name = os.environ.get('GRADEDQ_SETTINGS')
settings = importlib.import_module(_name) if _name else object()

# Numeric options; only the path and grid checks read them
GQ_NUMERIC = {
    'steps': 10000,
    'tolerance': 1e-6,
    'seed': 0,
    # unit norm / orthogonality of group samples
    'group_tolerance': 1e-9,
    # unit norm of grid map nodes
    'unit_tolerance': 1e-12,
    # anchor compatibility of sampled action paths (trapezoid residual)
    'anchor_tolerance': 1e-3,
    # convergence order window for the `order` check
    'order_window': 0.3,
}
GQ_NUMERIC.update(getattr(settings, 'GQ_NUMERIC', {}))

# Maps a check name to its handler in gradedq.language.checks
GQ_CHECKS = {
    'q2': 'check_q2',
    'master': 'check_master',
    'jacobi': 'check_jacobi',
    'dirac': 'check_dirac',
    'lemma1': 'check_lemma1',
    'lemma3': 'check_lemma3',
    'stokes': 'check_stokes',
    'boundary-lagrangian': 'check_boundary_lagrangian',
    'cocycle': 'check_cocycle',
    'holonomy': 'check_holonomy',
    'reparam': 'check_reparam',
    'order': 'check_order',
    'action': 'check_action',
    'wzw': 'check_wzw',
    'gauge': 'check_gauge',
    'cartan': 'check_cartan',
    'iota': 'check_iota',
    'bracket': 'check_bracket',
    'leibniz': 'check_leibniz',
    'skew': 'check_skew',
    'pairing': 'check_pairing',
    'nmap': 'check_nmap',
    'dorfman': 'check_dorfman',
    'poisson': 'check_poisson',
    'scaling': 'check_scaling',
}
GQ_CHECKS.update(getattr(settings, 'GQ_CHECKS', {}))

# One text report line per check
GQ_TEXT_LINE = getattr(settings, 'GQ_TEXT_LINE', '%(verdict)s %(name)s %(inputs)s (%(ms)d ms)')

GQ_REPORT_SCHEMA_VERSION = 1
