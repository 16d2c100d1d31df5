"""Verbal closedness of infinite dihedral subgroups.

Thin wrappers over the native core; big integers come back as int and
rationals as fractions.Fraction.
"""

import json
from fractions import Fraction

from . import _vclose
from ._vclose import VcloseError, characters

__all__ = [
    "VcloseError",
    "analyze",
    "characters",
    "dihedral_multiply",
    "is_simple",
    "project",
    "selftest",
    "smith_normal_form",
    "torsion_data",
]


def _ints(rows):
    return [[int(x) for x in row] for row in rows]


def smith_normal_form(matrix):
    """Return (U, D, V) with U*M*V = D."""
    cols = len(matrix[0]) if matrix else 0
    u, d, v = _vclose.smith_normal_form(matrix, cols)
    return _ints(u), _ints(d), _ints(v)


def torsion_data(rank, relations=()):
    order, factors, free_rank = _vclose.torsion_data(rank, list(relations))
    return int(order), [int(x) for x in factors], free_rank


def project(rank, actions, q, signs, relations=()):
    """Component of q for the character with the given generator signs."""
    return [Fraction(x) for x in _vclose.project(rank, list(relations), actions, q, list(signs))]


def is_simple(rank, actions, q, relations=()):
    report = _vclose.is_simple(rank, list(relations), actions, q)
    for c in report["components"]:
        c["component"] = [Fraction(x) for x in c["component"]]
        c["content"] = int(c["content"])
        c["lift"] = [int(x) for x in c["lift"]]
    return report


def dihedral_multiply(g, h):
    """Multiply a^k b^e elements given as (k, e) pairs."""
    k, e = _vclose.dihedral_multiply(g[0], bool(g[1]), h[0], bool(h[1]))
    return int(k), int(e)


def analyze(spec_text, filler=0, squares=0, verify=False, seed=1, samples=10_000):
    """Analyze a spec; returns (report dict, serialized equation or None)."""
    report, equation = _vclose.analyze(spec_text, filler, squares, verify, seed, samples)
    return json.loads(report), (equation or None)


def selftest(inject_project_sign=False):
    """Returns (passed, name of the first failing property or '')."""
    return _vclose.selftest(inject_project_sign)
