"""Igusa local zeta functions of quadratic polynomials over p-adic rings.

A polynomial is a dict (or JSON string) in the command-line input schema::

    {"p": "3", "matrix": [["1", "0"], ["0", "3"]], "linear": ["0", "1"], "constant": "0"}

Every function returns the parsed JSON document that ``igusa <command> --format json``
prints. Rationals appear as ``[numerator, denominator]`` string pairs.
"""

import json
from fractions import Fraction

from ._igusa import DomainError, ParseError, call

__all__ = [
    "DomainError",
    "ParseError",
    "classify",
    "reduce",
    "zeta",
    "poles",
    "poincare",
    "gf",
    "verify",
    "rational",
    "series",
]


def _run(command, poly, K=0, precision=0):
    text = poly if isinstance(poly, str) else json.dumps(poly)
    out, _, _ = call(command, text, K, precision)
    return json.loads(out)


def classify(poly, precision=0):
    return _run("classify", poly, precision=precision)


def reduce(poly, precision=0):
    return _run("reduce", poly, precision=precision)


def zeta(poly, K=0, precision=0):
    return _run("zeta", poly, K, precision)


def poles(poly, precision=0):
    return _run("poles", poly, precision=precision)


def poincare(poly, K=0, precision=0):
    return _run("poincare", poly, K, precision)


def gf(poly, K=0, precision=0):
    return _run("gf", poly, K, precision)


def verify(poly, K=8, precision=0):
    return _run("verify", poly, K, precision)


def rational(pair):
    """["num", "den"] -> Fraction"""
    return Fraction(int(pair[0]), int(pair[1]))


def series(doc):
    """Series coefficients of a zeta or poincare result as Fractions."""
    return [rational(c) for c in doc["series"]]
