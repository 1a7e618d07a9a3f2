"""Iwasawa lambda_p classification for imaginary quadratic fields.

Thin wrapper over the compiled ``_iqlambda`` module. Exact rationals come back as
``fractions.Fraction``; library errors raise ``IqlambdaError`` with a ``kind`` attribute.
"""

import json

from ._iqlambda import *  # noqa: F401,F403
from ._iqlambda import IqlambdaError, scan_jsonl

__all__ = [name for name in dir() if not name.startswith("_")]


def scan(x, p, mod_class=None, splus=(), sminus=(), exclude=(), threads=1):
    """Scan records for fundamental -x < D < 0 as dicts, ascending |D|."""
    lines = scan_jsonl(x, p, mod_class, set(splus), set(sminus), set(exclude), threads)
    return [json.loads(line) for line in lines]
