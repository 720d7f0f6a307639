"""Parsing of real-number arguments such as ``2pi/5``, ``pi/4``, ``0.7`` or ``3/2``."""
from __future__ import annotations

import re

from mpmath import mp, mpf

from .errors import ParseError

_EXPR = re.compile(
    r"^\s*(?P<sign>[-+]?)\s*(?P<num>\d+(?:\.\d*)?|\.\d+)?\s*\*?\s*(?P<pi>pi)?\s*(?:/\s*(?P<den>\d+(?:\.\d*)?))?\s*$"
)


def parse_expr(text: str) -> mpf:
    """Value of ``[sign][number][*]pi[/number]`` or a plain decimal/fraction.

    Evaluated at the current mpmath precision, so decimals are exact to it.
    """
    m = _EXPR.match(text)
    if not m or (m.group("num") is None and m.group("pi") is None):
        raise ParseError(f"cannot parse real expression {text!r}", 0)
    value = mpf(m.group("num")) if m.group("num") is not None else mpf(1)
    if m.group("pi"):
        value *= mp.pi
    if m.group("den") is not None:
        den = mpf(m.group("den"))
        if den == 0:
            raise ParseError(f"division by zero in {text!r}", m.start("den"))
        value /= den
    return -value if m.group("sign") == "-" else value
