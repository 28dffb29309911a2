"""Rational-number backend selection.

Every exponent and every coefficient component in the package is an exact
rational built through :func:`rat`.  At import time we pick the fastest
available implementation:

* ``gmpy2.mpq`` -- GMP-backed, compiled; the default when gmpy2 is importable.
* ``fractions.Fraction`` -- pure stdlib fallback.

Set ``THETAQ_BACKEND=fraction`` (or ``gmp``) to force a choice; the selected
name is exported as ``BACKEND`` and reported by the CLI and the benchmark.
The two backends must never be mixed inside one process.
"""

from __future__ import annotations

import os

_choice = os.environ.get("THETAQ_BACKEND", "").strip().lower()

if _choice in ("", "gmp", "gmpy", "gmpy2"):
    try:
        from gmpy2 import mpq as _ratclass

        BACKEND = "gmpy2"
    except ImportError:
        if _choice:
            raise
        from fractions import Fraction as _ratclass

        BACKEND = "fraction"
elif _choice in ("fraction", "fractions", "pure"):
    from fractions import Fraction as _ratclass

    BACKEND = "fraction"
else:
    raise ValueError(f"unknown THETAQ_BACKEND {_choice!r}")

rat = _ratclass

R0 = rat(0)
R1 = rat(1)

#: sentinel trusted-order bound for exactly known series
INF = float("inf")


def rat_from_str(text: str):
    """Parse "p/q" or "p" into a backend rational (used by CLI/JSON loaders)."""
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return rat(int(num), int(den))
    return rat(int(text))


def rat_str(x) -> str:
    """Canonical "p/q" (or "p") rendering, identical across backends."""
    return str(x)
