"""Published closed forms for the determinant coefficients, transcribed literally.

Each builder returns the polynomial exactly as printed by default.  A keyword
switches on the single-token correction that recomputation supports:

* the brackets of the two degree-four coefficients print ``d1^1``; ``d1^2`` is needed
* the first factor of the constant coefficient prints ``4(d1^2 + d2^2 - ...)``;
  ``4(d1^3 + d2^3 - ...)`` is needed
* the last line of the two pure-square coefficients carries the wrong sign

The doubled ``++`` in the second factor of the constant coefficient is read
as a single plus and needs no switch.
"""

from __future__ import annotations

from fractions import Fraction

from .exact import MultiPoly, poly_vars

d1, d2, g, _x, _y = poly_vars()
w = g * (1 - g)  # g(1 - g) recurs in every display


def q22(corrected: bool = False) -> MultiPoly:
    return (
        w ** 2
        + 2 * w * (d1 ** 2 + d2 ** 2 - 2 * d1 * d2 - 2 * (d1 + d2) + 4)
        + (d1 ** 4 + d2 ** 4 - 4 * d1 * d2 * (d1 ** 2 + d2 ** 2) + 38 * d1 ** 2 * d2 ** 2)
        - 4 * (d1 + d2) ** 3
        - (13 * (d1 ** 2 + d2 ** 2) - 6 * d1 * d2)
        + 4 * (d1 + d2)
        + 12
    )


def _q13_bracket(printed_exponent: int, sign: int) -> MultiPoly:
    return w + d1 ** printed_exponent + d2 ** 2 - 4 * d1 * d2 + sign * 3 * (d1 - d2) + 2


def q13(corrected: bool = False) -> MultiPoly:
    return -8 * d1 * (d1 - 1) * _q13_bracket(2 if corrected else 1, 1)


def q31(corrected: bool = False) -> MultiPoly:
    return -8 * d2 * (d2 - 1) * _q13_bracket(2 if corrected else 1, -1)


def q13_factors(corrected: bool = True) -> tuple[MultiPoly, MultiPoly, MultiPoly]:
    """(L1, L2, Q) with -q13/8 = L1 L2 Q."""
    return d1, d1 - 1, _q13_bracket(2 if corrected else 1, 1)


def q31_factors(corrected: bool = True) -> tuple[MultiPoly, MultiPoly, MultiPoly]:
    return d2, d2 - 1, _q13_bracket(2 if corrected else 1, -1)


def qt00(corrected: bool = False) -> MultiPoly:
    s2 = d1 ** 2 + d2 ** 2
    p = d1 * d2
    inner = d1 ** 3 + d2 ** 3 if corrected else s2
    first = (
        (4 * d1 + 1) * (4 * d2 + 1) * w
        + 16 * (s2 - p) * p
        + 4 * (inner - 3 * p * (d1 + d2))
        + (13 * s2 - 50 * p)
        + 11 * (d1 + d2)
        + 2
    )
    second = (
        (4 * d1 + 1) * (4 * d2 + 1) * w
        + 16 * (s2 - p) * p
        + 4 * s2 * (d1 + d2)
        - 3 * (s2 + 6 * p)
        - 7 * (d1 + d2)
        + 6
    )
    return first * second * Fraction(1, 16)


def _qt02_like(a: MultiPoly, b: MultiPoly, last_sign: int) -> MultiPoly:
    """-4 times the printed polynomial, with a the distinguished delta."""
    k = 4 * a + 1
    expr = (
        k ** 2 * w ** 2
        + 2 * k * (k * b ** 2 - 2 * k * (a + 1) * b + 4 * a ** 3 + 5 * a ** 2 + 2 * a + 4) * w
        + k ** 2 * b ** 4
        - 4 * k ** 2 * (a + 1) * b ** 3
        + (32 * a ** 4 + 112 * a ** 3 + 142 * a ** 2 + 52 * a - 13) * b ** 2
        - (64 * a ** 5 + 32 * a ** 4 - 92 * a ** 3 + 68 * a ** 2 + 82 * a - 4) * b
        + last_sign * k * (a - 1) * (a + 1) * (a + 2) * (4 * a ** 2 + a - 6)
    )
    return expr * Fraction(-1, 4)


def qt02(corrected: bool = False) -> MultiPoly:
    return _qt02_like(d1, d2, 1 if corrected else -1)


def qt20(corrected: bool = False) -> MultiPoly:
    return _qt02_like(d2, d1, 1 if corrected else -1)


def qt11(corrected: bool = False) -> MultiPoly:
    s = d1 + d2
    s2 = d1 ** 2 + d2 ** 2
    p = d1 * d2
    half = (
        (28 * p ** 2 - 4 * s * p + s2 - 20 * p - s) * w
        + 4 * (7 * s2 - 10 * p) * p ** 2
        - 4 * (d1 ** 3 + d2 ** 3) * p
        + (d1 ** 4 + d2 ** 4 - 12 * s2 * p - 6 * p ** 2)
        + 2 * (d1 ** 2 + p + d2 ** 2) * s
        - (s2 - 14 * p)
        - 2 * s
    )
    return 2 * half


PUBLISHED = {
    (0, 0): qt00,
    (0, 2): qt02,
    (2, 0): qt20,
    (1, 1): qt11,
    (1, 3): q13,
    (3, 1): q31,
    (2, 2): q22,
}
