"""Dense univariate polynomial helpers over exact rationals (or floats).

Coefficient vectors are low-to-high degree: ``coeffs[l]`` multiplies ``x**l``.
Everything works with any field that supports +, * and / (Fraction, float).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def poly_eval(coeffs: Sequence, x):
    """Evaluate a polynomial with Horner's rule."""
    acc = 0 * x
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def poly_mul(a: Sequence, b: Sequence) -> list:
    """Coefficient convolution: (a * b)(x) = a(x) * b(x)."""
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def poly_derivative(coeffs: Sequence) -> list:
    return [l * c for l, c in enumerate(coeffs)][1:] or [Fraction(0)]


def poly_antiderivative(coeffs: Sequence) -> list:
    """Antiderivative with zero constant term."""
    return [Fraction(0)] + [Fraction(c, 1) / (l + 1) for l, c in enumerate(coeffs)]


def is_zero_poly(coeffs: Sequence) -> bool:
    return all(c == 0 for c in coeffs)
