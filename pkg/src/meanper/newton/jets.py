"""
Truncated Taylor jets: coefficient arrays c_s = F^(s)(x0)/s!, s <= order.
"""

from typing import Sequence

import numpy as np
from scipy.special import binom

from ..entire.catalog import powers, shift_poly


def unit_jet(order: int) -> np.ndarray:
    jet = np.zeros(order + 1, dtype=complex)
    jet[0] = 1.0
    return jet


def jet_mul(a: np.ndarray, b: np.ndarray, order: int) -> np.ndarray:
    """Product of two jets truncated at order."""
    return np.convolve(a[:order + 1], b[:order + 1])[:order + 1]


def binomial_jet(delta: complex, m: int, order: int) -> np.ndarray:
    """Jet in h of (delta + h)^m."""
    jet = np.zeros(order + 1, dtype=complex)
    top = min(m, order)
    s = np.arange(top + 1)
    jet[:top + 1] = binom(m, s) * powers(delta, m + 1)[m - s]
    return jet


def polynomial_jet(coeffs: Sequence[complex], delta: complex, order: int) -> np.ndarray:
    """Jet in h of sum_l c_l (delta + h)^l."""
    shifted = shift_poly(coeffs, delta)
    jet = np.zeros(order + 1, dtype=complex)
    top = min(len(shifted), order + 1)
    jet[:top] = shifted[:top]
    return jet


def inverse_product_jet(x0: complex, nodes: Sequence[complex], exponents: Sequence[int],
                        order: int) -> np.ndarray:
    """Jet at x0 of prod_n (x - beta_n)^(-e_n).

    The logarithm L = -sum e_n ln(x - beta_n) has jet coefficients
    L_s = -sum e_n (-1)^(s-1) / (s (x0 - beta_n)^s); the exponential is
    accumulated by g_s = (1/s) sum_{t=1}^{s} t L_t g_{s-t}.
    """
    deltas = np.asarray([x0 - b for b in nodes], dtype=complex)
    exps = np.asarray(exponents, dtype=float)
    g = np.zeros(order + 1, dtype=complex)
    g[0] = 1.0
    for delta, e in zip(deltas, exponents):
        g[0] *= complex(delta) ** (-int(e))
    if order == 0:
        return g
    s = np.arange(1, order + 1)
    L = np.zeros(order + 1, dtype=complex)
    for delta, e in zip(deltas, exps):
        L[1:] += -e * (-1.0) ** (s - 1) / (s * delta ** s)
    for n in range(1, order + 1):
        t = np.arange(1, n + 1)
        g[n] = np.sum(t * L[1:n + 1] * g[n - t]) / n
    return g
