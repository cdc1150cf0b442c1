"""
Closed-form expansion polynomials P_{k,j,l} and divided differences of
the exponential g_z(xi) = exp(z xi).

b_{k,l}(z) = sum_{j<=k} exp(z alpha_j) P_{k,j,l}(z). The recursion path
(psi_forward on the restriction of g_z) is the default; the closed form is
kept for cross-validation.
"""

import cmath
import logging
import math
from typing import Optional

import numpy as np
from numpy.polynomial import polynomial as P

from ..entire.catalog import powers
from ..entire.zeros import MultiplicityVariety
from .jets import inverse_product_jet
from .tables import DividedDifferenceTable, ValueSet, psi_forward

logger = logging.getLogger(__name__)


def expansion_poly(V: MultiplicityVariety, k: int, j: int, l: int) -> np.ndarray:
    """Ascending coefficients of P_{k,j,l}(z), degree < m_j.

    For j < k the alpha_j-derivatives act on
    prod_{n<k, n!=j} (alpha_j - alpha_n)^{-m_n} (alpha_j - alpha_k)^{-(l+1)};
    for j = k on prod_{n<k} (alpha_k - alpha_n)^{-m_n}.

    Raises:
        IndexError: invalid k, j or l.
    """
    V.check_index(k, l)
    if not 0 <= j <= k:
        raise IndexError(f"expansion index j={j} outside 0..{k}")
    points = V.points
    alpha_j, m_j = points[j]
    if j < k:
        nodes = [points[n][0] for n in range(k) if n != j] + [points[k][0]]
        exps = [points[n][1] for n in range(k) if n != j] + [l + 1]
        top = m_j - 1
    else:
        nodes = [points[n][0] for n in range(k)]
        exps = [points[n][1] for n in range(k)]
        top = l
    g = inverse_product_jet(alpha_j, nodes, exps, top)
    return np.array([g[top - i] / math.factorial(i) for i in range(top + 1)], dtype=complex)


def exponential_values(V: MultiplicityVariety, z: complex) -> ValueSet:
    """Restriction of exp(z xi): a_{j,i} = z^i exp(z alpha_j) / i!."""
    rows = []
    for alpha, m in V.points:
        factorials = np.cumprod(np.concatenate([[1.0], np.arange(1, m)]))[:m]
        rows.append(powers(z, m) / factorials * cmath.exp(z * alpha))
    return ValueSet(variety=V, values=tuple(rows))


def exponential_divided_differences(V: MultiplicityVariety, z: complex,
                                    K: Optional[int] = None) -> DividedDifferenceTable:
    """The whole table b_{k,l}(z) on the first K points in one recursion pass."""
    W = V.prefix(K)
    return psi_forward(W, exponential_values(W, complex(z)), leja_form=False)


def divided_diff_exponential(V: MultiplicityVariety, k: int, l: int, z: complex,
                             method: str = "recursion") -> complex:
    """b_{k,l}(z), by recursion (default) or closed form."""
    V.check_index(k, l)
    z = complex(z)
    if method == "recursion":
        return exponential_divided_differences(V.prefix(k + 1), z)[k, l]
    if method == "closed_form":
        total = 0j
        for j in range(k + 1):
            total += cmath.exp(z * V.points[j][0]) * P.polyval(z, expansion_poly(V, k, j, l))
        return complex(total)
    raise ValueError(f"unknown method {method!r}")
