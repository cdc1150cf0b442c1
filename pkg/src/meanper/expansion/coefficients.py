"""
Expansion coefficients of a mean-periodic function.

General flavor: c_{k,l} = <S_{k,l}, f>, for any multiplicity variety.
Interpolating flavor: d_{k,l} = <T_{k,l}, f>, for interpolating varieties.
"""

import logging
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from ..entire.catalog import EntireFunctionSpec
from ..entire.streams import SERIES_RTOL, TaylorStream
from ..entire.zeros import MultiplicityVariety
from ..errors import TruncationWarning
from ..functionals import AnalyticFunctional, pair, s_functional, t_functional
from ..newton.closed_form import expansion_poly
from ..newton.tables import JetTable

logger = logging.getLogger(__name__)

TRUNCATION_RATIO = 1e-10
RADIUS_SLACK = 1e-12


class Flavor(str, Enum):
    """Which expansion the coefficients belong to."""

    GENERAL = "general"
    INTERPOLATING = "interpolating"


@dataclass(frozen=True)
class ExpansionCoefficients:
    """Coefficients {x_{k,l}: k < K, l < m_k} on a variety prefix."""

    flavor: Flavor
    table: JetTable
    flagged: Tuple[Tuple[int, int], ...] = ()
    warnings: Tuple[TruncationWarning, ...] = field(default=(), compare=False)

    @classmethod
    def from_rows(cls, flavor: Flavor, variety: MultiplicityVariety, rows, **kwargs) -> 'ExpansionCoefficients':
        return cls(flavor=Flavor(flavor), table=JetTable.from_rows(variety, rows), **kwargs)

    @classmethod
    def zeros(cls, flavor: Flavor, variety: MultiplicityVariety) -> 'ExpansionCoefficients':
        return cls(flavor=Flavor(flavor), table=JetTable.zeros(variety))

    @property
    def variety(self) -> MultiplicityVariety:
        return self.table.variety

    @property
    def K(self) -> int:
        return len(self.table)

    def __getitem__(self, index: Tuple[int, int]) -> complex:
        return self.table[index]

    def rows(self):
        return self.table.rows()

    def max_abs(self) -> float:
        return self.table.max_abs()

    def norm_weight(self, k: int, l: int) -> float:
        """Per-entry weight of the sequence norm, without the theta factor."""
        if self.flavor == Flavor.INTERPOLATING:
            return 1.0
        modulus = abs(self.variety[k][0])
        exponent = self.variety.prefix_sums()[k] + l
        return math.exp(-exponent * math.log1p(modulus))

    def to_rows(self) -> List[Dict[str, object]]:
        """Rows (k, l, re, im, abs_alpha, norm_weight) for the coefficient CSV."""
        rows = []
        for k, l, value in self.rows():
            rows.append({
                'k': k,
                'l': l,
                're': value.real,
                'im': value.imag,
                'abs_alpha': abs(self.variety[k][0]),
                'norm_weight': self.norm_weight(k, l),
            })
        return rows


def truncation_for_radius(V: MultiplicityVariety, r_cut: float) -> int:
    """Number of leading variety points with |alpha| <= r_cut."""
    if r_cut < 0:
        raise ValueError(f"cutoff radius must be nonnegative, got {r_cut}")
    return len(V.within(r_cut * (1.0 + RADIUS_SLACK)))


def _pair_all(V: MultiplicityVariety, build: Callable[[int, int], AnalyticFunctional],
              f: TaylorStream, threads: Optional[int], n_max: Optional[int], rtol: float):
    indices = [(k, l) for k, (_, m) in enumerate(V) for l in range(m)]

    def work(index: Tuple[int, int]):
        k, l = index
        result = pair(build(k, l), f, n_max=n_max, rtol=rtol)
        logger.debug(f"pairing ({k},{l}) -> {result.value:.6g} via {result.method}")
        return result

    if threads and threads > 1 and len(indices) > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            results = list(executor.map(work, indices))
    else:
        results = [work(index) for index in indices]

    rows = [np.zeros(m, dtype=complex) for _, m in V]
    flagged = []
    for (k, l), result in zip(indices, results):
        rows[k][l] = result.value
        if result.flagged:
            flagged.append((k, l))
    if flagged:
        logger.warning(f"{len(flagged)} pairings did not reach the tail tolerance")
    return rows, tuple(flagged)


def extract_general(phi: EntireFunctionSpec, V: MultiplicityVariety, f: TaylorStream,
                    K: Optional[int] = None, threads: Optional[int] = None,
                    n_max: Optional[int] = None, rtol: float = SERIES_RTOL) -> ExpansionCoefficients:
    """c_{k,l} = <S_{k,l}, f> for the first K variety points.

    ``phi`` is not needed by the S functionals; it is accepted so both
    extractors share one signature.
    """
    W = V.prefix(K)
    rows, flagged = _pair_all(W, lambda k, l: s_functional(W, k, l), f, threads, n_max, rtol)
    logger.info(f"Extracted {W.total_multiplicity} general coefficients on {len(W)} points")
    return ExpansionCoefficients.from_rows(Flavor.GENERAL, W, rows, flagged=flagged)


def extract_interpolating(phi: EntireFunctionSpec, V: MultiplicityVariety, f: TaylorStream,
                          K: Optional[int] = None, threads: Optional[int] = None,
                          n_max: Optional[int] = None, rtol: float = SERIES_RTOL) -> ExpansionCoefficients:
    """d_{k,l} = <T_{k,l}, f> for the first K variety points.

    The T functionals see the whole of V, so that their transforms vanish
    exactly on the points past the truncation too. At a zero of
    multiplicity m > 1 the pairings are triangular in l and are solved for
    the coefficients of z^l/l!.
    """
    W = V.prefix(K)
    series_length = n_max or 1024
    rows, flagged = _pair_all(W, lambda k, l: t_functional(phi, V, k, l, n_max=series_length),
                              f, threads, n_max, rtol)
    rows = [_unmix_multiple(phi, alpha, m, row) if m > 1 else row for row, (alpha, m) in zip(rows, W)]
    logger.info(f"Extracted {W.total_multiplicity} interpolating coefficients on {len(W)} points")
    return ExpansionCoefficients.from_rows(Flavor.INTERPOLATING, W, rows, flagged=flagged)


def _unmix_multiple(phi: EntireFunctionSpec, alpha: complex, m: int, row: np.ndarray) -> np.ndarray:
    # <T_{k,l}, f> = d_{k,l} + sum_{i>l} (phi_{m+i-l} / phi_m) d_{k,i}, phi_n the Taylor coefficients at alpha
    jet = phi.derivatives(alpha, 2 * m)
    rho = jet[m + 1:] / jet[m]
    out = np.array(row, dtype=complex)
    for l in reversed(range(m - 1)):
        out[l] = row[l] - np.dot(rho[:m - 1 - l], out[l + 1:])
    return out


def _simple_zero_weights(alphas: np.ndarray, k: int, top: int) -> np.ndarray:
    """prod_{n<=j, n!=k} (alpha_k - alpha_n)^{-1} for j = k..top-1."""
    diffs = alphas[k] - alphas[:top]
    diffs[k] = 1.0
    weights = np.ones(top - k, dtype=complex)
    inverse_prefix = 1.0 / np.prod(diffs[:k]) if k else 1.0
    running = inverse_prefix
    for j in range(k, top):
        if j > k:
            running = running / diffs[j]
        weights[j - k] = running
    return weights


def c_to_d(c: ExpansionCoefficients, V: Optional[MultiplicityVariety] = None,
           K: Optional[int] = None) -> ExpansionCoefficients:
    """Interpolating coefficients from general ones by regrouping the packets.

    d_{k,l} = l! sum_{j>=k} sum_i c_{j,i} [z^l] P_{j,k,i}(z). The sum over j
    stops at K; when K is shorter than V, a TruncationWarning is attached
    to every d whose last term exceeds 1e-10 of its running sum.
    """
    if c.flavor != Flavor.GENERAL:
        raise ValueError("c_to_d needs general coefficients")
    V = c.variety if V is None else V
    top = min(K if K is not None else c.K, c.K)
    W = V.prefix(top)
    truncated = top < len(V)
    rows = [np.zeros(m, dtype=complex) for _, m in W]
    last_terms = [np.zeros(m) for _, m in W]

    if all(m == 1 for _, m in W):
        alphas = W.alphas
        packets = np.array([c[j, 0] for j in range(top)], dtype=complex)
        for k in range(top):
            terms = packets[k:] * _simple_zero_weights(alphas, k, top)
            rows[k][0] = complex(np.sum(terms))
            last_terms[k][0] = abs(terms[-1])
    else:
        for k, (_, m_k) in enumerate(W):
            factorials = np.cumprod(np.concatenate([[1.0], np.arange(1, m_k)]))[:m_k]
            for j in range(k, top):
                packet = np.zeros(m_k, dtype=complex)
                for i in range(W[j][1]):
                    value = c[j, i]
                    if value == 0:
                        continue
                    poly = expansion_poly(W, j, k, i)
                    packet[:len(poly)] += value * poly[:m_k]
                rows[k] += factorials * packet
                if j == top - 1:
                    last_terms[k] = np.abs(factorials * packet)

    found = []
    if truncated:
        for k, row in enumerate(rows):
            for l, value in enumerate(row):
                ratio = last_terms[k][l] / abs(value) if value != 0 else 0.0
                if ratio > TRUNCATION_RATIO:
                    found.append(TruncationWarning(
                        f"d[{k},{l}] truncated at K={top}: last term ratio {ratio:.3g}",
                        index=(k, l), ratio=ratio))
    for warning in found:
        warnings.warn(warning, stacklevel=2)
    if found:
        logger.warning(f"c_to_d: {len(found)} coefficients flagged as truncated at K={top}")
    return ExpansionCoefficients.from_rows(Flavor.INTERPOLATING, W, rows, warnings=tuple(found))
