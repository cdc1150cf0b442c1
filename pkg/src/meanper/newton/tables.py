"""
Hermite divided differences and Newton polynomials on a multiplicity variety.

Q_q(xi) = sum_{k<=q} Pi_{k-1}(xi) sum_l b_{k,l} (xi - alpha_k)^l with
Pi_k(xi) = prod_{n<=k} (xi - alpha_n)^{m_n}. Q_q is evaluated as a nested
product on truncated jets, so derivatives come for free.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from ..entire.zeros import MultiplicityVariety
from ..errors import CoincidentNodes
from .jets import binomial_jet, jet_mul, polynomial_jet, unit_jet

logger = logging.getLogger(__name__)

COINCIDENT_THRESHOLD = 1e-300
CONDITION_FLAG = 1e12


@dataclass(frozen=True)
class JetTable:
    """Doubly indexed values {x_{k,l}: l < m_k} aligned to a variety."""

    variety: MultiplicityVariety
    values: Tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.values) != len(self.variety):
            raise ValueError(f"table has {len(self.values)} rows for {len(self.variety)} variety points")
        for k, (row, (_, m)) in enumerate(zip(self.values, self.variety)):
            if len(row) != m:
                raise ValueError(f"row {k} has {len(row)} entries, multiplicity is {m}")

    @classmethod
    def from_rows(cls, variety: MultiplicityVariety, rows: Sequence[Sequence[complex]], **kwargs):
        return cls(variety=variety, values=tuple(np.asarray(r, dtype=complex) for r in rows), **kwargs)

    @classmethod
    def zeros(cls, variety: MultiplicityVariety, **kwargs):
        return cls.from_rows(variety, [np.zeros(m, dtype=complex) for _, m in variety], **kwargs)

    def __getitem__(self, index: Tuple[int, int]) -> complex:
        k, l = index
        return complex(self.values[k][l])

    def __len__(self) -> int:
        return len(self.values)

    def rows(self) -> Iterator[Tuple[int, int, complex]]:
        for k, row in enumerate(self.values):
            for l, value in enumerate(row):
                yield k, l, complex(value)

    def flat(self) -> np.ndarray:
        return np.concatenate(self.values) if self.values else np.zeros(0, dtype=complex)

    def max_abs(self) -> float:
        flat = self.flat()
        return float(np.max(np.abs(flat))) if len(flat) else 0.0


@dataclass(frozen=True)
class ValueSet(JetTable):
    """Jet data a_{k,l} = g^(l)(alpha_k)/l!."""


@dataclass(frozen=True)
class DividedDifferenceTable(JetTable):
    """Divided differences b_{k,l} with a conditioning estimate.

    interpolant, when set, is the same data divided in Leja order.
    """

    condition: float = 0.0
    flagged: bool = False
    interpolant: Optional['NewtonForm'] = field(default=None, compare=False, repr=False)

    def to_rows(self) -> List[Dict[str, object]]:
        return [{'k': k, 'l': l, 're': v.real, 'im': v.imag, 'condition_flag': int(self.flagged)}
                for k, l, v in self.rows()]


@dataclass(frozen=True)
class PiProduct:
    """Pi_k(xi) = prod_{n<=k} (xi - alpha_n)^{m_n} (k = -1 is the empty product)."""

    variety: MultiplicityVariety
    k: int

    def jet(self, xi: complex, order: int) -> np.ndarray:
        return pi_jet(self.variety.points[:self.k + 1], xi, order)

    def derivative(self, xi: complex, order: int = 0) -> complex:
        """Pi_k^(order)(xi)."""
        return complex(self.jet(xi, order)[order] * np.prod(np.arange(1, order + 1), dtype=float))

    def __call__(self, xi: complex) -> complex:
        return complex(self.jet(xi, 0)[0])


def pi_jet(points: Sequence[Tuple[complex, int]], xi: complex, order: int) -> np.ndarray:
    jet = unit_jet(order)
    for alpha, m in points:
        jet = jet_mul(jet, binomial_jet(xi - alpha, m, order), order)
    return jet


def _newton_jet(points: Sequence[Tuple[complex, int]], blocks: Sequence[np.ndarray],
                xi: complex, order: int) -> np.ndarray:
    acc = np.zeros(order + 1, dtype=complex)
    for k in reversed(range(len(blocks))):
        alpha, m = points[k]
        delta = xi - alpha
        block = polynomial_jet(blocks[k], delta, order)
        if k == len(blocks) - 1:
            acc = block
        else:
            acc = block + jet_mul(binomial_jet(delta, m, order), acc, order)
    return acc


def leja_order(points: Sequence[Tuple[complex, int]]) -> Tuple[int, ...]:
    """Weighted Leja order of the nodes.

    Starts from the node of largest modulus; each next node maximizes
    prod |alpha - alpha_n|^{m_n} over the nodes already taken.
    """
    if not points:
        return ()
    alphas = np.array([alpha for alpha, _ in points], dtype=complex)
    order = [int(np.argmax(np.abs(alphas)))]
    taken = np.zeros(len(points), dtype=bool)
    taken[order[0]] = True
    score = np.zeros(len(points))
    while len(order) < len(points):
        alpha, m = points[order[-1]]
        with np.errstate(divide='ignore'):
            score += m * np.log(np.abs(alphas - alpha))
        nxt = int(np.argmax(np.where(taken, -np.inf, score)))
        order.append(nxt)
        taken[nxt] = True
    return tuple(order)


@dataclass(frozen=True)
class NewtonForm:
    """Newton form of the full interpolant with the nodes in Leja order."""

    points: Tuple[Tuple[complex, int], ...]
    blocks: Tuple[np.ndarray, ...]

    @classmethod
    def build(cls, points: Sequence[Tuple[complex, int]], rows: Sequence[np.ndarray]) -> 'NewtonForm':
        order = leja_order(points)
        ordered = tuple(points[i] for i in order)
        blocks, _ = _divided_differences(ordered, [rows[i] for i in order])
        return cls(points=ordered, blocks=tuple(blocks))

    def jet(self, xi: complex, order: int) -> np.ndarray:
        return _newton_jet(self.points, self.blocks, complex(xi), order)


def _divided_differences(points: Sequence[Tuple[complex, int]],
                         rows: Sequence[np.ndarray]) -> Tuple[List[np.ndarray], float]:
    blocks: List[np.ndarray] = []
    condition = 0.0
    for k, (alpha, m) in enumerate(points):
        row = np.asarray(rows[k], dtype=complex)
        if k == 0:
            blocks.append(row.copy())
            continue
        q = _newton_jet(points, blocks, alpha, m - 1)
        pi = pi_jet(points[:k], alpha, m - 1)
        if abs(pi[0]) < COINCIDENT_THRESHOLD:
            raise CoincidentNodes(f"node {k} at {alpha} coincides with an earlier node")
        block = np.zeros(m, dtype=complex)
        for l in range(m):
            acc = row[l] - q[l] - np.dot(pi[l:0:-1], block[:l])
            block[l] = acc / pi[0]
        blocks.append(block)
        condition = max(condition, abs(q[0]) / abs(pi[0]))
    return blocks, condition


def newton_jet(V: MultiplicityVariety, b: DividedDifferenceTable, q: int, xi: complex,
               order: int) -> np.ndarray:
    """Q_q^(s)(xi)/s! for s <= order.

    The full interpolant (q = K - 1) is read from the Leja-ordered form when
    the table carries one.
    """
    if not 0 <= q < len(b):
        raise IndexError(f"Newton index {q} outside 0..{len(b) - 1}")
    if q == len(b) - 1 and b.interpolant is not None and V.points == b.variety.points:
        return b.interpolant.jet(xi, order)
    return _newton_jet(V.points, b.values[:q + 1], complex(xi), order)


def newton_eval(V: MultiplicityVariety, b: DividedDifferenceTable, q: int, xi: complex,
                order: int = 0) -> complex:
    """Q_q^(order)(xi)/order!.

    Example:
        >>> V = MultiplicityVariety.from_points([(0, 2)])
        >>> b = DividedDifferenceTable.from_rows(V, [[1, 2]])
        >>> newton_eval(V, b, 0, 3)
        (7+0j)
    """
    return complex(newton_jet(V, b, q, xi, order)[order])


def psi_forward(V: MultiplicityVariety, a: ValueSet, condition_flag: float = CONDITION_FLAG,
                leja_form: bool = True) -> DividedDifferenceTable:
    """Divided differences b = Psi(a) by induction on k.

    b_{k,l} = (a_{k,l} - Q_{k-1}^(l)(alpha_k)/l!
               - sum_{n<l} Pi_{k-1}^(l-n)(alpha_k)/(l-n)! b_{k,n}) / Pi_{k-1}(alpha_k)

    With leja_form the same data is also divided in Leja order; that form
    evaluates the full interpolant without the cancellation the variety
    order suffers on clustered nodes.

    Raises:
        CoincidentNodes: |Pi_{k-1}(alpha_k)| underflows.
    """
    if len(a) != len(V):
        raise ValueError(f"value set has {len(a)} rows for {len(V)} variety points")
    blocks, condition = _divided_differences(V.points, a.values)
    flagged = condition > condition_flag
    if flagged:
        logger.warning(f"Divided-difference table is ill conditioned (estimate {condition:.3g})")
    interpolant = NewtonForm.build(V.points, a.values) if leja_form and len(V) else None
    return DividedDifferenceTable(variety=V, values=tuple(blocks), condition=condition,
                                  flagged=flagged, interpolant=interpolant)


def psi_inverse(V: MultiplicityVariety, b: DividedDifferenceTable) -> ValueSet:
    """Jet data a_{k,l} = Q_K^(l)(alpha_k)/l! of the full Newton polynomial."""
    if len(b) != len(V):
        raise ValueError(f"table has {len(b)} rows for {len(V)} variety points")
    if not len(V):
        return ValueSet(variety=V, values=())
    rows = [newton_jet(V, b, len(V) - 1, alpha, m - 1) for alpha, m in V.points]
    return ValueSet(variety=V, values=tuple(rows))


def restrict(g, V: MultiplicityVariety, K: Optional[int] = None) -> ValueSet:
    """Restriction {g^(l)(alpha_k)/l!} of a catalog function or stream to V."""
    V = V.prefix(K)
    return ValueSet(variety=V, values=tuple(np.asarray(g.derivatives(alpha, m), dtype=complex)
                                            for alpha, m in V.points))


def _basis_row(points: Sequence[Tuple[complex, int]], xi: complex, order: int) -> np.ndarray:
    """order-th jet coefficient at xi of every Pi_{k-1}(xi) (xi - alpha_k)^l."""
    columns = []
    prefix = unit_jet(order)
    for alpha, m in points:
        for l in range(m):
            columns.append(jet_mul(prefix, binomial_jet(xi - alpha, l, order), order)[order])
        prefix = jet_mul(prefix, binomial_jet(xi - alpha, m, order), order)
    return np.asarray(columns, dtype=complex)


@dataclass
class HermiteInterpolant:
    """Hermite interpolant in a column-scaled basis Pi_{k-1}(xi) (xi - alpha_k)^l, nodes in Leja order."""

    points: Tuple[Tuple[complex, int], ...]
    coeffs: np.ndarray
    scales: np.ndarray
    residual: float = field(default=0.0)

    def eval(self, xi: complex, order: int = 0) -> complex:
        """Q^(order)(xi)/order!."""
        return complex(np.dot(_basis_row(self.points, complex(xi), order) / self.scales, self.coeffs))


def hermite_interpolant(V: MultiplicityVariety, a: ValueSet) -> HermiteInterpolant:
    """Solve the confluent interpolation system for the interpolant directly.

    Rows are the basis jets at every node; columns are scaled to unit maximum
    before the dense solve.
    """
    order = leja_order(V.points)
    points = tuple(V.points[i] for i in order)
    size = V.total_multiplicity
    if not size:
        return HermiteInterpolant(points=points, coeffs=np.zeros(0, dtype=complex), scales=np.ones(0))
    rhs = np.concatenate([np.asarray(a.values[i], dtype=complex) for i in order])
    matrix = np.array([_basis_row(points, alpha, l) for alpha, m in points for l in range(m)])
    scales = np.max(np.abs(matrix), axis=0)
    matrix = matrix / scales
    coeffs = np.linalg.solve(matrix, rhs)
    residual = float(np.max(np.abs(matrix @ coeffs - rhs)))
    return HermiteInterpolant(points=points, coeffs=coeffs, scales=scales, residual=residual)
