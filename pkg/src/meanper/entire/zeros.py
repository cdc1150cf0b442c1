"""
Zero location with multiplicities.

Catalog kinds with a known zero set use closed forms; everything else goes
through an argument-principle rectangle subdivision with Newton refinement.
"""

import cmath
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.integrate import trapezoid

from ..errors import ContourThroughZero, MultiplicityTooHigh, NoZeros
from .catalog import EntireFunctionSpec, FunctionKind

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
MAX_MULTIPLICITY = 8
CONTOUR_POINTS = 256
CONTOUR_MAX_POINTS = 256 * 32
WINDING_STABILITY = 0.05
MAX_RETRIES = 5
SPLIT_FRACTIONS = (0.5, 0.4637, 0.5381, 0.4213, 0.5792)
CLUSTER_RADII = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8)
SUBDIVISION_FLOOR = 1e-10
MAX_DEPTH = 80


def principal_arg(alpha: complex) -> float:
    """Argument in [0, 2 pi)."""
    arg = cmath.phase(alpha)
    if arg < 0:
        arg += TWO_PI
    if arg >= TWO_PI - 1e-12:
        arg = 0.0
    return arg


def order_key(alpha: complex) -> Tuple[float, float]:
    """Sort key: modulus, then principal argument (both rounded)."""
    return (round(abs(alpha), 9), round(principal_arg(alpha), 9))


@dataclass(frozen=True)
class MultiplicityVariety:
    """Ordered zeros (alpha_k, m_k) of a transform."""

    points: Tuple[Tuple[complex, int], ...]

    def __post_init__(self):
        errors = []
        keys = [order_key(a) for a, _ in self.points]
        if any(k2 < k1 for k1, k2 in zip(keys, keys[1:])):
            errors.append("points are not ordered by modulus then argument")
        if any(int(m) != m or m < 1 for _, m in self.points):
            errors.append("multiplicities must be positive integers")
        alphas = [a for a, _ in self.points]
        if len({(round(a.real, 12), round(a.imag, 12)) for a in alphas}) != len(alphas):
            errors.append("points must be pairwise distinct")
        if errors:
            raise ValueError(f"Multiplicity variety validation failed: {'; '.join(errors)}")

    @classmethod
    def from_points(cls, points: Iterable[Tuple[complex, int]]) -> 'MultiplicityVariety':
        """Build a variety from unordered points."""
        pts = [(complex(a), int(m)) for a, m in points]
        pts.sort(key=lambda pt: order_key(pt[0]))
        return cls(points=tuple(pts))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Tuple[complex, int]]:
        return iter(self.points)

    def __getitem__(self, k: int) -> Tuple[complex, int]:
        return self.points[k]

    @property
    def alphas(self) -> np.ndarray:
        return np.array([a for a, _ in self.points], dtype=complex)

    @property
    def multiplicities(self) -> List[int]:
        return [m for _, m in self.points]

    @property
    def total_multiplicity(self) -> int:
        return sum(self.multiplicities)

    @property
    def max_modulus(self) -> float:
        return max((abs(a) for a, _ in self.points), default=0.0)

    def prefix_sums(self) -> List[int]:
        """m_0 + ... + m_{k-1} for each k (0 at k = 0)."""
        sums, running = [], 0
        for m in self.multiplicities:
            sums.append(running)
            running += m
        return sums

    def prefix(self, K: Optional[int]) -> 'MultiplicityVariety':
        """The first K points (all of them for None)."""
        if K is None:
            return self
        if K < 0 or K > len(self.points):
            raise IndexError(f"truncation {K} outside 0..{len(self.points)}")
        return MultiplicityVariety(points=self.points[:K])

    def within(self, radius: float) -> 'MultiplicityVariety':
        return MultiplicityVariety(points=tuple(pt for pt in self.points if abs(pt[0]) <= radius))

    def index_of(self, xi: complex, rtol: float = 1e-12) -> Optional[int]:
        """Index of the point equal to xi up to rtol, if any."""
        for k, (a, _) in enumerate(self.points):
            if abs(a - xi) <= rtol * (1.0 + abs(a)):
                return k
        return None

    def check_index(self, k: int, l: Optional[int] = None) -> None:
        if not 0 <= k < len(self.points):
            raise IndexError(f"variety index {k} outside 0..{len(self.points) - 1}")
        if l is not None and not 0 <= l < self.points[k][1]:
            raise IndexError(f"jet index {l} outside 0..{self.points[k][1] - 1} at k={k}")

    def to_rows(self) -> List[Dict[str, object]]:
        return [{'k': k, 're': a.real, 'im': a.imag, 'm': m} for k, (a, m) in enumerate(self.points)]


def clean_zero(alpha: complex, tol: float) -> complex:
    """Snap negligible real or imaginary parts to zero."""
    scale = tol * max(1.0, abs(alpha))
    re = 0.0 if abs(alpha.real) <= scale else alpha.real
    im = 0.0 if abs(alpha.imag) <= scale else alpha.imag
    return complex(re, im)


def find_zeros(phi: EntireFunctionSpec, radius: float, tol: float = 1e-10,
               method: str = "auto", max_workers: Optional[int] = None) -> MultiplicityVariety:
    """All zeros of phi in the closed disk |xi| <= radius, with multiplicities.

    Args:
        phi: Catalog function, not identically zero.
        radius: Disk radius.
        tol: Zero tolerance.
        method: "auto" (closed form when the kind has one), "closed_form" or "contour".
        max_workers: Parallelism of the contour search over tiles.

    Raises:
        NoZeros: the disk contains no zero.
        ContourThroughZero: jittered contours kept hitting a zero.
        MultiplicityTooHigh: a zero of multiplicity above 8.
    """
    if radius <= 0:
        raise ValueError(f"search radius must be positive, got {radius}")

    zeros: Optional[List[Tuple[complex, int]]] = None
    if method in ("auto", "closed_form"):
        zeros = _closed_form_zeros(phi, radius, tol)
        if zeros is None and method == "closed_form":
            raise ValueError(f"no closed-form zero set for {phi.describe()}")
    if zeros is None:
        zeros = ContourSearch(phi, tol, max_workers).zeros_in_disk(radius)

    zeros = [(clean_zero(a, tol), m) for a, m in zeros if abs(a) <= radius * (1.0 + 1e-12)]
    for _, m in zeros:
        if m > MAX_MULTIPLICITY:
            raise MultiplicityTooHigh(f"zero multiplicity {m} exceeds {MAX_MULTIPLICITY}")
    if not zeros:
        raise NoZeros(f"{phi.describe()} has no zeros in |xi| <= {radius}")

    variety = MultiplicityVariety.from_points(zeros)
    logger.info(f"Found {len(variety)} zeros of {phi.describe()} within radius {radius}")
    return variety


def _closed_form_zeros(phi: EntireFunctionSpec, radius: float,
                       tol: float) -> Optional[List[Tuple[complex, int]]]:
    if phi.kind == FunctionKind.POLYNOMIAL:
        return polynomial_zeros(phi.coeffs, tol)
    if phi.kind == FunctionKind.SEGMENT_AVERAGE:
        k_max = int(math.floor(radius * phi.t / TWO_PI))
        return [(complex(0.0, TWO_PI * k / phi.t), 1) for k in range(-k_max, k_max + 1) if k != 0]
    if phi.kind == FunctionKind.EXPSUM:
        merged = _merge_frequencies(phi.terms)
        if len(merged) == 1:
            return []
        if len(merged) == 2:
            return _two_term_zeros(merged, radius)
        return None
    if phi.kind == FunctionKind.POLYEXPSUM:
        lams = {lam for _, lam in phi.terms}
        if len(lams) == 1:
            width = max(len(p) for p, _ in phi.terms)
            poly = np.sum([np.pad(np.asarray(p, dtype=complex), (0, width - len(p))) for p, _ in phi.terms], axis=0)
            nonzero = np.nonzero(poly)[0]
            if len(nonzero) == 0:
                raise ValueError("function is identically zero")
            return polynomial_zeros(poly[:nonzero[-1] + 1], tol)
    return None


def _merge_frequencies(terms: Sequence[Tuple[complex, complex]]) -> List[Tuple[complex, complex]]:
    weights: Dict[complex, complex] = {}
    for w, lam in terms:
        weights[lam] = weights.get(lam, 0j) + w
    return [(w, lam) for lam, w in weights.items() if w != 0]


def _two_term_zeros(terms: List[Tuple[complex, complex]], radius: float) -> List[Tuple[complex, int]]:
    # w1 e^{l1 xi} + w2 e^{l2 xi} = 0  <=>  (l1 - l2) xi = log(-w2/w1) + 2 pi i k
    (w1, l1), (w2, l2) = terms
    delta = l1 - l2
    log_ratio = cmath.log(-w2 / w1)
    reach = radius * abs(delta) / TWO_PI
    center = -log_ratio.imag / TWO_PI
    zeros = []
    for k in range(int(math.floor(center - reach)) - 1, int(math.ceil(center + reach)) + 2):
        xi = complex(log_ratio.real, log_ratio.imag + TWO_PI * k) / delta
        if abs(xi) <= radius * (1.0 + 1e-12):
            zeros.append((xi, 1))
    return zeros


def _newton_polynomial(coeffs: np.ndarray, start: complex, max_iter: int = 2000) -> complex:
    deriv = P.polyder(coeffs)
    x = start
    for _ in range(max_iter):
        value = P.polyval(x, coeffs)
        if value == 0:
            return x
        slope = P.polyval(x, deriv)
        if slope == 0:
            x += 1e-3 * (1.0 + abs(x)) * cmath.exp(1j * 0.7)
            continue
        step = value / slope
        x -= step
        if abs(step) <= 1e-15 * (1.0 + abs(x)):
            break
    return complex(x)


def _deflate(coeffs: np.ndarray, root: complex) -> np.ndarray:
    desc = coeffs[::-1]
    quotient = np.zeros(len(desc) - 1, dtype=complex)
    acc = 0j
    for i in range(len(desc) - 1):
        acc = desc[i] + root * acc
        quotient[i] = acc
    return quotient[::-1]


def taylor_defect(evaluate_many: Callable[[np.ndarray], np.ndarray],
                  derivative: Callable[[complex, int], complex], alpha: complex, m: int) -> float:
    """Largest |Phi^(j)(alpha)| / j! over j < m, relative to max |Phi| on the unit circle around alpha.

    A genuine zero of multiplicity m has a defect at rounding level; a cluster
    of distinct zeros does not.
    """
    circle = alpha + np.exp(1j * np.linspace(0.0, TWO_PI, 64, endpoint=False))
    scale = float(np.max(np.abs(evaluate_many(circle))))
    if not math.isfinite(scale) or scale == 0.0:
        return math.inf
    return max(abs(derivative(alpha, j)) / math.factorial(j) for j in range(m)) / scale


def _cluster(roots: Iterable[complex], radius: float) -> List[List[complex]]:
    clusters: List[List[complex]] = []
    for root in sorted(roots, key=lambda r: (r.real, r.imag)):
        for cluster in clusters:
            center = sum(cluster) / len(cluster)
            if abs(root - center) <= radius * (1.0 + abs(center)):
                cluster.append(root)
                break
        else:
            clusters.append([root])
    return clusters


def _resolve_cluster(original: np.ndarray, cluster: List[complex], tol: float,
                     level: int) -> List[Tuple[complex, int]]:
    m = len(cluster)
    radius = min(CLUSTER_RADII[level], 1e-4)
    center = sum(cluster) / m
    target = P.polyder(original, m - 1) if m > 1 else original
    polished = _newton_polynomial(target, center, max_iter=50)
    if abs(polished - center) <= radius * (1.0 + abs(center)):
        center = polished
    if m == 1:
        return [(center, 1)]

    defect = taylor_defect(lambda z: P.polyval(z, original),
                           lambda x, j: P.polyval(x, P.polyder(original, j)), center, m)
    if defect <= tol:
        return [(center, m)]
    logger.debug(f"Cluster of {m} roots near {center} has Taylor defect {defect:.3g}, splitting")
    if level + 1 < len(CLUSTER_RADII):
        parts = _cluster(cluster, CLUSTER_RADII[level + 1])
    else:
        parts = [[root] for root in cluster]
    zeros = []
    for part in parts:
        zeros.extend(_resolve_cluster(original, part, tol, min(level + 1, len(CLUSTER_RADII) - 1)))
    return zeros


def polynomial_zeros(coeffs: Sequence[complex], tol: float = 1e-10) -> List[Tuple[complex, int]]:
    """Zeros of a polynomial by Newton iteration with deflation.

    Nearby raw roots are grouped into a candidate multiple zero, polished as a
    simple zero of the matching derivative, and kept only when its Taylor
    defect is within tol. Otherwise the group is split with a tighter radius.
    """
    original = np.asarray(coeffs, dtype=complex)
    work = original.copy()
    raw = []
    start = complex(0.3, 0.7)
    while len(work) > 1:
        if len(work) == 2:
            root = -work[0] / work[1]
        else:
            root = _newton_polynomial(work, start)
        raw.append(complex(root))
        work = _deflate(work, root)

    resolved = []
    for cluster in _cluster(raw, CLUSTER_RADII[0]):
        resolved.extend(_resolve_cluster(original, cluster, tol, 0))

    # pieces of one split group can polish onto the same zero
    zeros: List[Tuple[complex, int]] = []
    for alpha, m in resolved:
        for i, (b, n) in enumerate(zeros):
            if abs(alpha - b) <= 1e-8 * (1.0 + abs(b)):
                zeros[i] = (b, n + m)
                break
        else:
            zeros.append((alpha, m))
    return zeros


@dataclass
class _Rect:
    x0: float
    x1: float
    y0: float
    y1: float

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))

    @property
    def size(self) -> float:
        return max(self.x1 - self.x0, self.y1 - self.y0)

    def contains(self, z: complex) -> bool:
        return self.x0 <= z.real <= self.x1 and self.y0 <= z.imag <= self.y1

    def corners(self) -> List[complex]:
        return [complex(self.x0, self.y0), complex(self.x1, self.y0),
                complex(self.x1, self.y1), complex(self.x0, self.y1)]

    def split(self, fraction: float) -> List['_Rect']:
        xm = self.x0 + fraction * (self.x1 - self.x0)
        ym = self.y0 + fraction * (self.y1 - self.y0)
        return [_Rect(self.x0, xm, self.y0, ym), _Rect(xm, self.x1, self.y0, ym),
                _Rect(self.x0, xm, ym, self.y1), _Rect(xm, self.x1, ym, self.y1)]


class ContourSearch:
    """Argument-principle zero search over rectangles."""

    def __init__(self, phi: EntireFunctionSpec, tol: float = 1e-10, max_workers: Optional[int] = None):
        """Initialize the search.

        Args:
            phi: Function whose zeros are searched.
            tol: Zero tolerance.
            max_workers: Thread count for independent tiles.
        """
        self.phi = phi
        self.tol = tol
        self.max_workers = max_workers or 1

    def _log_derivative(self, z: np.ndarray) -> Optional[np.ndarray]:
        values = self.phi.eval_many(z, 0)
        scale = np.max(np.abs(values))
        if not np.all(np.isfinite(values)) or np.min(np.abs(values)) <= self.tol * (1.0 + scale) * 1e-3:
            return None
        return self.phi.eval_many(z, 1) / values

    def _path_integral(self, vertices: List[complex], n: int) -> Optional[complex]:
        total = 0j
        for a, b in zip(vertices, vertices[1:] + vertices[:1]):
            z = a + (b - a) * np.linspace(0.0, 1.0, n + 1)
            integrand = self._log_derivative(z)
            if integrand is None:
                return None
            total += trapezoid(integrand, z)
        return total

    def count(self, rect: _Rect) -> Optional[int]:
        """Winding count of zeros inside rect, None when the estimate is unreliable."""
        previous = None
        n = CONTOUR_POINTS
        while n <= CONTOUR_MAX_POINTS:
            integral = self._path_integral(rect.corners(), n)
            if integral is None:
                return None
            estimate = (integral / (2j * math.pi)).real
            if previous is not None and abs(estimate - previous) < WINDING_STABILITY:
                rounded = round(estimate)
                if abs(estimate - rounded) < 0.1:
                    return int(rounded)
            previous = estimate
            n *= 2
        return None

    def _refine(self, start: complex, order: int) -> Optional[complex]:
        x = complex(start)
        for _ in range(100):
            value = self.phi.eval(x, order)
            slope = self.phi.eval(x, order + 1)
            if value == 0:
                return x
            if slope == 0 or not cmath.isfinite(slope):
                return None
            step = value / slope
            x -= step
            if abs(step) <= 1e-15 * (1.0 + abs(x)):
                return x
        return x

    def multiplicity_at(self, alpha: complex, expected: int, separation: float) -> int:
        """Winding count on a small circle around alpha."""
        radius = min(10.0 ** (-8.0 / max(expected, 1)) * (1.0 + abs(alpha)), 0.5 * separation)
        radius = max(radius, self.tol * (1.0 + abs(alpha)))
        return winding_number(self.phi, alpha, radius)

    def is_multiple_zero(self, alpha: complex, m: int, separation: float) -> bool:
        """True when alpha is a zero of order m: Taylor defect within tol and local winding m."""
        defect = taylor_defect(lambda z: self.phi.eval_many(z, 0), self.phi.eval, alpha, m)
        if defect > self.tol:
            logger.debug(f"Cluster of {m} near {alpha} has Taylor defect {defect:.3g}")
            return False
        try:
            found = self.multiplicity_at(alpha, m, separation)
        except ContourThroughZero:
            return False
        if found != m:
            logger.debug(f"Cluster of {m} at {alpha} has local winding {found}")
        return found == m

    def _resolve(self, rect: _Rect, count: int, depth: int = 0) -> List[Tuple[complex, int]]:
        if count == 0:
            return []
        min_size = 1e-3 * (1.0 + abs(rect.center))
        if count == 1 or rect.size < min_size:
            root = self._refine(rect.center, count - 1)
            if root is not None and abs(root - rect.center) <= rect.size:
                if count == 1 and rect.contains(root):
                    return [(root, 1)]
                if count > 1 and self.is_multiple_zero(root, count, rect.size):
                    return [(root, count)]
            if rect.size < SUBDIVISION_FLOOR * (1.0 + abs(rect.center)) or depth > MAX_DEPTH:
                raise ContourThroughZero(f"could not isolate zero near {rect.center}")

        for attempt, fraction in enumerate(SPLIT_FRACTIONS):
            children = rect.split(fraction)
            counts = [self.count(child) for child in children]
            if all(c is not None for c in counts) and sum(counts) == count:
                break
            logger.debug(f"Jittering split of rectangle at {rect.center} (attempt {attempt + 1})")
        else:
            raise ContourThroughZero(f"subdivision near {rect.center} kept passing through a zero")

        zeros = []
        for child, child_count in zip(children, counts):
            zeros.extend(self._resolve(child, child_count, depth + 1))
        return zeros

    def _tiles(self, radius: float, attempt: int) -> List[_Rect]:
        half = radius * (1.05 + 0.0173 * attempt)
        shift_x, shift_y = 0.0131 * radius * (attempt + 1), 0.0079 * radius * (attempt + 1)
        n = max(1, int(math.ceil(half / 4.0)))
        width = 2.0 * half / n
        tiles = []
        for i in range(n):
            for j in range(n):
                x0 = -half + shift_x + i * width
                y0 = -half + shift_y + j * width
                tiles.append(_Rect(x0, x0 + width, y0, y0 + width))
        return tiles

    def zeros_in_disk(self, radius: float) -> List[Tuple[complex, int]]:
        """Zeros in a square covering the disk; the caller filters by modulus."""
        for attempt in range(MAX_RETRIES):
            tiles = self._tiles(radius * 1.05, attempt)
            with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
                counts = list(executor.map(self.count, tiles))
            if all(c is not None for c in counts):
                break
            logger.warning(f"Contour tile boundary hit a zero, retrying with jitter ({attempt + 1})")
        else:
            raise ContourThroughZero("tile boundaries kept passing through zeros")

        logger.debug(f"Tile counts: {counts}")
        with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            parts = list(executor.map(lambda item: self._resolve(*item), zip(tiles, counts)))

        zeros: List[Tuple[complex, int]] = []
        for part in parts:
            for alpha, m in part:
                if not any(abs(alpha - b) <= 1e-8 * (1.0 + abs(b)) for b, _ in zeros):
                    zeros.append((alpha, m))
        return zeros


def winding_number(phi: EntireFunctionSpec, center: complex, radius: float) -> int:
    """Zeros of phi (with multiplicity) inside the circle |xi - center| = radius.

    Raises:
        ContourThroughZero: the circle passes through a zero.
    """
    n = CONTOUR_POINTS
    previous = None
    while n <= CONTOUR_MAX_POINTS:
        theta = np.linspace(0.0, TWO_PI, n, endpoint=False)
        w = radius * np.exp(1j * theta)
        values = phi.eval_many(center + w, 0)
        if np.min(np.abs(values)) == 0 or not np.all(np.isfinite(values)):
            raise ContourThroughZero(f"circle |xi - {center}| = {radius} passes through a zero")
        # periodic trapezoid rule for (1/2 pi i) * contour integral of phi'/phi
        estimate = float(np.mean(phi.eval_many(center + w, 1) / values * w).real)
        if previous is not None and abs(estimate - previous) < WINDING_STABILITY:
            rounded = round(estimate)
            if abs(estimate - rounded) < 0.1:
                return int(rounded)
        previous = estimate
        n *= 2
    raise ContourThroughZero(f"winding estimate around {center} did not settle")
