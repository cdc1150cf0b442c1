"""
Experiment pipeline behind the analyze, decompose, reconstruct and verify commands.
"""

import cmath
import logging
from datetime import datetime
from typing import Any, Dict, List, Optional, Tuple

from . import __version__
from .config import ExperimentConfig
from .entire import ExpPolyStream, MultiplicityVariety, TaylorStream, find_zeros, taylor_stream_of
from .errors import ConfigError, ToleranceExceeded
from .expansion import (ExpansionCoefficients, SynthesizedFunction, c_to_d, coeff_norm_general,
                        coeff_norm_interpolating, convergence_report, extract_general,
                        extract_interpolating, norm_growth, residual_mean_periodic, write_csv,
                        write_json)
from .functionals import AnalyticFunctional, verify_monomial_identity
from .variety import (AnalyticReport, GeometricReport, Verdict, analytic_test, counting_profile,
                      geometric_test, sample_radii)

logger = logging.getLogger(__name__)


class ExperimentPipeline:
    """Runs one configured experiment and writes its report files."""

    def __init__(self, config: ExperimentConfig):
        """Initialize the pipeline.

        Args:
            config: Validated experiment configuration.
        """
        self.config = config
        self.phi = config.phi.to_spec()
        self.theta = config.theta.to_spec()
        self.tol = config.tolerances
        self.threads = config.threads
        self.T = AnalyticFunctional.from_spec(self.phi, label="T")
        self._variety: Optional[MultiplicityVariety] = None
        self._verdict: Optional[Tuple[GeometricReport, AnalyticReport, Verdict]] = None

    @property
    def variety(self) -> MultiplicityVariety:
        """Zeros of Phi within the configured radius (NoZeros propagates)."""
        if self._variety is None:
            self._variety = find_zeros(self.phi, self.config.radius, tol=self.tol.zero_tol,
                                       max_workers=self.threads)
            logger.info(f"Found {len(self._variety)} zeros of {self.phi.describe()} "
                        f"in |xi| <= {self.config.radius}")
        return self._variety

    @property
    def K(self) -> int:
        K = self.config.K
        return len(self.variety) if K is None else min(K, len(self.variety))

    def f_stream(self) -> TaylorStream:
        if self.config.f is None:
            raise ConfigError("this command needs an input function: set 'f' in the config")
        return taylor_stream_of(self.config.f.to_spec())

    def interpolating_verdict(self) -> Tuple[GeometricReport, AnalyticReport, Verdict]:
        """Geometric and analytic criteria; Pass only when both pass."""
        if self._verdict is None:
            geometric = geometric_test(self.variety, self.theta, self.config.m_grid)
            analytic = analytic_test(self.phi, self.variety, self.theta, self.config.m_grid)
            both = geometric.verdict == Verdict.PASS and analytic.verdict == Verdict.PASS
            self._verdict = (geometric, analytic, Verdict.PASS if both else Verdict.INCONCLUSIVE)
        return self._verdict

    def _header(self, command: str) -> Dict[str, Any]:
        return {
            'command': command,
            'version': __version__,
            'phi': self.phi.describe(),
            'theta': self.theta.describe(),
            'radius': self.config.radius,
        }

    def analyze(self) -> Dict[str, Any]:
        """Zeros, counting functions and the interpolating-variety verdict."""
        V = self.variety
        zeros_path = write_csv(self.config.output_path('zeros'),
                               [{**row, 'abs': abs(a)} for row, (a, _) in zip(V.to_rows(), V)],
                               ['k', 're', 'im', 'm', 'abs'])
        profile = counting_profile(V, 0j, sample_radii(V))
        counting_path = write_csv(self.config.output_path('counting'), profile.to_rows(), ['r', 'n', 'N'])

        geometric, analytic, verdict = self.interpolating_verdict()
        report = {
            **self._header('analyze'),
            'zeros': len(V),
            'total_multiplicity': V.total_multiplicity,
            'verdict': verdict.value,
            'geometric': geometric.to_dict(),
            'analytic': analytic.to_dict(),
        }
        verdict_path = write_json(self.config.output_path('verdict'), report)
        return {
            'zeros': len(V),
            'total_multiplicity': V.total_multiplicity,
            'max_multiplicity': max(V.multiplicities),
            'verdict': verdict.value,
            'eps': analytic.eps,
            'files': [str(zeros_path), str(counting_path), str(verdict_path)],
        }

    def extract(self) -> Tuple[ExpansionCoefficients, Optional[ExpansionCoefficients]]:
        """General coefficients, and interpolating ones when the verdict passes."""
        f = self.f_stream()
        kwargs = {'K': self.K, 'threads': self.threads, 'rtol': self.tol.pairing_tail}
        c = extract_general(self.phi, self.variety, f, **kwargs)
        d = None
        if self.interpolating_verdict()[2] == Verdict.PASS:
            d = extract_interpolating(self.phi, self.variety, f, **kwargs)
        else:
            logger.warning("Variety not shown interpolating; skipping the interpolating expansion")
        return c, d

    def decompose(self) -> Dict[str, Any]:
        """Coefficient CSVs and norm tables."""
        c, d = self.extract()
        files = [str(write_csv(self.config.output_path('general'), c.to_rows()))]
        norms: Dict[str, Any] = {**self._header('decompose'), 'K': c.K, 'general': {}, 'interpolating': {}}
        for p in self.config.norm_p:
            norms['general'][f"p={p:g}"] = coeff_norm_general(c, self.variety, self.theta, p)

        stats = {'K': c.K, 'general': len(c.table.flat()), 'interpolating': 0, 'flagged': len(c.flagged)}
        if d is not None:
            files.append(str(write_csv(self.config.output_path('interpolating'), d.to_rows())))
            for p in self.config.norm_p:
                norms['interpolating'][f"p={p:g}"] = coeff_norm_interpolating(d, self.variety, self.theta, p)
            half = max(1, d.K // 2)
            first_p = self.config.norm_p[0]
            growth = norm_growth({
                half: coeff_norm_interpolating(
                    ExpansionCoefficients.from_rows(d.flavor, d.variety.prefix(half), d.table.values[:half]),
                    None, self.theta, first_p),
                d.K: norms['interpolating'][f"p={first_p:g}"],
            })
            norms['norm_growth'] = growth.to_dict()
            converted = c_to_d(c, self.variety, c.K)
            mismatch = max((abs(converted[k, l] - v) for k, l, v in d.rows()), default=0.0)
            norms['c_to_d_mismatch'] = mismatch
            stats.update(interpolating=len(d.table.flat()), flagged=stats['flagged'] + len(d.flagged),
                         c_to_d_mismatch=mismatch, diverging=growth.diverging)
        files.append(str(write_json(self.config.output_path('norms'), norms)))
        stats['files'] = files
        return stats

    def synthesize(self) -> Tuple[SynthesizedFunction, ExpansionCoefficients, Optional[ExpansionCoefficients]]:
        c, d = self.extract()
        f_hat = SynthesizedFunction.from_d(d) if d is not None else SynthesizedFunction.from_c(c)
        return f_hat, c, d

    def reconstruct(self) -> Dict[str, Any]:
        """Synthesized values against f on the grid, plus packet convergence."""
        f_spec = self.config.f.to_spec() if self.config.f else None
        f_hat, c, d = self.synthesize()
        rows = []
        for z in self.config.grid.points():
            exact = f_spec(z)
            approx = f_hat(z)
            rows.append({'z_re': z.real, 'z_im': z.imag, 'f_re': exact.real, 'f_im': exact.imag,
                         'fhat_re': approx.real, 'fhat_im': approx.imag, 'error': abs(exact - approx)})
        max_error = max(row['error'] for row in rows)
        recon_path = write_csv(self.config.output_path('reconstruction'), rows)

        report = convergence_report(self.variety, c, self.config.grid.points())
        payload = {**self._header('reconstruct'), 'expansion': 'interpolating' if d is not None else 'general',
                   'max_error': max_error, **report.to_dict()}
        conv_path = write_json(self.config.output_path('convergence'), payload)
        logger.info(f"Reconstruction max error {max_error:.3g} on {len(rows)} points")
        return {'points': len(rows), 'max_error': max_error, 'expansion': payload['expansion'],
                'fitted_decay': report.decay_rate, 'files': [str(recon_path), str(conv_path)]}

    def _check_identity(self) -> Dict[str, Any]:
        result = {'status': 'passed', 'details': {}, 'errors': [], 'warnings': []}
        worst = 0.0
        points = list(self.config.identity_points()) + [a for a, _ in self.variety.prefix(self.K)]
        for xi in points:
            for l in range(self.config.identity_orders + 1):
                residual = verify_monomial_identity(self.T, xi, l, self.phi)
                worst = max(worst, residual)
                if residual > self.tol.identity:
                    result['status'] = 'failed'
                    result['errors'].append(f"xi={xi:.6g}, l={l}: residual {residual:.3g}")
        result['details']['max_residual'] = worst
        result['details']['checked'] = len(points) * (self.config.identity_orders + 1)
        return result

    def _check_monomials(self, grid: List[complex]) -> Dict[str, Any]:
        result = {'status': 'passed', 'details': {}, 'errors': [], 'warnings': []}
        worst = 0.0
        for k, (alpha, m) in enumerate(self.variety.prefix(self.K)):
            for l in range(m):
                # relative to the monomial's size on the grid
                size = max(abs(z ** l * cmath.exp(alpha * z)) for z in grid)
                residual = residual_mean_periodic(self.T, ExpPolyStream.monomial(l, alpha), grid,
                                                  self.threads) / max(1.0, size)
                worst = max(worst, residual)
                if residual > self.tol.residual:
                    result['status'] = 'failed'
                    result['errors'].append(f"monomial ({k},{l}) at {alpha:.6g}: residual {residual:.3g}")
        result['details']['max_residual'] = worst
        return result

    def _check_reconstruction(self, grid: List[complex]) -> Dict[str, Any]:
        result = {'status': 'passed', 'details': {}, 'errors': [], 'warnings': []}
        if self.config.f is None:
            result['status'] = 'skipped'
            result['warnings'].append("no input function configured")
            return result
        f_hat, c, _ = self.synthesize()
        residual = residual_mean_periodic(self.T, f_hat, grid, self.threads)
        result['details']['max_residual'] = residual
        if residual > self.tol.residual:
            result['status'] = 'failed'
            result['errors'].append(f"synthesized f: residual {residual:.3g} above {self.tol.residual:g}")
        if c.flagged:
            result['warnings'].append(f"{len(c.flagged)} pairings did not converge")
        return result

    def verify(self) -> Dict[str, Any]:
        """Monomial identity and mean-periodicity residuals.

        Raises:
            ToleranceExceeded: a residual is above its tolerance (after the
                report is written).
        """
        grid = self.config.grid.points()
        results: Dict[str, Any] = {
            **self._header('verify'),
            'timestamp': datetime.now().isoformat(),
            'checks': {},
            'summary': {'passed': 0, 'failed': 0, 'warnings': 0},
        }
        checks = [
            ('monomial_identity', self._check_identity()),
            ('monomial_residuals', self._check_monomials(grid)),
            ('reconstruction_residual', self._check_reconstruction(grid)),
        ]
        for name, check in checks:
            results['checks'][name] = check
            if check['status'] == 'passed':
                results['summary']['passed'] += 1
            elif check['status'] == 'failed':
                results['summary']['failed'] += 1
            results['summary']['warnings'] += len(check.get('warnings', []))
        results['overall_status'] = 'passed' if results['summary']['failed'] == 0 else 'failed'
        path = write_json(self.config.output_path('verification'), {k: v for k, v in results.items()
                                                                      if k != 'timestamp'})
        results['files'] = [str(path)]
        if results['summary']['failed']:
            failed = [name for name, check in checks if check['status'] == 'failed']
            error = ToleranceExceeded(f"verification failed: {', '.join(failed)}")
            error.results = results
            raise error
        return results
