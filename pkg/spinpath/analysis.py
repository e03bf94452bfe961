"""From simulated counts to S: fits, normalisation and the two scans.

Every count curve here is a single harmonic, fitted as
``a + b·cos x + c·sin x = a + A·cos(x + phase)`` by weighted linear least
squares with Poisson weights. Correlations are formed from fitted model
values, never from raw points, and their errors are propagated linearly
through each fit's covariance.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import schema
from .chsh import grid_maximize_s, maximize_surface
from .errors import DomainError, FitError, NormalizationError
from .experiment import (BEAM_BLOCK, INTERFEROGRAM, REFERENCE, counts_to_expectation,
                         CountQuadruple, default_delta_grid, default_gamma_list,
                         reference_run, simulate_beam_block, simulate_interferogram,
                         stream)


log = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
SCAN_METHODS = ('polar', 'azimuthal', 'unadjusted')
MIN_POINTS = 5


class SinusoidFit(schema.Model):
    """A fitted single-harmonic curve and the covariance of (a, b, c)."""
    frozen = True

    mean = schema.FloatField(default=0.0)
    amplitude = schema.FloatField(minimum=0.0, default=0.0)
    phase = schema.AngleField(wrap='2pi', default=0.0)
    visibility = schema.FloatField(minimum=0.0, default=0.0)
    covariance = schema.ArrayField((3, 3), default=None)
    residual_chi2 = schema.FloatField(minimum=0.0, default=0.0)
    over_unity = schema.BooleanField(default=False)

    @property
    def params(self):
        """Linear parameters (a, b, c)."""
        return np.array([self.mean,
                         self.amplitude * math.cos(self.phase),
                         -self.amplitude * math.sin(self.phase)])

    def model(self, x):
        return _basis(x).dot(self.params)

    def value_variance(self, x):
        g = _basis(x)
        return float(g.dot(self.covariance).dot(g))

    def visibility_error(self):
        a, b, c = self.params
        if self.amplitude == 0 or a == 0:
            return math.sqrt(self.covariance[0, 0]) / abs(a) if a else float('inf')
        gradient = np.array([-self.amplitude / a ** 2,
                             b / (self.amplitude * a),
                             c / (self.amplitude * a)])
        return math.sqrt(gradient.dot(self.covariance).dot(gradient))


class AdjustedAngles(schema.Model):
    """The Bell angles a scan adjusted; unused ones are None."""
    frozen = True

    beta1 = schema.AngleField(null=True, default=None)
    beta1_p = schema.AngleField(null=True, default=None)
    alpha2_p = schema.AngleField(null=True, default=None)


class ScanResult(schema.Model):
    frozen = True

    gamma = schema.AngleField(default=0.0)
    adjusted_angles = schema.ModelField(AdjustedAngles, default=AdjustedAngles)
    s = schema.FloatField(minimum=0.0, default=0.0)
    sigma_s = schema.FloatField(minimum=0.0, default=0.0)
    method = schema.ChoiceField(SCAN_METHODS, default='polar')


def _basis(x):
    x = np.asarray(x, dtype=float)
    return np.stack([np.ones_like(x), np.cos(x), np.sin(x)], axis=-1)


def fit_cosine(x, y, variance=None):
    """Weighted least squares of ``a + b·cos x + c·sin x``.

    ``variance`` defaults to the Poisson variance of counts, floored at 1.
    Covariance of (a, b, c) is ``(AᵀWA)⁻¹``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise FitError('x and y must be matching 1-d arrays')
    if len(x) < 3:
        raise FitError('need at least 3 points, got {0}'.format(len(x)))
    if variance is None:
        variance = np.maximum(y, 1.0)
    variance = np.asarray(variance, dtype=float)
    if np.any(variance <= 0):
        raise FitError('variances must be positive')
    weights = 1.0 / variance

    design = _basis(x)
    root = np.sqrt(weights)[:, None]
    params, _, rank, _ = np.linalg.lstsq(design * root, y * root[:, 0], rcond=None)
    if rank < 3:
        raise FitError('rank-deficient design, rank {0}'.format(rank))
    covariance = np.linalg.inv(design.T.dot(design * weights[:, None]))
    residual = float(np.sum(weights * (y - design.dot(params)) ** 2))

    a, b, c = params
    amplitude = math.hypot(b, c)
    visibility = amplitude / abs(a) if a else 0.0
    if a <= 0:
        log.warning('fitted mean %g is not positive', a)
    return SinusoidFit(mean=a, amplitude=amplitude, phase=math.atan2(-c, b),
                       visibility=visibility, covariance=covariance,
                       residual_chi2=residual)


def fit_sinusoid(gram):
    """Fit an interferogram; the χ grid must span a full period.

        >>> from spinpath.experiment import Interferogram
        >>> chi = np.linspace(0, 4 * math.pi, 16, endpoint=False)
        >>> fit = fit_sinusoid(Interferogram(chi_values=chi,
        ...                                  counts=100 + 50 * np.cos(chi)))
        >>> round(fit.mean, 9), round(fit.visibility, 9)
        (100.0, 0.5)
    """
    chi, counts = gram.arrays()
    if len(chi) < MIN_POINTS:
        raise FitError('need at least {0} points, got {1}'.format(MIN_POINTS, len(chi)))
    span = np.ptp(chi) * len(chi) / (len(chi) - 1)
    if span < TWO_PI * (1 - 1e-9):
        raise FitError('phase values span {0:.4f} rad, less than a period'.format(span))
    return fit_cosine(chi, counts)


def normalize_by_reference(fit, ref):
    """Divide out the reference contrast and subtract the reference phase.

    A ratio above 1 is clipped and flagged with ``over_unity``. The
    reference is treated as exact in the covariance.
    """
    if not ref.visibility > 0:
        raise NormalizationError('reference visibility is {0!r}'.format(ref.visibility))
    cos_r, sin_r = math.cos(ref.phase), math.sin(ref.phase)
    transform = np.array([[1.0, 0.0, 0.0],
                          [0.0, cos_r, -sin_r],
                          [0.0, sin_r, cos_r]])
    transform[1:] /= ref.visibility
    covariance = transform.dot(fit.covariance).dot(transform.T)

    visibility = fit.visibility / ref.visibility
    over_unity = visibility > 1.0
    if over_unity:
        log.warning('normalised visibility %.4f exceeds 1, clipped', visibility)
        visibility = 1.0
    return SinusoidFit(mean=fit.mean, amplitude=visibility * abs(fit.mean),
                       phase=fit.phase - ref.phase, visibility=visibility,
                       covariance=covariance, residual_chi2=fit.residual_chi2,
                       over_unity=over_unity)


def projections_from_fit(fit):
    """Fitted intensities at χ = 0 and χ = π.

        >>> projections_from_fit(SinusoidFit(mean=100, amplitude=50))
        (150.0, 50.0)
    """
    return float(fit.model(0.0)), float(fit.model(math.pi))


def _correlation(terms):
    """E from four ``(fit, x, sign)`` fitted count values. Broadcasts."""
    values = [fit.model(x) for fit, x, _ in terms]
    total = sum(values)
    return sum(sign * value for (_, _, sign), value in zip(terms, values)) / total


def _correlation_error(terms):
    """Linear error of :func:`_correlation` at scalar arguments."""
    values = [float(fit.model(x)) for fit, x, _ in terms]
    total = sum(values)
    e = sum(sign * value for (_, _, sign), value in zip(terms, values)) / total
    gradients = {}
    for (fit, x, sign), value in zip(terms, values):
        entry = gradients.setdefault(id(fit), [fit, np.zeros(3)])
        entry[1] = entry[1] + (sign - e) / total * _basis(x)
    variance = sum(g.dot(fit.covariance).dot(g) for fit, g in gradients.values())
    return math.sqrt(max(variance, 0.0))


def _spin_terms(plus, minus, beta):
    # plus/minus are fits by path outcome against the spin angle
    return [(plus, beta, 1), (plus, beta + math.pi, -1),
            (minus, beta, -1), (minus, beta + math.pi, 1)]


class PolarSurface(object):
    """S(β₁, β₁′) at α₁′ = π/2 built from measured projection curves.

    ``z_plus``/``z_minus`` are the beam-block curves (path I, path II open)
    and ``x_plus``/``x_minus`` the O-beam intensities at χ = 0, π, each
    fitted against the spin angle δ. The ⊥ spin outcome of β is read off
    the same curve at β + π.
    """

    def __init__(self, gamma, z_plus, z_minus, x_plus, x_minus):
        self.gamma = gamma
        self.z_plus = z_plus
        self.z_minus = z_minus
        self.x_plus = x_plus
        self.x_minus = x_minus

    def correlation_z(self, beta):
        return _correlation(_spin_terms(self.z_plus, self.z_minus, beta))

    def correlation_x(self, beta):
        return _correlation(_spin_terms(self.x_plus, self.x_minus, beta))

    def s(self, beta1, beta1_p):
        return np.abs(self.correlation_z(beta1) - self.correlation_z(beta1_p)
                      + self.correlation_x(beta1) + self.correlation_x(beta1_p))

    __call__ = s

    def sigma_s(self, beta1, beta1_p):
        errors = [_correlation_error(_spin_terms(plus, minus, beta))
                  for plus, minus in ((self.z_plus, self.z_minus),
                                      (self.x_plus, self.x_minus))
                  for beta in (beta1, beta1_p)]
        return math.sqrt(sum(e ** 2 for e in errors))

    def tabulate(self, deltas):
        """S on the grid ``deltas × deltas``, rows indexed by β₁."""
        deltas = np.asarray(deltas, dtype=float)
        beta1, beta1_p = np.meshgrid(deltas, deltas, indexing='ij')
        return self.s(beta1, beta1_p)

    def result(self):
        beta1, beta1_p, s = grid_maximize_s(self.gamma, surface=self.s)
        angles = AdjustedAngles(beta1=beta1, beta1_p=beta1_p)
        return ScanResult(gamma=self.gamma, adjusted_angles=angles, s=s,
                          sigma_s=self.sigma_s(beta1, beta1_p), method='polar')


def _check_delta_grid(delta_grid):
    grid = np.sort(np.asarray(delta_grid, dtype=float))
    step = np.max(np.diff(grid)) if len(grid) > 1 else math.pi
    if (len(grid) < 3 or grid[0] > 1e-9 or grid[-1] < math.pi - 1e-9
            or step > math.pi / 8 + 1e-9):
        raise DomainError('delta grid must cover [0, pi] in steps of at most pi/8')
    return grid


def _interferogram_fit(config, delta, gamma, chi_grid, index):
    gram = simulate_interferogram(config, delta, gamma, chi_grid,
                                  stream(config.seed, INTERFEROGRAM, *index))
    fit = fit_sinusoid(gram)
    if config.reference_normalization:
        ref = reference_run(config, delta, chi_grid, stream(config.seed, REFERENCE, *index))
        fit = normalize_by_reference(fit, fit_sinusoid(ref))
    return fit


def measure_polar_surface(config, gamma, delta_grid=None, chi_grid=None, gamma_index=0):
    """Run the beam-block and χ-scan measurements for one γ.

    Each δ of the grid gets its own interferogram; the fitted intensities
    at χ = 0 and π become the ±x̂ points of the projection curves.
    """
    deltas = _check_delta_grid(default_delta_grid() if delta_grid is None else delta_grid)

    z_fits = []
    for number, blocked in enumerate(('II', 'I')):
        scan = simulate_beam_block(config, deltas, gamma, blocked,
                                   stream(config.seed, BEAM_BLOCK, gamma_index, number))
        z_fits.append(fit_cosine(*scan.arrays()))

    plus, minus, var_plus, var_minus = [], [], [], []
    for number, delta in enumerate(deltas):
        fit = _interferogram_fit(config, delta, gamma, chi_grid, (gamma_index, number))
        at_zero, at_pi = projections_from_fit(fit)
        plus.append(at_zero)
        minus.append(at_pi)
        var_plus.append(fit.value_variance(0.0))
        var_minus.append(fit.value_variance(math.pi))
    x_plus = fit_cosine(deltas, plus, np.maximum(var_plus, 1e-12))
    x_minus = fit_cosine(deltas, minus, np.maximum(var_minus, 1e-12))
    return PolarSurface(gamma, z_fits[0], z_fits[1], x_plus, x_minus)


def _scan(function, gammas, workers):
    jobs = list(enumerate(gammas))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(lambda job: function(*job), jobs))
    return [function(*job) for job in jobs]


def run_polar_scan(config, gamma_list=None, delta_grid=None, chi_grid=None, workers=1):
    """Polar-adjusted S* and (β₁*, β₁′*) for each γ, in input order."""
    gammas = default_gamma_list() if gamma_list is None else list(gamma_list)

    def one(index, gamma):
        result = measure_polar_surface(config, gamma, delta_grid, chi_grid, index).result()
        log.info('polar scan gamma=%.4f: S*=%.4f +- %.4f', gamma, result.s, result.sigma_s)
        return result

    return _scan(one, gammas, workers)


AZIMUTHAL_BETAS = (math.pi / 4, 3 * math.pi / 4)


def _azimuthal_results(config, index, gamma, chi_grid):
    beta, beta_p = AZIMUTHAL_BETAS
    deltas = [beta, beta_p, beta + math.pi, beta_p + math.pi]

    scans = [simulate_beam_block(config, deltas, gamma, blocked,
                                 stream(config.seed, BEAM_BLOCK, index, number))
             for number, blocked in enumerate(('II', 'I'))]
    z_terms = []
    for k in range(2):
        path_i, path_ii = list(scans[0].counts), list(scans[1].counts)
        z_terms.append(counts_to_expectation(CountQuadruple(
            n_pp=path_i[k], n_pm=path_i[k + 2], n_mp=path_ii[k], n_mm=path_ii[k + 2])))
    (ez, sz), (ez_p, sz_p) = z_terms

    fits = [_interferogram_fit(config, delta, gamma, chi_grid, (index, number))
            for number, delta in enumerate(deltas)]

    def x_terms(alpha2_p, k):
        # the path direction at azimuth α₂′ is the phase-shifter setting χ = −α₂′
        spin_plus, spin_minus = fits[k], fits[k + 2]
        return [(spin_plus, -alpha2_p, 1), (spin_minus, -alpha2_p, -1),
                (spin_plus, math.pi - alpha2_p, -1), (spin_minus, math.pi - alpha2_p, 1)]

    def s_of(alpha2_p):
        return np.abs(ez - ez_p + _correlation(x_terms(alpha2_p, 0))
                      + _correlation(x_terms(alpha2_p, 1)))

    def sigma_of(alpha2_p):
        errors = [sz, sz_p] + [_correlation_error(x_terms(alpha2_p, k)) for k in range(2)]
        return math.sqrt(sum(e ** 2 for e in errors))

    found = maximize_surface(s_of, [(0.0, TWO_PI)], math.pi / 180)
    alpha2_p = float(found.x[0]) % TWO_PI
    log.info('azimuthal scan gamma=%.4f: S*=%.4f at alpha2p=%.4f', gamma, found.fun, alpha2_p)
    return [ScanResult(gamma=gamma, adjusted_angles=AdjustedAngles(alpha2_p=alpha2_p),
                       s=float(found.fun), sigma_s=sigma_of(alpha2_p), method='azimuthal'),
            ScanResult(gamma=gamma, adjusted_angles=AdjustedAngles(alpha2_p=0.0),
                       s=float(s_of(0.0)), sigma_s=sigma_of(0.0), method='unadjusted')]


def run_azimuthal_scan(config, gamma_list=None, chi_grid=None, workers=1):
    """Azimuth-adjusted S* with α₂′*, plus the unadjusted S, for each γ.

    Returns two rows per γ: method ``azimuthal`` then ``unadjusted``.
    """
    gammas = default_gamma_list() if gamma_list is None else list(gamma_list)

    def one(index, gamma):
        return _azimuthal_results(config, index, gamma, chi_grid)

    return [row for rows in _scan(one, gammas, workers) for row in rows]
