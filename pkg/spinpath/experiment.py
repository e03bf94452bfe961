"""Simulated counting runs of the interferometer.

Three kinds of run are modelled, each as one Poisson draw per grid point:

* interferograms: O-beam counts against the path phase χ with the spin
  analysed along δ (path projected on ±x̂),
* beam-block runs: counts against δ with one path blocked (path projected
  on ±ẑ),
* reference runs: flipper off, counts against χ.

A finite contrast V blends every curve toward its average over the
complementary outcome, so V = 1 is the ideal quantum prediction and V = 0 a
flat line. Rates are normalised so a full-contrast curve peaks at
``max_rate``.

With ``statistics = 'expected'`` every draw is replaced by its mean.
"""
import logging
import math

import numpy as np

from . import schema
from .chsh import SValueRecord, TSIRELSON
from .errors import DomainError, EstimationError, ValidationError
from .quantum import (MeasurementDirection, bell_amplitudes, bell_state,
                      joint_probabilities, outcome_probability, path_direction,
                      spin_direction, subspace_projector)


log = logging.getLogger(__name__)

PATHS = ('I', 'II')
STATISTICS = ('poisson', 'expected')

# stream indices; a run is keyed by (seed, kind, *setting indices)
INTERFEROGRAM = 0
BEAM_BLOCK = 1
REFERENCE = 2
QUADRUPLE = 3

_PATH_X = path_direction(math.pi / 2)
_PATH_OPEN = {'II': path_direction(0.0), 'I': path_direction(math.pi)}


class ExperimentConfig(schema.Model):
    """Source, contrast and counting parameters shared by all runs."""
    frozen = True

    max_rate = schema.FloatField(minimum=0.0, exclusive_minimum=True, default=25.0)
    measure_time = schema.FloatField(minimum=0.0, exclusive_minimum=True,
                                     default=400.0)
    visibility = schema.FloatField(minimum=0.0, maximum=1.0, default=1.0)
    theta = schema.AngleField(default=0.0)
    dyn_offset = schema.AngleField(default=0.0)
    seed = schema.IntegerField(minimum=0, maximum=2 ** 64 - 1, default=0)
    statistics = schema.ChoiceField(STATISTICS, default='poisson')
    reference_normalization = schema.BooleanField(default=False)


class Interferogram(schema.Model):
    """Counts against the path phase χ at one spin-analyser angle δ.

    ``flipper_on`` is false for reference runs.
    """
    frozen = True

    chi_values = schema.ListField(of_type=schema.AngleField(), default=list)
    counts = schema.ListField(of_type=schema.CountField(), default=list)
    delta = schema.AngleField(default=0.0)
    gamma = schema.AngleField(default=0.0)
    flipper_on = schema.BooleanField(default=True)
    config = schema.ModelField(ExperimentConfig, default=None)

    def validate(self):
        if len(self.chi_values) != len(self.counts):
            raise ValidationError('counts', '{0} counts for {1} phase values'.format(
                len(self.counts), len(self.chi_values)))

    def arrays(self):
        return np.asarray(list(self.chi_values)), np.asarray(list(self.counts))


class BeamBlockScan(schema.Model):
    """Counts against δ with ``blocked_path`` absorbed."""
    frozen = True

    delta_values = schema.ListField(of_type=schema.AngleField(), default=list)
    counts = schema.ListField(of_type=schema.CountField(), default=list)
    gamma = schema.AngleField(default=0.0)
    blocked_path = schema.ChoiceField(PATHS, default='II')
    config = schema.ModelField(ExperimentConfig, default=None)

    def validate(self):
        if len(self.delta_values) != len(self.counts):
            raise ValidationError('counts', '{0} counts for {1} angles'.format(
                len(self.counts), len(self.delta_values)))

    def arrays(self):
        return np.asarray(list(self.delta_values)), np.asarray(list(self.counts))


class CountQuadruple(schema.Model):
    """N₊₊, N₊₋, N₋₊, N₋₋ for one (path, spin) setting."""
    frozen = True

    n_pp = schema.CountField(default=0)
    n_pm = schema.CountField(default=0)
    n_mp = schema.CountField(default=0)
    n_mm = schema.CountField(default=0)
    path_dir = schema.ModelField(MeasurementDirection, default=None)
    spin_dir = schema.ModelField(MeasurementDirection, default=None)

    def as_array(self):
        return np.array([self.n_pp, self.n_pm, self.n_mp, self.n_mm], dtype=float)

    def total(self):
        return self.n_pp + self.n_pm + self.n_mp + self.n_mm


def stream(seed, *index):
    """An independent PCG64 generator for ``(seed, *index)``.

    The same key always yields the same sequence, whatever order runs are
    executed in.
    """
    sequence = np.random.SeedSequence([int(seed)] + [int(i) for i in index])
    return np.random.Generator(np.random.PCG64(sequence))


def default_chi_grid(points=32, periods=2):
    """``points`` phase values covering ``periods`` full periods."""
    return np.linspace(0.0, 2.0 * math.pi * periods, points, endpoint=False)


def default_delta_grid():
    """δ from 0 to π in steps of π/8."""
    return np.arange(9) * (math.pi / 8)


def default_gamma_list():
    """Steps of π/6 up to π, then steps of π/4 up to 2π."""
    return ([k * math.pi / 6 for k in range(7)]
            + [math.pi + k * math.pi / 4 for k in range(1, 5)])


def _blend(config, p, mean):
    return mean + config.visibility * (p - mean)


def _draw(config, expected, rng):
    # a vanishing rate can come out of the contraction as -1e-17
    expected = np.clip(np.asarray(expected, dtype=float), 0.0, None)
    if config.statistics == 'expected':
        return [float(value) for value in expected]
    return [int(value) for value in rng.poisson(expected)]


def _o_beam_probability(config, chi, delta, gamma, path_sign=1, spin_sign=1):
    amplitudes = bell_amplitudes(gamma, config.theta, chi, config.dyn_offset)
    return outcome_probability(amplitudes,
                               subspace_projector(_PATH_X, path_sign),
                               subspace_projector(spin_direction(delta), spin_sign))


def detection_rate(config, chi, delta, gamma):
    """O-beam count rate at path phase ``chi`` (scalar or array).

    The χ-average is taken as the mean of χ and χ + π, which is exact for a
    single-harmonic fringe.
    """
    chi = np.asarray(chi, dtype=float)
    p = _o_beam_probability(config, chi, delta, gamma)
    mean = 0.5 * (p + _o_beam_probability(config, chi + math.pi, delta, gamma))
    rate = 2.0 * config.max_rate * _blend(config, p, mean)
    return float(rate) if rate.ndim == 0 else rate


def beam_block_rate(config, delta, gamma, blocked_path):
    """Count rate with one path blocked, spin analysed along ``delta``.

    ``gamma`` is accepted for symmetry with :func:`detection_rate`; a
    single path carries no interference term, so the rate is evaluated on
    the state without the branch phase and does not depend on it.
    """
    if blocked_path not in PATHS:
        raise ValidationError('blocked_path', '{0!r} is not one of I, II'.format(
            blocked_path))
    delta = np.asarray(delta, dtype=float)
    amplitudes = bell_amplitudes(0.0, config.theta)
    path = subspace_projector(_PATH_OPEN[blocked_path])

    def probability(angle):
        spins = np.stack([subspace_projector(spin_direction(a)) for a in angle.ravel()])
        values = np.einsum('ps,pq,nst,qt->n', amplitudes.reshape(2, 2).conj(), path,
                           spins, amplitudes.reshape(2, 2)).real
        return values.reshape(angle.shape)

    p = probability(delta)
    mean = 0.5 * (p + probability(delta + math.pi))
    rate = 2.0 * config.max_rate * _blend(config, p, mean)
    return float(rate) if rate.ndim == 0 else rate


def reference_rate(config, chi):
    """Flipper-off rate: R/2·(1 + V cos(χ + dyn_offset)), spin unresolved."""
    chi = np.asarray(chi, dtype=float)
    path = subspace_projector(_PATH_X)

    def probability(phase):
        amplitudes = bell_amplitudes(0.0, math.pi, phase, config.dyn_offset)
        return outcome_probability(amplitudes, path, np.eye(2))

    p = probability(chi)
    mean = 0.5 * (p + probability(chi + math.pi))
    rate = config.max_rate * _blend(config, p, mean)
    return float(rate) if rate.ndim == 0 else rate


def simulate_interferogram(config, delta, gamma, chi_grid=None, rng=None):
    """One χ-scan at spin angle ``delta`` with the flipper on."""
    chi_grid = default_chi_grid() if chi_grid is None else np.asarray(chi_grid, dtype=float)
    if not len(chi_grid):
        raise DomainError('chi_grid is empty')
    if rng is None:
        rng = stream(config.seed, INTERFEROGRAM)
    expected = detection_rate(config, chi_grid, delta, gamma) * config.measure_time
    return Interferogram(chi_values=chi_grid, counts=_draw(config, expected, rng),
                         delta=delta, gamma=gamma, flipper_on=True, config=config)


def simulate_beam_block(config, delta_grid=None, gamma=0.0, blocked_path='II', rng=None):
    """Counts against δ with ``blocked_path`` absorbed."""
    delta_grid = (default_delta_grid() if delta_grid is None
                  else np.asarray(delta_grid, dtype=float))
    if not len(delta_grid):
        raise DomainError('delta_grid is empty')
    expected = beam_block_rate(config, delta_grid, gamma, blocked_path) * config.measure_time
    if rng is None:
        rng = stream(config.seed, BEAM_BLOCK, PATHS.index(blocked_path))
    return BeamBlockScan(delta_values=delta_grid, counts=_draw(config, expected, rng),
                         gamma=gamma, blocked_path=blocked_path, config=config)


def reference_run(config, delta, chi_grid=None, rng=None):
    """A flipper-off χ-scan recorded alongside a measurement at ``delta``.

    Both paths carry |↑⟩, so the fringe has no geometric phase; it fixes
    the phase zero and the contrast of the interferometer.
    """
    chi_grid = default_chi_grid() if chi_grid is None else np.asarray(chi_grid, dtype=float)
    if rng is None:
        rng = stream(config.seed, REFERENCE)
    expected = reference_rate(config, chi_grid) * config.measure_time
    return Interferogram(chi_values=chi_grid, counts=_draw(config, expected, rng),
                         delta=delta, gamma=0.0, flipper_on=False, config=config)


def expected_quadruple(config, path_dir, spin_dir, gamma):
    """Mean counts of the four outcomes of one joint setting.

    Contrast mixes the outcome table with the uniform one, which scales the
    correlation by V and keeps the total at 2·R·t.
    """
    table = joint_probabilities(bell_state(gamma, config.theta, 0.0, config.dyn_offset),
                                path_dir, spin_dir)
    table = _blend(config, table, 0.25 * table.sum())
    expected = 2.0 * config.max_rate * config.measure_time * table.ravel()
    return CountQuadruple(n_pp=float(expected[0]), n_pm=float(expected[1]),
                          n_mp=float(expected[2]), n_mm=float(expected[3]),
                          path_dir=path_dir, spin_dir=spin_dir)


def simulate_quadruple(config, path_dir, spin_dir, gamma, rng=None):
    """Counts of the four outcomes of one joint setting."""
    mean = expected_quadruple(config, path_dir, spin_dir, gamma)
    if config.statistics == 'expected':
        return mean
    if rng is None:
        rng = stream(config.seed, QUADRUPLE)
    n_pp, n_pm, n_mp, n_mm = _draw(config, mean.as_array(), rng)
    return CountQuadruple(n_pp=n_pp, n_pm=n_pm, n_mp=n_mp, n_mm=n_mm,
                          path_dir=path_dir, spin_dir=spin_dir)


def counts_to_expectation(quadruple):
    """E = (N₊₊ − N₊₋ − N₋₊ + N₋₋)/N and its Poisson error.

        >>> counts_to_expectation(CountQuadruple(n_pp=100, n_mm=100))
        (1.0, 0.0)
    """
    counts = quadruple.as_array()
    total = counts.sum()
    if not total > 0:
        raise EstimationError('count quadruple holds no counts')
    signs = np.array([1.0, -1.0, -1.0, 1.0])
    e = float(signs.dot(counts) / total)
    variance = float(np.sum(counts * (signs - e) ** 2) / total ** 2)
    return e, math.sqrt(variance)


def s_from_expectations(e1, e2, e3, e4, sigmas=(0.0, 0.0, 0.0, 0.0)):
    """S = |E₁ − E₂ + E₃ + E₄| and the quadrature sum of the errors."""
    values = (e1, e2, e3, e4)
    for value in values:
        if abs(value) > 1.0 + 1e-12:
            raise DomainError('expectation value outside [-1, 1]: {0!r}'.format(value))
    s = abs(e1 - e2 + e3 + e4)
    return s, math.sqrt(sum(sigma ** 2 for sigma in sigmas))


def estimate_s(config, angles, gamma, rng=None):
    """The direct counting Bell test: four quadruples, one per pair in S.

    Returns ``(record, sigma_s)`` with ``record.method == 'counts'``.
    """
    estimates = []
    for number, (path, spin, _) in enumerate(angles.pairs()):
        generator = rng if rng is not None else stream(config.seed, QUADRUPLE, number)
        quadruple = simulate_quadruple(config, path, spin, gamma, generator)
        estimates.append(counts_to_expectation(quadruple))
    values = [e for e, _ in estimates]
    s, sigma = s_from_expectations(*values, sigmas=[sd for _, sd in estimates])
    if s > TSIRELSON:
        log.info('gamma=%.6f: counting estimate %.4f lies above 2√2', gamma, s)
    return SValueRecord(gamma=gamma, s=s, angles=angles, method='counts'), sigma
