"""CHSH S-functions and the Bell angles that compensate a geometric phase.

For the state of :func:`spinpath.quantum.bell_state` the joint correlation is

    E(α, β) = cos α₁ cos β₁ + sin α₁ sin β₁ cos(γ − α₂ − β₂)

and S = |E(α,β) − E(α,β′) + E(α′,β) + E(α′,β′)|. Two ways to win back the
maximum lost to γ are provided: tilting the polar spin angles β₁, β₁′
(S_max oscillates between 2 and 2√2 with period π) or rotating the path
measurement plane by α₂′ (S_max stays at 2√2).
"""
import logging
import math

import numpy as np
from scipy import optimize

from . import schema
from .errors import DomainError, ValidationError
from .quantum import (MeasurementDirection, bell_state, expectation,
                      path_direction, spin_direction, PATH, SPIN)


log = logging.getLogger(__name__)

TSIRELSON = 2.0 * math.sqrt(2.0)
CLASSICAL_BOUND = 2.0

MAX_COARSE_STEP = math.pi / 64
MAX_REFINE_TOL = 1e-6

METHODS = ('analytic', 'grid', 'counts')
SCHEMES = ('none', 'polar', 'azimuthal')


class BellAngleSet(schema.Model):
    """The four directions α, α′ (path) and β, β′ (spin) of one S value."""
    frozen = True

    alpha = schema.ModelField(MeasurementDirection, required=True)
    alpha_p = schema.ModelField(MeasurementDirection, required=True)
    beta = schema.ModelField(MeasurementDirection, required=True)
    beta_p = schema.ModelField(MeasurementDirection, required=True)

    def validate(self):
        for name, subspace in (('alpha', PATH), ('alpha_p', PATH),
                               ('beta', SPIN), ('beta_p', SPIN)):
            if getattr(self, name).subspace != subspace:
                raise ValidationError(name, 'must be a {0} direction'.format(subspace))

    def pairs(self):
        """The four (path, spin) pairs with their sign in S."""
        return [(self.alpha, self.beta, 1),
                (self.alpha, self.beta_p, -1),
                (self.alpha_p, self.beta, 1),
                (self.alpha_p, self.beta_p, 1)]


class SValueRecord(schema.Model):
    frozen = True

    gamma = schema.AngleField(default=0.0)
    s = schema.FloatField(minimum=0.0, required=True)
    angles = schema.ModelField(BellAngleSet, required=True)
    method = schema.ChoiceField(METHODS, default='analytic')

    def validate(self):
        # estimates from counts fluctuate above the bound
        if self.method != 'counts' and self.s > TSIRELSON + 1e-9:
            raise ValidationError('s', 'exceeds 2√2: {0!r}'.format(self.s))


def bell_angles(alpha1_p=math.pi / 2, beta1=math.pi / 4, beta1_p=3 * math.pi / 4,
                alpha2_p=0.0, beta2=0.0, beta2_p=0.0):
    """A BellAngleSet with α = (0, 0) and the given remaining components."""
    return BellAngleSet(alpha=path_direction(0.0),
                        alpha_p=path_direction(alpha1_p, alpha2_p),
                        beta=spin_direction(beta1, beta2),
                        beta_p=spin_direction(beta1_p, beta2_p))


def standard_angles(alpha2_p=0.0, beta2=0.0, beta2_p=0.0):
    """The usual Bell angles α₁′ = π/2, β₁ = π/4, β₁′ = 3π/4."""
    return bell_angles(alpha2_p=alpha2_p, beta2=beta2, beta2_p=beta2_p)


def correlations(angles, gamma):
    """E for the four pairs of ``angles``, in S order."""
    state = bell_state(gamma)
    return [expectation(state, path, spin) for path, spin, _ in angles.pairs()]


def s_general(angles, gamma):
    """S from four projector expectation values on ``bell_state(gamma)``."""
    values = correlations(angles, gamma)
    return abs(values[0] - values[1] + values[2] + values[3])


def s_polar(alpha1_p, beta1, beta1_p, gamma):
    """S with α₁ = 0 and all azimuthal angles 0. Broadcasts over arrays.

        >>> round(float(s_polar(math.pi / 2, 0.0, math.pi, math.pi / 2)), 12)
        2.0
    """
    c = np.cos(gamma)
    ca, sa = np.cos(alpha1_p), np.sin(alpha1_p)
    cb, cbp = np.cos(beta1), np.cos(beta1_p)
    sb, sbp = np.sin(beta1), np.sin(beta1_p)
    return np.abs(cb - cbp + ca * (cb + cbp) + sa * c * (sb + sbp))


def polar_optimal_angles(gamma):
    """Principal solution (β₁, β₁′, α₁′) = (arctan cos γ, π − β₁, π/2)."""
    beta1 = math.atan(math.cos(gamma))
    return beta1, math.pi - beta1, math.pi / 2


def s_polar_max(gamma):
    """2·√(1 + cos²γ), the polar-adjusted maximum."""
    return 2.0 * math.sqrt(1.0 + math.cos(gamma) ** 2)


def s_azimuthal(alpha2_p, beta2, beta2_p, gamma):
    """S at the standard polar angles with azimuths α₂′, β₂, β₂′."""
    half = 0.5 * math.sqrt(2.0)
    return np.abs(math.sqrt(2.0) + half * (np.cos(gamma - alpha2_p - beta2)
                                           + np.cos(gamma - alpha2_p - beta2_p)))


def azimuthal_optimal_angle(gamma):
    """α₂′ = γ reduced into [0, π)."""
    value = gamma % math.pi
    return 0.0 if value >= math.pi else value


def azimuthal_optimal_setting(gamma):
    """``(alpha2_p, beta2)`` attaining 2√2 with β₂ = β₂′.

    α₂′ is the mod-π value of :func:`azimuthal_optimal_angle`; when that
    drops a half turn, the common spin azimuth β₂ = π picks it up.
    """
    alpha2_p = azimuthal_optimal_angle(gamma)
    turns = (gamma - alpha2_p) / math.pi
    beta2 = math.pi if int(round(turns)) % 2 else 0.0
    return alpha2_p, beta2


def s_no_adjustment(gamma):
    """√2·|1 + cos γ| at the standard angles."""
    return math.sqrt(2.0) * abs(1.0 + math.cos(gamma))


def maximize_surface(objective, bounds, step, tol=1e-7, max_sweeps=50):
    """Maximise a smooth vectorised ``objective`` over a box.

    A coarse grid of spacing ``step`` locates the best cell; ties go to the
    lexicographically smallest point. Each coordinate is then refined in
    turn by bounded Brent search within one step of the current point
    until a sweep moves no coordinate by more than ``tol``.

    Returns a :class:`scipy.optimize.OptimizeResult` with ``x``, ``fun``
    (the maximum), ``nfev`` and ``success``.
    """
    axes = [np.arange(low, high, step) for low, high in bounds]
    grids = np.meshgrid(*axes, indexing='ij')
    values = np.asarray(objective(*grids), dtype=float)
    nfev = values.size
    index = np.unravel_index(np.argmax(values), values.shape)
    x = np.array([axis[i] for axis, i in zip(axes, index)])
    best = float(values[index])

    converged = False
    for sweep in range(max_sweeps):
        moved = 0.0
        for k in range(len(x)):
            def negated(t, k=k):
                point = x.copy()
                point[k] = t
                return -float(objective(*point))
            found = optimize.minimize_scalar(
                negated, bounds=(x[k] - step, x[k] + step), method='bounded',
                options={'xatol': 0.1 * tol})
            nfev += found.nfev
            if -found.fun >= best:
                moved = max(moved, abs(found.x - x[k]))
                x[k] = found.x
                best = -found.fun
        if moved <= tol:
            converged = True
            break
    if not converged:
        log.warning('surface refinement did not settle after %d sweeps', max_sweeps)
    return optimize.OptimizeResult(x=x, fun=best, nfev=nfev, success=converged,
                                   nit=sweep + 1)


def _canonical(beta1, beta1_p):
    turns = math.floor((beta1 + 0.5 * math.pi) / math.pi)
    beta1 -= turns * math.pi
    beta1_p = (beta1_p - turns * math.pi) % (2.0 * math.pi)
    return beta1, beta1_p


def grid_maximize_s(gamma, coarse_step=math.pi / 180, refine_tol=1e-7,
                    surface=None):
    """Numerically maximise S(β₁, β₁′) at α₁′ = π/2.

    ``surface`` is a vectorised callable of (β₁, β₁′); it defaults to
    :func:`s_polar` at ``gamma``. The maximiser is reported with β₁ in
    [−π/2, π/2) and β₁′ in [0, 2π), the principal branch of the analytic
    solution. Returns ``(beta1, beta1_p, s)``; ``coarse_step`` must not
    exceed π/64 and ``refine_tol`` must not exceed 1e-6.
    """
    if not 0.0 < coarse_step <= MAX_COARSE_STEP:
        raise DomainError('coarse_step must lie in (0, pi/64], got {0!r}'.format(coarse_step))
    if not 0.0 < refine_tol <= MAX_REFINE_TOL:
        raise DomainError('refine_tol must lie in (0, 1e-6], got {0!r}'.format(refine_tol))
    if surface is None:
        def surface(beta1, beta1_p):
            return s_polar(math.pi / 2, beta1, beta1_p, gamma)
    found = maximize_surface(surface, [(-math.pi, math.pi)] * 2,
                             coarse_step, refine_tol)
    beta1, beta1_p = _canonical(float(found.x[0]), float(found.x[1]))
    log.debug('gamma=%.6f: S*=%.9f at beta1=%.6f beta1p=%.6f (%d evaluations)',
              gamma, found.fun, beta1, beta1_p, found.nfev)
    return beta1, beta1_p, float(found.fun)


def analytic_record(gamma, scheme='none'):
    """The analytic S at γ under an adjustment ``scheme``."""
    if scheme not in SCHEMES:
        raise ValidationError('scheme', '{0!r} is not one of {1}'.format(
            scheme, ', '.join(SCHEMES)))
    if scheme == 'polar':
        beta1, beta1_p, alpha1_p = polar_optimal_angles(gamma)
        angles = bell_angles(alpha1_p, beta1, beta1_p)
        s = s_polar_max(gamma)
    elif scheme == 'azimuthal':
        alpha2_p, beta2 = azimuthal_optimal_setting(gamma)
        angles = standard_angles(alpha2_p, beta2, beta2)
        s = float(s_azimuthal(alpha2_p, beta2, beta2, gamma))
    else:
        angles = standard_angles()
        s = s_no_adjustment(gamma)
    return SValueRecord(gamma=gamma, s=min(s, TSIRELSON), angles=angles,
                        method='analytic')
