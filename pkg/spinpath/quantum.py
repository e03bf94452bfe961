"""Spin-path entangled single-neutron states and their joint statistics.

The Hilbert space is path ⊗ spin with the fixed basis order
``(|I,↑⟩, |I,↓⟩, |II,↑⟩, |II,↓⟩)``; path is the major index everywhere,
including serialised amplitude vectors.

A measurement direction (polar, azimuthal) selects the ket
``cos(polar/2)|e0⟩ + exp(i·azimuthal)·sin(polar/2)|e1⟩`` in one subspace.
Its ``−`` outcome is the ``+`` outcome of the antipodal direction
(polar + π), which is how the experiment realises it.

Expectation values are computed from projectors only, so that the
perfectly correlated setting α = β = (0, 0) gives E = +1.
"""
import logging
import math

import numpy as np

from . import schema
from .errors import ValidationError


log = logging.getLogger(__name__)

PATH = 'path'
SPIN = 'spin'
SUBSPACES = (PATH, SPIN)

SQRT_HALF = math.sqrt(0.5)
NORM_TOLERANCE = 1e-12

_SIGN = schema.SignField()


class MeasurementDirection(schema.Model):
    """A projective measurement direction on the path or spin subspace."""
    frozen = True

    polar = schema.AngleField(wrap='2pi', default=0.0)
    azimuthal = schema.AngleField(wrap='2pi', default=0.0)
    subspace = schema.ChoiceField(SUBSPACES, default=PATH)

    def antipode(self):
        """The ⊥ direction: polar + π, same azimuth and subspace."""
        return self.replace(polar=self.polar + math.pi)

    def ket(self):
        half = 0.5 * self.polar
        return np.array([math.cos(half),
                         np.exp(1j * self.azimuthal) * math.sin(half)])


def path_direction(polar, azimuthal=0.0):
    return MeasurementDirection(polar=polar, azimuthal=azimuthal, subspace=PATH)


def spin_direction(polar, azimuthal=0.0):
    return MeasurementDirection(polar=polar, azimuthal=azimuthal, subspace=SPIN)


class PureState(schema.Model):
    """A normalised pure state of one neutron in path ⊗ spin.

    ``gamma`` is the geometric phase, ``theta`` the flip imperfection,
    ``path_phase`` the phase-shifter setting χ applied to path II and
    ``dyn_offset`` the constant dynamical phase, which acts like an extra
    path phase.
    """
    frozen = True

    amplitudes = schema.ComplexVectorField(4, required=True)
    gamma = schema.AngleField(wrap='2pi', default=0.0)
    theta = schema.AngleField(wrap='2pi', default=0.0)
    path_phase = schema.AngleField(wrap='2pi', default=0.0)
    dyn_offset = schema.AngleField(wrap='2pi', default=0.0)

    def validate(self):
        norm = float(np.vdot(self.amplitudes, self.amplitudes).real)
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise ValidationError('amplitudes', 'norm is {0!r}, expected 1'.format(norm))

    def matrix(self):
        """Amplitudes as a 2×2 array indexed [path, spin]."""
        return self.amplitudes.reshape(2, 2)

    def probabilities(self):
        return np.abs(self.amplitudes) ** 2


class JointSetting(schema.Model):
    """One joint outcome: a path direction and sign, a spin direction and sign."""
    frozen = True

    path_dir = schema.ModelField(MeasurementDirection, required=True)
    spin_dir = schema.ModelField(MeasurementDirection, required=True)
    path_sign = schema.SignField(default=1)
    spin_sign = schema.SignField(default=1)

    def validate(self):
        if self.path_dir.subspace != PATH:
            raise ValidationError('path_dir', 'must be a path direction')
        if self.spin_dir.subspace != SPIN:
            raise ValidationError('spin_dir', 'must be a spin direction')


def bell_state(gamma, theta=0.0, path_phase=0.0, dyn_offset=0.0):
    """The prepared state with geometric phase ``gamma``.

    With an imperfect flip the spinor in path II is
    ``sin(θ/2)|↑⟩ + cos(θ/2)|↓⟩``; ``theta = 0`` is the ideal Bell state
    ``(|I,↑⟩ + e^{iγ}|II,↓⟩)/√2``. ::

        >>> state = bell_state(0.0)
        >>> [round(abs(a), 6) for a in state.amplitudes]
        [0.707107, 0.0, 0.0, 0.707107]
    """
    amplitudes = bell_amplitudes(gamma, theta, path_phase, dyn_offset)
    return PureState(amplitudes=amplitudes, gamma=gamma, theta=theta,
                     path_phase=path_phase, dyn_offset=dyn_offset)


def bell_amplitudes(gamma, theta=0.0, path_phase=0.0, dyn_offset=0.0):
    """Raw amplitudes of :func:`bell_state`, shape ``(..., 4)``.

    ``path_phase`` may be an array; one amplitude vector per entry.
    """
    phase = np.exp(1j * (np.asarray(path_phase, dtype=float) + dyn_offset + gamma))
    half = 0.5 * theta
    return SQRT_HALF * np.stack([np.ones_like(phase), np.zeros_like(phase),
                                 phase * math.sin(half), phase * math.cos(half)],
                                axis=-1)


def reference_state(path_phase=0.0, dyn_offset=0.0):
    """The flipper-off state: both paths carry |↑⟩, no geometric phase.

    This is the θ = π member of the imperfect-flip family.
    """
    return bell_state(0.0, math.pi, path_phase, dyn_offset)


def subspace_projector(direction, sign=1):
    """The 2×2 projector onto the ``sign`` outcome of ``direction``."""
    if _SIGN.to_python(sign) < 0:
        direction = direction.antipode()
    ket = direction.ket()
    return np.outer(ket, ket.conj())


def joint_probability(state, setting):
    """⟨Ψ| P_path ⊗ P_spin |Ψ⟩ for one joint outcome."""
    operator = np.kron(subspace_projector(setting.path_dir, setting.path_sign),
                       subspace_projector(setting.spin_dir, setting.spin_sign))
    psi = state.amplitudes
    return float(np.vdot(psi, operator.dot(psi)).real)


def outcome_probability(amplitudes, path_projector, spin_projector):
    """⟨ψ| P_path ⊗ P_spin |ψ⟩ over a stack of amplitude vectors."""
    amplitudes = np.asarray(amplitudes)
    psi = amplitudes.reshape(amplitudes.shape[:-1] + (2, 2))
    return np.einsum('...ps,pq,st,...qt->...', psi.conj(), path_projector,
                     spin_projector, psi).real


def joint_probabilities(state, path_dir, spin_dir):
    """All four outcome probabilities as a table [path ±, spin ±].

    Row 0 is the path ``+`` outcome, column 0 the spin ``+`` outcome. Same
    numbers as four :func:`joint_probability` calls, from one contraction.
    """
    paths = np.stack([subspace_projector(path_dir, 1),
                      subspace_projector(path_dir, -1)])
    spins = np.stack([subspace_projector(spin_dir, 1),
                      subspace_projector(spin_dir, -1)])
    psi = state.matrix()
    return np.einsum('ps,apq,bst,qt->ab', psi.conj(), paths, spins, psi).real


def expectation(state, path_dir, spin_dir):
    """Correlation E = p₊₊ − p₊₋ − p₋₊ + p₋₋ of the two observables."""
    table = joint_probabilities(state, path_dir, spin_dir)
    value = table[0, 0] - table[0, 1] - table[1, 0] + table[1, 1]
    return float(np.clip(value, -1.0, 1.0))
