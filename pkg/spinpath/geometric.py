"""Geometric phase from two rf spin flippers.

The flipper inside the interferometer turns |↑⟩ into |↓⟩ by a π rotation
about an axis in the x-y plane at the oscillating-field phase φ. Following
the flip with the back-rotation of a second flipper at phase φ_II closes a
loop on the Bloch sphere enclosing the solid angle Ω = 2(φ_I − φ_II).

The state that reaches the analyser carries γ = φ_I − φ_II on its path-II
branch, and that is the phase this module reports. The Berry form −Ω/2 has
the opposite sign; it is not used anywhere.
"""
import logging
import math

import numpy as np

from . import schema
from .errors import DomainError
from .quantum import SQRT_HALF, PureState


log = logging.getLogger(__name__)

FOUR_PI = 4.0 * math.pi

UP = np.array([1.0, 0.0], dtype=complex)
DOWN = np.array([0.0, 1.0], dtype=complex)


class PhysicalConstants(schema.Model):
    """CODATA 2018 values in SI units. Override fields for sensitivity runs."""
    frozen = True

    hbar = schema.FloatField(exclusive_minimum=True, minimum=0.0,
                             default=1.054571817e-34)
    mu_neutron_abs = schema.FloatField(exclusive_minimum=True, minimum=0.0,
                                       default=9.6623651e-27)
    h = schema.FloatField(exclusive_minimum=True, minimum=0.0,
                          default=6.62607015e-34)
    neutron_mass = schema.FloatField(exclusive_minimum=True, minimum=0.0,
                                     default=1.67492749804e-27)


CODATA = PhysicalConstants()


class FlipperSetting(schema.Model):
    """One rf flipper: field phase φ, angular frequency ω, exposure time τ."""
    frozen = True

    phi = schema.AngleField(default=0.0)
    frequency = schema.FloatField(default=2.0 * math.pi * 58e3)
    exposure_time = schema.FloatField(default=1e-5)

    def resonance(self, constants=CODATA):
        return resonance_parameters(self.frequency, self.exposure_time, constants)

    def unitary(self):
        return flipper_unitary(self.phi)


def flipper_unitary(phi):
    """π rotation about (cos φ, sin φ, 0): ``-i (cos φ σx + sin φ σy)``.

    ``U(0)|↑⟩ = -i|↓⟩``; only phase differences between φ values matter.
    """
    return -1j * np.array([[0.0, np.exp(-1j * phi)],
                           [np.exp(1j * phi), 0.0]])


def solid_angle(phi_I, phi_II):
    """Ω = 2(φ_I − φ_II), wrapped into (−2π, 2π].

    Antisymmetric in its arguments except on the boundary Ω ≡ 2π (mod 4π),
    where the half-open interval gives 2π for both orders.
    """
    omega = math.fmod(2.0 * (phi_I - phi_II), FOUR_PI)
    if omega > 2.0 * math.pi:
        omega -= FOUR_PI
    elif omega <= -2.0 * math.pi:
        omega += FOUR_PI
    return omega


def geometric_phase(phi_I, phi_II):
    """The phase γ = φ_I − φ_II imprinted on the path-II branch."""
    return phi_I - phi_II


def flipper_state(phi_I, phi_II, path_phase=0.0):
    """The entangled state prepared by the two-flipper route.

    After the reference flip the path-II spinor is |↓⟩; the pair
    ``U(φ_I) U†(φ_II)`` returns it as ``e^{iγ}|↓⟩``. Path I keeps |↑⟩.
    """
    loop = flipper_unitary(phi_I).dot(flipper_unitary(phi_II).conj().T)
    branch = np.exp(1j * path_phase) * loop.dot(DOWN)
    amplitudes = SQRT_HALF * np.concatenate([UP, branch])
    return PureState(amplitudes=amplitudes,
                     gamma=geometric_phase(phi_I, phi_II),
                     path_phase=path_phase)


def resonance_parameters(omega, tau, constants=CODATA):
    """Guide field B₀ = ħω/(2|μ|) and π-flip amplitude B_rf = πħ/(2τ|μ|).

    Both in tesla. ::

        >>> b0, b_rf = resonance_parameters(2 * math.pi * 58e3, 1e-5)
        >>> round(b0 * 1e3, 2)
        1.99
    """
    if not omega > 0:
        raise DomainError('omega must be > 0, got {0!r}'.format(omega))
    if not tau > 0:
        raise DomainError('tau must be > 0, got {0!r}'.format(tau))
    mu = constants.mu_neutron_abs
    b0 = constants.hbar * omega / (2.0 * mu)
    b_rf = math.pi * constants.hbar / (2.0 * tau * mu)
    log.debug('resonance omega=%g tau=%g: B0=%g T, Brf=%g T', omega, tau, b0, b_rf)
    return b0, b_rf


def transit_time(length, wavelength, constants=CODATA):
    """Time a neutron of de Broglie ``wavelength`` needs to cross ``length``.

    A 2 cm coil at 1.91 Å gives about 9.7 µs.
    """
    if not length > 0 or not wavelength > 0:
        raise DomainError('length and wavelength must be > 0')
    velocity = constants.h / (constants.neutron_mass * wavelength)
    return length / velocity
