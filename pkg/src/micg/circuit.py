"""Multi-frequency resonant networks for coil antennas.

A coil of inductance ``L`` is put in series with a capacitor ``C`` and with
``N`` parallel LC tanks.  The total reactance

    X(w) = (w^2 L C - 1) / (w C) + sum_n w L_n / (1 - w^2 L_n C_n)

has zeros (series resonances) at the requested ``w_0 < ... < w_N`` and poles
at the tank frequencies ``F_n``, which interleave the zeros.  Component values
come from the partial-fraction expansion of the target reactance

    Xt(w) = L * prod_i (w_i^2 - w^2) / (-w * prod_n (F_n^2 - w^2)).
"""
from dataclasses import dataclass, field
import math

import numpy as np
from scipy.constants import mu_0

from .errors import DuplicateResonance, InputError, InvalidInterleaving, PoleProximity

#: Annealed copper at 20 C, ohm metres.
COPPER_RESISTIVITY = 1.68e-8

#: Relative half-width of the band around each pole (and around w = 0)
#: where reactance evaluation is refused.
POLE_GUARD = 1e-9

_C_RELTOL = 1e-12


@dataclass(frozen=True)
class CoilSpec:
    """Circular multi-turn loop.

    Parameters
    ----------
    radius : float
        Loop radius in metres.
    turns : int
        Number of turns.
    wire_radius : float
        Conductor radius in metres.
    resistivity : float
        Conductor resistivity in ohm metres.
    drive_current : float
        Loop current amplitude in amperes (transmit side).
    resistance_factor : float
        Multiplier applied to the DC resistance, a hook for AC (skin effect)
        corrections.  1 means plain DC resistance.
    """

    radius: float
    turns: int
    wire_radius: float
    resistivity: float = COPPER_RESISTIVITY
    drive_current: float = 1.0
    resistance_factor: float = 1.0

    def __post_init__(self):
        if not self.radius > 0:
            raise InputError(f"coil radius must be positive, got {self.radius}")
        if int(self.turns) != self.turns or self.turns < 1:
            raise InputError(f"coil turns must be an integer >= 1, got {self.turns}")
        if not self.wire_radius > 0:
            raise InputError(f"wire radius must be positive, got {self.wire_radius}")
        if not self.wire_radius < self.radius:
            raise InputError("wire radius must be smaller than the coil radius")
        if not self.resistivity > 0:
            raise InputError(f"resistivity must be positive, got {self.resistivity}")
        if not self.resistance_factor > 0:
            raise InputError("resistance factor must be positive")
        if not math.log(8 * self.radius / self.wire_radius) > 2:
            raise InputError("wire too thick for the thin-wire loop inductance formula")


def coil_inductance_air(coil):
    """Thin-wire inductance of a circular loop in free space, in henries.

    ``L = mu_0 a N^2 (ln(8 a / b) - 2)`` with ``b`` the wire radius.
    """
    a, n = coil.radius, coil.turns
    return mu_0 * a * n**2 * (math.log(8 * a / coil.wire_radius) - 2)


def coil_resistance(coil):
    """DC series resistance of the winding, in ohms."""
    length = coil.turns * 2 * math.pi * coil.radius
    area = math.pi * coil.wire_radius**2
    return coil.resistance_factor * coil.resistivity * length / area


@dataclass(frozen=True)
class ResonantNetwork:
    """Series L-C plus parallel LC tanks, with the coil's series resistance.

    ``branches`` holds ``(L_i, C_i)`` pairs in pole order; ``resonances`` and
    ``poles`` are angular frequencies in rad/s.
    """

    coil_resistance: float
    series_inductance: float
    series_capacitance: float
    branches: tuple = ()
    resonances: tuple = ()
    poles: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "branches", tuple(tuple(map(float, b)) for b in self.branches))
        object.__setattr__(self, "resonances", tuple(map(float, self.resonances)))
        object.__setattr__(self, "poles", tuple(map(float, self.poles)))
        if self.coil_resistance < 0:
            raise InputError("coil resistance must be non-negative")
        values = [self.series_inductance, self.series_capacitance]
        values += [v for b in self.branches for v in b]
        if not all(v > 0 for v in values):
            raise InputError("all component values must be strictly positive")
        if not len(self.branches) == len(self.poles) == len(self.resonances) - 1:
            raise InputError("need one branch per pole and one more resonance than poles")
        _check_interleaving(self.resonances, self.poles)
        for (li, ci), fi in zip(self.branches, self.poles):
            if abs(ci * fi**2 * li - 1) > _C_RELTOL:
                raise InputError("branch capacitance inconsistent with its pole frequency")

    @property
    def resonances_hz(self):
        return tuple(w / (2 * math.pi) for w in self.resonances)

    @property
    def poles_hz(self):
        return tuple(w / (2 * math.pi) for w in self.poles)


def _check_interleaving(resonances, poles):
    res = list(resonances)
    if not res:
        raise InputError("at least one resonance is required")
    if any(w <= 0 for w in res):
        raise InputError("resonances must be positive")
    for lo, hi in zip(res, res[1:]):
        if hi == lo:
            raise DuplicateResonance(f"resonance {lo} rad/s requested twice")
        if hi < lo:
            raise InvalidInterleaving("resonances must be strictly increasing")
    if len(poles) != len(res) - 1:
        raise InvalidInterleaving(
            f"{len(res)} resonances need {len(res) - 1} poles, got {len(poles)}"
        )
    for i, f in enumerate(poles):
        if not res[i] < f < res[i + 1]:
            raise InvalidInterleaving(
                f"pole {f} rad/s not strictly between resonances {res[i]} and {res[i + 1]}"
            )


def _guard(omega, poles, floor):
    w = np.asarray(omega, dtype=float)
    if np.any(w <= floor * POLE_GUARD):
        raise PoleProximity("angular frequency at or too close to zero")
    for f in poles:
        if np.any(np.abs(w - f) <= POLE_GUARD * f):
            raise PoleProximity(f"angular frequency within guard band of pole {f:g} rad/s")
    return w


def near_pole(network, omega):
    """Boolean mask of angular frequencies that fall in a pole guard band."""
    w = np.asarray(omega, dtype=float)
    mask = w <= network.resonances[0] * POLE_GUARD
    for f in network.poles:
        mask = mask | (np.abs(w - f) <= POLE_GUARD * f)
    return mask


def reactance(network, omega):
    """Total series reactance of the network in ohms.

    Accepts a scalar or array of angular frequencies.  Raises
    ``PoleProximity`` inside the guard band of a pole or of ``w = 0``.
    """
    w = _guard(omega, network.poles, network.resonances[0])
    L, C = network.series_inductance, network.series_capacitance
    x = (w**2 * L * C - 1) / (w * C)
    for li, ci in network.branches:
        x = x + w * li / (1 - w**2 * li * ci)
    return x


def impedance(network, omega):
    """Complex impedance ``R_t + jX(w)``."""
    return network.coil_resistance + 1j * reactance(network, omega)


def target_reactance(L, resonances, poles, omega):
    """Reactance with zeros at ``resonances`` and poles at ``poles``.

    This is the product form the network synthesis expands into partial
    fractions; it tends to ``w L`` as ``w`` grows.
    """
    _check_interleaving(resonances, poles)
    w = _guard(omega, poles, resonances[0])
    num = np.ones_like(w)
    for wi in resonances:
        num = num * (wi**2 - w**2)
    den = -w
    for f in poles:
        den = den * (f**2 - w**2)
    return L * num / den


def default_poles(resonances):
    """Geometric means of adjacent resonances."""
    return tuple(math.sqrt(a * b) for a, b in zip(resonances, resonances[1:]))


def synthesize(L, R_t, resonances, poles=None):
    """Build the network whose reactance vanishes at every requested resonance.

    Parameters
    ----------
    L : float
        Coil inductance in henries.
    R_t : float
        Coil series resistance in ohms.
    resonances : sequence of float
        Angular resonance frequencies in rad/s, strictly increasing.
    poles : sequence of float, optional
        Tank frequencies interleaving the resonances.  Defaults to the
        geometric mean of each adjacent pair.

    Returns
    -------
    ResonantNetwork
    """
    res = tuple(float(w) for w in resonances)
    if not L > 0:
        raise InputError("coil inductance must be positive")
    if len(set(res)) != len(res):
        raise DuplicateResonance("resonance frequencies must be distinct")
    if poles is None:
        poles = default_poles(res)
    poles = tuple(float(f) for f in poles)
    _check_interleaving(res, poles)

    # residue at w = 0 gives the series capacitor
    C = math.prod(f**2 for f in poles) / (L * math.prod(w**2 for w in res))

    # residue at each pole, with the vanishing (F_i^2 - w^2) factor cancelled
    branches = []
    for i, fi in enumerate(poles):
        num = math.prod(w**2 - fi**2 for w in res)
        rest = math.prod(fj**2 - fi**2 for j, fj in enumerate(poles) if j != i)
        li = -L * num / (fi**4 * rest)
        branches.append((li, 1 / (fi**2 * li)))

    return ResonantNetwork(
        coil_resistance=float(R_t),
        series_inductance=float(L),
        series_capacitance=C,
        branches=tuple(branches),
        resonances=res,
        poles=poles,
    )


def synthesize_hz(L, R_t, resonances_hz, poles_hz=None):
    """``synthesize`` with frequencies given in hertz."""
    two_pi = 2 * math.pi
    poles = None if poles_hz is None else [two_pi * f for f in poles_hz]
    return synthesize(L, R_t, [two_pi * f for f in resonances_hz], poles)
