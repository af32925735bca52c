"""Air-to-soil magnetic channel of a small transmit loop.

The transmit loop sits in air (medium 1) above a soil half-space
(medium 2).  Its near field is decomposed into 1/d^3, 1/d^2 and 1/d parts;
the field at a buried point is approximated by scaling the soil-side field
with the ratio of air-side to soil-side behaviour at the interface
crossing, component by component.
"""
from dataclasses import dataclass
import math
import warnings

import numpy as np
from scipy.constants import epsilon_0, mu_0

from .errors import (
    DegenerateGeometry,
    InputError,
    LossyAtZeroFrequency,
    NonpositiveDistance,
    WrongBasis,
)

D_VARIANTS = ("composed", "paper")

_AXIS_TOL = 1e-12


@dataclass(frozen=True)
class Medium:
    """Homogeneous medium: permeability (H/m), permittivity (F/m), conductivity (S/m)."""

    permeability: float
    permittivity: float
    conductivity: float = 0.0

    def __post_init__(self):
        if not self.permeability > 0:
            raise InputError("permeability must be positive")
        if not self.permittivity > 0:
            raise InputError("permittivity must be positive")
        if not self.conductivity >= 0:
            raise InputError("conductivity must be non-negative")

    @classmethod
    def from_relative(cls, relative_permittivity=1.0, relative_permeability=1.0, conductivity=0.0):
        return cls(
            permeability=relative_permeability * mu_0,
            permittivity=relative_permittivity * epsilon_0,
            conductivity=conductivity,
        )


AIR = Medium.from_relative(1.0)


@dataclass(frozen=True)
class LinkGeometry:
    """Transmitter-to-receiver link crossing the ground plane.

    ``d_air`` and ``d_soil`` are measured along the straight line joining the
    coil centres; ``theta`` is that line's angle from the downward vertical
    and ``phi`` its azimuth.  ``rx_axis`` is the receive coil's unit axis in
    the Cartesian frame of the transmitter.
    """

    d_air: float
    d_soil: float
    theta: float = 0.0
    phi: float = 0.0
    rx_axis: tuple = (0.0, 0.0, 1.0)

    def __post_init__(self):
        if not self.d_air > 0 or not self.d_soil > 0:
            raise DegenerateGeometry("d_air and d_soil must both be positive")
        if not 0 <= self.theta < math.pi / 2:
            raise DegenerateGeometry("theta must lie in [0, pi/2)")
        axis = tuple(float(c) for c in self.rx_axis)
        if len(axis) != 3 or abs(math.sqrt(sum(c * c for c in axis)) - 1) > _AXIS_TOL:
            raise DegenerateGeometry("rx_axis must be a unit 3-vector")
        object.__setattr__(self, "rx_axis", axis)

    @property
    def d_total(self):
        return self.d_air + self.d_soil

    @classmethod
    def from_heights(cls, height_air, depth_soil, theta=0.0, phi=0.0, rx_axis=(0.0, 0.0, 1.0)):
        """Geometry from vertical distances to the interface.

        The slant distances along the link line are the vertical ones
        divided by ``cos(theta)``.
        """
        c = math.cos(theta)
        return cls(height_air / c, depth_soil / c, theta, phi, rx_axis)


@dataclass(frozen=True)
class FieldVector:
    """Complex 3-vector tagged with its basis (``spherical`` or ``cartesian``)."""

    components: np.ndarray
    basis: str

    def __post_init__(self):
        if self.basis not in ("spherical", "cartesian"):
            raise InputError(f"unknown basis {self.basis!r}")
        comps = np.array(self.components, dtype=complex).reshape(3)
        comps.setflags(write=False)
        object.__setattr__(self, "components", comps)

    def __add__(self, other):
        if other.basis != self.basis:
            raise WrongBasis("cannot add fields expressed in different bases")
        return FieldVector(self.components + other.components, self.basis)

    def norm(self):
        return float(np.linalg.norm(self.components))


def wavenumber(medium, omega, lossy=False):
    """Propagation constant in rad/m.

    Lossless (default): ``w sqrt(mu eps)``.  With ``lossy`` the conductivity
    enters through the complex permittivity ``eps - j sigma / w``; the root
    with non-negative real part is returned.
    """
    if omega < 0:
        raise InputError("angular frequency must be non-negative")
    mu, eps = medium.permeability, medium.permittivity
    if not lossy:
        return complex(omega * math.sqrt(mu * eps))
    if omega == 0:
        raise LossyAtZeroFrequency("complex permittivity is undefined at w = 0")
    k = omega * np.sqrt(mu * (eps - 1j * medium.conductivity / omega))
    if k.real < 0:
        k = -k
    return complex(k)


def _moment(tx):
    return tx.radius**2 * tx.turns * tx.drive_current


def dipole_field_components(tx, k, d, theta):
    """Far, radiating-near and near field of the loop at distance ``d``.

    Returns three spherical ``FieldVector`` objects ``(h_f, h_rn, h_n)``.
    """
    if not d > 0:
        raise NonpositiveDistance(f"distance must be positive, got {d}")
    m = _moment(tx)
    phase = np.exp(1j * k * d)
    xi_x = m * math.cos(theta) * phase / 2
    xi_y = m * math.sin(theta) * phase / 4
    h_f = FieldVector([0, -k**2 * xi_y / d, 0], "spherical")
    h_rn = FieldVector([1j * k * xi_x / d**2, 1j * k * xi_y / d**2, 0], "spherical")
    h_n = FieldVector([xi_x / d**3, xi_y / d**3, 0], "spherical")
    return h_f, h_rn, h_n


def _radial_profile(k, d):
    # r-component of (h_n + radial part of h_rn) with the moment and the
    # angular factor cos(theta)/2 stripped
    return np.exp(1j * k * d) * (1 + 1j * k * d) / d**3


def _polar_profile(k, d):
    # theta-component of h_n with the moment and sin(theta)/4 stripped
    return np.exp(1j * k * d) / d**3


def cross_ground_field(tx, medium_air, medium_soil, geom, omega, lossy=False):
    """Spherical field at the buried receiver.

    Each component is ``g(k1, d_air) / g(k2, d_air) * g(k2, d_total)`` where
    ``g`` is the near field plus the radial radiating-near term.  The common
    angular factors are cancelled before dividing, so ``theta = 0`` needs no
    special case.
    """
    if not isinstance(geom, LinkGeometry):
        raise DegenerateGeometry("geom must be a LinkGeometry")
    if not omega > 0:
        raise InputError("angular frequency must be positive")
    k1 = wavenumber(medium_air, omega, lossy)
    k2 = wavenumber(medium_soil, omega, lossy)
    d1, d0 = geom.d_air, geom.d_total
    m = _moment(tx)
    h_r = (
        m * math.cos(geom.theta) / 2
        * _radial_profile(k1, d1) / _radial_profile(k2, d1) * _radial_profile(k2, d0)
    )
    h_t = (
        m * math.sin(geom.theta) / 4
        * _polar_profile(k1, d1) / _polar_profile(k2, d1) * _polar_profile(k2, d0)
    )
    return FieldVector([h_r, h_t, 0], "spherical")


def rotation_matrix(theta, phi):
    """Rows are the spherical unit vectors r, theta, phi in Cartesian components."""
    st, ct = math.sin(theta), math.cos(theta)
    sp, cp = math.sin(phi), math.cos(phi)
    return np.array([
        [st * cp, st * sp, ct],
        [ct * cp, ct * sp, -st],
        [-sp, cp, 0.0],
    ])


def to_cartesian(field, theta, phi):
    """Express a spherical field in Cartesian components."""
    if field.basis != "spherical":
        raise WrongBasis("to_cartesian expects a spherical field")
    # row vector times R: each spherical component along its unit vector
    return FieldVector(field.components @ rotation_matrix(theta, phi), "cartesian")


def axial_field_closed_form(tx, medium_air, medium_soil, geom, omega,
                            d_variant="composed", lossy=False, unit_soil_phase=False):
    """Vertical (z) field component at the receiver in closed form.

    ``h_z = B D (A cos^2(theta) - sin^2(theta) / 2) / 2``.  ``d_variant``
    selects the distance factor ``D``: ``composed`` gives ``1 / d_total^3``,
    consistent with ``cross_ground_field``; ``paper`` gives
    ``d_soil^3 / (d_air^3 d_total^3)``.  ``unit_soil_phase`` replaces the
    soil-leg phase ``exp(j k2 d_soil)`` by 1.
    """
    if not isinstance(geom, LinkGeometry):
        raise DegenerateGeometry("geom must be a LinkGeometry")
    if d_variant not in D_VARIANTS:
        raise InputError(f"d_variant must be one of {D_VARIANTS}, got {d_variant!r}")
    k1 = wavenumber(medium_air, omega, lossy)
    k2 = wavenumber(medium_soil, omega, lossy)
    d1, d2, d0 = geom.d_air, geom.d_soil, geom.d_total
    A = (1 + 1j * k1 * d1) * (1 + 1j * k2 * d0) / (1 + 1j * k2 * d1)
    soil_phase = 1.0 if unit_soil_phase else np.exp(1j * k2 * d2)
    B = _moment(tx) * np.exp(1j * k1 * d1) * soil_phase
    if d_variant == "composed":
        D = 1 / d0**3
    else:
        D = d2**3 / (d1**3 * d0**3)
    ct2 = math.cos(geom.theta) ** 2
    st2 = math.sin(geom.theta) ** 2
    return complex(B * D * (A * ct2 - st2 / 2) / 2)


def field_at_receiver(tx, medium_air, medium_soil, geom, omega, d_variant="composed", lossy=False):
    """Cartesian field vector at the receiver centre."""
    h = to_cartesian(
        cross_ground_field(tx, medium_air, medium_soil, geom, omega, lossy),
        geom.theta, geom.phi,
    )
    if d_variant == "paper":
        return FieldVector(h.components * (geom.d_soil / geom.d_air) ** 3, "cartesian")
    if d_variant != "composed":
        raise InputError(f"d_variant must be one of {D_VARIANTS}, got {d_variant!r}")
    return h


def mutual_inductance(tx, rx, medium_air, medium_soil, geom, omega,
                      d_variant="composed", lossy=False):
    """Complex mutual inductance (H) between the transmit and receive loops.

    Flux through the receive loop is taken as the centre field projected on
    the receive axis times the loop area, in the soil permeability.
    """
    if rx.radius > 0.1 * geom.d_total:
        warnings.warn(
            "receive loop is not small against the link distance; "
            "uniform-field flux approximation degrades",
            stacklevel=2,
        )
    h = field_at_receiver(tx, medium_air, medium_soil, geom, omega, d_variant, lossy)
    h_axial = complex(np.dot(geom.rx_axis, h.components))
    flux = medium_soil.permeability * rx.turns * math.pi * rx.radius**2 * h_axial
    return flux / tx.drive_current


def receiver_self_inductance(rx, medium_soil, omega, lossy=False):
    """Complex self-inductance of a loop buried in soil, in henries.

    ``l = mu pi a N^2 exp(j k a) / 2``; the imaginary part models near-field
    absorption by the surrounding soil.
    """
    k = wavenumber(medium_soil, omega, lossy)
    a = rx.radius
    return complex(0.5 * medium_soil.permeability * math.pi * a * rx.turns**2 * np.exp(1j * k * a))
