"""Per-user link metrics: path loss, 3 dB bandwidth and band capacity.

Powers are average phasor powers, ``|V|^2 Re(Z) / |Z_total|^2``, so the
path loss ``P_r / P_t`` is a non-negative real ratio.  Losses are reported
in dB as ``-10 log10(P_r / P_t)``.
"""
from dataclasses import dataclass, field
import hashlib
import math

import numpy as np
from scipy import integrate, optimize

from . import channel
from .channel import AIR, LinkGeometry, Medium
from .circuit import (
    CoilSpec,
    ResonantNetwork,
    coil_resistance,
    impedance,
    near_pole,
    reactance,
    synthesize_hz,
)
from .errors import (
    CrossingNotBracketed,
    InputError,
    NoLocalMinimum,
    ZeroTransmitImpedance,
    ZeroTransmitResistance,
)

#: Loss in dB reported when no power reaches the receiver.
INFINITE_LOSS = math.inf

#: Fraction of the centre frequency searched for a loss minimum.
SEARCH_WINDOW = 0.2


@dataclass(frozen=True)
class LinkConfig:
    """Everything needed to evaluate one transmitter-to-user link.

    ``load`` is either ``"matched"`` or a complex load impedance in ohms.
    ``lossy`` switches the soil wavenumber to the conductive form and
    ``d_variant`` selects the distance law of the channel model.
    """

    tx_network: ResonantNetwork
    rx_network: ResonantNetwork
    tx_coil: CoilSpec
    rx_coil: CoilSpec
    geometry: LinkGeometry
    media: tuple = (AIR, Medium.from_relative(5.343, conductivity=7.68e-8))
    source_voltage: float = 1.0
    load: object = "matched"
    lossy: bool = False
    d_variant: str = "composed"

    def __post_init__(self):
        if not self.source_voltage > 0:
            raise InputError("source voltage must be positive")
        if len(self.media) != 2:
            raise InputError("media must be an (air, soil) pair")
        if not (self.load == "matched" or isinstance(self.load, (int, float, complex))):
            raise InputError("load must be 'matched' or a complex impedance")
        if self.d_variant not in channel.D_VARIANTS:
            raise InputError(f"d_variant must be one of {channel.D_VARIANTS}")

    def digest(self):
        return hashlib.sha256(repr(self).encode()).hexdigest()[:16]


def receiver_network(rx_coil, medium_soil, resonances_hz, R_r=None, poles_hz=None):
    """Resonant network for a buried receive coil.

    The coil inductance is the real, static value of its in-soil
    self-inductance; ``R_r`` defaults to the coil's DC resistance.
    """
    L = channel.receiver_self_inductance(rx_coil, medium_soil, 0.0).real
    R = coil_resistance(rx_coil) if R_r is None else R_r
    return synthesize_hz(L, R, resonances_hz, poles_hz)


def induced_voltage(U_s, M, omega, Z_t):
    """Open-circuit voltage induced in the receive coil."""
    if Z_t == 0:
        raise ZeroTransmitImpedance("transmit impedance is zero")
    return -1j * omega * M * U_s / Z_t


def matched_load(R_ri, M, omega, R_t):
    """Load resistance maximising received power: ``R_ri + w^2 |M|^2 / R_t``."""
    if not R_t > 0:
        raise ZeroTransmitResistance("transmit resistance must be positive")
    return R_ri + omega**2 * abs(M) ** 2 / R_t


def receiver_impedance(link, omega):
    """Series impedance of the receive coil and its resonant network.

    The network's ideal coil inductance is replaced by the complex in-soil
    self-inductance.  Its imaginary part is a loss and enters as the positive
    resistance ``w Im(l)``: the field phase ``exp(jkd)`` follows the
    opposite time convention to the circuit phasors.
    """
    net = link.rx_network
    l = channel.receiver_self_inductance(link.rx_coil, link.media[1], omega, link.lossy)
    x_rest = reactance(net, omega) - omega * net.series_inductance
    return net.coil_resistance + omega * l.imag + 1j * (x_rest + omega * l.real)


def link_terms(link, omega):
    """Impedances and coupling at one angular frequency, as a dict."""
    air, soil = link.media
    M = channel.mutual_inductance(
        link.tx_coil, link.rx_coil, air, soil, link.geometry, omega,
        d_variant=link.d_variant, lossy=link.lossy,
    )
    Z_t = complex(impedance(link.tx_network, omega))
    Z_r = complex(receiver_impedance(link, omega))
    R_t = link.tx_network.coil_resistance
    if link.load == "matched":
        Z_L = complex(matched_load(Z_r.real, M, omega, R_t))
    else:
        Z_L = complex(link.load)
    return {"M": M, "Z_t": Z_t, "Z_r": Z_r, "Z_L": Z_L}


def received_power(Z_t, Z_r, Z_L, M, omega, U_s=1.0):
    """Average power delivered to the load ``Z_L``."""
    Z_tri = omega**2 * M**2 / Z_t
    U_M = induced_voltage(U_s, M, omega, Z_t)
    return abs(U_M) ** 2 * Z_L.real / abs(Z_L + Z_tri + Z_r) ** 2


def power_ratio(Z_t, Z_r, Z_L, M, omega, U_s=1.0):
    """Received over transmitted average power for the coupled pair."""
    Z_in = Z_t + omega**2 * M**2 / (Z_r + Z_L)
    P_t = abs(U_s) ** 2 * Z_in.real / abs(Z_in) ** 2
    return received_power(Z_t, Z_r, Z_L, M, omega, U_s) / P_t


def literal_power_ratio(Z_t, Z_r, Z_L, M, omega):
    """Path-loss ratio with voltages squared as complex numbers (no conjugate).

    Kept for comparison with ``power_ratio``; the result is complex.
    """
    wm2 = omega**2 * M**2
    return wm2 * Z_L * (Z_t + wm2 / (Z_r + Z_L)) / ((Z_r + Z_L + wm2 / Z_t) ** 2 * Z_t**2)


def weak_coupling_ratio(Z_t, Z_r, Z_L, M, omega):
    """Leading-order ``literal_power_ratio`` for vanishing coupling."""
    return omega**2 * M**2 * Z_L / ((Z_r + Z_L) ** 2 * Z_t)


def path_loss(link, omega):
    """Power ratio ``P_r / P_t`` at angular frequency ``omega`` (scalar)."""
    t = link_terms(link, omega)
    return float(power_ratio(t["Z_t"], t["Z_r"], t["Z_L"], t["M"], omega, link.source_voltage))


def loss_db(ratio):
    """``-10 log10 |ratio|``; zero ratio maps to ``INFINITE_LOSS``."""
    r = np.abs(np.asarray(ratio, dtype=complex))
    with np.errstate(divide="ignore"):
        out = -10 * np.log10(r)
    out = np.where(r > 0, out, INFINITE_LOSS)
    return float(out) if out.ndim == 0 else out


def path_loss_db(link, f_hz):
    return loss_db(path_loss(link, 2 * math.pi * f_hz))


@dataclass(frozen=True)
class SweepResult:
    """Path loss on a frequency grid.

    ``evaluate`` maps a frequency in Hz to loss in dB on the underlying
    continuous model; bandwidth refinement uses it instead of the grid.
    """

    frequencies: np.ndarray
    loss_ratio: np.ndarray
    loss_db: np.ndarray
    skipped: np.ndarray = field(default_factory=lambda: np.empty(0))
    metadata: dict = field(default_factory=dict)
    evaluate: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if not len(self.frequencies) == len(self.loss_ratio) == len(self.loss_db):
            raise InputError("grid and value arrays must have equal length")

    @classmethod
    def from_function(cls, frequencies, loss_db_fn, metadata=None):
        """Sweep of an arbitrary loss-in-dB function (ratio derived from dB)."""
        f = np.asarray(frequencies, dtype=float)
        db = np.array([loss_db_fn(x) for x in f], dtype=float)
        return cls(f, 10 ** (-db / 10), db, metadata=dict(metadata or {}), evaluate=loss_db_fn)


def frequency_grid(f_lo, f_hi, n_points, spacing="log"):
    if not 0 < f_lo < f_hi:
        raise InputError("need 0 < f_lo < f_hi")
    if n_points < 2:
        raise InputError("need at least two grid points")
    if spacing == "log":
        f = np.geomspace(f_lo, f_hi, n_points)
    elif spacing == "linear":
        f = np.linspace(f_lo, f_hi, n_points)
    else:
        raise InputError(f"spacing must be 'log' or 'linear', got {spacing!r}")
    f[0], f[-1] = f_lo, f_hi
    return np.unique(f)


def sweep(link, f_lo, f_hi, n_points, spacing="log"):
    """Evaluate the path loss on a grid.

    Grid points inside a pole guard band of either network are dropped from
    the result and listed in ``skipped``.
    """
    f = frequency_grid(f_lo, f_hi, n_points, spacing)
    w = 2 * math.pi * f
    bad = near_pole(link.tx_network, w) | near_pole(link.rx_network, w)
    keep = f[~bad]
    ratio = np.array([path_loss(link, 2 * math.pi * x) for x in keep], dtype=float)
    return SweepResult(
        frequencies=keep,
        loss_ratio=ratio,
        loss_db=loss_db(ratio),
        skipped=f[bad],
        metadata={"config_digest": link.digest(), "spacing": spacing},
        evaluate=lambda x: path_loss_db(link, x),
    )


@dataclass(frozen=True)
class Band:
    """3 dB band around a loss minimum (frequencies in Hz, loss in dB)."""

    f_min: float
    min_db: float
    lower: float
    upper: float

    @property
    def width(self):
        return self.upper - self.lower


def _local_minima(db):
    i = np.arange(1, len(db) - 1)
    ok = (db[i] <= db[i - 1]) & (db[i] <= db[i + 1]) & np.isfinite(db[i])
    return i[ok]


def three_db_band(result, f_center, xtol=0.5):
    """Locate the loss minimum nearest ``f_center`` and its 3 dB crossings.

    The minimum and both crossings are refined on the continuous model
    (``result.evaluate``) to ``xtol`` Hz.
    """
    f, db = result.frequencies, result.loss_db
    if not f[0] <= f_center <= f[-1]:
        raise InputError("f_center lies outside the sweep range")
    minima = [i for i in _local_minima(db) if abs(f[i] - f_center) <= SEARCH_WINDOW * f_center]
    if not minima:
        raise NoLocalMinimum(f"no local loss minimum within 20% of {f_center:g} Hz")
    i = min(minima, key=lambda j: abs(f[j] - f_center))

    fn = result.evaluate
    opt = optimize.minimize_scalar(
        fn, bounds=(f[i - 1], f[i + 1]), method="bounded",
        options={"xatol": 1e-3},
    )
    f_min, min_db = (opt.x, opt.fun) if opt.fun <= db[i] else (f[i], db[i])
    level = min_db + 3.0

    above = np.nonzero(db > level)[0]
    right = above[above > i]
    left = above[above < i]
    if len(right) == 0 or len(left) == 0:
        raise CrossingNotBracketed(
            f"loss never rises 3 dB above its minimum at {f_min:g} Hz within the sweep"
        )
    g = lambda x: fn(x) - level  # noqa: E731
    upper = optimize.brentq(g, f_min, f[right[0]], xtol=xtol)
    lower = optimize.brentq(g, f[left[-1]], f_min, xtol=xtol)
    return Band(float(f_min), float(min_db), float(lower), float(upper))


def bandwidth_3db(result, f_center):
    """3 dB bandwidth (Hz) of the loss minimum nearest ``f_center``."""
    return three_db_band(result, f_center).width


def band_capacity(ratio_fn, lower, upper, tx_power, noise_psd, min_panels=256, rtol=1e-4,
                  max_panels=1 << 16):
    """Shannon capacity (bit/s) over ``[lower, upper]``.

    Integrates ``log2(1 + P |PL(f)| / (N0 B))`` with the trapezoidal rule,
    doubling the panel count from ``min_panels`` until the relative change
    drops below ``rtol``.  ``tx_power`` may be an array, in which case an
    array of capacities is returned and ``ratio_fn`` is sampled only once
    per grid.
    """
    power = np.asarray(tx_power, dtype=float)
    if np.any(power < 0) or not noise_psd > 0:
        raise InputError("need tx_power >= 0 and noise_psd > 0")
    if not upper > lower:
        raise InputError("empty band")
    B = upper - lower
    snr = power[..., None] / (noise_psd * B)

    samples = {}

    def sample(f):
        out = np.empty(len(f))
        for j, x in enumerate(f):
            if x not in samples:
                samples[x] = abs(ratio_fn(x))
            out[j] = samples[x]
        return out

    def integral(n):
        f = np.linspace(lower, upper, n + 1)
        return integrate.trapezoid(np.log2(1 + snr * sample(f)), f, axis=-1)

    n = min_panels
    prev = integral(n)
    while n < max_panels:
        n *= 2
        cur = integral(n)
        if np.all(np.abs(cur - prev) <= rtol * np.abs(cur)):
            prev = cur
            break
        prev = cur
    return float(prev) if prev.ndim == 0 else prev


def local_sweep(link, f_center, n_points=801):
    """Log sweep over +-20% of ``f_center``."""
    return sweep(link, (1 - SEARCH_WINDOW) * f_center, (1 + SEARCH_WINDOW) * f_center, n_points)


def capacity(link, f_center, tx_power, noise_psd, band=None):
    """Capacity (bit/s) of the link over its 3 dB band around ``f_center``."""
    if band is None:
        band = three_db_band(local_sweep(link, f_center), f_center)
    return band_capacity(
        lambda f: path_loss(link, 2 * math.pi * f), band.lower, band.upper, tx_power, noise_psd
    )
