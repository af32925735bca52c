"""Band allocation and bit-error rate for multi-user operation.

Two schemes are compared.  ``multi_frequency``: every user gets its own
resonance band, so a user sees the full transmit power and no interference.
``single_resonant``: all users share one band and the transmit power is
split equally between them.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import math
import warnings

import numpy as np
from scipy import optimize, special, stats

from .errors import InputError, OverlapWarning, TargetOutOfRange, TooManyUsers

SCHEMES = ("single_resonant", "multi_frequency")

#: Symbols per Monte Carlo chunk; fixed so results do not depend on workers.
CHUNK = 1 << 16

_RES_TOL_HZ = 1.0


@dataclass(frozen=True)
class UserLink:
    user_id: str
    link: object
    assigned_resonance: float

    def __post_init__(self):
        res = self.link.tx_network.resonances_hz
        if not any(abs(self.assigned_resonance - f) <= _RES_TOL_HZ for f in res):
            raise InputError(
                f"user {self.user_id!r}: {self.assigned_resonance:g} Hz is not a transmit resonance"
            )


@dataclass(frozen=True)
class BerEstimate:
    scheme: str
    snr_db: float
    ber: float
    n_symbols: int
    ci95: float


def _check_scheme(scheme):
    if scheme not in SCHEMES:
        raise InputError(f"scheme must be one of {SCHEMES}, got {scheme!r}")


def allocate_bands(users, network, bands=None):
    """Assign one transmit resonance (Hz) to each user.

    Users sorted by id take the resonances in ascending order.  ``bands``
    optionally maps a resonance to its ``(lower, upper)`` 3 dB band in Hz;
    overlapping neighbours trigger an ``OverlapWarning``.
    """
    res = sorted(network.resonances_hz)
    if len(users) > len(res):
        raise TooManyUsers(f"{len(users)} users but only {len(res)} resonances")
    ids = sorted(u.user_id if isinstance(u, UserLink) else u for u in users)
    if len(set(ids)) != len(ids):
        raise InputError("user ids must be unique")
    allocation = dict(zip(ids, res))
    if bands:
        assigned = [allocation[i] for i in ids]
        for lo_f, hi_f in zip(assigned, assigned[1:]):
            if lo_f in bands and hi_f in bands and bands[lo_f][1] > bands[hi_f][0]:
                warnings.warn(
                    f"3 dB bands at {lo_f:g} Hz and {hi_f:g} Hz overlap", OverlapWarning,
                    stacklevel=2,
                )
    return allocation


def effective_snr(scheme, n_users, snr_single_user):
    """Per-user SNR after the scheme's power sharing."""
    _check_scheme(scheme)
    if n_users < 1:
        raise InputError("need at least one user")
    if snr_single_user < 0:
        raise InputError("SNR must be non-negative")
    if scheme == "multi_frequency":
        return snr_single_user
    return snr_single_user / n_users


def q_function(x):
    """Gaussian tail probability."""
    return 0.5 * special.erfc(np.asarray(x) / math.sqrt(2))


def ber_bpsk(snr):
    """Coherent BPSK bit-error probability ``Q(sqrt(2 snr))``."""
    s = np.asarray(snr, dtype=float)
    if np.any(s < 0):
        raise InputError("SNR must be non-negative")
    out = q_function(np.sqrt(2 * s))
    return float(out) if out.ndim == 0 else out


def db_to_linear(db):
    return 10 ** (np.asarray(db, dtype=float) / 10)


def linear_to_db(x):
    return 10 * np.log10(x)


def required_snr(scheme, n_users, ber_target, tol_db=1e-6):
    """Single-user SNR (dB) at which the scheme reaches ``ber_target``."""
    _check_scheme(scheme)
    if not 0 < ber_target < 0.5:
        raise TargetOutOfRange("BER target must lie strictly between 0 and 0.5")
    # BPSK inversion in dB, then add back the power-split penalty
    base = optimize.brentq(
        lambda d: ber_bpsk(db_to_linear(d)) - ber_target, -60.0, 40.0, xtol=tol_db
    )
    return base + float(linear_to_db(1.0 / effective_snr(scheme, n_users, 1.0)))


def _chunk_errors(seed_seq, n, amplitude):
    rng = np.random.default_rng(seed_seq)
    bits = rng.integers(0, 2, n)
    symbols = 2.0 * bits - 1.0
    received = amplitude * symbols + rng.standard_normal(n)
    return int(np.count_nonzero((received > 0) != (bits == 1)))


def wilson_halfwidth(errors, n):
    ci = stats.binomtest(errors, n).proportion_ci(confidence_level=0.95, method="wilson")
    return (ci.high - ci.low) / 2


def monte_carlo_ber(scheme, n_users, snr_db, n_symbols, seed, workers=1):
    """Simulated BPSK BER for the target user.

    Symbols ``+-sqrt(2 snr)`` in unit-variance Gaussian noise, with the
    scheme's effective SNR.  The run is split into fixed chunks whose seeds
    are spawned from ``seed``, so the result is identical for any
    ``workers``.  ``snr_db = inf`` turns the noise off.
    """
    _check_scheme(scheme)
    if n_symbols < 1000:
        raise InputError("need at least 1000 symbols")
    n_symbols = int(n_symbols)
    if math.isinf(snr_db) and snr_db > 0:
        return BerEstimate(scheme, snr_db, 0.0, n_symbols, 0.0)
    snr = effective_snr(scheme, n_users, float(db_to_linear(snr_db)))
    amplitude = math.sqrt(2 * snr)

    sizes = [CHUNK] * (n_symbols // CHUNK)
    if n_symbols % CHUNK:
        sizes.append(n_symbols % CHUNK)
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))
    jobs = list(zip(seeds, sizes))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            counts = list(pool.map(lambda job: _chunk_errors(job[0], job[1], amplitude), jobs))
    else:
        counts = [_chunk_errors(s, n, amplitude) for s, n in jobs]
    errors = sum(counts)
    return BerEstimate(scheme, float(snr_db), errors / n_symbols, n_symbols,
                       float(wilson_halfwidth(errors, n_symbols)))


def snr_at_ber(snr_db, ber, target):
    """Interpolate the SNR (dB) where a decreasing BER curve crosses ``target``.

    Interpolation is linear in ``log10(BER)``.
    """
    snr_db = np.asarray(snr_db, dtype=float)
    ber = np.asarray(ber, dtype=float)
    ok = ber > 0
    logb = np.log10(ber[ok])
    x = snr_db[ok]
    below = np.nonzero(logb <= math.log10(target))[0]
    if len(below) == 0 or below[0] == 0:
        raise TargetOutOfRange("BER curve does not bracket the target")
    j = below[0]
    t = (math.log10(target) - logb[j - 1]) / (logb[j] - logb[j - 1])
    return float(x[j - 1] + t * (x[j] - x[j - 1]))
