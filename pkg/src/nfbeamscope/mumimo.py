"""Multi-user line-of-sight downlink with maximum-ratio transmission.

Channels are the unnormalized near-field responses ``h_k = sqrt(N) b_k``
(unit path gain) and precoders are ``w_k = h_k^H / sqrt(N)``. With these, the
per-user rate reduces to

    R_k = log2(1 + g N / (1 + g N sum_{j != k} I_kj^2)),   I_kj = |b_k^H b_j|

where ``g`` is the per-antenna transmit SNR ``P/N``.

Random numbers
--------------
Monte Carlo trials use numpy's Philox4x64-10 counter-based generator. Trial
``t`` of a run seeded with ``s`` uses key ``s`` and an initial counter of
``(0, 0, 0, t)``, so any trial can be regenerated on its own and threaded runs
match sequential ones exactly.
"""

import hashlib
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .geometry import ArrayLayout
from .response import FocusPoint, steering_matrix, steering_vector

ANGLE_POLICIES = ("reference", "half_space", "azimuth")
SNR_AXES = ("per_antenna", "total")


@dataclass(frozen=True)
class UserSet:
    users: tuple

    def __post_init__(self):
        object.__setattr__(self, "users", tuple(self.users))
        if len(self.users) < 1:
            raise ValueError("need at least one user")

    @property
    def K(self):
        return len(self.users)

    def __iter__(self):
        return iter(self.users)

    def __getitem__(self, k):
        return self.users[k]

    def check_window(self, layout):
        lo, hi = 2 * layout.aperture_length, layout.rayleigh_distance
        bad = [u.range for u in self.users if not lo <= u.range <= hi]
        if bad:
            raise ValueError(f"user ranges {bad} fall outside [2D, R_D] = [{lo:.4g}, {hi:.4g}]")


@dataclass(frozen=True)
class SinrBreakdown:
    signal_gain: float  # g N
    interference_terms: tuple  # I_kj^2 for j != k, in user order
    sinr: float
    rate_bits: float


@dataclass
class SumrateCurve:
    snr_grid_db: list
    mean_sumrate: list
    stderr: list
    trial_count: int
    rng_seed: int
    config: dict = field(default_factory=dict)


def interference(layout: ArrayLayout, user_k: FocusPoint, user_j: FocusPoint) -> float:
    """Normalized channel cross-correlation ``|h_k^H h_j| / N``."""
    a = steering_vector(layout, user_k)
    b = steering_vector(layout, user_j)
    return min(abs(a.inner(b)), 1.0)


def interference_matrix(layout, users):
    B = steering_matrix(layout, list(users))
    return np.minimum(np.abs(B.conj() @ B.T), 1.0)


def _signal_gain(snr, n, snr_axis):
    if snr_axis not in SNR_AXES:
        raise ValueError(f"snr_axis must be one of {SNR_AXES}, got {snr_axis!r}")
    return snr * n if snr_axis == "per_antenna" else snr


def rate_from_terms(signal_gain, terms):
    sinr = signal_gain / (1 + signal_gain * math.fsum(terms))
    return SinrBreakdown(float(signal_gain), tuple(float(t) for t in terms), sinr,
                         math.log2(1 + sinr))


def user_rate(layout, users: UserSet, k: int, snr: float, snr_axis="per_antenna") -> SinrBreakdown:
    """Rate of user ``k`` from the interference terms.

    ``snr`` is linear. With ``snr_axis="per_antenna"`` it is the per-antenna
    SNR ``P/N``; with ``"total"`` it is the array SNR ``P``.
    """
    if not 0 <= k < users.K:
        raise IndexError(f"user index {k} out of range for K={users.K}")
    if not snr > 0:
        raise ValueError("snr must be positive")
    sg = _signal_gain(snr, layout.element_count, snr_axis)
    terms = [interference(layout, users[k], users[j]) ** 2 for j in range(users.K) if j != k]
    return rate_from_terms(sg, terms)


def user_rate_direct(layout, users: UserSet, k: int, snr: float, snr_axis="per_antenna") -> float:
    """Rate of user ``k`` from explicit MRT precoders and channel products.

    Builds ``h_j`` and ``w_j = h_j^H / sqrt(N)`` and evaluates
    ``g |w_k h_k|^2 / (1 + g sum_{j != k} |w_j h_k|^2)`` directly.
    """
    n = layout.element_count
    gamma = _signal_gain(snr, n, snr_axis) / n
    H = np.sqrt(n) * steering_matrix(layout, list(users))  # rows are h_j^T
    W = H.conj() / np.sqrt(n)  # rows are w_j
    p = np.abs(W @ H[k]) ** 2  # |w_j h_k|^2 for every j
    interf = math.fsum(p[j] for j in range(users.K) if j != k)
    sinr = gamma * p[k] / (1 + gamma * interf)
    return math.log2(1 + sinr)


def sumrate(layout, users: UserSet, snr, snr_axis="per_antenna"):
    """Sum of user rates for one or several linear SNR values."""
    I2 = interference_matrix(layout, users) ** 2
    np.fill_diagonal(I2, 0.0)
    load = I2.sum(axis=1)
    sg = _signal_gain(np.atleast_1d(np.asarray(snr, dtype=float)), layout.element_count, snr_axis)
    rates = np.log2(1 + sg[:, None] / (1 + sg[:, None] * load[None, :]))
    return rates.sum(axis=1)


def trial_rng(seed, trial):
    bits = np.random.Philox(key=int(seed), counter=[0, 0, 0, int(trial)])
    return np.random.Generator(bits)


def draw_users(layout, K, rng, range_interval=None, angle_policy="half_space"):
    """One trial's user positions.

    Ranges are uniform in ``range_interval`` (default ``[2D, R_D]``).
    Directions follow ``angle_policy``:

    * ``"reference"``: every user on the layout's reference direction
      (boresight, or coplanar for a UCA);
    * ``"half_space"``: uniform over the unit hemisphere ``x > 0``, the same
      region for every geometry;
    * ``"azimuth"``: uniform azimuth in ``[-pi/2, pi/2]`` in the horizontal
      plane.
    """
    lo, hi = range_interval or (2 * layout.aperture_length, layout.rayleigh_distance)
    if not 0 < lo <= hi:
        raise ValueError(f"bad range interval ({lo}, {hi})")
    r = lo + (hi - lo) * rng.random(K)
    if angle_policy == "reference":
        az = np.full(K, layout.reference[0])
        el = np.full(K, layout.reference[1])
    elif angle_policy == "half_space":
        v = rng.standard_normal((K, 3))
        v /= np.linalg.norm(v, axis=1)[:, None]
        v[:, 0] = np.abs(v[:, 0])
        az = np.arctan2(v[:, 1], v[:, 0])
        el = np.arccos(np.clip(v[:, 2], -1, 1))
    elif angle_policy == "azimuth":
        az = rng.uniform(-np.pi / 2, np.pi / 2, K)
        el = np.full(K, np.pi / 2)
    else:
        raise ValueError(f"angle_policy must be one of {ANGLE_POLICIES}, got {angle_policy!r}")
    return UserSet(FocusPoint(float(a), float(e), float(rr)) for a, e, rr in zip(az, el, r))


def monte_carlo_sumrate(
    layout: ArrayLayout,
    K=5,
    range_interval=None,
    angle_policy="half_space",
    snr_grid_db=(0, 5, 10, 15, 20),
    trials=1000,
    seed=0,
    snr_axis="per_antenna",
    threads=1,
) -> SumrateCurve:
    """Mean sum rate over random user drops, one drop per trial.

    Users stay fixed across the SNR grid within a trial.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if K < 1:
        raise ValueError("K must be >= 1")
    snr_db = [float(s) for s in snr_grid_db]
    snr = 10 ** (np.asarray(snr_db) / 10)

    def run(t):
        users = draw_users(layout, K, trial_rng(seed, t), range_interval, angle_policy)
        return sumrate(layout, users, snr, snr_axis)

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            rows = list(pool.map(run, range(trials)))
    else:
        rows = [run(t) for t in range(trials)]
    per_trial = np.array(rows).T  # (snr, trial)
    mean = [math.fsum(col) / trials for col in per_trial]
    if trials > 1:
        err = [float(np.std(col, ddof=1) / math.sqrt(trials)) for col in per_trial]
    else:
        err = [0.0] * len(snr_db)
    config = {
        "geometry": layout.kind.value,
        "counts": list(layout.spec.counts),
        "carrier_frequency": layout.spec.carrier_frequency,
        "spacing": layout.pitch,
        "K": K,
        "range_interval": list(range_interval) if range_interval else
        [2 * layout.aperture_length, layout.rayleigh_distance],
        "angle_policy": angle_policy,
        "snr_axis": snr_axis,
        "rng": "Philox4x64-10, key=seed, counter=(0,0,0,trial)",
    }
    return SumrateCurve(snr_db, mean, err, trials, seed, config)


def config_hash(config):
    blob = json.dumps(config, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def curve_dict(curve: SumrateCurve):
    return asdict(curve)
