"""Analytical axial gain approximations for each array geometry.

Each closed form is a function of one or two dimensionless parameters built
from the reciprocal-range mismatch ``|1/r - 1/r_f|``:

============  =====================================  ==========================
geometry      gain                                   parameter
============  =====================================  ==========================
ULA           (C(g)^2 + S(g)^2) / g^2                g^2 = N^2 d^2 beta / lam * |r-r_f|/(2 r r_f)
URA           product of two ULA factors             g_i^2 = N_i^2 d^2 beta_i / (2 lam) * |r-r_f|/(r r_f)
UCA           J0(zeta)^2                             zeta = pi R^2 / (2 lam) * |r-r_f|/(r r_f) * sin^2(el)
UCCA          sinc^2(xi/2), boresight                xi = pi R_M^2 / lam * |r-r_f|/(r r_f)
============  =====================================  ==========================

``beta`` is ``1 - (u . axis)^2`` for the element axis, which is ``cos^2(az)``
in the horizontal plane for the y-axis ULA.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

from .geometry import ArrayKind, ArrayLayout, direction
from .special import bessel_j0
from .special import fresnel as _fresnel


class FresnelPair(NamedTuple):
    c: float
    s: float


def fresnel(gamma) -> FresnelPair:
    c, s = _fresnel(gamma)
    return FresnelPair(c, s)


__all__ = [
    "FresnelPair",
    "EffectiveRangeParams",
    "fresnel",
    "bessel_j0",
    "gain_ula_closed",
    "gain_ura_closed",
    "gain_uca_closed",
    "gain_ucca_closed",
    "gain_ucca_ringsum",
    "effective_params",
    "closed_form_gain",
    "psll_location_ula",
    "psll_vs_eta_sweep",
]


def _fresnel_ratio(g):
    g = np.asarray(g, dtype=float)
    if np.any(g < 0):
        raise ValueError("Fresnel gain parameter must be nonnegative")
    c, s = _fresnel(np.atleast_1d(g))
    gg = np.atleast_1d(g)
    out = np.ones_like(gg)
    nz = gg > 0
    out[nz] = (c[nz] ** 2 + s[nz] ** 2) / gg[nz] ** 2
    return out.reshape(g.shape) if g.ndim else float(out[0])


def gain_ula_closed(gamma):
    """Fresnel-ratio ULA gain; equals 1 at ``gamma = 0``."""
    return _fresnel_ratio(gamma)


def gain_ura_closed(gamma1, gamma2):
    return _fresnel_ratio(gamma1) * _fresnel_ratio(gamma2)


def gain_uca_closed(zeta):
    return bessel_j0(zeta) ** 2


def gain_ucca_closed(xi):
    """Squared sinc of ``xi/2``; zeros at ``xi = 2 pi k``."""
    xi = np.asarray(xi, dtype=float)
    out = np.sinc(xi / (2 * np.pi)) ** 2
    return out if xi.ndim else float(out)


def gain_ucca_ringsum(ring_radii, ring_counts, wavelength, inv_range_mismatch, elevation):
    """Finite sum over rings of per-ring Bessel factors.

    ``inv_range_mismatch`` is ``|1/r - 1/r_f|`` (scalar or array). The ring
    phase ``2 zeta_m (1/sin^2 - 1/2)`` is evaluated in the equivalent form
    ``pi R_m^2 / lam * mismatch * (1 - sin^2/2)``, finite at boresight.
    """
    delta = np.asarray(inv_range_mismatch, dtype=float)
    radii = np.asarray(ring_radii, dtype=float)
    counts = np.asarray(ring_counts, dtype=float)
    s2 = np.sin(elevation) ** 2
    scale = np.pi * radii**2 / wavelength  # (M,)
    dm = delta[..., None] * scale
    zeta = 0.5 * dm * s2
    phase = dm * (1 - 0.5 * s2)
    total = (counts * np.exp(1j * phase) * bessel_j0(zeta.ravel()).reshape(zeta.shape)).sum(-1)
    out = np.abs(total / counts.sum()) ** 2
    return out if delta.ndim else float(out)


@dataclass(frozen=True)
class EffectiveRangeParams:
    """Dimensionless parameters for one or many observation ranges.

    Unused fields are ``None`` (for example ``zeta`` for a ULA).
    """

    inv_range_mismatch: np.ndarray  # |1/r - 1/r_f|
    gamma: np.ndarray | None = None
    gamma1: np.ndarray | None = None
    gamma2: np.ndarray | None = None
    beta1: float | None = None
    beta2: float | None = None
    zeta: np.ndarray | None = None
    zeta_m: np.ndarray | None = None
    xi: np.ndarray | None = None

    @property
    def eta_hat(self):
        if self.gamma1 is None:
            return None
        g1 = np.asarray(self.gamma1)
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.asarray(self.gamma2) / g1

    @property
    def r_eff(self):
        """The range factor each geometry's parameter is defined with."""
        return self.inv_range_mismatch / 2 if self.gamma is not None else self.inv_range_mismatch


def effective_params(layout: ArrayLayout, focus, ranges) -> EffectiveRangeParams:
    r = np.asarray(ranges, dtype=float)
    delta = np.abs(1.0 / r - 1.0 / focus.range)
    lam, d = layout.wavelength, layout.pitch
    u = direction(focus.azimuth, focus.elevation)
    kind = layout.kind
    if kind is ArrayKind.ULA:
        (n,) = layout.spec.counts
        beta = 1 - u[1] ** 2
        gamma = np.sqrt(n**2 * d**2 * beta / lam * delta / 2)
        return EffectiveRangeParams(delta, gamma=gamma, beta1=beta)
    if kind is ArrayKind.URA:
        n1, n2 = layout.spec.counts
        b1, b2 = 1 - u[1] ** 2, 1 - u[2] ** 2
        g1 = np.sqrt(n1**2 * d**2 * b1 / (2 * lam) * delta)
        g2 = np.sqrt(n2**2 * d**2 * b2 / (2 * lam) * delta)
        return EffectiveRangeParams(delta, gamma1=g1, gamma2=g2, beta1=b1, beta2=b2)
    s2 = np.sin(focus.elevation) ** 2
    radii = np.asarray(layout.ring_radii)
    if kind is ArrayKind.UCA:
        zeta = np.pi * radii[0] ** 2 / (2 * lam) * delta * s2
        return EffectiveRangeParams(delta, zeta=zeta)
    zeta_m = np.pi * radii**2 / (2 * lam) * delta[..., None] * s2
    xi = np.pi * radii[-1] ** 2 / lam * delta
    return EffectiveRangeParams(delta, zeta_m=zeta_m, xi=xi)


def closed_form_gain(layout: ArrayLayout, focus, ranges, ucca="auto"):
    """Closed-form axial gain at ``ranges`` for a beam focused at ``focus``.

    For a UCCA, ``ucca="sinc"`` uses the boresight sinc form,
    ``"ringsum"`` the finite ring sum, and ``"auto"`` picks the sinc form at
    boresight and the ring sum elsewhere.
    """
    p = effective_params(layout, focus, ranges)
    kind = layout.kind
    if kind is ArrayKind.ULA:
        return gain_ula_closed(p.gamma)
    if kind is ArrayKind.URA:
        return gain_ura_closed(p.gamma1, p.gamma2)
    if kind is ArrayKind.UCA:
        return gain_uca_closed(p.zeta)
    if ucca == "auto":
        ucca = "sinc" if abs(np.sin(focus.elevation)) < 1e-12 else "ringsum"
    if ucca == "sinc":
        return gain_ucca_closed(p.xi)
    return gain_ucca_ringsum(
        layout.ring_radii, layout.ring_counts, layout.wavelength,
        p.inv_range_mismatch, focus.elevation,
    )


def _ula_slope(g):
    # d/dg [(C^2 + S^2)/g^2] = 2 (g (C cos t + S sin t) - (C^2 + S^2)) / g^3, t = pi g^2/2
    c, s = _fresnel(g)
    t = 0.5 * np.pi * g * g
    return 2 * (g * (c * np.cos(t) + s * np.sin(t)) - (c * c + s * s)) / g**3


def psll_location_ula(lo=0.5, hi=4.0, samples=3501):
    """First sidelobe peak of the ULA Fresnel gain.

    Scans the analytic derivative for its first ``+ -> -`` sign change
    (the first maximum after the mainlobe minimum) and refines it with
    Brent's method. Returns ``(gamma, gain)``.
    """
    g = np.linspace(lo, hi, samples)
    slope = _ula_slope(g)
    seen_min = False
    for i in range(len(g) - 1):
        if not seen_min and slope[i] < 0 <= slope[i + 1]:
            seen_min = True
        elif seen_min and slope[i] > 0 >= slope[i + 1]:
            root = brentq(lambda x: float(_ula_slope(np.array([x]))[0]), g[i], g[i + 1],
                          xtol=1e-14, rtol=1e-14)
            return root, gain_ula_closed(root)
    raise ArithmeticError("no sidelobe maximum of the ULA gain in the search bracket")


def psll_vs_eta_sweep(eta_grid, gamma_max=12.0, points=24001):
    """Peak sidelobe level of ``G_URA(g, eta * g)`` for each ``eta``.

    ``g`` is swept over ``[0, gamma_max]``; the mainlobe ends at the first
    local minimum and the PSLL is the largest gain past it, in dB.
    """
    from .metrics import refine_peak

    g = np.linspace(0.0, gamma_max, points)
    base = gain_ula_closed(g)
    out = []
    for eta in np.atleast_1d(np.asarray(eta_grid, dtype=float)):
        if not 0 < eta <= 1:
            raise ValueError(f"eta must lie in (0, 1], got {eta}")
        G = base * gain_ula_closed(eta * g)
        i = 1
        while i < len(G) - 1 and G[i + 1] < G[i]:
            i += 1
        if i >= len(G) - 1:
            raise ArithmeticError(f"no sidelobe within gamma <= {gamma_max} for eta={eta}")
        j = i + int(np.argmax(G[i:]))
        _, peak = refine_peak(g, G, j)
        out.append((float(eta), float(10 * np.log10(peak))))
    return out
