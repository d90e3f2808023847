"""Fresnel integrals and the zeroth-order Bessel function.

Both are evaluated elementwise on numpy arrays. Small arguments use the
Maclaurin series; large arguments switch to a method whose cost does not
grow with the argument:

* Fresnel: the complex continued fraction for the complementary error
  function (modified Lentz iteration), as in Numerical Recipes ``frenel``.
* J0: Hankel's asymptotic expansion, truncated at its smallest term.
"""

import math

import numpy as np

FRESNEL_SERIES_MAX = 1.5
J0_SERIES_MAX = 12.0

_EPS = 1e-16
_TINY = 1e-300
_MAXIT = 200


def _fresnel_series(x):
    # C = sum (-1)^n (pi/2)^(2n) x^(4n+1) / ((2n)! (4n+1))
    # S = sum (-1)^n (pi/2)^(2n+1) x^(4n+3) / ((2n+1)! (4n+3))
    t = 0.5 * np.pi * x * x
    c = np.zeros_like(x)
    s = np.zeros_like(x)
    term = x.copy()  # t^k x / k!
    for k in range(60):
        if k % 2 == 0:
            c += (-1) ** (k // 2) * term / (2 * k + 1)
        else:
            s += (-1) ** (k // 2) * term / (2 * k + 1)
        term = term * t / (k + 1)
        if np.all(np.abs(term) < _EPS * np.maximum(np.abs(c), 1e-300)):
            break
    return c, s


def _fresnel_cf(x):
    pix2 = np.pi * x * x
    b = 1.0 - 1j * pix2
    cc = np.full(x.shape, 1.0 / _TINY, dtype=complex)
    d = 1.0 / b
    h = d.copy()
    n = -1
    done = np.zeros(x.shape, dtype=bool)
    for _ in range(2, _MAXIT):
        n += 2
        a = -n * (n + 1)
        b = b + 4.0
        d = 1.0 / (a * d + b)
        cc = b + a / cc
        delta = cc * d
        h = np.where(done, h, h * delta)
        done |= np.abs(delta - 1.0) < _EPS
        if done.all():
            break
    else:
        raise ArithmeticError("Fresnel continued fraction did not converge")
    h = h * (x - 1j * x)
    cs = (0.5 + 0.5j) * (1.0 - np.exp(0.5j * pix2) * h)
    return cs.real, cs.imag


def fresnel(x):
    """Fresnel integrals ``C(x) = int_0^x cos(pi t^2/2) dt`` and ``S(x)``.

    Returns a pair of arrays (or floats for scalar input). Both functions are
    odd; ``C, S -> 1/2`` as ``x -> +inf``.
    """
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if not np.all(np.isfinite(x)):
        raise ValueError("fresnel: argument must be finite")
    ax = np.abs(x)
    c = np.empty_like(ax)
    s = np.empty_like(ax)
    small = ax <= FRESNEL_SERIES_MAX
    if small.any():
        c[small], s[small] = _fresnel_series(ax[small])
    if (~small).any():
        c[~small], s[~small] = _fresnel_cf(ax[~small])
    c = np.copysign(c, x)
    s = np.copysign(s, x)
    if scalar:
        return float(c[0]), float(s[0])
    return c, s


def _j0_series(x):
    q = -0.25 * x * x
    out = np.ones_like(x)
    term = np.ones_like(x)
    for k in range(1, 80):
        term = term * q / (k * k)
        out += term
        if np.all(np.abs(term) < 1e-18):
            break
    return out


def _j0_hankel(x):
    # J0 ~ sqrt(2/(pi x)) (P cos(x - pi/4) - Q sin(x - pi/4)),
    # a_k = prod_{i=1..k} (2i-1)^2 / (k! 8^k)
    p = np.ones_like(x)
    q = np.zeros_like(x)
    term = np.ones_like(x)
    last = np.full_like(x, np.inf)
    active = np.ones(x.shape, dtype=bool)
    for k in range(1, 60):
        term = term * (2 * k - 1) ** 2 / (8.0 * k * x)
        active &= np.abs(term) < last
        last = np.abs(term)
        if not active.any():
            break
        # P = 1 - a2/x^2 + a4/x^4 - ...,  Q = -a1/x + a3/x^3 - ...
        j = k // 2
        if k % 2 == 1:
            sign = -1.0 if j % 2 == 0 else 1.0
            q = np.where(active, q + sign * term, q)
        else:
            sign = 1.0 if j % 2 == 0 else -1.0
            p = np.where(active, p + sign * term, p)
    phase = x - 0.25 * np.pi
    return np.sqrt(2.0 / (np.pi * x)) * (p * np.cos(phase) - q * np.sin(phase))


def bessel_j0(x):
    """Bessel function of the first kind, order zero (even in ``x``)."""
    scalar = np.ndim(x) == 0
    x = np.abs(np.atleast_1d(np.asarray(x, dtype=float)))
    if not np.all(np.isfinite(x)):
        raise ValueError("bessel_j0: argument must be finite")
    out = np.empty_like(x)
    small = x <= J0_SERIES_MAX
    if small.any():
        out[small] = _j0_series(x[small])
    if (~small).any():
        out[~small] = _j0_hankel(x[~small])
    return float(out[0]) if scalar else out


def j0_power_series(x, terms=40):
    """Truncated Maclaurin series of J0, summed in exact rational order.

    Kept separate from :func:`bessel_j0` so it can serve as a reference.
    """
    total = math.fsum(
        (-1) ** k * (x / 2.0) ** (2 * k) / math.factorial(k) ** 2 for k in range(terms)
    )
    return total
