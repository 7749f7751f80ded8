"""Incomplete Legendre elliptic integrals F(phi, k) and E(phi, k).

Evaluated through Carlson's symmetric forms R_F and R_D with the duplication
algorithm:

    F(phi, k) = s R_F(c^2, 1 - k^2 s^2, 1)
    E(phi, k) = F(phi, k) - k^2 s^3 R_D(c^2, 1 - k^2 s^2, 1) / 3

with s = sin(phi), c = cos(phi).  Arguments outside [-pi/2, pi/2] use the
quasi-periodicity F(phi + n pi) = F(phi) + 2n K.
"""

import math

from .errors import DomainError

_TOL = 1e-16  # target relative error of the duplication series


def carlson_rf(x, y, z):
    """R_F(x, y, z) for non-negative x, y, z with at most one zero."""
    if min(x, y, z) < 0 or (x + y == 0 or x + z == 0 or y + z == 0):
        raise DomainError("R_F needs non-negative arguments with at most one zero", (x, y, z))
    a0 = a = (x + y + z) / 3.0
    q = max(abs(a0 - x), abs(a0 - y), abs(a0 - z)) / (3.0 * _TOL) ** (1 / 6)
    f = 1.0
    while q * f >= abs(a):
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
        lam = sx * sy + sx * sz + sy * sz
        x, y, z = (x + lam) / 4, (y + lam) / 4, (z + lam) / 4
        a = (a + lam) / 4
        f /= 4
    X = 1 - x / a
    Y = 1 - y / a
    Z = -(X + Y)
    e2 = X * Y - Z * Z
    e3 = X * Y * Z
    return (1 - e2 / 10 + e3 / 14 + e2 * e2 / 24 - 3 * e2 * e3 / 44) / math.sqrt(a)


def carlson_rd(x, y, z):
    """R_D(x, y, z) for x, y >= 0 (not both zero) and z > 0."""
    if min(x, y) < 0 or x + y == 0 or z <= 0:
        raise DomainError("R_D needs x, y >= 0 (not both zero) and z > 0", (x, y, z))
    a0 = a = (x + y + 3 * z) / 5.0
    q = max(abs(a0 - x), abs(a0 - y), abs(a0 - z)) / (_TOL / 4) ** (1 / 6)
    f = 1.0
    s = 0.0
    while q * f >= abs(a):
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
        lam = sx * sy + sx * sz + sy * sz
        s += f / (sz * (z + lam))
        x, y, z = (x + lam) / 4, (y + lam) / 4, (z + lam) / 4
        a = (a + lam) / 4
        f /= 4
    X = 1 - x / a
    Y = 1 - y / a
    Z = -(X + Y) / 3
    ea = X * Y
    eb = Z * Z
    ec = ea - eb
    ed = ea - 6 * eb
    ee = ed + ec + ec
    poly = (1 + ed * (-3 / 14 + 9 * ed / 88 - 4.5 * Z * ee / 26)
            + Z * (ee / 6 + Z * (-9 * ec / 22 + 3 * Z * ea / 26)))
    return 3 * s + f * poly / (a * math.sqrt(a))


def _check_modulus(k):
    if k * k >= 1:
        raise DomainError("elliptic integrals need k^2 < 1", k)


def _principal(phi):
    """Split phi = n pi + r with r in [-pi/2, pi/2]."""
    n = math.floor(phi / math.pi + 0.5)
    return n, phi - n * math.pi


def _f_principal(r, k):
    s, c = math.sin(r), math.cos(r)
    if s == 0:
        return 0.0
    return s * carlson_rf(c * c, 1 - k * k * s * s, 1.0)


def _e_principal(r, k):
    s, c = math.sin(r), math.cos(r)
    if s == 0:
        return 0.0
    y = 1 - k * k * s * s
    return s * carlson_rf(c * c, y, 1.0) - k * k * s ** 3 * carlson_rd(c * c, y, 1.0) / 3


def complete_k(k):
    _check_modulus(k)
    return carlson_rf(0.0, 1 - k * k, 1.0)


def complete_e(k):
    _check_modulus(k)
    if k == 0:
        return math.pi / 2
    return carlson_rf(0.0, 1 - k * k, 1.0) - k * k * carlson_rd(0.0, 1 - k * k, 1.0) / 3


def ellip_f(phi, k):
    """Incomplete integral of the first kind, int_0^phi dt / sqrt(1 - k^2 sin^2 t)."""
    _check_modulus(k)
    n, r = _principal(float(phi))
    out = _f_principal(r, k)
    return out + 2 * n * complete_k(k) if n else out


def ellip_e(phi, k):
    """Incomplete integral of the second kind, int_0^phi sqrt(1 - k^2 sin^2 t) dt."""
    _check_modulus(k)
    n, r = _principal(float(phi))
    out = _e_principal(r, k)
    return out + 2 * n * complete_e(k) if n else out


def elliptic_integral(kind, phi, k):
    if kind == "F":
        return ellip_f(phi, k)
    if kind == "E":
        return ellip_e(phi, k)
    raise DomainError("kind must be 'F' or 'E'", kind)


def quadrature_oracle(kind, phi, k):
    """Adaptive quadrature of the defining integral (independent check)."""
    from scipy.integrate import quad
    _check_modulus(k)
    if kind == "F":
        g = lambda t: 1 / math.sqrt(1 - k * k * math.sin(t) ** 2)
    else:
        g = lambda t: math.sqrt(1 - k * k * math.sin(t) ** 2)
    val, _ = quad(g, 0.0, phi, epsabs=1e-14, epsrel=1e-13, limit=200)
    return val
