"""Independent numerical oracles used by the test suite only.

Each oracle deliberately uses a different algorithm (or a different
library) from the implementation it checks:

- exact_wigner3j: Racah sum in exact rational arithmetic (fractions).
- sphere_quadrature: Gauss-Legendre x uniform-phi product rule, exact
  for band-limited integrands on the sphere.
- stirling_log_gamma: asymptotic Stirling series with upward recurrence.
- scipy's sph_harm_y / mpmath's coulombf serve as third-party oracles
  where the library ships its own implementation.
"""

import math
from fractions import Fraction

import numpy as np


def exact_wigner3j(j1, j2, j3, m1, m2, m3):
    """Wigner 3j via the Racah sum in exact rational arithmetic.

    Returns sign * sqrt(rational), evaluated in floats only at the end.
    """
    if m1 + m2 + m3 != 0:
        return 0.0
    if j3 < abs(j1 - j2) or j3 > j1 + j2:
        return 0.0
    if abs(m1) > j1 or abs(m2) > j2 or abs(m3) > j3:
        return 0.0

    f = math.factorial
    delta = Fraction(
        f(j1 + j2 - j3) * f(j1 - j2 + j3) * f(-j1 + j2 + j3), f(j1 + j2 + j3 + 1)
    )
    proj = Fraction(
        f(j1 + m1) * f(j1 - m1) * f(j2 + m2) * f(j2 - m2) * f(j3 + m3) * f(j3 - m3)
    )
    k_min = max(0, j2 - j3 - m1, j1 - j3 + m2)
    k_max = min(j1 + j2 - j3, j1 - m1, j2 + m2)
    ssum = Fraction(0)
    for k in range(k_min, k_max + 1):
        den = (
            f(k)
            * f(j1 + j2 - j3 - k)
            * f(j1 - m1 - k)
            * f(j2 + m2 - k)
            * f(j3 - j2 + m1 + k)
            * f(j3 - j1 - m2 + k)
        )
        ssum += Fraction((-1) ** k, den)
    sign = (-1) ** (j1 - j2 - m3)
    # value = sign * ssum * sqrt(delta * proj); ssum is rational, keep exact.
    mag2 = delta * proj * ssum * ssum
    root = math.sqrt(mag2.numerator / mag2.denominator)
    return sign * (1.0 if ssum >= 0 else -1.0) * root


def exact_clebsch_gordan(j1, m1, j2, m2, J, M):
    if M != m1 + m2:
        return 0.0
    return (
        (-1.0) ** (j1 - j2 + M)
        * math.sqrt(2 * J + 1)
        * exact_wigner3j(j1, j2, J, m1, m2, -M)
    )


def sphere_grid(n_theta=64, n_phi=128):
    """Gauss-Legendre nodes in cos(theta) x uniform phi, with weights.

    Exact for integrands that are polynomials of degree < 2*n_theta in
    cos(theta) times Fourier modes |k| < n_phi in phi.
    """
    x, w = np.polynomial.legendre.leggauss(n_theta)
    theta = np.arccos(x)
    phi = np.arange(n_phi) * (2.0 * np.pi / n_phi)
    th_grid, ph_grid = np.meshgrid(theta, phi, indexing="ij")
    w_grid = np.repeat(w[:, None], n_phi, axis=1) * (2.0 * np.pi / n_phi)
    return th_grid, ph_grid, w_grid


def quadrature_ylm(l, m, theta, phi):
    """Spherical harmonic from scipy, as an independent reference."""
    from scipy.special import sph_harm_y

    return sph_harm_y(l, m, theta, phi)


def quadrature_gaunt(l1, m1, l2, m2, L, M, n_theta=64, n_phi=128):
    """Sphere quadrature of Y_{l1 m1} Y*_{l2 m2} Y*_{L M}."""
    th, ph, w = sphere_grid(n_theta, n_phi)
    integrand = (
        quadrature_ylm(l1, m1, th, ph)
        * np.conj(quadrature_ylm(l2, m2, th, ph))
        * np.conj(quadrature_ylm(L, M, th, ph))
    )
    return complex(np.sum(integrand * w))


# Bernoulli numbers B_2 .. B_20 for the Stirling series.
_BERNOULLI = [
    Fraction(1, 6),
    Fraction(-1, 30),
    Fraction(1, 42),
    Fraction(-1, 30),
    Fraction(5, 66),
    Fraction(-691, 2730),
    Fraction(7, 6),
    Fraction(-3617, 510),
    Fraction(43867, 798),
    Fraction(-174611, 330),
]


def damped_cc_oracle(l_i, l_f, k_i, k_f, z_charge=1.0, eps_frac=40.0):
    """Continuum-continuum Abel integral by brute damped quadrature.

    Damps the full integrand with e^{-eps r} on a Simpson grid out to
    r = 22/eps for eps in (4 eps0, 2 eps0, eps0), eps0 = |k_f - k_i| /
    eps_frac, and Richardson-extrapolates eps -> 0. Independent of the
    library's matching-radius/contour tail treatment (the wavefunctions
    themselves are cross-checked against mpmath elsewhere).
    """
    from rabbitsim.matrix_elements import _hplus_grid
    from rabbitsim.special import _solution_for, coulomb_phase

    eta_i = -z_charge / k_i
    eta_f = -z_charge / k_f
    eps0 = abs(k_f - k_i) / eps_frac
    r_max = 22.0 / eps0
    h = min(2.0 * math.pi / (60.0 * (k_i + k_f)), 0.2)
    n = int(math.ceil(r_max / h))
    if n % 2 == 1:
        n += 1
    r = np.linspace(0.0, r_max, n + 1)
    f_final = _solution_for(l_f, eta_f, k_f * r_max).evaluate(k_f * r)
    h_inter = np.empty(r.size, dtype=complex)
    h_inter[0] = 0.0
    h_inter[1:] = _hplus_grid(l_i, eta_i, k_i * r[1:])
    w = np.ones(r.size)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    w *= h / 3.0
    base = w * f_final * r * h_inter
    t4, t2, t1 = (np.sum(base * np.exp(-e * r)) for e in (4 * eps0, 2 * eps0, eps0))
    t_abel = (8.0 * t1 - 6.0 * t2 + t4) / 3.0
    chi = (
        coulomb_phase(l_i, eta_i)
        - coulomb_phase(l_f, eta_f)
        - 0.5 * math.pi * (1.0 + l_i - l_f)
    )
    return complex(np.conj(t_abel) * np.exp(1j * chi))


def stirling_log_gamma(z):
    """Principal-branch log Gamma by Stirling series + upward recurrence.

    Push |z| >= 24 with log Gamma(z) = log Gamma(z+1) - Log z (exact on
    the cut plane), then apply the asymptotic series with B_2..B_20.
    """
    z = complex(z)
    shift = 0.0 + 0.0j
    while abs(z) < 24.0:
        shift -= np.log(z)
        z = z + 1.0
    series = 0.0 + 0.0j
    for n, b in enumerate(_BERNOULLI, start=1):
        series += (b.numerator / b.denominator) / (
            (2 * n) * (2 * n - 1) * z ** (2 * n - 1)
        )
    return (
        (z - 0.5) * np.log(z) - z + 0.5 * math.log(2.0 * math.pi) + series + shift
    )
