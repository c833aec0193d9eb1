"""Angular-momentum algebra: Wigner 3j, dipole Clebsch-Gordan, Gaunt, Y_lm.

All coefficients are evaluated with the Racah single-sum formula over a
log-factorial table, which is exact to float precision for the small
momenta (l <= 4) that photoionization ladders reach, and remains usable
up to j = 40. Spherical harmonics carry the Condon-Shortley phase; the
same phase convention is assumed by every consumer in this package.

Conventions
-----------
photon_coupling implements the absorption convention m_f = m_i + q, and
enforces the electric-dipole parity rule |l_f - l_i| = 1 (so l_f = l_i
never couples, as appropriate for a central potential).

gaunt(l1, m1, l2, m2, L, M) is the projection integral

    int Y_{l1 m1}(omega) Y*_{l2 m2}(omega) Y*_{L M}(omega) domega,

i.e. exactly the coefficient that maps amplitude products a_{l1 m1}
a*_{l2 m2} onto the beta_{L M} expansion of |Psi|^2.
"""

from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np

__all__ = [
    "AngularMomentumState",
    "wigner3j",
    "clebsch_gordan",
    "photon_coupling",
    "gaunt",
    "ylm",
]

_J_MAX = 40
# ln(n!) for n = 0 .. 3*_J_MAX + 1 (largest factorial in the Racah sum).
_LOG_FACT = np.concatenate(([0.0], np.cumsum(np.log(np.arange(1, 3 * _J_MAX + 2)))))


@dataclass(frozen=True)
class AngularMomentumState:
    """One |l m> orbital-momentum label."""

    l: int
    m: int

    def __post_init__(self):
        if self.l < 0:
            raise ValueError(f"l must be non-negative, got l={self.l}")
        if abs(self.m) > self.l:
            raise ValueError(f"|m| <= l violated: l={self.l}, m={self.m}")


def _lf(n):
    return _LOG_FACT[n]


@lru_cache(maxsize=None)
def wigner3j(j1, j2, j3, m1, m2, m3):
    """Wigner 3j symbol (j1 j2 j3 / m1 m2 m3) by the Racah sum.

    Returns exactly 0.0 when the triangle rule or m1 + m2 + m3 = 0
    fails (also for |m_i| > j_i, the standard zero-by-convention case).

    Raises
    ------
    ValueError
        For negative j or j beyond the factorial table (j > 40).
    """
    for j in (j1, j2, j3):
        if j < 0:
            raise ValueError(f"angular momenta must be non-negative, got {j}")
        if j > _J_MAX:
            raise ValueError(f"j={j} exceeds supported maximum {_J_MAX}")
    if m1 + m2 + m3 != 0:
        return 0.0
    if abs(m1) > j1 or abs(m2) > j2 or abs(m3) > j3:
        return 0.0
    if j3 < abs(j1 - j2) or j3 > j1 + j2:
        return 0.0

    # Triangle (Delta) and projection factorials, as half log-weights.
    log_pref = 0.5 * (
        _lf(j1 + j2 - j3)
        + _lf(j1 - j2 + j3)
        + _lf(-j1 + j2 + j3)
        - _lf(j1 + j2 + j3 + 1)
        + _lf(j1 + m1)
        + _lf(j1 - m1)
        + _lf(j2 + m2)
        + _lf(j2 - m2)
        + _lf(j3 + m3)
        + _lf(j3 - m3)
    )

    k_min = max(0, j2 - j3 - m1, j1 - j3 + m2)
    k_max = min(j1 + j2 - j3, j1 - m1, j2 + m2)
    total = 0.0
    for k in range(k_min, k_max + 1):
        log_den = (
            _lf(k)
            + _lf(j1 + j2 - j3 - k)
            + _lf(j1 - m1 - k)
            + _lf(j2 + m2 - k)
            + _lf(j3 - j2 + m1 + k)
            + _lf(j3 - j1 - m2 + k)
        )
        total += (-1.0) ** k * math.exp(log_pref - log_den)
    sign = (-1.0) ** (j1 - j2 - m3)
    return sign * total


def clebsch_gordan(j1, m1, j2, m2, J, M):
    """<j1 m1; j2 m2 | J M> from the 3j symbol."""
    if M != m1 + m2:
        return 0.0
    return (-1.0) ** (j1 - j2 + M) * math.sqrt(2 * J + 1) * wigner3j(
        j1, j2, J, m1, m2, -M
    )


def photon_coupling(l_i, m_i, q, l_f, m_f):
    """Dipole coupling coefficient <l_i m_i; 1 q | l_f m_f> for one photon.

    Absorption convention: the populated final projection is
    m_f = m_i + q. The electric-dipole parity rule for a central
    potential restricts |l_f - l_i| = 1; any other (l_i, l_f) pair
    returns 0.0.

    Parameters
    ----------
    q : int
        Spherical field component, one of {-1, 0, +1}.
    """
    if q not in (-1, 0, 1):
        raise ValueError(f"polarization component q must be -1, 0 or +1, got {q}")
    if l_i < 0 or l_f < 0:
        raise ValueError("angular momenta must be non-negative")
    if abs(l_f - l_i) != 1:
        return 0.0
    if m_f != m_i + q:
        return 0.0
    return clebsch_gordan(l_i, m_i, 1, q, l_f, m_f)


@lru_cache(maxsize=None)
def gaunt(l1, m1, l2, m2, L, M):
    """Projection integral int Y_{l1 m1} Y*_{l2 m2} Y*_{L M} domega.

    Zero unless M = m1 - m2, |l1 - l2| <= L <= l1 + l2 and l1 + l2 + L
    even. Expressed through two 3j symbols; exact to float precision.
    """
    for l in (l1, l2, L):
        if l < 0:
            raise ValueError("angular momenta must be non-negative")
    if M != m1 - m2:
        return 0.0
    if L < abs(l1 - l2) or L > l1 + l2 or (l1 + l2 + L) % 2 != 0:
        return 0.0
    pref = (-1.0) ** (m2 + M) * math.sqrt(
        (2 * l1 + 1) * (2 * l2 + 1) * (2 * L + 1) / (4.0 * math.pi)
    )
    return pref * wigner3j(l1, l2, L, 0, 0, 0) * wigner3j(l1, l2, L, m1, -m2, -M)


def _legendre_norm(l, m, x):
    """Normalized associated Legendre bar-P_l^m(x) for m >= 0, vectorized.

    bar-P includes the sqrt((2l+1)/(4pi) (l-m)!/(l+m)!) factor and the
    Condon-Shortley (-1)^m, so Y_lm = bar-P_l^m(cos theta) e^{i m phi}.
    """
    x = np.asarray(x, dtype=float)
    sin_th = np.sqrt(np.clip(1.0 - x * x, 0.0, None))
    # p_mm = bar-P_m^m
    p_mm = np.full_like(x, math.sqrt(1.0 / (4.0 * math.pi)))
    for k in range(1, m + 1):
        p_mm = -math.sqrt((2 * k + 1) / (2.0 * k)) * sin_th * p_mm
    if l == m:
        return p_mm
    p_m1 = math.sqrt(2 * m + 3) * x * p_mm
    if l == m + 1:
        return p_m1
    p_prev, p_curr = p_mm, p_m1
    for ll in range(m + 2, l + 1):
        a = math.sqrt((4.0 * ll * ll - 1.0) / (ll * ll - m * m))
        b = math.sqrt(((ll - 1.0) ** 2 - m * m) / (4.0 * (ll - 1.0) ** 2 - 1.0))
        p_next = a * (x * p_curr - b * p_prev)
        p_prev, p_curr = p_curr, p_next
    return p_curr


def ylm(l, m, theta, phi):
    """Complex orthonormal spherical harmonic Y_lm(theta, phi).

    Condon-Shortley phase; theta and phi may be scalars or arrays
    (broadcast together). Negative m uses Y_{l,-m} = (-1)^m Y*_{l,m}.
    """
    if l < 0:
        raise ValueError("l must be non-negative")
    if abs(m) > l:
        raise ValueError(f"|m| <= l violated: l={l}, m={m}")
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    mm = abs(m)
    p = _legendre_norm(l, mm, np.cos(theta))
    val = p * np.exp(1j * mm * phi)
    if m < 0:
        val = (-1.0) ** mm * np.conj(val)
    if val.ndim == 0:
        return complex(val)
    return val
