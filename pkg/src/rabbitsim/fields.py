"""Laser-field model: harmonic comb, IR phasor, polarization, delays.

The XUV pulse train is treated in the delta-pulse limit: no temporal
envelope enters, and the XUV-IR delay tau appears only through the
monochromatic IR phasor exp(-i omega tau) (absorption) or its conjugate
(emission). Real-field traces are recovered downstream by taking the
real part at display time.

Polarization states live in the spherical basis e_q, q in {-1, 0, +1}.
For fields in the (x, y) plane propagating along z with equal Cartesian
amplitudes and a relative phase phi_y on the y component,

    e_{+-1} = (-+ E_x + i E_y e^{i phi_y}) / sqrt(2),

so phi_y = 0 is in-plane linear light (|e_+| = |e_-|) and phi_y = pi/2
is pure q = +1 circular light. The ellipticity (minor/major axis ratio)
for this equal-amplitude geometry is xi = tan(phi_y / 2).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .constants import optical_period_fs, wavelength_nm_to_ev

__all__ = [
    "PolarizationState",
    "HarmonicComb",
    "DelayGrid",
    "FieldSpec",
    "Band",
    "circular_components",
    "ir_phasor",
    "band_energies",
]


@dataclass(frozen=True)
class PolarizationState:
    """Unit-intensity polarization in the spherical basis."""

    e_minus: complex
    e_zero: complex
    e_plus: complex
    phi_y: float | None = None

    def __post_init__(self):
        total = abs(self.e_minus) ** 2 + abs(self.e_zero) ** 2 + abs(self.e_plus) ** 2
        if not math.isclose(total, 1.0, rel_tol=0, abs_tol=1e-12):
            raise ValueError(f"polarization must have unit intensity, got {total}")

    def component(self, q):
        return {-1: self.e_minus, 0: self.e_zero, +1: self.e_plus}[q]

    @property
    def components(self):
        """Iterable of (q, e_q) with nonzero amplitude."""
        return [(q, self.component(q)) for q in (-1, 0, 1) if self.component(q) != 0]

    @property
    def ellipticity(self):
        """xi = tan(phi_y / 2) for in-plane states, None for linear z."""
        if self.phi_y is None:
            return None
        return math.tan(0.5 * self.phi_y)

    @classmethod
    def linear_z(cls):
        """Linear polarization along z: pure q = 0."""
        return cls(0j, 1.0 + 0j, 0j, phi_y=None)


def circular_components(phi_y, propagation="z"):
    """Polarization of an in-plane field with y-component phase phi_y.

    Equal Cartesian amplitudes E_x = E_y = 1/sqrt(2) are assumed, which
    keeps the state normalized for every phi_y. phi_y = 0 gives linear
    in-plane light, phi_y = +pi/2 pure q = +1, phi_y = -pi/2 pure q = -1.
    """
    if propagation != "z":
        raise ValueError("only propagation along z is implemented")
    ex = 1.0 / math.sqrt(2.0)
    ey = (1.0 / math.sqrt(2.0)) * np.exp(1j * phi_y)
    e_plus = (-ex + 1j * ey) / math.sqrt(2.0)
    e_minus = (ex + 1j * ey) / math.sqrt(2.0)
    return PolarizationState(complex(e_minus), 0j, complex(e_plus), phi_y=float(phi_y))


def ir_phasor(tau, omega):
    """Analytic IR field factor exp(-i omega tau).

    Absorption pathways multiply by this phasor, emission pathways by
    its complex conjugate. tau and omega only need consistent units.
    """
    return complex(np.exp(-1j * omega * np.asarray(tau, dtype=float)))


@dataclass(frozen=True)
class HarmonicComb:
    """XUV harmonic comb of a driver field.

    orders are harmonic numbers n (odd for a standard comb); amplitudes
    and optical phases default to 1 and 0 per order. include_even adds
    the even orders interleaved between min(orders) - 1 and
    max(orders) - 1, which are the sideband slots.
    """

    driver_wavelength_nm: float = 800.0
    orders: tuple = (15, 17, 19, 21)
    amplitudes: dict = field(default_factory=dict)
    optical_phases: dict = field(default_factory=dict)
    include_even: bool = False
    photon_ev: float | None = None

    def __post_init__(self):
        if len(self.orders) == 0:
            raise ValueError("harmonic comb needs at least one order")
        if any(b <= a for a, b in zip(self.orders, self.orders[1:])):
            raise ValueError("orders must be strictly increasing")
        if any(a < 0 for a in self.amplitudes.values()):
            raise ValueError("amplitudes must be non-negative")

    @property
    def photon_energy_ev(self):
        """Driver photon energy: explicit photon_ev wins over wavelength."""
        if self.photon_ev is not None:
            return self.photon_ev
        return wavelength_nm_to_ev(self.driver_wavelength_nm)

    @property
    def even_orders(self):
        if not self.include_even:
            return ()
        return tuple(range(min(self.orders) - 1, max(self.orders), 2))

    @property
    def all_orders(self):
        return tuple(sorted(set(self.orders) | set(self.even_orders)))

    def amplitude(self, n):
        return float(self.amplitudes.get(n, 1.0))

    def optical_phase(self, n):
        return float(self.optical_phases.get(n, 0.0))


@dataclass(frozen=True)
class DelayGrid:
    """Uniform XUV-IR delay grid in IR optical cycles."""

    cycles: tuple

    @classmethod
    def regular(cls, start, stop, n):
        if n < 2:
            raise ValueError("delay grid needs at least 2 samples")
        return cls(tuple(np.linspace(start, stop, n, endpoint=False)))

    @property
    def values(self):
        return np.asarray(self.cycles, dtype=float)

    def taus_fs(self, photon_ev):
        return self.values * optical_period_fs(photon_ev)

    def samples_per_period(self, harmonic=1):
        """Samples per oscillation period of `harmonic` x omega_ir."""
        d = np.diff(self.values)
        if d.size == 0:
            return 0.0
        return 1.0 / (np.max(d) * harmonic)


@dataclass(frozen=True)
class Band:
    """One photoelectron band and its contributing pathways.

    Each path is a tuple: ('xuv', n) for one-photon ionization by order
    n, ('xuv+ir', n) for order n plus IR absorption, ('xuv-ir', n) for
    order n minus IR (emission).
    """

    label: str
    energy_ev: float
    kind: str  # 'direct' or 'sideband'
    paths: tuple


def band_energies(comb, ip_ev, ir_photon_ev):
    """Photoelectron bands of a RABBIT scheme.

    Direct bands sit at n * E_photon - IP for each comb order above
    threshold. Sideband slots sit halfway between adjacent direct bands
    (and one slot below the lowest direct band, fed by emission from
    that band; its absorption partner may start below threshold). Each
    sideband lists its two 2-photon paths; when the comb includes even
    harmonics the coincident 1-photon path is added.

    Raises
    ------
    ValueError
        If no comb order reaches above the ionization potential.
    """
    e_ph = comb.photon_energy_ev
    odd = [n for n in comb.orders if n * e_ph > ip_ev]
    if not odd:
        raise ValueError(
            f"empty spectrum: no harmonic order exceeds IP={ip_ev} eV "
            f"(photon {e_ph} eV)"
        )
    evens = set(comb.even_orders)
    bands = []
    for n in odd:
        bands.append(
            Band(f"DB_H{n}", n * e_ph - ip_ev, "direct", (("xuv", n),))
        )
    sb_slots = range(min(odd) - 1, max(odd), 2)
    for idx, n in enumerate(sb_slots, start=1):
        energy = n * e_ph - ip_ev
        if energy <= 0:
            continue
        paths = [("xuv+ir", n - 1), ("xuv-ir", n + 1)]
        if n in evens:
            paths.append(("xuv", n))
        bands.append(Band(f"SB{idx}", energy, "sideband", tuple(paths)))
    bands.sort(key=lambda b: b.energy_ev)
    return bands


@dataclass(frozen=True)
class FieldSpec:
    """Complete field + target energetics for one scheme.

    Bundles the harmonic comb, the ionization potential, the IR photon
    energy and both polarization states; everything downstream reads
    energetics from here.
    """

    comb: HarmonicComb
    ip_ev: float
    ir_photon_ev: float
    pol_xuv: PolarizationState
    pol_ir: PolarizationState

    def band_energy(self, order):
        return order * self.comb.photon_energy_ev - self.ip_ev

    @property
    def ir_period_fs(self):
        return optical_period_fs(self.ir_photon_ev)

    @property
    def omega_ir(self):
        """IR angular frequency in rad/fs."""
        return 2.0 * math.pi / self.ir_period_fs

    def bands(self):
        return band_energies(self.comb, self.ip_ev, self.ir_photon_ev)
