"""Field model: polarization decomposition, IR phasor, band energetics."""

import math

import numpy as np
import pytest

from rabbitsim.fields import (
    Band,
    DelayGrid,
    FieldSpec,
    HarmonicComb,
    PolarizationState,
    band_energies,
    circular_components,
    ir_phasor,
)


class TestPolarization:
    def test_linear_in_plane(self):
        p = circular_components(0.0)
        assert abs(p.e_plus) == pytest.approx(1 / math.sqrt(2), abs=1e-14)
        assert abs(p.e_minus) == pytest.approx(1 / math.sqrt(2), abs=1e-14)
        assert p.e_zero == 0

    def test_pure_circular(self):
        p = circular_components(math.pi / 2)
        assert abs(p.e_plus) == pytest.approx(1.0, abs=1e-14)
        assert abs(p.e_minus) == pytest.approx(0.0, abs=1e-14)

    def test_intermediate_ellipticity(self):
        p = circular_components(0.436)
        assert abs(p.e_plus) > abs(p.e_minus) > 0.0
        # exact ratio from the Cartesian -> circular transform
        want_plus = math.sqrt((1 + math.sin(0.436)) / 2)
        want_minus = math.sqrt((1 - math.sin(0.436)) / 2)
        assert abs(p.e_plus) == pytest.approx(want_plus, abs=1e-14)
        assert abs(p.e_minus) == pytest.approx(want_minus, abs=1e-14)

    def test_unit_intensity_everywhere(self):
        for phi in np.linspace(-math.pi, math.pi, 41):
            p = circular_components(phi)
            total = abs(p.e_minus) ** 2 + abs(p.e_zero) ** 2 + abs(p.e_plus) ** 2
            assert total == pytest.approx(1.0, abs=1e-13)

    def test_handedness_mirror(self):
        for phi in np.linspace(0.1, 1.5, 8):
            p = circular_components(phi)
            q = circular_components(-phi)
            assert abs(p.e_plus) == pytest.approx(abs(q.e_minus), abs=1e-13)
            assert abs(p.e_minus) == pytest.approx(abs(q.e_plus), abs=1e-13)

    def test_linear_z(self):
        p = PolarizationState.linear_z()
        assert p.e_zero == 1.0
        assert p.components == [(0, 1.0 + 0j)]

    def test_ellipticity_values(self):
        assert circular_components(0.0).ellipticity == pytest.approx(0.0)
        assert circular_components(math.pi / 2).ellipticity == pytest.approx(1.0)

    def test_bad_normalization_rejected(self):
        with pytest.raises(ValueError):
            PolarizationState(0j, 2.0 + 0j, 0j)


class TestIrPhasor:
    def test_zero_delay(self):
        assert ir_phasor(0.0, 2.35) == pytest.approx(1.0 + 0j)

    def test_half_period(self):
        omega = 2.35
        assert ir_phasor(math.pi / omega, omega) == pytest.approx(-1.0 + 0j, abs=1e-12)

    def test_cross_term_beats_at_2omega(self):
        omega = 2.35
        taus = np.linspace(0.0, 4 * 2 * math.pi / omega, 256, endpoint=False)
        beat = np.array(
            [ir_phasor(t, omega) * np.conj(np.conj(ir_phasor(t, omega))) for t in taus]
        )
        # absorption x conj(emission) phasor = exp(-2 i omega tau)
        spectrum = np.abs(np.fft.fft(beat))
        assert np.argmax(spectrum) == len(taus) - 8  # -2 omega line, 4 cycles -> bin 8


class TestComb:
    def test_orders_must_increase(self):
        with pytest.raises(ValueError):
            HarmonicComb(orders=(17, 15))

    def test_even_orders(self):
        comb = HarmonicComb(orders=(15, 17, 19, 21), include_even=True)
        assert comb.even_orders == (14, 16, 18, 20)

    def test_photon_override(self):
        comb = HarmonicComb(photon_ev=1.55)
        assert comb.photon_energy_ev == 1.55
        comb800 = HarmonicComb()
        assert comb800.photon_energy_ev == pytest.approx(1.5498, abs=1e-3)


class TestBandEnergies:
    def setup_method(self):
        self.comb = HarmonicComb(orders=(15, 17, 19, 21), photon_ev=1.55)

    def test_neon_direct_band(self):
        bands = band_energies(self.comb, 21.56, 1.55)
        db15 = next(b for b in bands if b.label == "DB_H15")
        assert db15.energy_ev == pytest.approx(15 * 1.55 - 21.56, abs=1e-12)
        assert db15.energy_ev == pytest.approx(1.69, abs=1e-12)

    def test_sideband_midpoint(self):
        bands = band_energies(self.comb, 21.56, 1.55)
        sb2 = next(b for b in bands if b.label == "SB2")
        assert sb2.energy_ev == pytest.approx(1.69 + 1.55, abs=1e-12)
        db15 = next(b for b in bands if b.label == "DB_H15")
        db17 = next(b for b in bands if b.label == "DB_H17")
        assert sb2.energy_ev == pytest.approx(
            0.5 * (db15.energy_ev + db17.energy_ev), abs=1e-12
        )

    def test_four_sidebands_with_low_slot(self):
        bands = band_energies(self.comb, 21.56, 1.55)
        sbs = [b for b in bands if b.kind == "sideband"]
        assert [b.label for b in sbs] == ["SB1", "SB2", "SB3", "SB4"]
        assert sbs[0].energy_ev == pytest.approx(14 * 1.55 - 21.56, abs=1e-12)
        # no sideband above the highest direct band (no emission partner)
        assert max(b.energy_ev for b in sbs) < max(b.energy_ev for b in bands)

    def test_monotone_energies(self):
        bands = band_energies(self.comb, 21.56, 1.55)
        energies = [b.energy_ev for b in bands]
        assert energies == sorted(energies)

    def test_even_harmonic_coincides_with_sideband(self):
        comb = HarmonicComb(orders=(15, 17, 19, 21), photon_ev=1.55, include_even=True)
        bands = band_energies(comb, 21.56, 1.55)
        sb2 = next(b for b in bands if b.label == "SB2")
        assert ("xuv", 16) in sb2.paths
        assert sb2.energy_ev == pytest.approx(16 * 1.55 - 21.56, abs=1e-12)

    def test_all_below_threshold_raises(self):
        with pytest.raises(ValueError):
            band_energies(HarmonicComb(orders=(3, 5), photon_ev=1.55), 21.56, 1.55)

    def test_sideband_paths(self):
        bands = band_energies(self.comb, 21.56, 1.55)
        sb2 = next(b for b in bands if b.label == "SB2")
        assert sb2.paths == (("xuv+ir", 15), ("xuv-ir", 17))


class TestDelayGrid:
    def test_regular(self):
        grid = DelayGrid.regular(0.0, 4.0, 256)
        assert grid.values.size == 256
        assert grid.samples_per_period(1) == pytest.approx(64.0)
        assert grid.samples_per_period(2) == pytest.approx(32.0)

    def test_taus_fs(self):
        grid = DelayGrid.regular(0.0, 1.0, 4)
        taus = grid.taus_fs(1.55)
        assert taus[-1] == pytest.approx(0.75 * 4.135667696 / 1.55, rel=1e-12)

    def test_too_few_samples(self):
        with pytest.raises(ValueError):
            DelayGrid.regular(0.0, 1.0, 1)


class TestFieldSpec:
    def test_band_energy_and_period(self):
        spec = FieldSpec(
            comb=HarmonicComb(orders=(15, 17), photon_ev=1.55),
            ip_ev=21.56,
            ir_photon_ev=1.55,
            pol_xuv=PolarizationState.linear_z(),
            pol_ir=PolarizationState.linear_z(),
        )
        assert spec.band_energy(15) == pytest.approx(1.69, abs=1e-12)
        assert spec.ir_period_fs == pytest.approx(4.135667696 / 1.55, rel=1e-12)
        assert spec.omega_ir * spec.ir_period_fs == pytest.approx(2 * math.pi)
        assert len(spec.bands()) == 4  # 2 direct + 2 sidebands (one low slot)
