import math

import numpy as np
import pydantic
import pytest
from hypothesis import given
from hypothesis import strategies as st

from app.services.errors import NumericalDomainError
from app.vortex import observables
from app.vortex.absorption import TransitionSpec, cross_section
from app.vortex.beam import BeamSpec, helicity_pair
from app.vortex.observables import (
    ObservableKind,
    PitchAngleProfile,
    ProfilePoint,
    RadialProfile,
    circular_dichroism,
    rate_asymmetry,
    scan_pitch_angle,
    scan_profile,
    sigma_ratio,
)
from app.vortex.paraxial import paraxial_a_lambda, paraxial_cd


class TestExactZeros:
    @pytest.mark.parametrize("theta_k", [0.05, 0.1, 0.5, 1.0])
    @pytest.mark.parametrize("mbar", range(-4, 5))
    def test_dipole_dichroism_vanishes(self, e1, b_grid, theta_k, mbar):
        assert np.max(np.abs(circular_dichroism(mbar, e1, theta_k, b_grid))) < 1e-12

    @pytest.mark.parametrize("theta_k", [0.05, 0.1, 0.5])
    @pytest.mark.parametrize("l_f", [1, 2, 3])
    def test_zero_charge_dichroism_vanishes(self, b_grid, theta_k, l_f):
        assert np.max(np.abs(circular_dichroism(0, TransitionSpec(l_f=l_f), theta_k, b_grid))) < 1e-12


class TestVortexCenter:
    def test_quadrupole_rate_asymmetry(self, e2):
        """-20% asymmetry at the center for mbar=1 in the small-angle regime."""
        assert rate_asymmetry(1, e2, 0.01, 0.0) == pytest.approx(-0.2, abs=2e-3)

    def test_dichroism_is_maximal_at_the_center(self, e2):
        assert circular_dichroism(1, e2, 0.1, 0.0) == pytest.approx(1.0, abs=1e-6)

    def test_center_uses_the_series_limit(self, e2):
        # both products vanish at b = 0 for mbar = 3, l_f = 2
        center = circular_dichroism(3, e2, 0.1, 0.0)
        assert math.isfinite(center)
        assert center == pytest.approx(circular_dichroism(3, e2, 0.1, 1e-5), abs=1e-6)

    def test_dichroism_dies_off_beyond_a_wavelength(self, e2):
        tail = circular_dichroism(1, e2, 0.1, np.linspace(1.5, 2.0, 101))
        assert np.max(np.abs(tail)) < 0.05


class TestSymmetries:
    @given(mbar=st.integers(min_value=1, max_value=4), l_f=st.integers(min_value=1, max_value=3),
           theta_k=st.floats(min_value=0.01, max_value=1.0))
    def test_mirror_antisymmetry(self, mbar, l_f, theta_k):
        tr = TransitionSpec(l_f=l_f)
        b = np.linspace(0.0, 2.0, 51)
        np.testing.assert_allclose(
            circular_dichroism(mbar, tr, theta_k, b), -np.asarray(circular_dichroism(-mbar, tr, theta_k, b)),
            atol=1e-12, rtol=0,
        )
        np.testing.assert_allclose(
            rate_asymmetry(mbar, tr, theta_k, b), -np.asarray(rate_asymmetry(-mbar, tr, theta_k, b)),
            atol=1e-12, rtol=0,
        )

    @given(mbar=st.integers(min_value=-4, max_value=4), l_f=st.integers(min_value=1, max_value=4),
           theta_k=st.floats(min_value=0.01, max_value=1.5), b=st.floats(min_value=0.0, max_value=5.0))
    def test_bounded(self, mbar, l_f, theta_k, b):
        tr = TransitionSpec(l_f=l_f)
        assert abs(circular_dichroism(mbar, tr, theta_k, b)) <= 1.0 + 1e-12
        assert abs(rate_asymmetry(mbar, tr, theta_k, b)) <= 1.0 + 1e-12

    def test_dichroism_equals_the_cross_section_ratio(self, e2):
        plus, minus = helicity_pair(2, 0.2)
        b = np.linspace(0.05, 1.5, 30)
        sigma_plus = cross_section(plus, e2, b)
        sigma_minus = cross_section(minus, e2, b)
        np.testing.assert_allclose(
            circular_dichroism(2, e2, 0.2, b), (sigma_plus - sigma_minus) / (sigma_plus + sigma_minus), atol=1e-12
        )


@pytest.mark.slow
class TestPitchAnglePlateau:
    @pytest.mark.parametrize("l_f", [2, 3])
    @pytest.mark.parametrize("mbar", [1, 2, 3])
    def test_flat_at_moderately_small_angles(self, mbar, l_f):
        b = 0.25
        reference = paraxial_cd(mbar, l_f, 2 * math.pi * b)
        for theta_k in np.linspace(0.01, 0.25, 13):
            assert circular_dichroism(mbar, TransitionSpec(l_f=l_f), float(theta_k), b) == pytest.approx(
                reference, abs=0.02
            )


class TestScanPitchAngle:
    def test_profile_follows_the_grid(self, e2):
        theta_grid = np.linspace(0.01, 0.25, 7)
        profile = scan_pitch_angle("cd", 1, e2, 0.25, theta_grid, workers=3)
        assert isinstance(profile, PitchAngleProfile)
        assert profile.observable_kind == ObservableKind.CD
        assert (profile.mbar, profile.l_f, profile.b) == (1, 2, 0.25)
        np.testing.assert_array_equal(profile.theta_k, theta_grid)
        for point in profile.points:
            assert point.value == circular_dichroism(1, e2, point.theta_k, 0.25)

    def test_paraxial_reference(self, e3):
        profile = scan_pitch_angle("a_lambda", 2, e3, 0.25, [0.005, 0.01])
        assert profile.paraxial_value == pytest.approx(float(paraxial_a_lambda(2, 3, math.pi / 2)), rel=1e-15)
        assert list(profile.values) == pytest.approx([profile.paraxial_value] * 2, abs=1e-3)

    def test_paraxial_reference_scales_with_the_wavelength(self, e2):
        profile = scan_pitch_angle("cd", 1, e2, 0.5, [0.1], wavelength=2.0)
        assert profile.paraxial_value == pytest.approx(float(paraxial_cd(1, 2, math.pi / 2)), rel=1e-15)

    def test_no_tabulated_entry(self, e2):
        profile = scan_pitch_angle("cd", 6, e2, 0.25, [0.1, 0.2])
        assert profile.paraxial_value is None
        assert all(p.value is not None for p in profile.points)

    @pytest.mark.parametrize("kind", ["flux", "rate", "sigma_ratio"])
    def test_only_asymmetries(self, e2, kind):
        with pytest.raises(NumericalDomainError):
            scan_pitch_angle(kind, 1, e2, 0.25, [0.1, 0.2])

    @pytest.mark.parametrize("grid", [[], [0.2, 0.1], [0.0, 0.1], [0.1, 1.6], [[0.1, 0.2]]])
    def test_invalid_grids(self, e2, grid):
        with pytest.raises(NumericalDomainError):
            scan_pitch_angle("cd", 1, e2, 0.25, grid)

    @pytest.mark.parametrize("b", [-0.1, math.inf])
    def test_invalid_impact_parameter(self, e2, b):
        with pytest.raises(NumericalDomainError):
            scan_pitch_angle("cd", 1, e2, b, [0.1, 0.2])


class TestSigmaRatio:
    def test_dipole_ratio_is_uniform(self, e1, b_grid):
        for beam in helicity_pair(1, 0.3):
            np.testing.assert_allclose(sigma_ratio(beam, e1, b_grid), 1.0 / math.cos(0.3), rtol=1e-12)

    def test_total_absorption_at_the_center(self, e2):
        plus, _ = helicity_pair(1, 0.1)
        values = sigma_ratio(plus, e2, np.array([0.0, 0.1]))
        assert values[0] == math.inf
        assert math.isfinite(values[1])

    def test_scalar_input(self, e2):
        _, minus = helicity_pair(1, 0.1)
        assert isinstance(sigma_ratio(minus, e2, 0.3), float)


class TestScanProfile:
    def test_profile_follows_the_grid(self, e2, b_grid):
        profile = scan_profile("cd", 1, e2, 0.1, b_grid, workers=3)
        assert profile.observable_kind == ObservableKind.CD
        assert profile.lambda_hel is None
        np.testing.assert_array_equal(profile.b, b_grid)
        np.testing.assert_array_equal(profile.values, circular_dichroism(1, e2, 0.1, b_grid))

    def test_worker_count_does_not_change_the_result(self, e3, b_grid):
        serial = scan_profile(ObservableKind.A_LAMBDA, 2, e3, 0.2, b_grid, workers=1)
        threaded = scan_profile(ObservableKind.A_LAMBDA, 2, e3, 0.2, b_grid, workers=8)
        assert serial == threaded

    def test_grid_is_split_in_contiguous_batches(self, e2, mocker):
        batches = mocker.spy(observables, "generate_batches")
        grid = np.linspace(0.0, 1.0, 10)

        profile = scan_profile("cd", 1, e2, 0.1, grid, workers=4)

        batches.assert_called_once()
        assert batches.call_args.args[1] == 3
        np.testing.assert_array_equal(profile.b, grid)

    def test_infinite_ratio_is_undefined(self, e2, b_grid):
        profile = scan_profile("sigma_ratio", 1, e2, 0.1, b_grid, lambda_hel=1)
        assert profile.points[0].value is None
        assert all(p.value is not None for p in profile.points[1:])
        assert math.isnan(profile.values[0])

    def test_flux_needs_no_transition(self, b_grid):
        profile = scan_profile("flux", 2, None, 0.1, b_grid, lambda_hel=-1)
        assert profile.l_f is None
        assert profile.lambda_hel == -1
        assert all(p.value >= 0 for p in profile.points)

    def test_rate_needs_a_transition(self, b_grid):
        with pytest.raises(NumericalDomainError):
            scan_profile("rate", 1, None, 0.1, b_grid)

    @pytest.mark.parametrize("grid", [[], [0.0, 0.5, 0.5], [1.0, 0.5], [[0.1, 0.2]]])
    def test_invalid_grids(self, e2, grid):
        with pytest.raises(NumericalDomainError):
            scan_profile("cd", 1, e2, 0.1, grid)

    def test_negative_impact_parameter(self, e2):
        with pytest.raises(NumericalDomainError):
            scan_profile("cd", 1, e2, 0.1, [-0.1, 0.2])


class TestRadialProfile:
    def test_rejects_unordered_points(self):
        with pytest.raises(pydantic.ValidationError):
            RadialProfile(
                observable_kind="flux", mbar=1, l_f=None, theta_k=0.1,
                points=[ProfilePoint(b=0.2, value=1.0), ProfilePoint(b=0.1, value=1.0)],
            )

    def test_rejects_out_of_range_asymmetry(self):
        with pytest.raises(pydantic.ValidationError):
            RadialProfile(
                observable_kind="cd", mbar=1, l_f=2, theta_k=0.1, points=[ProfilePoint(b=0.0, value=1.5)]
            )

    def test_json_round_trip(self, e2):
        profile = scan_profile("sigma_ratio", 1, e2, 0.1, np.linspace(0.0, 1.0, 17), lambda_hel=1)
        assert RadialProfile.parse_raw(profile.json()) == profile
