import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from profiles import Profile, gaussian_bump, sin_bump


def test_sin_bump_extremes():
    s = np.array([0.0, 0.25, 0.75])
    np.testing.assert_allclose(sin_bump(s), [2.0, 3.0, 1.0])


def test_gaussian_bump_wraps_around_the_circle():
    near_zero = gaussian_bump(np.array([0.02]), center=0.98, width=0.05)
    direct = gaussian_bump(np.array([0.5]), center=0.46, width=0.05)
    np.testing.assert_allclose(near_zero, direct)


def test_named_profile_keeps_parameters():
    profile = Profile.named("sin-bump", offset=3.0, amplitude=0.5)
    values = profile.sample(4)
    np.testing.assert_allclose(values, [3.0, 3.5, 3.0, 2.5], atol=1e-12)
    assert profile.describe() == {"name": "sin-bump", "amplitude": 0.5, "offset": 3.0}


def test_unknown_profile():
    with pytest.raises(ValueError, match="unknown profile"):
        Profile.named("triangle")


def test_sample_table_is_used_verbatim_on_matching_grid():
    profile = Profile.from_samples([1.0, 2.0, 3.0, 4.0])
    np.testing.assert_array_equal(profile.sample(4), [1.0, 2.0, 3.0, 4.0])
    assert profile.describe() == {"name": "samples", "sample_count": 4}


def test_sample_table_interpolates_periodically():
    profile = Profile.from_samples([1.0, 3.0])
    np.testing.assert_allclose(profile.sample(4), [1.0, 2.0, 3.0, 2.0])


@given(st.integers(min_value=1, max_value=64))
def test_constant_profile_on_any_grid(points):
    np.testing.assert_array_equal(Profile.named("constant").sample(points), np.ones(points))
