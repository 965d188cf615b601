from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from deformation import (
    DeformedModel,
    build_nc_torus,
    deform,
    exact_phase,
    turn,
    twisted_relation_residual,
)
from errors import DimensionError, PreconditionError
from factor_check import run_full_check
from models import AlgebraSample, build_torus, build_warped_torus
from profiles import Profile
from sectors import Character, compose, restrict_to_sector


def skew(value):
    return [[0, value], [-value, 0]]


class TestPhases:
    def test_rational_floats_become_fractions(self):
        assert exact_phase(0.5) == Fraction(1, 2)
        assert exact_phase(1 / 3) == Fraction(1, 3)
        assert exact_phase("2/7") == Fraction(2, 7)

    def test_irrational_stays_float(self):
        value = (np.sqrt(5) - 1) / 2
        assert isinstance(exact_phase(value), float)

    @given(st.fractions(min_value=-5, max_value=5, max_denominator=50))
    def test_turn_is_periodic(self, x):
        assert turn(x) == pytest.approx(turn(x + 1))
        assert abs(turn(x)) == pytest.approx(1.0)


class TestNCTorus:
    @pytest.mark.parametrize("theta", [Fraction(0), Fraction(1, 3), Fraction(1, 2), "2/5"])
    def test_relations_hold_exactly(self, theta):
        nc = build_nc_torus(2, skew(Fraction(theta)), 3)
        assert nc.relation_holds_exactly()
        assert nc.relation_residual() < 1e-12
        assert nc.unitarity_defect() < 1e-14

    def test_commutation_phase_for_one_third(self):
        nc = build_nc_torus(2, skew(Fraction(1, 3)), 2)
        u1, u2 = nc.unitaries
        left, right = compose(u1, u2), compose(u2, u1)
        phase = np.exp(2j * np.pi / 3)
        for key, block in left.blocks.items():
            np.testing.assert_allclose(block.entries, phase * right.blocks[key].entries, atol=1e-12)

    def test_irrational_relation_holds_numerically(self):
        nc = build_nc_torus(2, skew((np.sqrt(5) - 1) / 2), 2)
        assert nc.relation_holds_exactly()

    def test_three_torus(self):
        theta = [
            [0, Fraction(1, 4), Fraction(1, 3)],
            [Fraction(-1, 4), 0, Fraction(1, 5)],
            [Fraction(-1, 3), Fraction(-1, 5), 0],
        ]
        assert build_nc_torus(3, theta, 2).relation_holds_exactly()

    def test_skew_symmetry_required(self):
        with pytest.raises(PreconditionError, match="skew-symmetry violated"):
            build_nc_torus(2, [[0, 0.25], [0.25, 0]], 2)

    def test_shape_checked(self):
        with pytest.raises(DimensionError):
            build_nc_torus(2, [[0.0]], 2)


class TestDeformedModel:
    @pytest.fixture
    def model(self):
        return build_warped_torus(Profile.named("sin-bump"), 16, 3, fibre_rank=2)

    def test_phases_are_unimodular(self, model):
        deformed = deform(model, skew(Fraction(1, 3)))
        assert deformed.u(Character.zero(2)) == pytest.approx(1.0)
        np.testing.assert_allclose(np.abs(list(deformed.phases.values())), 1.0)

    def test_dirac_is_unchanged_on_each_sector(self, model):
        deformed = deform(model, skew(Fraction(1, 3)))
        for chi in (Character.of(1, -2), Character.of(3, 3)):
            np.testing.assert_allclose(
                restrict_to_sector(deformed.dirac, chi).entries,
                restrict_to_sector(model.dirac, chi).entries,
                atol=1e-12,
            )

    def test_represented_algebra_is_twisted(self, model):
        deformed = deform(model, skew(Fraction(1, 3)))
        a = AlgebraSample(Character.of(1, 0), 0.3, 0.1)
        b = AlgebraSample(Character.of(0, 1), 0.35, 0.1)
        assert twisted_relation_residual(deformed, a, b) < 1e-12
        undeformed = deform(model, skew(Fraction(0)))
        left = compose(undeformed.represent(a), undeformed.represent(b))
        right = compose(deformed.represent(a), deformed.represent(b))
        assert any(
            not np.allclose(left.blocks[key].entries, right.blocks[key].entries) for key in left.blocks
        )

    def test_refine_keeps_theta(self, model):
        deformed = deform(model, skew(Fraction(1, 2)))
        refined = deformed.refine()
        assert isinstance(refined, DeformedModel)
        assert refined.theta == deformed.theta
        assert refined.N == 32

    def test_metadata_records_theta(self, model):
        assert deform(model, skew(Fraction(1, 3))).metadata()["theta"] == [["0", "1/3"], ["-1/3", "0"]]

    def test_rank_mismatch(self):
        with pytest.raises(DimensionError):
            deform(build_torus(2, 2), [[0.0]])


@pytest.mark.parametrize("theta", [Fraction(0), Fraction(1, 3), Fraction(1, 2)])
def test_full_check_is_deformation_invariant(theta):
    model = build_warped_torus(Profile.named("sin-bump"), 16, 3, fibre_rank=2)
    zeta = Character.of(1, 0)
    plain = run_full_check(model, zeta)
    twisted = run_full_check(deform(model, skew(theta)), zeta)
    for before, after in zip(plain.results, twisted.results, strict=True):
        assert before.verdict == after.verdict
        for key, value in before.witness.items():
            if isinstance(value, float):
                assert after.witness[key] == pytest.approx(value, abs=1e-10)
        if before.table is not None:
            numeric = before.table.select_dtypes("number").columns
            np.testing.assert_allclose(after.table[numeric], before.table[numeric], atol=1e-10)
    for key in ("dirac_self_adjoint_defect", "orbit_connection_spread"):
        assert twisted.metadata[key] == pytest.approx(plain.metadata[key], abs=1e-10)
    np.testing.assert_allclose(twisted.positivity.witness["infima"], plain.positivity.witness["infima"], atol=1e-10)
