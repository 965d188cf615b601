import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from errors import PreconditionError, WindowError
from graded_core import GradedMatrix, Parity
from sectors import (
    Character,
    SectorOperator,
    SectorSpace,
    SectorVector,
    TruncationWindow,
    adjoint,
    compose,
    graded_commutator_sector,
    norm_is_exact,
    operator_norm,
    partition_of_identity,
    per_sector_norms,
    projection_operator,
    restrict_to_sector,
    sector_projection,
)

TWO_PI = 2 * np.pi


def scalar_space(K: int, n: int = 1) -> SectorSpace:
    return SectorSpace.uniform(TruncationWindow(K, n), 1)


def shift_operator(space: SectorSpace, shift: Character, value: complex = 1.0) -> SectorOperator:
    return SectorOperator.from_function(space, shift, lambda _: GradedMatrix(np.array([[value]], dtype=complex), 1, 0))


def generator_operator(space: SectorSpace, j: int = 1) -> SectorOperator:
    """A_j = sum of 2 pi k_j P_k."""
    zero = Character.zero(space.window.n)
    return SectorOperator.from_function(
        space,
        zero,
        lambda k: GradedMatrix(np.array([[TWO_PI * k.k[j - 1]]], dtype=complex), 1, 0),
    )


def random_operator(rng: np.random.Generator, space: SectorSpace, shifts: list[Character]) -> SectorOperator:
    total = None
    for shift in shifts:
        op = SectorOperator.from_function(
            space,
            shift,
            lambda _: GradedMatrix(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)), 2, 0),
        )
        total = op if total is None else total + op
    assert total is not None
    return total


class TestCharacterAndWindow:
    def test_group_operations(self):
        assert Character.of(1, -2) + Character.of(0, 3) == Character.of(1, 1)
        assert -Character.of(2) == Character.of(-2)
        assert Character.unit(3, 2) == Character.of(0, 1, 0)

    def test_window_is_symmetric_and_contains_zero(self):
        window = TruncationWindow(2, 2)
        characters = window.characters()
        assert len(characters) == 25
        assert Character.zero(2) in characters
        assert all(-chi in characters for chi in characters)

    def test_require_outside(self):
        with pytest.raises(WindowError):
            TruncationWindow(1).require(Character.of(2))


class TestSectorProjection:
    def test_projection_of_identity(self):
        space = scalar_space(2)
        projected = sector_projection(SectorOperator.identity(space), Character.of(0))
        assert list(projected.blocks) == [(Character.of(0), Character.of(0))]
        assert np.allclose(projected.blocks[(Character.of(0), Character.of(0))].entries, 1)

    def test_orthogonal_ranges(self):
        space = scalar_space(2)
        product = compose(projection_operator(space, Character.of(1)), projection_operator(space, Character.of(-1)))
        assert not product.blocks

    def test_projections_sum_to_vector(self):
        space = SectorSpace.uniform(TruncationWindow(2), 2)
        rng = np.random.default_rng(0)
        vector = SectorVector(space, {chi: rng.normal(size=2) + 0j for chi in space.characters()})
        total = sum(sector_projection(vector, chi).to_dense() for chi in space.characters())
        assert np.array_equal(total, vector.to_dense())

    def test_idempotent(self):
        space = scalar_space(2)
        op = shift_operator(space, Character.of(1))
        once = sector_projection(op, Character.of(0))
        twice = sector_projection(once, Character.of(0))
        assert set(once.blocks) == set(twice.blocks)

    def test_partition_of_identity_exact(self):
        assert partition_of_identity(SectorSpace.uniform(TruncationWindow(2, 2), 1, 1))

    def test_outside_window(self):
        with pytest.raises(WindowError):
            sector_projection(SectorOperator.identity(scalar_space(1)), Character.of(3))


class TestCompose:
    def test_identity_is_neutral(self):
        space = scalar_space(3)
        op = shift_operator(space, Character.of(1), 2.0)
        result = compose(op, SectorOperator.identity(space))
        assert np.allclose(result.to_dense(), op.to_dense())

    def test_shift_round_trip_loses_edge(self):
        space = scalar_space(3)
        result = compose(shift_operator(space, Character.of(1)), shift_operator(space, Character.of(-1)))
        diagonal = np.diag(result.to_dense()).real
        assert np.allclose(diagonal[1:], 1)
        assert diagonal[0] == 0

    def test_truncation_loss_counted(self):
        space = scalar_space(2)
        result = compose(shift_operator(space, Character.of(1)), shift_operator(space, Character.of(1)))
        assert result.truncation_loss == 1

    def test_character_multiplications_combine(self):
        space = scalar_space(2)
        a = shift_operator(space, Character.of(1), 2.0)
        b = shift_operator(space, Character.of(-2), 3.0)
        result = compose(a, b)
        assert result.shifts == [Character.of(-1)]
        assert np.allclose(result.to_dense(), a.to_dense() @ b.to_dense())

    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=2**32 - 1))
    def test_associative_inside_window(self, seed):
        rng = np.random.default_rng(seed)
        space = SectorSpace.uniform(TruncationWindow(2), 2)
        zero = [Character.of(0)]
        a, b, c = (random_operator(rng, space, zero) for _ in range(3))
        left = compose(compose(a, b), c)
        right = compose(a, compose(b, c))
        assert left.truncation_loss == right.truncation_loss == 0
        assert np.allclose(left.to_dense(), right.to_dense())


class TestGradedCommutatorSector:
    def test_shift_zero_operator_commutes_with_projection(self):
        space = SectorSpace.uniform(TruncationWindow(2), 1, 1)
        d = SectorOperator.from_function(
            space,
            Character.of(0),
            lambda k: GradedMatrix(np.array([[0, k.k[0]], [k.k[0], 0]], dtype=complex), 1, 1, Parity.ODD),
            Parity.ODD,
        )
        result = graded_commutator_sector(d, projection_operator(space, Character.of(1)))
        assert np.allclose(result.to_dense(), 0)

    def test_generator_against_character_multiplication(self):
        space = scalar_space(3)
        a = shift_operator(space, Character.of(2))
        result = graded_commutator_sector(generator_operator(space), a)
        interior = [key for key in result.blocks if abs(key[1].k[0]) <= 1]
        for key in interior:
            assert result.blocks[key].entries[0, 0] == pytest.approx(TWO_PI * 2)


class TestNorms:
    def test_identity(self):
        assert operator_norm(SectorOperator.identity(scalar_space(2))) == pytest.approx(1)

    def test_generator_norm(self):
        assert operator_norm(generator_operator(scalar_space(4))) == pytest.approx(TWO_PI * 4)

    def test_per_sector_norms(self):
        norms = per_sector_norms(generator_operator(scalar_space(2)))
        assert norms[Character.of(-2)] == pytest.approx(TWO_PI * 2)
        assert norms[Character.of(0)] == 0

    def test_multi_shift_bound_flagged(self):
        space = scalar_space(2)
        op = shift_operator(space, Character.of(1)) + shift_operator(space, Character.of(-1))
        assert not norm_is_exact(op)
        assert operator_norm(op) == pytest.approx(2)
        assert np.linalg.norm(op.to_dense(), ord=2) <= operator_norm(op) + 1e-12


class TestAdjointAndRestriction:
    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=2**32 - 1))
    def test_adjoint_involution(self, seed):
        rng = np.random.default_rng(seed)
        space = SectorSpace.uniform(TruncationWindow(2), 2)
        op = random_operator(rng, space, [Character.of(0), Character.of(1)])
        assert np.allclose(adjoint(op).to_dense(), op.to_dense().conj().T)
        assert np.allclose(adjoint(adjoint(op)).to_dense(), op.to_dense())
        assert operator_norm(adjoint(op)) == pytest.approx(operator_norm(op))

    def test_shift_structure_is_respected(self):
        space = scalar_space(2)
        op = shift_operator(space, Character.of(1))
        ones = SectorVector(space, {chi: np.ones(1, dtype=complex) for chi in space.characters()})
        vector = sector_projection(ones, Character.of(0))
        image = op.apply(vector)
        nonzero = [chi for chi, v in image.components.items() if np.any(v)]
        assert nonzero == [Character.of(1)]

    def test_restrict(self):
        op = generator_operator(scalar_space(2))
        assert restrict_to_sector(op, Character.of(2)).entries[0, 0] == pytest.approx(TWO_PI * 2)

    def test_restrict_requires_shift_zero(self):
        space = scalar_space(2)
        with pytest.raises(PreconditionError):
            restrict_to_sector(shift_operator(space, Character.of(1)), Character.of(0))

    def test_restrict_outside_window(self):
        with pytest.raises(WindowError):
            restrict_to_sector(generator_operator(scalar_space(1)), Character.of(2))
