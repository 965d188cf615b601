"""Z2-graded linear algebra: Clifford algebras, spinor representations and graded tensor products."""

from __future__ import annotations

import dataclasses
import enum
import functools
import logging
from typing import TYPE_CHECKING

import numpy as np
from scipy import linalg, sparse
from scipy.sparse.csgraph import reverse_cuthill_mckee

import constants
from errors import DimensionError, PreconditionError, SpectralError

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence
    from typing import TypeAlias

    from numpy.typing import ArrayLike, NDArray

    Block: TypeAlias = NDArray[np.complex128] | sparse.csr_array

logger = logging.getLogger(__name__)

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)


class Parity(enum.IntEnum):
    """Z2 degree of a homogeneous element."""

    EVEN = 0
    ODD = 1

    def __add__(self, other: int) -> Parity:  # type: ignore[override]
        """Add degrees mod 2."""
        return Parity((int(self) + int(other)) % 2)

    __radd__ = __add__


def koszul_sign(a: Parity, b: Parity) -> int:
    """Return (-1)^(deg a * deg b)."""
    return -1 if a is Parity.ODD and b is Parity.ODD else 1


def _reorder_sign(left: int, right: int) -> int:
    """Sign picked up moving the generators of mask ``right`` left past those of mask ``left``."""
    swaps = 0
    for j in range(right.bit_length()):
        if right >> j & 1:
            swaps += (left >> (j + 1)).bit_count()
    return -1 if swaps % 2 else 1


@dataclasses.dataclass(frozen=True, eq=False)
class CliffordElement:
    """Element of the complex Clifford algebra on ``n`` self-adjoint unitary generators.

    Coefficients are stored densely over the 2^n monomial basis. The monomial
    e_{i1} e_{i2} ... e_{ik} with i1 < i2 < ... < ik sits at the bitmask with
    bits i1-1, ..., ik-1 set.

    Attributes
    ----------
        n (int): Number of generators.
        coeffs (NDArray): Complex coefficients of length 2^n indexed by bitmask.

    Methods
    -------
        generator: The generator e_j (1-based).
        scalar: A multiple of the unit.
        monomials: Non-zero (indices, coefficient) pairs in mask order.
        degree: Parity of the element, or None if it mixes degrees.

    Examples
    --------
        >>> e1 = CliffordElement.generator(2, 1)
        >>> e2 = CliffordElement.generator(2, 2)
        >>> (e2 * e1).isclose(-(e1 * e2))
        True

    """

    n: int
    coeffs: NDArray[np.complex128]

    def __post_init__(self) -> None:
        """Validate the coefficient array length."""
        if self.n < 0 or self.coeffs.shape != (1 << self.n,):
            msg = f"expected {1 << max(self.n, 0)} coefficients for n={self.n}, got shape {self.coeffs.shape}"
            raise DimensionError(msg)

    @classmethod
    def scalar(cls, n: int, value: complex = 1.0) -> CliffordElement:
        """Return ``value`` times the unit."""
        coeffs = np.zeros(1 << n, dtype=complex)
        coeffs[0] = value
        return cls(n, coeffs)

    @classmethod
    def basis(cls, n: int, indices: Iterable[int], value: complex = 1.0) -> CliffordElement:
        """Return ``value`` times the product of the listed generators, in the order given."""
        result = cls.scalar(n, value)
        for j in indices:
            result = clifford_mul(result, cls.generator(n, j))
        return result

    @classmethod
    def generator(cls, n: int, j: int) -> CliffordElement:
        """Return the generator e_j, 1 <= j <= n."""
        if not 1 <= j <= n:
            msg = f"generator index {j} outside 1..{n}"
            raise DimensionError(msg)
        coeffs = np.zeros(1 << n, dtype=complex)
        coeffs[1 << (j - 1)] = 1.0
        return cls(n, coeffs)

    def monomials(self, tol: float = 0.0) -> list[tuple[tuple[int, ...], complex]]:
        """Return the non-zero terms as (ordered generator indices, coefficient)."""
        terms = []
        for mask in np.flatnonzero(np.abs(self.coeffs) > tol):
            indices = tuple(j + 1 for j in range(self.n) if int(mask) >> j & 1)
            terms.append((indices, complex(self.coeffs[mask])))
        return terms

    @property
    def degree(self) -> Parity | None:
        """Parity of the element; None when it has both even and odd terms."""
        degrees = {Parity(len(indices) % 2) for indices, _ in self.monomials()}
        if len(degrees) > 1:
            return None
        return degrees.pop() if degrees else Parity.EVEN

    def __mul__(self, other: CliffordElement) -> CliffordElement:
        """Clifford product."""
        return clifford_mul(self, other)

    def __add__(self, other: CliffordElement) -> CliffordElement:
        """Sum."""
        _check_generator_count(self, other)
        return CliffordElement(self.n, self.coeffs + other.coeffs)

    def __sub__(self, other: CliffordElement) -> CliffordElement:
        """Difference."""
        _check_generator_count(self, other)
        return CliffordElement(self.n, self.coeffs - other.coeffs)

    def __neg__(self) -> CliffordElement:
        """Negation."""
        return CliffordElement(self.n, -self.coeffs)

    def scale(self, value: complex) -> CliffordElement:
        """Multiply by a scalar."""
        return CliffordElement(self.n, value * self.coeffs)

    def isclose(self, other: CliffordElement, tol: float = constants.ALGEBRA_TOL) -> bool:
        """Return True if both elements agree coefficientwise within ``tol``."""
        return self.n == other.n and bool(np.all(np.abs(self.coeffs - other.coeffs) <= tol))


def _check_generator_count(a: CliffordElement, b: CliffordElement) -> None:
    if a.n != b.n:
        msg = f"Clifford elements on {a.n} and {b.n} generators"
        raise DimensionError(msg)


def clifford_mul(a: CliffordElement, b: CliffordElement) -> CliffordElement:
    """Multiply two Clifford elements using e_j^2 = 1 and e_j e_k = -e_k e_j.

    Raises:
    ------
        DimensionError: If the elements live on different generator counts.
    """
    _check_generator_count(a, b)
    coeffs = np.zeros(1 << a.n, dtype=complex)
    for left in np.flatnonzero(a.coeffs):
        for right in np.flatnonzero(b.coeffs):
            sign = _reorder_sign(int(left), int(right))
            coeffs[int(left) ^ int(right)] += sign * a.coeffs[left] * b.coeffs[right]
    return CliffordElement(a.n, coeffs)


def grading_signs(even_dim: int, odd_dim: int) -> NDArray[np.float64]:
    """Diagonal of the grading operator: +1 on the even summand, -1 on the odd one."""
    return np.concatenate([np.ones(even_dim), -np.ones(odd_dim)])


def sparse_diagonal(values: ArrayLike) -> sparse.csr_array:
    """Diagonal matrix in CSR format."""
    return sparse.csr_array(sparse.diags(np.asarray(values), format="csr"))


def dense(matrix: NDArray[np.generic] | sparse.sparray) -> NDArray[np.generic]:
    """Dense view of a block; dense input is returned unchanged."""
    return matrix.toarray() if sparse.issparse(matrix) else matrix


def _aligned(a: Block, b: Block) -> tuple[Block, Block]:
    if sparse.issparse(a) and sparse.issparse(b):
        return a, b
    return dense(a), dense(b)


def _scale_columns(matrix: Block, values: NDArray[np.float64]) -> Block:
    if sparse.issparse(matrix):
        return sparse.csr_array(matrix @ sparse_diagonal(values))
    return matrix * values[np.newaxis, :]


def _has_stray_entries(data: Block, even_dim: int, parity: Parity) -> bool:
    if sparse.issparse(data):
        coo = data.tocoo()
        live = coo.data != 0
        crossing = (coo.row[live] < even_dim) != (coo.col[live] < even_dim)
        return bool(np.any(crossing if parity is Parity.EVEN else ~crossing))
    e = even_dim
    if parity is Parity.EVEN:
        return bool(np.any(data[:e, e:]) or np.any(data[e:, :e]))
    return bool(np.any(data[:e, :e]) or np.any(data[e:, e:]))


@dataclasses.dataclass(frozen=True, eq=False)
class GradedMatrix:
    """Complex matrix on a Z2-graded space, even summand first.

    An even homogeneous operator is block diagonal with respect to the grading and an odd one
    is block off-diagonal. ``parity=None`` marks an inhomogeneous operator; it is handled through
    its homogeneous parts. A space with ``odd_dim == 0`` is ungraded.

    ``data`` is a dense array or a CSR sparse array; grid operators are assembled sparse once
    their dimension reaches ``constants.SPARSE_MIN_DIM``. ``entries`` is always dense.
    """

    data: Block
    even_dim: int
    odd_dim: int
    parity: Parity | None = Parity.EVEN

    def __post_init__(self) -> None:
        """Check the shape and the declared parity."""
        size = self.even_dim + self.odd_dim
        if self.data.shape != (size, size):
            msg = f"entries of shape {self.data.shape} on a graded space of dimension {size}"
            raise DimensionError(msg)
        if self.parity is not None and _has_stray_entries(self.data, self.even_dim, self.parity):
            msg = f"matrix declared {self.parity.name.lower()} has entries in the wrong blocks"
            raise DimensionError(msg)

    @classmethod
    def from_array(
        cls,
        entries: ArrayLike,
        even_dim: int,
        odd_dim: int,
        parity: Parity | None = None,
    ) -> GradedMatrix:
        """Build a graded matrix, inferring the parity when none is given."""
        array = np.asarray(entries, dtype=complex)
        if parity is None:
            parity = _infer_parity(array, even_dim)
        return cls(array, even_dim, odd_dim, parity)

    @classmethod
    def identity(cls, even_dim: int, odd_dim: int = 0) -> GradedMatrix:
        """Identity operator."""
        size = even_dim + odd_dim
        if size >= constants.SPARSE_MIN_DIM:
            return cls(sparse_diagonal(np.ones(size, dtype=complex)), even_dim, odd_dim, Parity.EVEN)
        return cls(np.eye(size, dtype=complex), even_dim, odd_dim, Parity.EVEN)

    @classmethod
    def zeros(cls, even_dim: int, odd_dim: int = 0, parity: Parity = Parity.EVEN) -> GradedMatrix:
        """Zero operator of the given parity."""
        size = even_dim + odd_dim
        if size >= constants.SPARSE_MIN_DIM:
            return cls(sparse.csr_array((size, size), dtype=complex), even_dim, odd_dim, parity)
        return cls(np.zeros((size, size), dtype=complex), even_dim, odd_dim, parity)

    @classmethod
    def grading(cls, even_dim: int, odd_dim: int) -> GradedMatrix:
        """The grading operator itself."""
        signs = grading_signs(even_dim, odd_dim).astype(complex)
        data = sparse_diagonal(signs) if signs.size >= constants.SPARSE_MIN_DIM else np.diag(signs)
        return cls(data, even_dim, odd_dim, Parity.EVEN)

    @property
    def entries(self) -> NDArray[np.complex128]:
        """The matrix as a dense array."""
        return dense(self.data)

    @property
    def is_sparse(self) -> bool:
        """True when the matrix is stored sparse."""
        return sparse.issparse(self.data)

    @property
    def dim(self) -> int:
        """Total dimension."""
        return self.even_dim + self.odd_dim

    @property
    def signs(self) -> NDArray[np.float64]:
        """Diagonal of the grading."""
        return grading_signs(self.even_dim, self.odd_dim)

    def same_space(self, other: GradedMatrix) -> bool:
        """Return True if both operators act on the same graded space."""
        return (self.even_dim, self.odd_dim) == (other.even_dim, other.odd_dim)

    def _flipped(self) -> Block:
        """Grading-conjugated matrix, G A G."""
        signs = self.signs
        if self.is_sparse:
            grading = sparse_diagonal(signs)
            return sparse.csr_array(grading @ self.data @ grading)
        return signs[:, np.newaxis] * self.data * signs[np.newaxis, :]

    def even_part(self) -> GradedMatrix:
        """Block-diagonal part."""
        return GradedMatrix((self.data + self._flipped()) * 0.5, self.even_dim, self.odd_dim, Parity.EVEN)

    def odd_part(self) -> GradedMatrix:
        """Block-off-diagonal part."""
        return GradedMatrix((self.data - self._flipped()) * 0.5, self.even_dim, self.odd_dim, Parity.ODD)

    def homogeneous_parts(self) -> list[GradedMatrix]:
        """The operator as a list of homogeneous summands."""
        if self.parity is not None:
            return [self]
        return [self.even_part(), self.odd_part()]

    def adjoint(self) -> GradedMatrix:
        """Conjugate transpose; parity is preserved."""
        data = sparse.csr_array(self.data.conj().T) if self.is_sparse else self.data.conj().T
        return GradedMatrix(data, self.even_dim, self.odd_dim, self.parity)

    def scale(self, value: complex) -> GradedMatrix:
        """Multiply by a scalar."""
        return GradedMatrix(self.data * value, self.even_dim, self.odd_dim, self.parity)

    def scale_rows(self, values: ArrayLike) -> GradedMatrix:
        """Multiply row i by ``values[i]``; the values must be constant on each graded summand's rows."""
        values = np.asarray(values)
        if self.is_sparse:
            data = sparse.csr_array(sparse_diagonal(values) @ self.data)
        else:
            data = values[:, np.newaxis] * self.data
        return GradedMatrix(data, self.even_dim, self.odd_dim, self.parity)

    def apply(self, vectors: NDArray[np.complex128]) -> NDArray[np.complex128]:
        """Apply the operator to a vector or to the columns of a matrix."""
        return self.data @ vectors

    def diagonal(self) -> NDArray[np.complex128]:
        """Main diagonal."""
        return np.asarray(self.data.diagonal())

    def __matmul__(self, other: GradedMatrix) -> GradedMatrix:
        """Operator product."""
        _check_same_space(self, other)
        parity = None if self.parity is None or other.parity is None else self.parity + other.parity
        left, right = _aligned(self.data, other.data)
        return GradedMatrix(left @ right, self.even_dim, self.odd_dim, parity)

    def __add__(self, other: GradedMatrix) -> GradedMatrix:
        """Sum; mixing parities gives an inhomogeneous result."""
        _check_same_space(self, other)
        parity = self.parity if self.parity == other.parity else None
        left, right = _aligned(self.data, other.data)
        return GradedMatrix(left + right, self.even_dim, self.odd_dim, parity)

    def __sub__(self, other: GradedMatrix) -> GradedMatrix:
        """Difference."""
        return self + other.scale(-1)

    def __neg__(self) -> GradedMatrix:
        """Negation."""
        return self.scale(-1)

    def max_abs(self) -> float:
        """Largest entry modulus."""
        if self.is_sparse:
            return float(abs(self.data).max()) if self.data.nnz else 0.0
        return float(np.abs(self.data).max(initial=0.0))

    def norm(self) -> float:
        """Largest singular value."""
        return spectral_norm(self.data)

    def min_eigenvalue(self) -> float:
        """Smallest eigenvalue; the matrix must be self-adjoint."""
        return extreme_eigenvalue(self.data)

    def is_self_adjoint(self, rtol: float = constants.SELF_ADJOINT_RTOL) -> bool:
        """Return True if ||A - A*|| <= rtol * ||A||."""
        defect = (self - self.adjoint()).norm()
        return bool(defect <= rtol * max(self.norm(), constants.ALGEBRA_TOL))


def _lower_band(matrix: sparse.sparray) -> NDArray[np.generic] | None:
    """Lower band storage of ``matrix`` after a reverse Cuthill-McKee reordering; None when the band is wide."""
    size = matrix.shape[0]
    pattern = sparse.csr_matrix(abs(matrix))
    order = reverse_cuthill_mckee(sparse.csr_matrix(pattern + pattern.T), symmetric_mode=True)
    permutation = sparse.csr_array((np.ones(size), (np.arange(size), order)), shape=(size, size))
    permuted = sparse.coo_array(permutation @ matrix @ permutation.T)
    lower = permuted.row >= permuted.col
    offsets = (permuted.row - permuted.col)[lower]
    width = int(offsets.max(initial=0))
    if width + 1 > constants.BANDED_MAX_FRACTION * size:
        return None
    band = np.zeros((width + 1, size), dtype=permuted.dtype)
    np.add.at(band, (offsets, permuted.col[lower]), permuted.data[lower])
    return band


def extreme_eigenvalue(matrix: Block, *, largest: bool = False) -> float:
    """Smallest, or with ``largest`` the largest, eigenvalue of a self-adjoint matrix.

    Large sparse matrices are reordered to a narrow band and handed to ``scipy.linalg.eigvals_banded``,
    which only computes the requested eigenvalue. Dense, small or wide-band matrices go to ``eigvalsh``.

    Args:
    ----
        matrix (Block): Self-adjoint matrix; only its lower triangle is read.
        largest (bool): Return the largest eigenvalue instead of the smallest.

    Returns:
    -------
        float: The eigenvalue.

    Raises:
    ------
        DimensionError: If the matrix is empty.
    """
    size = matrix.shape[0]
    if size == 0:
        msg = "eigenvalue of an operator on a zero-dimensional space"
        raise DimensionError(msg)
    index = size - 1 if largest else 0
    band = _lower_band(matrix) if sparse.issparse(matrix) and size >= constants.BANDED_MIN_DIM else None
    if band is None:
        return float(np.linalg.eigvalsh(dense(matrix))[index])
    values = linalg.eigvals_banded(band, lower=True, select="i", select_range=(index, index))
    return float(values[0])


def spectral_norm(matrix: Block) -> float:
    """Largest singular value of a dense or sparse matrix, square or not."""
    if 0 in matrix.shape:
        return 0.0
    if not sparse.issparse(matrix):
        return float(np.linalg.norm(matrix, ord=2))
    if matrix.count_nonzero() == 0:
        return 0.0
    gram = sparse.csr_array(matrix.conj().T @ matrix)
    return float(np.sqrt(max(extreme_eigenvalue(gram, largest=True), 0.0)))


def _infer_parity(entries: NDArray[np.complex128], even_dim: int, tol: float = 0.0) -> Parity | None:
    e = even_dim
    off = max(np.abs(entries[:e, e:]).max(initial=0.0), np.abs(entries[e:, :e]).max(initial=0.0))
    diag = max(np.abs(entries[:e, :e]).max(initial=0.0), np.abs(entries[e:, e:]).max(initial=0.0))
    if off <= tol:
        return Parity.EVEN
    if diag <= tol:
        return Parity.ODD
    return None


def _check_same_space(a: GradedMatrix, b: GradedMatrix) -> None:
    if not a.same_space(b):
        msg = f"graded spaces ({a.even_dim}|{a.odd_dim}) and ({b.even_dim}|{b.odd_dim}) differ"
        raise DimensionError(msg)


def graded_commutator(a: GradedMatrix, b: GradedMatrix) -> GradedMatrix:
    """Return AB - (-1)^(deg A deg B) BA, extended bilinearly to inhomogeneous operators.

    Raises:
    ------
        DimensionError: If the operators act on different graded spaces.
    """
    _check_same_space(a, b)
    if a.parity is None or b.parity is None:
        parts = [graded_commutator(x, y) for x in a.homogeneous_parts() for y in b.homogeneous_parts()]
        return functools.reduce(lambda x, y: x + y, parts)
    sign = koszul_sign(a.parity, b.parity)
    left, right = _aligned(a.data, b.data)
    return GradedMatrix(left @ right - sign * (right @ left), a.even_dim, a.odd_dim, a.parity + b.parity)


def block_order(signs: NDArray[np.float64]) -> NDArray[np.intp]:
    """Stable permutation that puts the +1 entries of a grading diagonal first."""
    return np.argsort(-signs, kind="stable")


def graded_tensor(a: GradedMatrix, b: GradedMatrix) -> GradedMatrix:
    """Koszul-signed tensor product (A (x) B)(v (x) w) = (-1)^(deg B deg v) Av (x) Bw.

    The basis of V (x) W is reordered so that the even summand of the total grading comes first.
    The product is sparse when either factor is.

    Raises:
    ------
        PreconditionError: If either factor is inhomogeneous.
    """
    if a.parity is None or b.parity is None:
        msg = "graded tensor products need homogeneous factors"
        raise PreconditionError(msg)
    left = _scale_columns(a.data, a.signs) if b.parity is Parity.ODD else a.data
    signs = np.kron(a.signs, b.signs)
    order = block_order(signs)
    even_dim = int(np.count_nonzero(signs > 0))
    if a.is_sparse or b.is_sparse:
        size = signs.size
        permutation = sparse.csr_array((np.ones(size), (np.arange(size), order)), shape=(size, size))
        product = sparse.csr_array(sparse.kron(left, b.data, format="csr"))
        data = sparse.csr_array(permutation @ product @ permutation.T)
    else:
        data = np.kron(left, b.data)[np.ix_(order, order)]
    return GradedMatrix(data, even_dim, signs.size - even_dim, a.parity + b.parity)


@dataclasses.dataclass(frozen=True, eq=False)
class SpinorRep:
    """Irreducible representation of the complex Clifford algebra on ``n`` generators.

    For even ``n`` the space is graded by the chirality operator and every gamma matrix is odd.
    For odd ``n`` the space is ungraded.
    """

    n: int
    gamma: tuple[GradedMatrix, ...]

    @property
    def dim(self) -> int:
        """Spinor dimension 2^(n//2)."""
        return self.gamma[0].dim

    def relation_defect(self) -> float:
        """Largest deviation from gamma_j gamma_k + gamma_k gamma_j = 2 delta_jk."""
        eye = np.eye(self.dim)
        worst = 0.0
        for j, gj in enumerate(self.gamma):
            for k, gk in enumerate(self.gamma):
                anti = gj.entries @ gk.entries + gk.entries @ gj.entries
                worst = max(worst, float(np.abs(anti - 2 * (j == k) * eye).max()))
        return worst

    def represent(self, element: CliffordElement) -> GradedMatrix:
        """Image of a Clifford element in this representation."""
        if element.n != self.n:
            msg = f"element on {element.n} generators, representation on {self.n}"
            raise DimensionError(msg)
        first = self.gamma[0]
        result = np.zeros((self.dim, self.dim), dtype=complex)
        for indices, coeff in element.monomials():
            term = np.eye(self.dim, dtype=complex)
            for j in indices:
                term = term @ self.gamma[j - 1].entries
            result += coeff * term
        return GradedMatrix.from_array(result, first.even_dim, first.odd_dim)


def _kron_all(factors: Sequence[NDArray[np.complex128]]) -> NDArray[np.complex128]:
    return functools.reduce(np.kron, factors, np.eye(1, dtype=complex))


def spinor_rep(n: int) -> SpinorRep:
    """Build gamma matrices by the tensor-of-Pauli recursion.

    gamma_{2j-1} = Z^(j-1) X I^(m-j) and gamma_{2j} = Z^(j-1) Y I^(m-j) for m = n // 2; for odd ``n``
    the last generator is Z^m. For even ``n`` the basis is reordered so the chirality Z^m is
    block diagonal with its +1 eigenspace first.

    Raises:
    ------
        ValueError: If ``n < 1``.
    """
    if n < 1:
        msg = f"spinor representations need n >= 1, got {n}"
        raise ValueError(msg)
    m = n // 2
    mats = []
    for j in range(m):
        head = [PAULI_Z] * j
        tail = [IDENTITY_2] * (m - j - 1)
        mats.append(_kron_all([*head, PAULI_X, *tail]))
        mats.append(_kron_all([*head, PAULI_Y, *tail]))
    chirality = _kron_all([PAULI_Z] * m)
    if n % 2:
        mats.append(chirality)
        gamma = tuple(GradedMatrix(g, g.shape[0], 0, Parity.EVEN) for g in mats)
    else:
        order = block_order(np.real(np.diag(chirality)))
        half = chirality.shape[0] // 2
        gamma = tuple(GradedMatrix(g[np.ix_(order, order)], half, half, Parity.ODD) for g in mats)
    logger.debug("Built spinor representation n=%d of dimension %d", n, gamma[0].dim)
    return SpinorRep(n, gamma)


def inverse_sqrt_spd(h: ArrayLike, tol: float = constants.SPD_TOL) -> NDArray[np.generic]:
    """Return W = h^(-1/2) for a self-adjoint positive-definite ``h``, so that W h W = 1.

    Scalars are treated as 1x1 matrices. Real input gives real output.

    Raises:
    ------
        DimensionError: If ``h`` is not square.
        SpectralError: If ``h`` is not self-adjoint or its smallest eigenvalue is below ``tol``.
    """
    matrix = np.atleast_2d(np.asarray(h))
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        msg = f"expected a square matrix, got shape {matrix.shape}"
        raise DimensionError(msg)
    scale = max(float(np.abs(matrix).max(initial=0.0)), 1.0)
    if not np.allclose(matrix, matrix.conj().T, atol=constants.ALGEBRA_TOL * scale):
        msg = "Gram matrix is not self-adjoint"
        raise SpectralError(msg, float("nan"))
    values, vectors = np.linalg.eigh(matrix)
    if values[0] <= tol:
        msg = "Gram matrix is not positive definite"
        raise SpectralError(msg, float(values[0]))
    result = (vectors * values**-0.5) @ vectors.conj().T
    return result.real if np.isrealobj(matrix) else result


def omega() -> GradedMatrix:
    """The odd self-adjoint unitary ((0,-i),(i,0)) used to double odd triples."""
    return GradedMatrix(PAULI_Y.copy(), 1, 1, Parity.ODD)


def clifford_generator_matrix() -> GradedMatrix:
    """The odd self-adjoint unitary ((0,1),(1,0)) carrying the Cl_1 generator."""
    return GradedMatrix(PAULI_X.copy(), 1, 1, Parity.ODD)
