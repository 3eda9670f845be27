"""Dense complex matrix utilities: random ensembles, pattern-indexed
sub-matrices, structural checks and the JSON interchange format.

All sampling is driven by an explicit seed (or a caller-owned
``numpy.random.Generator``); there is no module-level random state, so
identical seeds always reproduce bit-identical matrices.
"""

import math

import numpy as np

from .errors import ContractViolationError

UNITARY_TOL = 1e-10
SYMMETRY_TOL = 1e-12


def as_rng(seed) -> np.random.Generator:
    """Accept an integer seed or a Generator and return a Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def ginibre(n: int, k: int, variance: float, seed) -> np.ndarray:
    """n x k matrix of i.i.d. complex normal entries, mean 0, variance
    ``variance`` (real and imaginary parts carry variance/2 each)."""
    if n < 1 or k < 1:
        raise ContractViolationError(f"dimensions must be >= 1, got ({n}, {k})")
    if variance <= 0:
        raise ContractViolationError(f"variance must be positive, got {variance}")
    rng = as_rng(seed)
    scale = math.sqrt(variance / 2.0)
    return scale * (rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k)))


def haar_unitary(m: int, seed) -> np.ndarray:
    """Sample an m x m unitary from the Haar measure on U(m).

    Uses the QR factorization of a complex Ginibre matrix with each
    column rescaled by the phase of the corresponding diagonal entry of
    R, which makes the distribution exactly Haar rather than merely
    approximately so.
    """
    if m < 1:
        raise ContractViolationError(f"dimension must be >= 1, got {m}")
    return haar_isometry(m, m, as_rng(seed))


def haar_isometry(m: int, k: int, seed) -> np.ndarray:
    """First k columns of a Haar-random element of U(m), as an m x k
    matrix with orthonormal columns. For k = m this is a Haar unitary."""
    if not 1 <= k <= m:
        raise ContractViolationError(f"need 1 <= k <= m, got k={k}, m={m}")
    rng = as_rng(seed)
    z = (rng.standard_normal((m, k)) + 1j * rng.standard_normal((m, k))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def reduce_by_pattern(a: np.ndarray, pattern) -> np.ndarray:
    """Repeat row/column i of a square matrix ``pattern[i]`` times.

    Rows and columns with a zero count are dropped, so the result is
    N x N with N the pattern total. An all-zero pattern yields a 0 x 0
    matrix.
    """
    a = np.asarray(a)
    counts = np.asarray(pattern, dtype=np.intp)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ContractViolationError(f"expected a square matrix, got shape {a.shape}")
    if counts.ndim != 1 or counts.shape[0] != a.shape[0]:
        raise ContractViolationError(
            f"pattern length {counts.shape} does not match matrix size {a.shape[0]}")
    if np.any(counts < 0):
        raise ContractViolationError("pattern entries must be non-negative")
    idx = np.repeat(np.arange(a.shape[0]), counts)
    return a[np.ix_(idx, idx)]


def symmetric_product_submatrix(u: np.ndarray, pattern, k: int) -> np.ndarray:
    """Sub-matrix (U I_k U^T)_{n,n} for a collision-free pattern n.

    I_k is the rank-k projector onto the first k modes, so the result
    equals V V^T where V is the block of U with rows selected by the
    pattern and the first k columns. Returned directly in that product
    form (N x N, symmetric).
    """
    u = np.asarray(u)
    counts = np.asarray(pattern, dtype=np.intp)
    if counts.shape[0] != u.shape[0]:
        raise ContractViolationError(
            f"pattern length {counts.shape[0]} does not match matrix size {u.shape[0]}")
    if not np.all((counts == 0) | (counts == 1)):
        raise ContractViolationError("pattern must be collision-free (entries in {0, 1})")
    if not 1 <= k <= u.shape[1]:
        raise ContractViolationError(f"need 1 <= k <= {u.shape[1]}, got k={k}")
    v = u[counts == 1, :k]
    return v @ v.T


def random_symmetric(n: int, seed, scale: float = 1.0) -> np.ndarray:
    """Random complex symmetric matrix X + X^T with Ginibre X."""
    rng = as_rng(seed)
    x = scale * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    return x + x.T


def unitarity_defect(u: np.ndarray) -> float:
    """Max-norm of U U^dagger - I."""
    u = np.asarray(u)
    eye = np.eye(u.shape[0])
    return float(np.max(np.abs(u @ u.conj().T - eye)))


def symmetry_defect(a: np.ndarray) -> float:
    """Max-norm of A - A^T."""
    a = np.asarray(a)
    return float(np.max(np.abs(a - a.T))) if a.size else 0.0


def assert_unitary(u: np.ndarray, tol: float = UNITARY_TOL) -> None:
    d = unitarity_defect(u)
    if d > tol:
        raise ContractViolationError(f"matrix is not unitary (defect {d:.3e} > {tol:.1e})")


def assert_symmetric(a: np.ndarray, tol: float = SYMMETRY_TOL) -> None:
    d = symmetry_defect(a)
    scale = max(1.0, float(np.max(np.abs(a))) if a.size else 0.0)
    if d > tol * scale:
        raise ContractViolationError(f"matrix is not symmetric (defect {d:.3e})")


def matrix_to_json(a: np.ndarray) -> dict:
    """Interchange form {"rows", "cols", "re", "im"} in row-major order."""
    a = np.asarray(a, dtype=complex)
    return {
        "rows": int(a.shape[0]),
        "cols": int(a.shape[1]),
        "re": a.real.ravel().tolist(),
        "im": a.imag.ravel().tolist(),
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    rows, cols = int(obj["rows"]), int(obj["cols"])
    re, im = obj["re"], obj["im"]
    if len(re) != rows * cols or len(im) != rows * cols:
        raise ContractViolationError(
            f"entry count {len(re)}/{len(im)} does not match {rows}x{cols}")
    a = np.asarray(re, dtype=float) + 1j * np.asarray(im, dtype=float)
    return a.reshape(rows, cols)
