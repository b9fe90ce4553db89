"""Dense real matrix kernel.

Matrices are plain 2-D float64 numpy arrays. Everything here is a pure
function; nothing mutates its arguments.
"""
import numpy as np

from .errors import MalformedMatrix, NotSymmetric, SingularMatrix

RANK_TOL = 1e-10
PIVOT_TOL = 1e-12


def as_matrix(M, square=False):
    """Coerce `M` to a finite 2-D float array, raising MalformedMatrix otherwise."""
    try:
        A = np.array(M, dtype=float)
    except (TypeError, ValueError) as exc:
        raise MalformedMatrix(f"not a real matrix: {exc}") from None
    if A.ndim != 2:
        raise MalformedMatrix(f"expected a 2-D array, got ndim={A.ndim}")
    if not np.isfinite(A).all():
        raise MalformedMatrix("matrix has non-finite entries")
    if square and A.shape[0] != A.shape[1]:
        raise MalformedMatrix(f"expected a square matrix, got shape {A.shape}")
    return A


def spectral_norm(M):
    """Largest singular value of `M` (0 for an empty matrix)."""
    M = np.asarray(M, dtype=float)
    if M.size == 0:
        return 0.0
    return float(np.linalg.svd(M, compute_uv=False)[0])


def norm_at_most(M, bound):
    """Decide ``spectral_norm(M) <= bound``.

    Uses ``||M||_F / sqrt(r) <= ||M||_2 <= ||M||_F`` (r = min dimension) and
    only falls back to an SVD when the bracket straddles `bound`.
    """
    M = np.asarray(M, dtype=float)
    if M.size == 0:
        return 0.0 <= bound
    fro = float(np.sqrt(np.einsum("ij,ij->", M, M)))
    if fro <= bound:
        return True
    if fro > bound * np.sqrt(min(M.shape)):
        return False
    return spectral_norm(M) <= bound


def solve(M, rhs):
    """Solve ``M X = rhs`` by Gaussian elimination with partial pivoting.

    A pivot whose magnitude is at most ``1e-12`` times the largest entry of
    its original row raises SingularMatrix. `rhs` may be a vector or a
    matrix; the result has the same shape.
    """
    A = as_matrix(M, square=True)
    b = np.asarray(rhs, dtype=float)
    vector = b.ndim == 1
    n = A.shape[0]
    if b.shape[0] != n:
        raise MalformedMatrix(f"rhs has {b.shape[0]} rows, matrix is {n}x{n}")
    # Augmented [A | b], eliminated in place.
    Ab = np.hstack([A, b.reshape(n, -1)])
    scale = np.abs(A).max(axis=1) if n else np.zeros(0)

    for k in range(n):
        col = np.abs(Ab[k:, k])
        p = k + int(col.argmax())
        if col[p - k] <= PIVOT_TOL * scale[p]:
            raise SingularMatrix(f"pivot {k} is numerically zero")
        if p != k:
            Ab[[k, p]] = Ab[[p, k]]
            scale[k], scale[p] = scale[p], scale[k]
        if k + 1 < n:
            Ab[k + 1:, k:] -= (Ab[k + 1:, k:k + 1] / Ab[k, k]) * Ab[k, k:]

    U, X = Ab[:, :n], Ab[:, n:]
    for k in range(n - 1, -1, -1):
        X[k] -= U[k, k + 1:] @ X[k + 1:]
        X[k] /= U[k, k]
    return X.ravel() if vector else X


def _fix_signs(Q):
    # Make the largest-magnitude entry of each column positive so bases are
    # reproducible regardless of the LAPACK sign convention.
    if Q.shape[1] == 0:
        return Q
    cols = np.arange(Q.shape[1])
    flip = Q[np.abs(Q).argmax(axis=0), cols] < 0
    Q[:, flip] *= -1.0
    return Q


def orthonormalize(V, tol=RANK_TOL, scale=0.0):
    """Orthonormal basis of the column space of `V`.

    Rank-revealing: directions whose singular value is at most
    ``tol * max(sigma_max, scale)`` are dropped, so the column count is the
    numerical rank of `V`. A positive `scale` says how large `V` would be if
    it were not pure roundoff.
    """
    V = np.asarray(V, dtype=float)
    if V.ndim != 2:
        raise MalformedMatrix("orthonormalize expects a 2-D array")
    m = V.shape[0]
    if V.shape[1] == 0 or not np.any(V):
        return np.zeros((m, 0))
    U, s, _ = np.linalg.svd(V, full_matrices=False)
    rank = int(np.sum(s > tol * max(s[0], scale)))
    return _fix_signs(U[:, :rank])


def kernel_basis(M, tol=RANK_TOL, scale=0.0):
    """Orthonormal basis (as columns) of the null space of `M`.

    Singular values at most ``tol * max(sigma_max, scale)`` count as zero.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2:
        raise MalformedMatrix("kernel_basis expects a 2-D array")
    n = M.shape[1]
    if M.shape[0] == 0 or not np.any(M):
        return np.eye(n)
    _, s, Vt = np.linalg.svd(M, full_matrices=True)
    rank = int(np.sum(s > tol * max(s[0], scale)))
    return _fix_signs(Vt[rank:].T.copy())


def symmetric_eigenvalues(M):
    """Ascending eigenvalues of a symmetric matrix.

    Raises NotSymmetric when ``||M - M^T|| > 1e-10 ||M||``. The eigenvalues
    returned are those of the exactly symmetrized ``(M + M^T) / 2``.
    """
    M = as_matrix(M, square=True)
    nrm = spectral_norm(M)
    if spectral_norm(M - M.T) > 1e-10 * nrm:
        raise NotSymmetric("matrix is not symmetric")
    return np.linalg.eigvalsh(0.5 * (M + M.T))


def projector(Q):
    """Orthogonal projector onto the span of the orthonormal columns of `Q`."""
    return Q @ Q.T


def subspace_gap(Q1, Q2):
    """Spectral-norm distance between the projectors onto two subspaces."""
    return spectral_norm(projector(Q1) - projector(Q2))


def matrix_to_dict(M):
    M = np.asarray(M, dtype=float)
    return {"rows": int(M.shape[0]), "cols": int(M.shape[1]),
            "data": [float(v) for v in M.ravel()]}


def matrix_from_dict(d):
    """Parse Matrix JSON ``{"rows", "cols", "data"}``.

    A bare nested list of rows is accepted as well.
    """
    if isinstance(d, list):
        return as_matrix(d)
    try:
        rows, cols, data = int(d["rows"]), int(d["cols"]), d["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedMatrix(f"bad matrix JSON: {exc!r}") from None
    if rows < 0 or cols < 0 or len(data) != rows * cols:
        raise MalformedMatrix(
            f"data length {len(data)} does not match {rows}x{cols}")
    try:
        flat = np.array(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise MalformedMatrix(f"bad matrix data: {exc}") from None
    return as_matrix(flat.reshape(rows, cols))
