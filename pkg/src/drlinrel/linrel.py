"""Maximally monotone linear relations on R^n.

A relation is stored by an orthonormal basis of its graph, a subspace of
R^n x R^n. The top n rows of the basis (``U``) hold points and the bottom
n rows (``W``) hold values, so ``gr A = {(U a, W a)}``.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (DimensionMismatch, MalformedMatrix, NotFirmlyNonexpansive,
                     NotMaximallyMonotone, NotSingleValued, SingularMatrix)
from .numerics import (as_matrix, kernel_basis, matrix_from_dict,
                       matrix_to_dict, norm_at_most, orthonormalize, solve,
                       spectral_norm, subspace_gap)

TOL = 1e-9
FNE_TOL = 1e-10
KINDS = ("matrix", "normal_cone", "resolvent")


@dataclass(frozen=True, eq=False)
class LinearRelation:
    """Linear relation given by an orthonormal 2n x k graph basis.

    Use the constructors (`from_matrix`, `normal_cone_of_subspace`,
    `from_resolvent`, `from_graph`) rather than building one directly.
    Equality of relations is `same_graph`, not ``==``.
    """

    basis: np.ndarray
    kind: Optional[str] = None

    def __post_init__(self):
        G = np.asarray(self.basis, dtype=float)
        if G.ndim != 2 or G.shape[0] % 2 or G.shape[0] == 0:
            raise MalformedMatrix(f"graph basis must be 2n x k, got {G.shape}")
        if self.kind is not None and self.kind not in KINDS:
            raise ValueError(f"unknown relation kind {self.kind!r}")
        if G.shape[1] and np.abs(G.T @ G - np.eye(G.shape[1])).max() > 1e-10:
            raise MalformedMatrix("graph basis columns are not orthonormal")
        G.setflags(write=False)
        object.__setattr__(self, "basis", G)

    @property
    def n(self):
        return self.basis.shape[0] // 2

    @property
    def dim(self):
        """Dimension of the graph subspace."""
        return self.basis.shape[1]

    @property
    def U(self):
        return self.basis[:self.n]

    @property
    def W(self):
        return self.basis[self.n:]

    def same_graph(self, other, tol=1e-10):
        if self.n != other.n:
            return False
        return subspace_gap(self.basis, other.basis) <= tol

    def to_matrix(self):
        """The matrix M with ``gr A = {(x, Mx)}``; needs an everywhere defined map."""
        if self.dim != self.n:
            raise NotSingleValued(f"graph has dimension {self.dim} != n = {self.n}")
        try:
            return solve(self.U.T, self.W.T).T
        except SingularMatrix:
            raise NotSingleValued("relation is set-valued somewhere") from None

    def to_dict(self):
        d = {"n": self.n, "graph_basis": matrix_to_dict(self.basis)}
        if self.kind is not None:
            d["kind"] = self.kind
        return d

    @classmethod
    def from_dict(cls, d):
        """Parse Relation JSON; a non-orthonormal basis is canonicalized."""
        try:
            n = int(d["n"])
            G = matrix_from_dict(d["graph_basis"])
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedMatrix(f"bad relation JSON: {exc!r}") from None
        if G.shape[0] != 2 * n:
            raise MalformedMatrix(f"graph basis has {G.shape[0]} rows, expected {2 * n}")
        kind = d.get("kind")
        if G.shape[1] and spectral_norm(G.T @ G - np.eye(G.shape[1])) <= 1e-12:
            return cls(G, kind)
        return from_graph(G, kind)


def from_graph(G, kind=None):
    """Relation whose graph is the column span of the 2n x k matrix `G`."""
    G = as_matrix(G)
    if G.shape[0] % 2 or G.shape[0] == 0:
        raise MalformedMatrix(f"graph spanning set must have 2n rows, got {G.shape[0]}")
    return LinearRelation(orthonormalize(G), kind)


def from_matrix(M):
    """Graph ``{(x, Mx)}`` of a square matrix."""
    M = as_matrix(M, square=True)
    return from_graph(np.vstack([np.eye(M.shape[0]), M]), "matrix")


def normal_cone_of_subspace(V_basis):
    """Normal cone operator of span(V_basis): graph ``V x V^perp``.

    `V_basis` is n x r; its columns need not be independent. An n x 0
    basis gives the subspace {0}, whose normal cone has graph {0} x R^n.
    """
    V = np.asarray(V_basis, dtype=float)
    if V.ndim == 1:
        V = V.reshape(-1, 1)
    V = as_matrix(V)
    n = V.shape[0]
    Q = orthonormalize(V)
    P = kernel_basis(Q.T) if Q.shape[1] else np.eye(n)
    G = np.zeros((2 * n, n))
    r = Q.shape[1]
    G[:n, :r] = Q
    G[n:, r:] = P
    return LinearRelation(G, "normal_cone")


def check_firmly_nonexpansive(J, tol=FNE_TOL):
    J = as_matrix(J, square=True)
    gap = spectral_norm(2.0 * J - np.eye(J.shape[0]))
    if gap > 1.0 + tol:
        raise NotFirmlyNonexpansive(f"||2J - I|| = {gap!r} exceeds 1")
    return J


def from_resolvent(J, tol=FNE_TOL):
    """Relation A with ``J_A = J``; its graph is ``{(Jx, x - Jx)}``."""
    J = check_firmly_nonexpansive(J, tol)
    I = np.eye(J.shape[0])
    return from_graph(np.vstack([J, I - J]), "resolvent")


def is_monotone(A, tol=TOL):
    """<u, w> >= 0 on the graph, i.e. sym(U^T W) is PSD up to `tol`."""
    if A.dim == 0:
        return True
    S = A.U.T @ A.W
    return bool(np.linalg.eigvalsh(0.5 * (S + S.T))[0] >= -tol)


def is_maximally_monotone(A, tol=TOL):
    return A.dim == A.n and is_monotone(A, tol)


def resolvent_of(A, tol=TOL):
    """``J_A = U (U + W)^{-1}`` for a maximally monotone relation."""
    if not is_maximally_monotone(A, tol):
        raise NotMaximallyMonotone(
            f"graph dimension {A.dim} (n = {A.n}) or monotonicity fails")
    U, W = A.U, A.W
    try:
        return solve((U + W).T, U.T).T
    except SingularMatrix:
        raise NotMaximallyMonotone("U + W is singular") from None


def asymmetry(J):
    return spectral_norm(J - J.T)


def is_symmetric(A, tol=TOL):
    """Symmetry of a maximally monotone relation, tested on its resolvent."""
    J = resolvent_of(A)
    return norm_at_most(J - J.T, tol)


def graph_asymmetry(A):
    """``||U^T W - W^T U||`` on the canonical basis.

    Vanishes exactly when <u1, w2> = <u2, w1> across the graph, which is the
    symmetry of A. Independent of the resolvent route in `is_symmetric`.
    """
    S = A.U.T @ A.W
    return spectral_norm(S - S.T)


def _check_same_n(*rels):
    ns = {r.n for r in rels}
    if len(ns) != 1:
        raise DimensionMismatch(f"relations live in different dimensions {sorted(ns)}")


def dist(A1, A2):
    """Resolvent metric ``||J_A1 - J_A2||``."""
    _check_same_n(A1, A2)
    return spectral_norm(resolvent_of(A1) - resolvent_of(A2))


def pair_dist(pair1, pair2):
    """Metric on pairs: sum of the componentwise resolvent distances."""
    return dist(pair1[0], pair2[0]) + dist(pair1[1], pair2[1])
