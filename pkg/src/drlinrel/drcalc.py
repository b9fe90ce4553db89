"""Douglas-Rachford operators of linear relations and their proximality.

The DR operator of (A, B) is ``T = (I + R_B R_A) / 2`` with ``R = 2J - I``.
It is always the resolvent of some maximally monotone C, and it is a
proximal mapping exactly when it is symmetric (it is always firmly
nonexpansive). For symmetric A and B that happens iff R_A and R_B commute.
"""
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from .errors import (DimensionMismatch, DimensionTooSmall, InternalInconsistency,
                     MalformedMatrix, PreconditionViolated)
from .linrel import (TOL, LinearRelation, _check_same_n, from_resolvent,
                     resolvent_of)
from .numerics import (as_matrix, matrix_from_dict, matrix_to_dict,
                       norm_at_most, spectral_norm)

FORMULA_TOL = 1e-10
ROOT_MATCH_TOL = 1e-9


def reflected_resolvent(A):
    J = resolvent_of(A)
    return 2.0 * J - np.eye(A.n)


def _dr_parts(A, B):
    _check_same_n(A, B)
    I = np.eye(A.n)
    JA, JB = resolvent_of(A), resolvent_of(B)
    RA, RB = 2.0 * JA - I, 2.0 * JB - I
    return JA, JB, I - JA + JB @ RA, 0.5 * (I + RB @ RA)


def dr_forms(A, B):
    """DR operator of (A, B) computed two ways.

    Returns ``(I - J_A + J_B R_A, (I + R_B R_A) / 2)``; the two agree in exact
    arithmetic.
    """
    return _dr_parts(A, B)[2:]


@dataclass(frozen=True, eq=False)
class DrDiagnosis:
    """Verdict on a DR operator T.

    `recovered_C` (the relation whose resolvent is T) is built on first
    access.
    """

    T: np.ndarray
    symmetric: bool
    firmly_nonexpansive: bool
    proximal: bool
    commutator_norm: Optional[float]

    @cached_property
    def recovered_C(self) -> LinearRelation:
        return from_resolvent(self.T)

    def to_dict(self):
        return {
            "T": matrix_to_dict(self.T),
            "symmetric": self.symmetric,
            "firmly_nonexpansive": self.firmly_nonexpansive,
            "proximal": self.proximal,
            "commutator_norm": self.commutator_norm,
            "recovered_C": self.recovered_C.to_dict(),
        }

    @classmethod
    def from_dict(cls, d):
        cn = d["commutator_norm"]
        out = cls(matrix_from_dict(d["T"]), bool(d["symmetric"]),
                  bool(d["firmly_nonexpansive"]), bool(d["proximal"]),
                  None if cn is None else float(cn))
        out.__dict__["recovered_C"] = LinearRelation.from_dict(d["recovered_C"])
        return out


def dr_operator(A, B, tol=TOL):
    """Build the DR operator of (A, B) and decide whether it is proximal.

    Both displayed forms of T are computed and must agree to 1e-10, else
    InternalInconsistency. `commutator_norm` is only filled in when A and B
    are both symmetric (within `tol`), since only then does it decide the
    symmetry of T.
    """
    JA, JB, T_res, T = _dr_parts(A, B)
    if not norm_at_most(T_res - T, FORMULA_TOL):
        gap = spectral_norm(T_res - T)
        raise InternalInconsistency(f"DR formulas disagree by {gap!r}")
    I = np.eye(A.n)
    cn = None
    if norm_at_most(JA - JA.T, tol) and norm_at_most(JB - JB.T, tol):
        cn = spectral_norm(commutator(2.0 * JA - I, 2.0 * JB - I))
    symmetric = norm_at_most(T - T.T, tol)
    fne = norm_at_most(2.0 * T - I, 1.0 + tol)
    return DrDiagnosis(T, symmetric, fne, symmetric and fne, cn)


def is_proximal(T, tol=TOL):
    """A matrix is a proximal mapping iff it is firmly nonexpansive and symmetric."""
    T = as_matrix(T, square=True)
    return (norm_at_most(2.0 * T - np.eye(T.shape[0]), 1.0 + tol)
            and norm_at_most(T - T.T, tol))


def commutator(R, S):
    R, S = np.asarray(R, dtype=float), np.asarray(S, dtype=float)
    if R.ndim != 2 or R.shape[0] != R.shape[1]:
        raise MalformedMatrix(f"commutator needs square matrices, got {R.shape}")
    if R.shape != S.shape:
        raise DimensionMismatch(f"shapes {R.shape} and {S.shape} differ")
    return R @ S - S @ R


@dataclass(frozen=True, eq=False)
class SegmentFamily:
    """Two matrix segments ``R_lam = (1-lam) R0 + lam R1`` and likewise S_lam."""

    R0: np.ndarray
    S0: np.ndarray
    R1: np.ndarray
    S1: np.ndarray

    def __post_init__(self):
        mats = [as_matrix(M, square=True) for M in (self.R0, self.S0, self.R1, self.S1)]
        if len({M.shape for M in mats}) != 1:
            raise DimensionMismatch("segment endpoints have different shapes")
        for name, M in zip(("R0", "S0", "R1", "S1"), mats):
            if spectral_norm(M) > 1.0 + 1e-10:
                raise PreconditionViolated(f"{name} is not nonexpansive")
            M.setflags(write=False)
            object.__setattr__(self, name, M)

    @property
    def n(self):
        return self.R0.shape[0]

    def R(self, lam):
        return (1.0 - lam) * self.R0 + lam * self.R1

    def S(self, lam):
        return (1.0 - lam) * self.S0 + lam * self.S1

    def M(self, lam):
        return commutator(self.R(lam), self.S(lam))


def coolmat_family(n):
    """The reflection pair family where R_lam commutes with S_lam only at 0.

    R0 = R1 = diag(1, -1), S0 = diag(-1, 1), S1 = [[0, 1], [1, 0]] in the
    top-left 2x2 block, zero-padded to n x n.
    """
    if n < 2:
        raise DimensionTooSmall(f"need n >= 2, got {n}")
    R0, S0, S1 = np.zeros((n, n)), np.zeros((n, n)), np.zeros((n, n))
    R0[:2, :2] = [[1, 0], [0, -1]]
    S0[:2, :2] = [[-1, 0], [0, 1]]
    S1[:2, :2] = [[0, 1], [1, 0]]
    return SegmentFamily(R0, S0, R0.copy(), S1)


@dataclass(frozen=True)
class CommutatorPolynomial:
    """``q(lam) = c0 + c1 lam + c2 lam^2``, entry (i, j) of the commutator M_lam."""

    i: int
    j: int
    c0: float
    c1: float
    c2: float

    def __call__(self, lam):
        return self.c0 + lam * (self.c1 + lam * self.c2)

    def roots(self, scale_tol=1e-12):
        """Real roots; empty for the zero polynomial (treated as vanishing everywhere)."""
        c0, c1, c2 = self.c0, self.c1, self.c2
        big = max(abs(c0), abs(c1), abs(c2))
        if big == 0.0:
            return []
        if abs(c2) <= scale_tol * big:
            if abs(c1) <= scale_tol * big:
                return []
            return [-c0 / c1]
        disc = c1 * c1 - 4.0 * c2 * c0
        if disc < 0.0:
            # A double root that rounding pushed into the complex plane.
            if disc >= -1e-12 * c1 * c1:
                return [-c1 / (2.0 * c2)]
            return []
        # Cancellation-free pair: q = -(c1 + sign(c1) sqrt(disc)) / 2.
        q = -0.5 * (c1 + math.copysign(math.sqrt(disc), c1))
        if q == 0.0:
            return [0.0]
        return sorted({q / c2, c0 / q})


def commutator_polynomials(F, check=True):
    """Quadratic in lam for every entry of ``M_lam = [R_lam, S_lam]``.

    With ``R_lam = R0 + lam dR`` and ``S_lam = S0 + lam dS``:
    ``M_lam = [R0, S0] + lam ([R0, dS] + [dR, S0]) + lam^2 [dR, dS]``.
    With `check` the coefficient form is compared to direct evaluation at
    three sample points.
    """
    dR, dS = F.R1 - F.R0, F.S1 - F.S0
    C0 = commutator(F.R0, F.S0)
    C1 = commutator(F.R0, dS) + commutator(dR, F.S0)
    C2 = commutator(dR, dS)
    if check:
        scale = 1.0 + spectral_norm(C0) + spectral_norm(C1) + spectral_norm(C2)
        for lam in (0.25, 0.5, 0.75):
            err = np.abs(C0 + lam * C1 + lam * lam * C2 - F.M(lam)).max()
            if err > 1e-12 * scale:
                raise InternalInconsistency(f"polynomial form off by {err!r} at {lam}")
    n = F.n
    return [CommutatorPolynomial(i, j, float(C0[i, j]), float(C1[i, j]), float(C2[i, j]))
            for i in range(n) for j in range(n)]


def commuting_lambdas(F, tol=1e-9):
    """The set of lam in (0, 1) where R_lam and S_lam commute.

    Requires ``||M_0|| <= tol < ||M_1||``; then the answer has at most one
    element. Candidates are the closed-form roots of each entry polynomial;
    roots within 1e-9 of 0 or 1 are the endpoints themselves and are
    discarded, and each survivor must satisfy ``||M_lam|| <= tol``.
    """
    m0, m1 = spectral_norm(F.M(0.0)), spectral_norm(F.M(1.0))
    if m0 > tol:
        raise PreconditionViolated(f"R0 and S0 do not commute (||M_0|| = {m0!r})")
    if m1 <= tol:
        raise PreconditionViolated(f"R1 and S1 commute (||M_1|| = {m1!r})")
    polys = commutator_polynomials(F)
    # Entries that are numerically zero along the whole segment impose nothing.
    live = [p for p in polys
            if max(abs(p(0.25)), abs(p(0.5)), abs(p(0.75)), abs(p(1.0))) > tol / F.n]
    candidates = None
    for p in live:
        rts = [r for r in p.roots()
               if ROOT_MATCH_TOL < r < 1.0 - ROOT_MATCH_TOL]
        if candidates is None:
            candidates = rts
        else:
            candidates = [c for c in candidates
                          if any(abs(c - r) <= ROOT_MATCH_TOL for r in rts)]
        if not candidates:
            return set()
    if not candidates:
        return set()
    return {c for c in candidates if spectral_norm(F.M(c)) <= tol}
