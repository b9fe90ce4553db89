"""Douglas-Rachford iteration and the solution set of ``0 in Ax + Bx``."""
import csv
import io
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .drcalc import dr_forms
from .errors import DimensionMismatch, InternalInconsistency
from .linrel import _check_same_n, resolvent_of
from .numerics import (kernel_basis, matrix_to_dict, orthonormalize, projector,
                       subspace_gap)

MAX_ITER = 10_000
STEP_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class IterationTrace:
    """Iterates x_0..x_m of ``x_{k+1} = T x_k`` and their shadows ``J_A x_k``.

    ``step_norms[k] = ||x_{k+1} - x_k||``. When the run converged the last
    recorded iterate is the limit and its step is at most the tolerance;
    otherwise the final iterate has no step recorded (NaN).
    """

    iterates: np.ndarray
    shadows: np.ndarray
    step_norms: np.ndarray
    converged: bool
    iterations_used: int
    tol: float

    @property
    def limit(self) -> Optional[np.ndarray]:
        return self.iterates[-1] if self.converged else None

    @property
    def shadow_limit(self) -> Optional[np.ndarray]:
        return self.shadows[-1] if self.converged else None

    def to_dict(self):
        return {
            "iterates": self.iterates.tolist(),
            "shadows": self.shadows.tolist(),
            "step_norms": [None if np.isnan(s) else float(s) for s in self.step_norms],
            "converged": self.converged,
            "iterations_used": self.iterations_used,
            "limit": None if self.limit is None else self.limit.tolist(),
            "shadow_limit": None if self.shadow_limit is None else self.shadow_limit.tolist(),
        }

    def to_csv(self):
        n = self.iterates.shape[1]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["iter"] + [f"x_{i + 1}" for i in range(n)]
                   + [f"shadow_{i + 1}" for i in range(n)] + ["step_norm"])
        for k, (x, s, step) in enumerate(zip(self.iterates, self.shadows, self.step_norms)):
            w.writerow([k] + [repr(float(v)) for v in x] + [repr(float(v)) for v in s]
                       + ["" if np.isnan(step) else repr(float(step))])
        return buf.getvalue()


def run_dr(A, B, x0, max_iter=MAX_ITER, tol=STEP_TOL):
    """Iterate the DR operator of (A, B) from `x0`.

    Stops once a step ``||T x_k - x_k||`` is at most `tol` (converged) or
    after `max_iter` applications of T. Running out of iterations is not an
    error; check ``trace.converged``.
    """
    if max_iter < 1 or tol <= 0:
        raise ValueError("need max_iter >= 1 and tol > 0")
    _check_same_n(A, B)
    x = np.asarray(x0, dtype=float).ravel()
    if x.shape != (A.n,):
        raise DimensionMismatch(f"x0 has length {x.size}, relations live in R^{A.n}")
    _, T = dr_forms(A, B)
    JA = resolvent_of(A)

    xs, steps = [x], []
    converged = False
    for _ in range(max_iter):
        y = T @ x
        step = float(np.linalg.norm(y - x))
        steps.append(step)
        if step <= tol:
            converged = True
            break
        x = y
        xs.append(x)
    used = len(steps)
    if not converged:
        steps.append(np.nan)
    X = np.array(xs)
    return IterationTrace(X, X @ JA.T, np.array(steps), converged, used, tol)


def fixed_point_subspace(T, tol=1e-10):
    """Orthonormal basis of ``Fix T = ker(T - I)``."""
    T = np.asarray(T, dtype=float)
    # T - I is judged against unit scale, so roundoff alone is not rank.
    return kernel_basis(T - np.eye(T.shape[0]), tol, scale=1.0)


@dataclass(frozen=True, eq=False)
class SolutionSet:
    """Orthonormal basis (columns, possibly none) of ``Z = {x : 0 in Ax + Bx}``."""

    basis: np.ndarray

    @property
    def dim(self):
        return self.basis.shape[1]

    def distance(self, x):
        x = np.asarray(x, dtype=float)
        return float(np.linalg.norm(x - projector(self.basis) @ x))

    def to_dict(self):
        return {"basis": matrix_to_dict(self.basis)}


def _solution_constraints(A, B):
    # (a, b) with U_A a = U_B b and W_A a + W_B b = 0 encode
    # x = U_A a, (x, w) in gr A and (x, -w) in gr B.
    return np.block([[A.U, -B.U], [A.W, B.W]])


def membership_residual(A, B, x):
    """Least-squares residual of ``0 in Ax + Bx`` at the point `x`."""
    x = np.asarray(x, dtype=float)
    n, ka = A.n, A.dim
    M = np.block([[A.U, np.zeros((n, B.dim))],
                  [np.zeros((n, ka)), B.U],
                  [A.W, B.W]])
    rhs = np.concatenate([x, x, np.zeros(n)])
    coef = np.linalg.lstsq(M, rhs, rcond=None)[0]
    return float(np.linalg.norm(M @ coef - rhs))


def solution_set(A, B, tol=1e-8):
    """Z computed from the graphs directly and as ``J_A(Fix T)``.

    The two subspaces must coincide (projector gap at most `tol`), otherwise
    InternalInconsistency is raised. Z always contains 0.
    """
    _check_same_n(A, B)
    K = kernel_basis(_solution_constraints(A, B), scale=1.0)
    direct = orthonormalize(A.U @ K[:A.dim], scale=1.0) if K.shape[1] else np.zeros((A.n, 0))

    _, T = dr_forms(A, B)
    F = fixed_point_subspace(T)
    JA = resolvent_of(A)
    shadow = orthonormalize(JA @ F, scale=1.0) if F.shape[1] else np.zeros((A.n, 0))

    gap = subspace_gap(direct, shadow)
    if gap > tol:
        raise InternalInconsistency(
            f"solution set: graph route (dim {direct.shape[1]}) and fixed-point route "
            f"(dim {shadow.shape[1]}) differ by {gap!r}")
    return SolutionSet(direct)
