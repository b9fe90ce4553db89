"""Genericity experiments on pairs of symmetric linear relations.

A pair (A, B) of symmetric maximally monotone relations is "in D" when its
DR operator is a proximal mapping, which for such pairs means R_A and R_B
commute. Floating point cannot decide membership in a nowhere dense set,
so D is replaced by the surrogate ``||[R_A, R_B]|| <= commute_tol`` and the
threshold travels with every result.

Randomness: trial ``i`` of a sweep with seed ``s`` draws from
``numpy.random.Generator(PCG64(SeedSequence(s, spawn_key=(i,))))``, so a
trial's draws do not depend on how many trials run or in what order.
"""
import csv
import io
from dataclasses import asdict, dataclass
from typing import List, Optional

import numpy as np

from .drcalc import commutator, coolmat_family, dr_operator, is_proximal
from .errors import (DimensionTooSmall, InternalInconsistency, NotFirmlyNonexpansive,
                     NotInD, NotMaximallyMonotone)
from .linrel import (LinearRelation, _check_same_n, asymmetry, dist,
                     from_resolvent, is_maximally_monotone, resolvent_of)
from .numerics import spectral_norm

COMMUTE_TOL = 1e-8
LAMBDA_ESCAPE = 1e-3


def trial_rng(seed, trial):
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(trial),))
    return np.random.Generator(np.random.PCG64(ss))


def haar_orthogonal(n, rng):
    """Haar-distributed orthogonal matrix: QR of a Gaussian, signs fixed by diag(R)."""
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    d = np.sign(np.diag(R))
    d[d == 0] = 1.0
    return Q * d


def _symmetric_relation(Q, d):
    """Relation with resolvent ``Q diag(d) Q^T``, d in [0, 1]^n.

    The graph ``{(Jx, x - Jx)}`` has the orthonormal basis
    ``[Q diag(d/s); Q diag((1-d)/s)]`` with ``s = sqrt(d^2 + (1-d)^2)``,
    so no factorization is needed.
    """
    d = np.asarray(d, dtype=float)
    if d.shape != (Q.shape[0],) or not np.all((d >= 0.0) & (d <= 1.0)):
        raise NotFirmlyNonexpansive("resolvent eigenvalues must lie in [0, 1]")
    s = np.hypot(d, 1.0 - d)
    return LinearRelation(np.vstack([Q * (d / s), Q * ((1.0 - d) / s)]), "resolvent")


def sample_symmetric_relation(n, rng, eigenvalues=None):
    """Random element of the symmetric maximally monotone linear relations.

    The resolvent is ``Q diag(d) Q^T`` with Q Haar orthogonal and d uniform
    on [0, 1]^n unless `eigenvalues` pins d. d = 1 gives the zero operator,
    d = 0 the relation {0} x R^n.
    """
    if n < 1:
        raise DimensionTooSmall("need n >= 1")
    Q = haar_orthogonal(n, rng)
    d = rng.uniform(0.0, 1.0, n) if eigenvalues is None else eigenvalues
    return _symmetric_relation(Q, d)


def sample_commuting_pair(n, rng):
    """Pair in D: both resolvents diagonal in one shared random orthonormal basis."""
    Q = haar_orthogonal(n, rng)
    return (_symmetric_relation(Q, rng.uniform(0.0, 1.0, n)),
            _symmetric_relation(Q, rng.uniform(0.0, 1.0, n)))


def reflector_commutator_norm(A, B):
    I = np.eye(A.n)
    return spectral_norm(commutator(2.0 * resolvent_of(A) - I, 2.0 * resolvent_of(B) - I))


@dataclass(frozen=True)
class SweepConfig:
    n: int
    trials: int
    seed: int = 0
    commute_tol: float = COMMUTE_TOL
    lambda_escape: float = LAMBDA_ESCAPE

    def __post_init__(self):
        if self.n < 1 or self.trials < 1:
            raise ValueError("need n >= 1 and trials >= 1")
        if not self.commute_tol > 0:
            raise ValueError("commute_tol must be positive")
        if not 0.0 < self.lambda_escape < 1.0:
            raise ValueError("lambda_escape must lie in (0, 1)")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @classmethod
    def from_dict(cls, d):
        known = {k: d[k] for k in ("n", "trials", "seed", "commute_tol", "lambda_escape") if k in d}
        unknown = set(d) - set(known)
        if unknown:
            raise ValueError(f"unknown config keys {sorted(unknown)}")
        return cls(**known)


@dataclass(frozen=True)
class SweepRecord:
    trial: int
    commutator_norm: float
    in_D: bool
    proximal: bool
    dist_to_perturbed: Optional[float] = None


@dataclass(frozen=True)
class EscapeReport:
    lam: float
    retried: bool
    commutator_norm: float
    dist: float
    dist_A: float
    dist_B: float
    commute_tol: float

    def to_dict(self):
        return asdict(self)


def _require_in_D(A, B, tol):
    _check_same_n(A, B)
    for name, X in (("A", A), ("B", B)):
        if not is_maximally_monotone(X):
            raise NotMaximallyMonotone(f"{name} is not maximally monotone")
        if asymmetry(resolvent_of(X)) > tol:
            raise NotInD(f"{name} is not symmetric")
    cn = reflector_commutator_norm(A, B)
    if cn > tol:
        raise NotInD(f"reflected resolvents do not commute: ||[R_A, R_B]|| = {cn!r} > {tol!r}")
    return cn


def _blend(A0, R1, lam):
    # Resolvent of the blend is the midpoint of I and the lam-blended reflector.
    I = np.eye(A0.n)
    R = (1.0 - lam) * (2.0 * resolvent_of(A0) - I) + lam * R1
    return from_resolvent(0.5 * (I + 0.5 * (R + R.T)))


def escape_from_D(A0, B0, lam=LAMBDA_ESCAPE, tol=COMMUTE_TOL):
    """Push a pair in D out of D by a move of size O(lam).

    The reflected resolvents are blended toward the non-commuting reflection
    pair of `coolmat_family`: ``R_{A_lam} = (1-lam) R_{A0} + lam R1`` and
    ``R_{B_lam} = (1-lam) R_{B0} + lam S1``. The pair (A_lam, B_lam) fails to
    commute except for at most one lam in (0, 1); if `lam` hits it, the
    construction is retried once at lam/2.

    Returns ``(A_lam, B_lam, EscapeReport)``.
    """
    if not 0.0 < lam < 1.0:
        raise ValueError("lam must lie in (0, 1)")
    if A0.n < 2:
        raise DimensionTooSmall("escape needs n >= 2; every 1-D pair stays in D")
    _require_in_D(A0, B0, tol)
    fam = coolmat_family(A0.n)

    first = lam
    for attempt in range(2):
        A_lam, B_lam = _blend(A0, fam.R1, lam), _blend(B0, fam.S1, lam)
        cn = reflector_commutator_norm(A_lam, B_lam)
        if cn > tol:
            dA, dB = dist(A0, A_lam), dist(B0, B_lam)
            return A_lam, B_lam, EscapeReport(lam, attempt > 0, cn, dA + dB, dA, dB, tol)
        lam = lam / 2.0
    raise InternalInconsistency(
        f"escape stayed in D at lam = {first!r} and {first / 2!r} "
        f"(commutator norm {cn!r}, tol {tol!r})")


@dataclass(frozen=True)
class ClosednessReport:
    dists: List[float]
    commutator_norms: List[float]
    terms_in_D: List[bool]
    limit_proximal: bool
    commute_tol: float

    @property
    def passed(self):
        d = self.dists
        shrinking = all(b <= a + 1e-15 for a, b in zip(d, d[1:]))
        return all(self.terms_in_D) and self.limit_proximal and shrinking


def closedness_probe(A, B, k_max=20, partner=None, tol=COMMUTE_TOL):
    """Approach a pair in D through a sequence inside D and check the limit.

    Term k (k = 1..k_max) has resolvents ``(1 - 1/k) J_A + (1/k) J_P`` and
    likewise for B with partner Q. The default partner is the zero pair
    (resolvent I), which commutes with everything, so every term stays in D.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    _require_in_D(A, B, tol)
    n = A.n
    JA, JB = resolvent_of(A), resolvent_of(B)
    if partner is None:
        JP = JQ = np.eye(n)
    else:
        _check_same_n(A, *partner)
        JP, JQ = resolvent_of(partner[0]), resolvent_of(partner[1])

    dists, cns, inside = [], [], []
    for k in range(1, k_max + 1):
        t = 1.0 / k
        Ak = from_resolvent((1 - t) * JA + t * JP)
        Bk = from_resolvent((1 - t) * JB + t * JQ)
        dists.append(dist(Ak, A) + dist(Bk, B))
        cn = reflector_commutator_norm(Ak, Bk)
        cns.append(cn)
        inside.append(cn <= tol and dr_operator(Ak, Bk, tol / 2).proximal)
    limit = dr_operator(A, B, tol / 2)
    return ClosednessReport(dists, cns, inside, limit.proximal, tol)


def run_trial(cfg, trial):
    rng = trial_rng(cfg.seed, trial)
    A = sample_symmetric_relation(cfg.n, rng)
    B = sample_symmetric_relation(cfg.n, rng)
    return evaluate_pair(A, B, cfg, trial)


def evaluate_pair(A, B, cfg, trial=0):
    """One sweep record; the three D-membership tests must agree.

    ``||T - T^T|| = ||[R_A, R_B]|| / 2`` for symmetric inputs, so the
    proximality tolerance is half the commutator threshold.
    """
    diag = dr_operator(A, B, cfg.commute_tol / 2)
    cn = diag.commutator_norm
    if cn is None:
        raise InternalInconsistency("sampled relations are not symmetric")
    in_D = cn <= cfg.commute_tol
    prox = is_proximal(diag.T, cfg.commute_tol / 2)
    if not (in_D == prox == diag.proximal):
        raise InternalInconsistency(
            f"trial {trial}: in_D={in_D}, is_proximal={prox}, diagnosis={diag.proximal} "
            f"(commutator norm {cn!r})")
    moved = None
    if in_D and cfg.n >= 2:
        moved = escape_from_D(A, B, cfg.lambda_escape, cfg.commute_tol)[2].dist
    return SweepRecord(trial, cn, in_D, prox, moved)


def genericity_sweep(cfg):
    """Sample `cfg.trials` independent pairs and record D-membership for each."""
    return [run_trial(cfg, i) for i in range(cfg.trials)]


def fraction_in_D(records):
    return sum(r.in_D for r in records) / len(records)


SWEEP_COLUMNS = ("trial", "commutator_norm", "in_D", "proximal", "dist_to_perturbed")


def records_to_csv(records):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for r in records:
        w.writerow([r.trial, repr(float(r.commutator_norm)),
                    str(r.in_D).lower(), str(r.proximal).lower(),
                    "" if r.dist_to_perturbed is None else repr(float(r.dist_to_perturbed))])
    return buf.getvalue()


def records_from_csv(text):
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        d = row["dist_to_perturbed"]
        out.append(SweepRecord(int(row["trial"]), float(row["commutator_norm"]),
                               row["in_D"] == "true", row["proximal"] == "true",
                               float(d) if d else None))
    return out
