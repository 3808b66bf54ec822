"""Positive cones in Hermitian space and the quantum-like models built on them.

Three cone variants are supported: the PSD cone, the two-qubit separable cone
and finitely generated (polyhedral) cones. Each exposes a primal and a dual
membership oracle returning a :class:`MembershipVerdict` whose certificate can
be re-checked independently with :meth:`MembershipVerdict.verify`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import minimize, nnls

from . import hermitian as H
from .errors import (
    ConeError,
    DimensionMismatchError,
    EffectNotInDualError,
    InteriorityError,
    MembershipUnknownError,
    NotInConeError,
    NotNormalizedError,
    SumMismatchError,
)

DEFAULT_TOL = 1e-9
NORMALIZATION_TOL = 1e-10

# swap operator on two qubits: block-positive, yet with eigenvalue -1
SWAP = H.as_hermitian(
    np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)
)


class Status(enum.Enum):
    IN = "in"
    OUT = "out"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class MembershipVerdict:
    """Outcome of a membership query.

    ``reason`` names the certificate kind. For ``OUT`` verdicts ``witness`` is
    a matrix whose pairing with the queried element is ``value`` (< -tol):
    a dual-cone functional for primal queries, a primal cone element for dual
    queries. ``IN`` verdicts carry either ``coefficients`` (generator cones) or
    ``parts`` (a PSD pair proving decomposability).
    """

    status: Status
    reason: str
    witness: np.ndarray | None = None
    value: float | None = None
    coefficients: np.ndarray | None = None
    parts: tuple | None = None

    @property
    def is_in(self) -> bool:
        return self.status is Status.IN

    @property
    def is_out(self) -> bool:
        return self.status is Status.OUT


def _check_dim(cone_dim: int, x) -> np.ndarray:
    x = H.as_hermitian(x)
    if x.shape[0] != cone_dim:
        raise DimensionMismatchError(f"expected a {cone_dim}x{cone_dim} matrix, got {x.shape}")
    return x


@dataclass(frozen=True)
class InteriorPoint:
    """A cone element together with a certified Hilbert-Schmidt ball radius."""

    point: np.ndarray
    radius: float


class Cone:
    """Common interface for the cone variants."""

    dim: int
    tol: float

    def contains(self, x) -> MembershipVerdict:
        raise NotImplementedError

    def dual_contains(self, m) -> MembershipVerdict:
        raise NotImplementedError

    def interior_point(self) -> InteriorPoint:
        raise NotImplementedError

    def verify(self, verdict: MembershipVerdict, x, dual: bool = False) -> bool:
        """Re-check a certificate numerically, independently of how it was found."""
        x = _check_dim(self.dim, x)
        tol = self.tol
        if verdict.status is Status.UNKNOWN:
            return False
        if verdict.is_out:
            w = verdict.witness
            if w is None or H.hs_inner(w, x) >= -tol:
                return False
            # the witness must itself live on the opposite side
            check = self.contains(w) if dual else self.dual_contains(w)
            return check.is_in
        if verdict.coefficients is not None:
            gens = self.generators
            recon = np.einsum("k,kij->ij", verdict.coefficients, gens)
            return bool(np.all(verdict.coefficients >= -tol)) and H.hs_norm(recon - x) <= 10 * tol
        if verdict.parts is not None:
            p, q = verdict.parts
            recon = p + H.partial_transpose(q, 2, 2)
            return (
                H.lambda_min(p) >= -tol
                and H.lambda_min(q) >= -tol
                and H.hs_norm(recon - x) <= 10 * tol
            )
        return self.dual_contains(x).is_in if dual else self.contains(x).is_in


def _psd_verdict(x: np.ndarray, tol: float, reason: str = "min-eigenvalue") -> MembershipVerdict:
    dec = H.spectral_decompose(x)
    lmin = dec.lambda_min
    if lmin >= -tol:
        return MembershipVerdict(Status.IN, reason, value=lmin)
    return MembershipVerdict(
        Status.OUT, reason, witness=H.projector(dec.eigenvectors[:, 0]), value=lmin
    )


@dataclass(frozen=True)
class PSDCone(Cone):
    """The cone of positive semidefinite ``dim x dim`` matrices (self-dual)."""

    dim: int
    tol: float = DEFAULT_TOL

    def contains(self, x) -> MembershipVerdict:
        return _psd_verdict(_check_dim(self.dim, x), self.tol)

    def dual_contains(self, m) -> MembershipVerdict:
        return _psd_verdict(_check_dim(self.dim, m), self.tol)

    def interior_point(self) -> InteriorPoint:
        # the ball of radius lambda_min(x0) around x0 is PSD
        return InteriorPoint(H.identity(self.dim) / self.dim, 1.0 / self.dim)


def _qubit(theta: float, phi: float) -> np.ndarray:
    return np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])


def _min_over_b(m: np.ndarray, a: np.ndarray):
    """Minimum of <a b|m|a b> over unit b, with the minimizing b."""
    t = m.reshape(2, 2, 2, 2)
    block = np.einsum("i,ikjl,j->kl", a.conj(), t, a)
    w, v = np.linalg.eigh(block)
    return w[0], v[:, 0]


def min_product_expectation(m, seed: int = 0, restarts: int = 4, grid: int = 12):
    """Search for ``min <a b|m|a b>`` over two-qubit product vectors.

    Coarse grid over the Bloch sphere of the first qubit (the second qubit is
    optimized exactly as a 2x2 eigenproblem), then Nelder-Mead refinement
    from the best grid points and from seeded random starts. Returns
    ``(value, product_vector)``; the value is an upper bound on the true
    minimum.
    """
    m = np.asarray(m)
    rng = np.random.default_rng(seed)

    def f(angles):
        return _min_over_b(m, _qubit(*angles))[0]

    thetas = np.linspace(0.0, np.pi, grid + 1)
    phis = np.linspace(0.0, 2 * np.pi, grid, endpoint=False)
    scored = sorted((f((th, ph)), th, ph) for th in thetas for ph in phis)
    starts = [(th, ph) for _, th, ph in scored[:3]]
    starts += [(rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi)) for _ in range(restarts)]
    best_val, best_ang = scored[0][0], scored[0][1:]
    for s in starts:
        res = minimize(f, np.array(s), method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-15})
        if res.fun < best_val:
            best_val, best_ang = res.fun, tuple(res.x)
    a = _qubit(*best_ang)
    val, b = _min_over_b(m, a)
    return float(val), np.kron(a, b)


def decomposable_split(m, tol: float = DEFAULT_TOL):
    """Try to write ``m = P + Q^T_B`` with ``P, Q`` PSD (two-qubit case).

    Solved as a small semidefinite feasibility problem; the returned pair is
    cleaned (``Q`` clipped to its PSD part, ``P`` recomputed) and only
    returned if it re-verifies at ``tol``. Returns ``None`` otherwise.
    """
    import cvxpy as cp

    m = np.asarray(m)
    q = cp.Variable((4, 4), hermitian=True)
    qt = cp.partial_transpose(q, dims=[2, 2], axis=1)
    t = cp.Variable()
    p = m - qt
    problem = cp.Problem(cp.Maximize(t), [p >> t * np.eye(4), q >> t * np.eye(4), t <= 1])
    try:
        problem.solve(solver=cp.CLARABEL)
    except cp.error.SolverError:
        return None
    if q.value is None:
        return None
    qv = H.as_hermitian(0.5 * (q.value + q.value.conj().T), tol=1e-6)
    qv = H.spectral_decompose(qv).apply(lambda w: np.maximum(w, 0.0))
    pv = H.as_hermitian(m - H.partial_transpose(qv, 2, 2), tol=1e-10)
    if H.lambda_min(pv) >= -tol:
        return pv, qv
    return None


@dataclass(frozen=True)
class SeparableCone(Cone):
    """Unnormalized separable operators on two qubits.

    Primal membership is the PPT test, which is exact for two qubits. Dual
    membership (block positivity) is certified by a decomposable split; a
    product vector with negative expectation proves non-membership.
    """

    tol: float = DEFAULT_TOL
    seed: int = 0
    dim: int = field(default=4, init=False)

    def contains(self, x) -> MembershipVerdict:
        x = _check_dim(4, x)
        v = _psd_verdict(x, self.tol)
        if v.is_out:
            return v
        dec = H.spectral_decompose(H.partial_transpose(x, 2, 2))
        if dec.lambda_min >= -self.tol:
            return MembershipVerdict(Status.IN, "ppt", value=min(v.value, dec.lambda_min))
        w = H.partial_transpose(H.projector(dec.eigenvectors[:, 0]), 2, 2)
        return MembershipVerdict(Status.OUT, "ppt", witness=w, value=dec.lambda_min)

    def dual_contains(self, m) -> MembershipVerdict:
        m = _check_dim(4, m)
        tol = self.tol
        lmin = H.lambda_min(m)
        if lmin >= -tol:
            return MembershipVerdict(Status.IN, "psd", value=lmin)
        mt = H.partial_transpose(m, 2, 2)
        lmin_t = H.lambda_min(mt)
        if lmin_t >= -tol:
            return MembershipVerdict(
                Status.IN, "ppt", value=lmin_t, parts=(np.zeros((4, 4), dtype=complex), mt)
            )
        val, psi = min_product_expectation(m, seed=self.seed)
        if val < -tol:
            return MembershipVerdict(Status.OUT, "product-vector", witness=H.projector(psi), value=val)
        split = decomposable_split(m, tol)
        if split is not None:
            return MembershipVerdict(Status.IN, "decomposable", value=val, parts=split)
        return MembershipVerdict(Status.UNKNOWN, "search-inconclusive", value=val)

    def interior_point(self) -> InteriorPoint:
        # PPT is exact here and partial transposition preserves the HS norm,
        # so the PSD radius of I/4 carries over.
        return InteriorPoint(H.identity(4) / 4, 0.25)


class GeneratorCone(Cone):
    """Conic hull of finitely many Hermitian generators."""

    def __init__(self, generators: Sequence, tol: float = DEFAULT_TOL):
        gens = [H.as_hermitian(g) for g in generators]
        if not gens:
            raise ConeError("a generator cone needs at least one generator")
        d = gens[0].shape[0]
        for i, g in enumerate(gens):
            if g.shape != (d, d):
                raise DimensionMismatchError(f"generator {i} has shape {g.shape}, expected {(d, d)}")
            if H.hs_norm(g) <= tol:
                raise ConeError(f"generator {i} is zero")
        self.dim = d
        self.tol = tol
        self.generators = np.array(gens)
        self.generators.flags.writeable = False
        self._coords = np.array([H.to_coords(g) for g in gens])
        self._check_pointed()

    def __repr__(self):
        return f"GeneratorCone(dim={self.dim}, n_generators={len(self.generators)})"

    def _check_pointed(self):
        traces = np.array([H.trace(g) for g in self.generators])
        if np.all(traces > self.tol):
            # a strictly positive functional on every generator rules out x, -x both in C
            return
        for i, g in enumerate(self.generators):
            if self.contains(-g).is_in:
                raise ConeError(f"cone is not pointed: -generator {i} is in the cone")

    def contains(self, x) -> MembershipVerdict:
        x = _check_dim(self.dim, x)
        target = H.to_coords(x)
        coeffs, res_norm = nnls(self._coords.T, target, maxiter=50 * len(self._coords) + 100)
        if res_norm <= self.tol:
            return MembershipVerdict(Status.IN, "nnls", value=res_norm, coefficients=coeffs)
        # at the NNLS optimum, -residual pairs non-negatively with every generator
        # and to -||r||^2 with x
        residual = target - self._coords.T @ coeffs
        c = -residual / np.linalg.norm(residual)
        if np.min(self._coords @ c) >= -self.tol and c @ target < -self.tol:
            return MembershipVerdict(
                Status.OUT, "separating-functional", witness=H.from_coords(c, self.dim), value=c @ target
            )
        return MembershipVerdict(Status.UNKNOWN, "nnls-inconclusive", value=res_norm)

    def dual_contains(self, m) -> MembershipVerdict:
        m = _check_dim(self.dim, m)
        pairings = self._coords @ H.to_coords(m)
        i = int(np.argmin(pairings))
        if pairings[i] >= -self.tol:
            return MembershipVerdict(Status.IN, "generators", value=float(pairings[i]))
        return MembershipVerdict(
            Status.OUT, "generator", witness=self.generators[i], value=float(pairings[i])
        )

    def dual_matrix(self) -> np.ndarray:
        """Generator coordinates, one row per generator (the dual constraints)."""
        return self._coords

    def interior_point(self, iterations: int = 40) -> InteriorPoint:
        """Average of trace-normalized generators with a probe-certified radius.

        The largest ``eps`` with ``x0 +- eps*b_k`` in the cone for every
        orthonormal basis element ``b_k`` is found by bisection. The cross
        polytope spanned by those points contains the ball of radius
        ``eps / sqrt(n)``, which is returned.
        """
        d = self.dim
        n = d * d
        traces = np.array([H.trace(g) for g in self.generators])
        weights = np.where(traces > self.tol, 1.0 / np.where(traces > self.tol, traces, 1.0), 1.0)
        x0 = H.as_hermitian(np.einsum("k,kij->ij", weights, self.generators) / len(traces), tol=1e-10)
        basis = H.orthonormal_hermitian_basis(d)
        scale = H.hs_norm(x0)

        def probes_ok(eps):
            return all(
                self.contains(x0 + sign * eps * b).is_in for b in basis for sign in (1.0, -1.0)
            )

        lo, hi = 0.0, scale
        if probes_ok(hi):
            lo = hi
        else:
            for _ in range(iterations):
                mid = 0.5 * (lo + hi)
                if probes_ok(mid):
                    lo = mid
                else:
                    hi = mid
        if lo <= 1e-8 * max(scale, 1.0):
            raise InteriorityError("could not certify an interior point: the generators do not span")
        return InteriorPoint(x0, lo / np.sqrt(n))


def cone_membership(cone: Cone, x) -> MembershipVerdict:
    return cone.contains(x)


def dual_membership(cone: Cone, m) -> MembershipVerdict:
    return cone.dual_contains(m)


def interior_point(cone: Cone) -> InteriorPoint:
    return cone.interior_point()


@dataclass(frozen=True)
class GptModel:
    """Quantum-like model ``(Her(C^dim), cone, Tr)``; the order unit is the identity."""

    cone: Cone

    @property
    def dim(self) -> int:
        return self.cone.dim

    @property
    def unit(self) -> np.ndarray:
        return H.identity(self.dim)

    @property
    def tol(self) -> float:
        return self.cone.tol


def psd_model(d: int, tol: float = DEFAULT_TOL) -> GptModel:
    return GptModel(PSDCone(d, tol))


def sep_model(tol: float = DEFAULT_TOL, seed: int = 0) -> GptModel:
    return GptModel(SeparableCone(tol, seed))


@dataclass(frozen=True, eq=False)
class State:
    matrix: np.ndarray
    model: GptModel = field(repr=False)


@dataclass(frozen=True, eq=False)
class Measurement:
    effects: tuple
    model: GptModel = field(repr=False)

    def __len__(self):
        return len(self.effects)

    def __getitem__(self, i):
        return self.effects[i]


def validate_state(model: GptModel, x) -> State:
    """Check ``Tr x = 1`` and cone membership; return the validated state."""
    x = _check_dim(model.dim, x)
    tr = H.trace(x)
    if abs(tr - 1.0) > NORMALIZATION_TOL:
        raise NotNormalizedError(f"state has trace {tr!r}, expected 1")
    verdict = model.cone.contains(x)
    if verdict.is_out:
        raise NotInConeError(f"state is outside the cone ({verdict.reason})", verdict)
    if not verdict.is_in:
        raise MembershipUnknownError("cone membership of the state could not be decided", verdict)
    return State(x, model)


def validate_measurement(model: GptModel, effects) -> Measurement:
    """Check that the effects sum to the identity and lie in the dual cone."""
    effects = [_check_dim(model.dim, e) for e in effects]
    if len(effects) < 2:
        raise SumMismatchError("a measurement needs at least two effects")
    dev = np.max(np.abs(sum(effects) - model.unit))
    if dev > NORMALIZATION_TOL:
        raise SumMismatchError(f"effects sum to identity only up to {dev:.3e}")
    for i, e in enumerate(effects):
        verdict = model.cone.dual_contains(e)
        if verdict.is_out:
            raise EffectNotInDualError(f"effect {i} is not in the dual cone ({verdict.reason})", i, verdict)
        if not verdict.is_in:
            raise MembershipUnknownError(f"dual membership of effect {i} could not be decided", verdict)
    return Measurement(tuple(effects), model)


def outcome_distribution(state: State, meas: Measurement) -> np.ndarray:
    """Outcome probabilities ``Tr(M_i rho)``, clamped to ``[0, 1]``."""
    probs = np.array([H.hs_inner(e, state.matrix) for e in meas.effects])
    if np.any(probs < -NORMALIZATION_TOL) or np.any(probs > 1 + NORMALIZATION_TOL):
        raise ValueError(f"outcome probabilities {probs} outside [0, 1]; inputs from different models?")
    return np.clip(probs, 0.0, 1.0)


@dataclass(frozen=True)
class ProductDecomposition:
    """Explicit product vectors ``a_i (x) b_i`` for a separable operator."""

    factors: tuple  # of (a, b) pairs

    @property
    def vectors(self) -> list[np.ndarray]:
        return [np.kron(a, b) for a, b in self.factors]

    def matrix(self) -> np.ndarray:
        return sum(np.outer(v, v.conj()) for v in self.vectors)


def verify_product_decomposition(x, dec: ProductDecomposition, tol: float = 1e-10) -> bool:
    x = np.asarray(x)
    if not dec.factors:
        return bool(np.max(np.abs(x)) <= tol)
    recon = dec.matrix()
    if recon.shape != x.shape:
        return False
    return bool(np.max(np.abs(recon - x)) <= tol)
