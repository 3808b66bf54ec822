"""Two-hypothesis state discrimination in quantum-like models.

Error probability of a two-outcome measurement, the Helstrom bound, the
spread-dependent lower bound valid in every quantum-like model together with
its equality condition, the explicit construction of state pairs that beat
the Helstrom bound, and the discrimination norm ``D_G``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import hermitian as H
from .cones import (
    SWAP,
    GeneratorCone,
    GptModel,
    Measurement,
    PSDCone,
    ProductDecomposition,
    SeparableCone,
    State,
    sep_model,
    validate_measurement,
    validate_state,
)
from .errors import InteriorityError, PreconditionError, VerificationFailed
from .simplex import maximize_free

CLAMP_SLACK = 1e-10
VIOLATION_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class DiscriminationInstance:
    rho0: State
    rho1: State
    p: float = 0.5

    def __post_init__(self):
        if not 0.0 < self.p < 1.0:
            raise ValueError(f"prior p must lie in (0, 1), got {self.p}")
        if self.rho0.model is not self.rho1.model and self.rho0.model != self.rho1.model:
            raise ValueError("states belong to different models")

    @property
    def model(self) -> GptModel:
        return self.rho0.model

    def weighted_difference(self) -> np.ndarray:
        """``p rho0 - (1-p) rho1``."""
        return H.as_hermitian(self.p * self.rho0.matrix - (1 - self.p) * self.rho1.matrix, tol=1e-10)


def _two_outcome(meas: Measurement):
    if len(meas.effects) != 2:
        raise ValueError(f"expected a two-outcome measurement, got {len(meas.effects)} outcomes")
    return meas.effects


def _clamp_probability(x: float) -> float:
    if x < -CLAMP_SLACK or x > 1 + CLAMP_SLACK:
        raise ValueError(f"error probability {x!r} outside [0, 1]")
    return min(max(x, 0.0), 1.0)


def error_probability(inst: DiscriminationInstance, meas: Measurement) -> float:
    """``p Tr(rho0 M1) + (1-p) Tr(rho1 M0)``."""
    m0, m1 = _two_outcome(meas)
    err = inst.p * H.hs_inner(inst.rho0.matrix, m1) + (1 - inst.p) * H.hs_inner(inst.rho1.matrix, m0)
    return _clamp_probability(err)


def helstrom_bound(inst: DiscriminationInstance) -> float:
    """Minimum error over quantum measurements: ``1/2 - 1/2 ||p rho0 - (1-p) rho1||_1``."""
    return 0.5 - 0.5 * H.trace_norm(inst.weighted_difference())


def helstrom_optimal_measurement(inst: DiscriminationInstance) -> Measurement:
    """Projector onto the positive part of ``p rho0 - (1-p) rho1`` and its complement.

    For identical hypotheses with ``p >= 1/2`` this is ``{I, 0}``; the effects
    are PSD, so the measurement is valid in every model whose cone lies
    inside the PSD cone.
    """
    x = inst.weighted_difference()
    dec = H.spectral_decompose(x)
    m0 = dec.apply(lambda w: (w > 0).astype(float))
    if not np.any(dec.eigenvalues > 0) and inst.p >= 0.5:
        m0 = H.identity(x.shape[0])
    m1 = H.as_hermitian(np.eye(x.shape[0]) - m0)
    return validate_measurement(inst.model, [m0, m1])


class SpectralStats(NamedTuple):
    r: float
    r_prime0: float
    r_prime1: float


def measurement_spectral_stats(meas: Measurement) -> SpectralStats:
    """Spread ``r = lmax(M0) - lmin(M0)`` and sums ``r'_i = lmax(M_i) + lmin(M_i)``."""
    m0, m1 = _two_outcome(meas)
    w0 = H.eigvalsh(m0)
    w1 = H.eigvalsh(m1)
    return SpectralStats(float(w0[-1] - w0[0]), float(w0[-1] + w0[0]), float(w1[-1] + w1[0]))


def general_bound(inst: DiscriminationInstance, meas: Measurement) -> float:
    """Lower bound on the error probability valid for every measurement of the model.

    ``1/2 - 1/2 ||p rho0 - (1-p) rho1||_1 r - 1/2 (2p - 1)(r'_0 - 1)``.
    """
    stats = measurement_spectral_stats(meas)
    norm = H.trace_norm(inst.weighted_difference())
    return 0.5 - 0.5 * norm * stats.r - 0.5 * (2 * inst.p - 1) * (stats.r_prime0 - 1)


@dataclass(frozen=True)
class EqualityReport:
    """Whether the general bound is attained, with the supporting subspaces.

    ``residual_plus = Tr X+ (lmax I - M0)`` and
    ``residual_minus = Tr |X-| (M0 - lmin I)`` are both non-negative and
    their sum is exactly the gap between error probability and bound, so
    ``holds`` (``residual <= tol``) is equivalent to equality at that
    tolerance. ``containment_plus``/``containment_minus`` report the largest
    distance of a unit range vector from the matching extreme eigenspace.
    """

    holds: bool
    psi_plus_dirs: np.ndarray
    psi_minus_dirs: np.ndarray
    max_eigenspace: np.ndarray
    min_eigenspace: np.ndarray
    residual_plus: float
    residual_minus: float
    containment_plus: float
    containment_minus: float
    tol: float

    @property
    def residual(self) -> float:
        return self.residual_plus + self.residual_minus


def _containment(dirs: np.ndarray, space: np.ndarray) -> float:
    if dirs.shape[1] == 0:
        return 0.0
    proj = space @ (space.conj().T @ dirs)
    return float(np.max(np.linalg.norm(dirs - proj, axis=0)))


def equality_condition(inst: DiscriminationInstance, meas: Measurement, tol: float = 1e-9) -> EqualityReport:
    """Decide whether the general bound holds with equality.

    The positive part of ``p rho0 - (1-p) rho1`` must be supported on the
    maximal eigenspace of ``M0`` and the negative part on the minimal one.
    """
    m0, _ = _two_outcome(meas)
    x = inst.weighted_difference()
    xdec = H.spectral_decompose(x)
    mdec = H.spectral_decompose(m0)
    lmax, lmin = mdec.lambda_max, mdec.lambda_min
    d = x.shape[0]
    x_plus = xdec.apply(lambda w: np.maximum(w, 0.0))
    x_minus = xdec.apply(lambda w: np.minimum(w, 0.0))
    res_plus = max(H.hs_inner(x_plus, lmax * np.eye(d) - m0), 0.0)
    res_minus = max(H.hs_inner(-x_minus, m0 - lmin * np.eye(d)), 0.0)
    vecs = xdec.eigenvectors
    plus_dirs = vecs[:, xdec.eigenvalues > tol]
    minus_dirs = vecs[:, xdec.eigenvalues < -tol]
    max_space, min_space = mdec.max_eigenspace(), mdec.min_eigenspace()
    return EqualityReport(
        holds=res_plus + res_minus <= tol,
        psi_plus_dirs=plus_dirs,
        psi_minus_dirs=minus_dirs,
        max_eigenspace=max_space,
        min_eigenspace=min_space,
        residual_plus=res_plus,
        residual_minus=res_minus,
        containment_plus=_containment(plus_dirs, max_space),
        containment_minus=_containment(minus_dirs, min_space),
        tol=tol,
    )


@dataclass(frozen=True)
class BoundReport:
    err: float
    helstrom_rhs: float
    general_rhs: float
    r: float
    r_prime0: float
    r_prime1: float
    equality_A: bool
    violates_quantum: bool
    margin: float
    p: float

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def check_violation(inst: DiscriminationInstance, meas: Measurement, tol: float = 1e-9) -> BoundReport:
    """Evaluate every bound for one tuple.

    ``violates_quantum`` is set when the error probability undercuts the
    Helstrom bound by more than ``1e-10``; that is only possible with
    ``r > 1`` when ``p = 1/2``.
    """
    err = error_probability(inst, meas)
    hel = helstrom_bound(inst)
    stats = measurement_spectral_stats(meas)
    return BoundReport(
        err=err,
        helstrom_rhs=hel,
        general_rhs=general_bound(inst, meas),
        r=stats.r,
        r_prime0=stats.r_prime0,
        r_prime1=stats.r_prime1,
        equality_A=equality_condition(inst, meas, tol).holds,
        violates_quantum=err < hel - VIOLATION_TOL,
        margin=hel - err,
        p=inst.p,
    )


@dataclass(frozen=True, eq=False)
class AdvantageCertificate:
    """States and measurement whose error beats the Helstrom bound at ``p = 1/2``."""

    rho0: State
    rho1: State
    meas: Measurement
    err: float
    helstrom_rhs: float
    delta: float
    x0: np.ndarray
    margin: float

    def instance(self) -> DiscriminationInstance:
        return DiscriminationInstance(self.rho0, self.rho1, 0.5)

    def reverify(self) -> bool:
        """Re-validate states and measurement and recompute the margin from scratch."""
        model = self.rho0.model
        r0 = validate_state(model, self.rho0.matrix)
        r1 = validate_state(model, self.rho1.matrix)
        meas = validate_measurement(model, self.meas.effects)
        inst = DiscriminationInstance(r0, r1, 0.5)
        return error_probability(inst, meas) < helstrom_bound(inst) - VIOLATION_TOL


def _max_step(cone, x0, direction, start: float, iterations: int = 60) -> float:
    """Largest ``delta`` with ``x0 +- delta*direction`` both in the cone (bisection)."""

    def ok(delta):
        return cone.contains(x0 + delta * direction).is_in and cone.contains(x0 - delta * direction).is_in

    lo = start
    if not ok(lo):
        lo = 0.0
    hi = max(2.0 * lo, 1e-6)
    for _ in range(200):
        if not ok(hi):
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise VerificationFailed("cone slice looks unbounded along the advantage direction")
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


def construct_advantage(model: GptModel, meas: Measurement, safety: float = 0.99) -> AdvantageCertificate:
    """Build two states that ``meas`` discriminates better than any POVM can.

    Starting from a certified interior point ``x0``, the states are
    ``(x0 +- delta (|v_max><v_max| - |v_min><v_min|)) / Tr x0`` where
    ``v_max``/``v_min`` are extreme eigenvectors of ``M0`` and ``delta`` is
    the largest step keeping both in the cone, shrunk by ``safety``. The
    margin over the Helstrom bound is ``delta (r - 1) / Tr x0``.
    """
    if not 0.0 < safety < 1.0:
        raise ValueError("safety factor must lie in (0, 1)")
    m0, _ = _two_outcome(meas)
    stats = measurement_spectral_stats(meas)
    if stats.r <= 1 + 1e-9:
        raise PreconditionError(f"measurement spread r = {stats.r:.12g} does not exceed 1")
    ip = model.cone.interior_point()
    x0 = ip.point
    dec = H.spectral_decompose(m0)
    v_max = dec.max_eigenspace()[:, 0]
    v_min = dec.min_eigenspace()[:, 0]
    direction = H.as_hermitian(H.projector(v_max) - H.projector(v_min), tol=1e-10)
    # ||direction||_2 = sqrt(2), so this step stays inside the certified ball
    start = ip.radius / np.sqrt(2.0)
    delta = _max_step(model.cone, x0, direction, start) * safety
    if delta <= 0.0:
        raise InteriorityError("no positive step keeps both states inside the cone")
    tr = H.trace(x0)
    rho0 = validate_state(model, H.as_hermitian((x0 + delta * direction) / tr, tol=1e-10))
    rho1 = validate_state(model, H.as_hermitian((x0 - delta * direction) / tr, tol=1e-10))
    inst = DiscriminationInstance(rho0, rho1, 0.5)
    err = error_probability(inst, meas)
    hel = helstrom_bound(inst)
    margin = hel - err
    if margin <= VIOLATION_TOL:
        raise VerificationFailed(f"constructed pair has margin {margin:.3e}, not above {VIOLATION_TOL:.0e}")
    return AdvantageCertificate(rho0, rho1, meas, err, hel, delta, x0, margin)


class NormValue(NamedTuple):
    value: float
    exact: bool


def _slab_valid(model: GptModel, e) -> bool:
    cone = model.cone
    return cone.dual_contains(e).is_in and cone.dual_contains(np.eye(model.dim) - e).is_in


def _sep_norm_sdp(diff: np.ndarray):
    """Optimal effect of the two-qubit SEP slab via its decomposable description."""
    import cvxpy as cp

    def decomposable(name):
        p = cp.Variable((4, 4), hermitian=True, name=f"{name}_p")
        q = cp.Variable((4, 4), hermitian=True, name=f"{name}_q")
        return p + cp.partial_transpose(q, dims=[2, 2], axis=1), [p >> 0, q >> 0]

    e, c1 = decomposable("e")
    f, c2 = decomposable("f")
    objective = cp.Maximize(cp.real(cp.trace(e @ diff)))
    problem = cp.Problem(objective, c1 + c2 + [e + f == np.eye(4)])
    try:
        problem.solve(solver=cp.CLARABEL)
    except cp.error.SolverError:
        return None
    if e.value is None:
        return None
    return 0.5 * (e.value + e.value.conj().T)


def distinguishability_norm(model: GptModel, rho0: State, rho1: State) -> NormValue:
    """``D_G = max Tr e (rho0 - rho1)`` over effects ``e`` with ``e, I - e`` in the dual cone.

    Exact for PSD cones (half the trace norm) and for generator cones
    (linear program). For other cones, returns the best verified candidate
    effect, a lower bound, with ``exact=False``.
    """
    diff = H.as_hermitian(rho0.matrix - rho1.matrix, tol=1e-10)
    d = model.dim
    cone = model.cone
    if isinstance(cone, PSDCone):
        # the projector onto the positive part of rho0 - rho1 is the maximiser
        dec = H.spectral_decompose(diff)
        return NormValue(H.hs_inner(dec.apply(lambda w: (w > 0).astype(float)), diff), True)
    if isinstance(cone, GeneratorCone):
        # e = I/2 + h keeps the origin feasible: |<h, g>| <= Tr(g)/2
        g = cone.dual_matrix()
        half = 0.5 * np.array([H.trace(x) for x in cone.generators])
        a = np.vstack([g, -g])
        b = np.concatenate([half, half])
        _, value = maximize_free(H.to_coords(diff), a, b)
        return NormValue(value, True)

    candidates = []
    dec = H.spectral_decompose(diff)
    candidates.append(dec.apply(lambda w: (w > 0).astype(float)))
    if isinstance(cone, SeparableCone):
        candidates.append(SWAP)
        candidates.append(np.eye(4) - SWAP)
        sdp = _sep_norm_sdp(diff)
        if sdp is not None:
            # pull slightly toward I/2 so that boundary solver output stays in the slab
            for shrink in (0.0, 1e-9, 1e-7, 1e-5):
                candidate = (1 - shrink) * sdp + shrink * 0.5 * np.eye(4)
                candidates.append(candidate)
    best = 0.0
    for e in candidates:
        e = H.as_hermitian(e, tol=1e-8)
        value = H.hs_inner(e, diff)
        if value > best and _slab_valid(model, e):
            best = value
    return NormValue(best, False)


A3_RHO0 = np.array(
    [[2, 0, 0, 0], [0, 2, 1, 0], [0, 1, 2, 0], [0, 0, 0, 2]], dtype=complex
) / 8
A3_RHO1 = np.eye(4, dtype=complex) / 4
A3_M0 = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)
A3_M1 = np.array([[0, 0, 0, 0], [0, 1, -1, 0], [0, -1, 1, 0], [0, 0, 0, 0]], dtype=complex)

_s = 1 / np.sqrt(2)
A3_PRODUCT_DECOMPOSITION = ProductDecomposition(
    (
        (np.array([1, 1]) / 2, np.array([1, 1]) / 2),
        (np.array([1, 0]) / 2, np.array([1, -1]) / 2),
        (np.array([0, 1]) / 2, np.array([1, -1]) / 2),
        (np.array([1, -1]) * _s / 2, np.array([1, 1j]) / 2),
        (np.array([1, -1]) * _s / 2, np.array([1, -1j]) / 2),
        (np.array([1, 1j]) * _s / 2, np.array([1, 1j]) / 2),
        (np.array([1, -1j]) * _s / 2, np.array([1, -1j]) / 2),
    )
)


def sep_example(tol: float = 1e-9):
    """The two-qubit separable-cone tuple that attains the general bound.

    Returns ``(model, instance, measurement)`` with ``p = 1/2``; the
    error probability is 3/8 while the Helstrom bound is 7/16.
    """
    model = sep_model(tol)
    inst = DiscriminationInstance(validate_state(model, A3_RHO0), validate_state(model, A3_RHO1), 0.5)
    meas = validate_measurement(model, [A3_M0, A3_M1])
    return model, inst, meas
