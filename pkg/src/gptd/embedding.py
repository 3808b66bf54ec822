"""Embedding abstract models into Hermitian space and detecting non-quantum cones.

An abstract model lives on ``R^n`` with ``n = d^2``; :func:`embed_model`
builds a linear isomorphism onto ``Her(C^d)`` that turns the order unit into
the trace. :func:`detect_beyond_quantum` then either recognises the PSD cone
or produces an explicit state pair and measurement beating the Helstrom
bound.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import hermitian as H
from .cones import SWAP, GeneratorCone, GptModel, PSDCone, SeparableCone, validate_measurement
from .discrimination import AdvantageCertificate, construct_advantage
from .errors import (
    CannotContractError,
    ConeError,
    DimNotSquareError,
    OracleFailure,
    PreconditionError,
)
from .simplex import maximize_free


def _square_root(n: int) -> int:
    d = int(round(np.sqrt(n)))
    if d < 1 or d * d != n:
        raise DimNotSquareError(f"dimension {n} is not a perfect square")
    return d


@dataclass(frozen=True, eq=False)
class AbstractModel:
    """A GPT on ``R^dim_v``: cone generators as rows, order unit as a covector."""

    generators: np.ndarray
    unit: np.ndarray

    def __post_init__(self):
        gens = np.atleast_2d(np.asarray(self.generators, dtype=float))
        unit = np.asarray(self.unit, dtype=float).reshape(-1)
        if gens.shape[1] != unit.shape[0]:
            raise ValueError(f"generators have length {gens.shape[1]}, unit has length {unit.shape[0]}")
        if np.linalg.norm(unit) == 0.0:
            raise ConeError("the order unit is the zero covector")
        values = gens @ unit
        if np.any(values <= 0):
            bad = int(np.argmin(values))
            raise ConeError(f"order unit is not positive on generator {bad} (value {values[bad]!r})")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "unit", unit)

    @property
    def dim_v(self) -> int:
        return self.unit.shape[0]

    def random_state(self, rng: np.random.Generator) -> np.ndarray:
        """Random convex mixture of unit-normalized generators."""
        w = rng.dirichlet(np.ones(len(self.generators)))
        normalized = self.generators / (self.generators @ self.unit)[:, None]
        return w @ normalized

    def random_effect(self, rng: np.random.Generator) -> np.ndarray:
        """Random covector that is non-negative on the cone and below the unit."""
        e = rng.normal(size=self.dim_v)
        vals = self.generators @ e
        units = self.generators @ self.unit
        shift = max(0.0, float(np.max(-vals / units)))
        e = e + shift * self.unit
        top = float(np.max((self.generators @ e) / units))
        return e / top if top > 0 else e


@dataclass(frozen=True)
class HermBasis:
    elements: np.ndarray

    def gram_determinant(self) -> float:
        coords = np.array([H.to_coords(e) for e in self.elements])
        return float(np.linalg.det(coords @ coords.T))


def standard_hermitian_basis(d: int, last_trace: float = 1.0) -> HermBasis:
    """``d^2`` independent Hermitian matrices, all of trace 1 except the last.

    Off-diagonal units shifted by ``I/d`` and the first ``d-1`` diagonal
    units have trace 1; the last element is ``last_trace * E_dd``. When
    ``last_trace`` is (near) zero that element would vanish, so it is
    shifted by the traceless ``E_11 - E_dd`` instead.
    """
    if d < 1:
        raise ValueError("d must be at least 1")
    ortho = H.orthonormal_hermitian_basis(d)
    eye = np.eye(d) / d
    elements = [b + eye for b in ortho[d:]]
    elements += [ortho[k] for k in range(d - 1)]
    last = last_trace * ortho[d - 1]
    elements.append(last)
    basis = HermBasis(np.array(elements))
    if abs(basis.gram_determinant()) < 1e-12 and d > 1:
        elements[-1] = last + ortho[0] - ortho[d - 1]
        basis = HermBasis(np.array(elements))
    return basis


@dataclass(frozen=True, eq=False)
class IsoMap:
    """Linear map from abstract coordinates to Hermitian coordinates.

    States map as ``x -> f(x) / c`` and effects as ``e -> M`` with
    ``Tr(M f(x)) = c e(x)``, so outcome probabilities are unchanged.
    """

    matrix: np.ndarray
    target_dim: int
    c: float = 1.0

    def __post_init__(self):
        a = np.asarray(self.matrix, dtype=float)
        n = self.target_dim**2
        if a.shape != (n, n):
            raise ValueError(f"map must be {n}x{n}, got {a.shape}")
        probe = np.eye(n)
        try:
            sol = np.linalg.solve(a, probe)
        except np.linalg.LinAlgError as exc:
            raise ValueError("map is singular") from exc
        if np.max(np.abs(a @ sol - probe)) > 1e-8:
            raise ValueError("map is numerically singular")
        object.__setattr__(self, "matrix", a)

    def apply(self, x) -> np.ndarray:
        return H.from_coords(self.matrix @ np.asarray(x, dtype=float), self.target_dim)

    def map_state(self, x) -> np.ndarray:
        return H.as_hermitian(self.apply(x) / self.c, tol=1e-10)

    def map_effect(self, e) -> np.ndarray:
        coords = self.c * np.linalg.solve(self.matrix.T, np.asarray(e, dtype=float))
        return H.from_coords(coords, self.target_dim)

    def inverse_apply(self, m) -> np.ndarray:
        return np.linalg.solve(self.matrix, H.to_coords(m))


def _choose_slice_basis(am: AbstractModel) -> np.ndarray:
    """``n`` independent vectors with unit value 1, generators first."""
    n = am.dim_v
    u = am.unit
    w = u / (u @ u)
    candidates = list(am.generators / (am.generators @ u)[:, None])
    candidates += [e + (1.0 - e @ u) * w for e in np.eye(n)]
    candidates.append(w)
    chosen: list[np.ndarray] = []
    for v in candidates:
        trial = np.array(chosen + [v])
        if np.linalg.matrix_rank(trial, tol=1e-9) == len(trial):
            chosen.append(v)
        if len(chosen) == n:
            break
    x = np.array(chosen).T
    gram = np.linalg.det(x.T @ x)
    if len(chosen) < n or abs(gram) < 1e-12:
        raise ConeError("could not complete a basis on the unit slice")
    return x


def embed_model(am: AbstractModel, tol: float = 1e-9) -> tuple[GptModel, IsoMap]:
    """Quantum-like model isomorphic to ``am`` and the isomorphism onto it."""
    d = _square_root(am.dim_v)
    x = _choose_slice_basis(am)  # columns, u(x_i) = 1
    last_trace = float(am.unit @ x[:, -1])
    basis = standard_hermitian_basis(d, last_trace)
    y = np.array([H.to_coords(e) for e in basis.elements]).T
    f = IsoMap(y @ np.linalg.inv(x), d, 1.0)
    cone = GeneratorCone([f.apply(g) for g in am.generators], tol=tol)
    return GptModel(cone), f


def probability_preservation_check(am: AbstractModel, f: IsoMap, trials: int = 100, seed: int = 0) -> float:
    """Largest deviation between abstract and embedded outcome probabilities."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        x = am.random_state(rng)
        e = am.random_effect(rng)
        rho = f.map_state(x)
        m = f.map_effect(e)
        worst = max(worst, abs(H.hs_inner(m, rho) - float(e @ x)))
    return worst


@dataclass(frozen=True, eq=False)
class Contraction:
    model: GptModel
    iso: IsoMap
    mixing: float

    def __iter__(self):
        return iter((self.model, self.iso))


def _mixing_map(d: int, lam: float) -> IsoMap:
    n = d * d
    tr = H.to_coords(np.eye(d))
    return IsoMap((1 - lam) * np.eye(n) + lam * np.outer(tr / d, tr), d, 1.0)


def contract_into_quantum(model: GptModel, margin: float = 1e-9) -> Contraction:
    """Mix the cone toward ``Tr(x) I/d`` just enough to land inside the PSD cone.

    The map ``x -> (1-l) x + l Tr(x) I/d`` is linear, trace preserving and
    invertible for ``l < 1``. Because the smallest eigenvalue of a mixed
    generator is affine in ``l``, the minimal ``l`` is computed in closed
    form.
    """
    d = model.dim
    cone = model.cone
    if isinstance(cone, (PSDCone, SeparableCone)):
        return Contraction(model, _mixing_map(d, 0.0), 0.0)
    lam = 0.0
    for i, g in enumerate(cone.generators):
        lmin = H.lambda_min(g)
        if lmin >= -margin:
            continue
        t = H.trace(g)
        if t <= 0:
            raise CannotContractError(f"generator {i} has non-positive trace and is not PSD", i)
        # (1-l) lmin + l t/d >= margin
        need = (margin - lmin) / (t / d - lmin)
        lam = max(lam, need)
    if lam >= 1.0:
        raise CannotContractError("required mixing is not below 1")
    iso = _mixing_map(d, lam)
    gens = [H.as_hermitian((1 - lam) * g + lam * H.trace(g) * np.eye(d) / d, tol=1e-10) for g in cone.generators]
    return Contraction(GptModel(GeneratorCone(gens, tol=cone.tol)), iso, lam)


def _cone_inside_psd(cone) -> bool:
    if isinstance(cone, (PSDCone, SeparableCone)):
        return True
    return all(H.lambda_min(g) >= -cone.tol for g in cone.generators)


def find_nonpsd_dual_effect(model: GptModel, seed: int = 0, restarts: int = 8, iterations: int = 20):
    """Search the dual cone for an element with a negative eigenvalue.

    For generator cones this alternates between a linear program (fix a
    unit vector ``v``, minimise ``<v|M|v>`` over the dual cone within a
    coordinate box) and an eigen-step (``v`` := lowest eigenvector of
    ``M``), from seeded random starts. Returns ``None`` when nothing with
    ``lambda_min < -1e-6`` (relative to the largest eigenvalue) is found.
    """
    cone = model.cone
    if isinstance(cone, PSDCone):
        return None
    if isinstance(cone, SeparableCone):
        return SWAP
    if not isinstance(cone, GeneratorCone):
        raise TypeError(f"unsupported cone {cone!r}")
    d = model.dim
    g = cone.dual_matrix()
    rng = np.random.default_rng(seed)
    best, best_score = None, -1e-6
    for _ in range(restarts):
        v = H.random_unit_vector(d, rng)
        for _ in range(iterations):
            c = -H.to_coords(H.projector(v))
            coords, _ = maximize_free(c, -g, np.zeros(len(g)), bound=1.0)
            m = H.from_coords(coords, d)
            dec = H.spectral_decompose(m)
            if dec.lambda_max <= 0:
                break
            score = -dec.lambda_min / dec.lambda_max
            if score > best_score and cone.dual_contains(m).is_in:
                best, best_score = m, score
            new_v = dec.eigenvectors[:, 0]
            if abs(abs(np.vdot(new_v, v)) - 1.0) < 1e-12:
                break
            v = new_v
    return best


class Quantumness(enum.Enum):
    IS_QUANTUM = "IsQuantum"
    BEYOND_QUANTUM = "BeyondQuantum"


@dataclass(frozen=True, eq=False)
class QuantumnessVerdict:
    status: Quantumness
    reason: str
    witness: np.ndarray | None = None
    certificate: AdvantageCertificate | None = field(default=None, repr=False)


def detect_beyond_quantum(model: GptModel, seed: int = 0, safety: float = 0.99) -> QuantumnessVerdict:
    """Decide whether a model whose cone sits inside the PSD cone is quantum theory.

    A non-PSD dual element ``M`` is rescaled to ``M' = M / lambda_max(M)``;
    ``{M', I - M'}`` is then a measurement with spread above one, and an
    advantage certificate is constructed for it. A failed search raises
    :class:`OracleFailure`; it never yields ``IS_QUANTUM``.
    """
    cone = model.cone
    if not _cone_inside_psd(cone):
        raise PreconditionError("cone is not inside the PSD cone; contract it first")
    if isinstance(cone, PSDCone):
        return QuantumnessVerdict(Quantumness.IS_QUANTUM, "psd-cone")
    if isinstance(cone, GeneratorCone) and model.dim == 1:
        # every pointed cone in Her(C^1) = R is the ray of non-negative numbers
        return QuantumnessVerdict(Quantumness.IS_QUANTUM, "one-dimensional")
    witness = find_nonpsd_dual_effect(model, seed=seed)
    if witness is None:
        raise OracleFailure("no non-PSD dual element found; quantumness not decided")
    m0 = H.as_hermitian(witness / H.lambda_max(witness), tol=1e-10)
    m1 = H.as_hermitian(np.eye(model.dim) - m0)
    meas = validate_measurement(model, [m0, m1])
    cert = construct_advantage(model, meas, safety)
    return QuantumnessVerdict(Quantumness.BEYOND_QUANTUM, "advantage", witness=m0, certificate=cert)
