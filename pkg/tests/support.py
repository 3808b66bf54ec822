"""Model builders, samplers and independent oracles shared by the tests.

Oracles here deliberately avoid the package's own eigensolver and bound
formulas: they use LAPACK via ``numpy.linalg``, exact rational arithmetic,
or brute-force search.
"""

from fractions import Fraction

import numpy as np

from gptd import hermitian as H
from gptd.cones import SWAP, GeneratorCone, GptModel, State

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SX, SY, SZ)


def bloch(n) -> np.ndarray:
    """``(I + n.sigma) / 2``."""
    return 0.5 * (np.eye(2) + sum(c * s for c, s in zip(n, PAULIS)))


def octahedral_model(radius: float = 0.2) -> GptModel:
    """Qubit states whose Bloch vectors lie in an octahedron of the given radius."""
    gens = []
    for s in PAULIS:
        for sign in (1.0, -1.0):
            gens.append(0.5 * (np.eye(2) + sign * radius * s))
    return GptModel(GeneratorCone(gens))


def mixed_pure_states_model(d: int, lam: float, seed: int, count: int | None = None) -> GptModel:
    """Random pure states mixed toward ``I/d`` with weight ``lam``."""
    rng = np.random.default_rng(seed)
    count = count or 4 * d * d
    gens = [(1 - lam) * H.projector(H.random_unit_vector(d, rng)) + lam * np.eye(d) / d for _ in range(count)]
    return GptModel(GeneratorCone(gens))


def eigvalsh(m) -> np.ndarray:
    return np.linalg.eigvalsh(np.asarray(m))


def trace_norm_oracle(m) -> float:
    return float(np.sum(np.abs(np.linalg.eigvalsh(np.asarray(m)))))


def fractions_matrix(rows, scale=1):
    return [[Fraction(x) / scale for x in row] for row in rows]


def exact_trace_product(a, b) -> Fraction:
    """``Tr(ab)`` for real rational matrices, by explicit loops."""
    n = len(a)
    return sum(a[i][k] * b[k][i] for i in range(n) for k in range(n))


def fibonacci_sphere(n: int) -> np.ndarray:
    i = np.arange(n) + 0.5
    z = 1 - 2 * i / n
    phi = np.pi * (1 + 5**0.5) * i
    r = np.sqrt(1 - z * z)
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


def projective_errors(rho0, rho1, p, directions) -> np.ndarray:
    """Error of ``{P_n, I - P_n}`` for each Bloch direction ``n``, plus the trivial tests."""
    rho0 = np.asarray(rho0)
    rho1 = np.asarray(rho1)
    errs = []
    for n in directions:
        proj = bloch(n)
        errs.append(p * np.trace(rho0 @ (np.eye(2) - proj)).real + (1 - p) * np.trace(rho1 @ proj).real)
    errs.append(1 - p)
    errs.append(p)
    return np.array(errs)


def random_effect_in_unit_interval(d: int, rng) -> np.ndarray:
    """PSD matrix with eigenvalues uniform in ``[0, 1]``."""
    q, _ = np.linalg.qr(rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)))
    return H.as_hermitian(q @ np.diag(rng.uniform(0, 1, d)) @ q.conj().T, tol=1e-10)


def random_local_unitary(rng) -> np.ndarray:
    us = []
    for _ in range(2):
        q, r = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
        us.append(q * (np.diag(r) / np.abs(np.diag(r))))
    return np.kron(us[0], us[1])


def random_separable_state(rng, terms: int = 4) -> np.ndarray:
    w = rng.dirichlet(np.ones(terms))
    rho = np.zeros((4, 4), dtype=complex)
    for k in range(terms):
        v = np.kron(H.random_unit_vector(2, rng), H.random_unit_vector(2, rng))
        rho += w[k] * np.outer(v, v.conj())
    return H.as_hermitian(rho, tol=1e-10)


def swap_family_effect(rng, r: float) -> np.ndarray:
    """``alpha U SWAP U^H + beta I`` with local ``U``; in the separable dual cone, spread ``r``.

    ``beta`` is drawn so that ``I`` minus the effect is also in that dual.
    """
    alpha = r / 2
    beta = rng.uniform(0, 1 - alpha)
    u = random_local_unitary(rng)
    return H.as_hermitian(alpha * u @ SWAP @ u.conj().T + beta * np.eye(4), tol=1e-10)


def ppt_family_effect(rng) -> np.ndarray:
    """Scaled partial transpose of a random PSD matrix; ``I`` minus it is PSD."""
    q = H.random_density_matrix(4, rng)
    w = H.partial_transpose(q, 2, 2)
    return H.as_hermitian(rng.uniform(0.2, 1.0) * w / eigvalsh(w)[-1], tol=1e-10)


def unchecked_state(model, rho) -> State:
    """Wrap a matrix known to be a state without re-running cone membership."""
    return State(H.as_hermitian(rho, tol=1e-10), model)
