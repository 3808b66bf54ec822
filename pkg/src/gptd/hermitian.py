"""Dense Hermitian linear algebra.

Matrices are plain complex ``numpy`` arrays. :func:`as_hermitian` is the single
entry point that validates and freezes them; every other function in the
package assumes its inputs went through it (or were built from such inputs by
operations that preserve Hermiticity).

The eigensolver is a cyclic complex Jacobi iteration. It is slower than LAPACK
but deterministic and accurate to a few ulps on the small matrices this
package works with (dimension 16 or less).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DimensionMismatchError, NotHermitianError, NumericalFailure

HERMITICITY_TOL = 1e-12
DEGENERACY_TOL = 1e-9
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100


def as_hermitian(m, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Return ``m`` as a read-only complex Hermitian array.

    Asymmetry up to ``tol`` (max-abs of ``m - m^H``) is removed by
    symmetrization; anything larger raises :class:`NotHermitianError`.
    """
    a = np.array(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise NotHermitianError(f"expected a non-empty square matrix, got shape {a.shape}")
    diff = a - a.conj().T
    asym = np.abs(diff).max()
    # written so that NaN (from non-finite entries) also fails
    if not asym <= tol:
        if not np.isfinite(a).all():
            raise NotHermitianError("matrix has non-finite entries")
        raise NotHermitianError(f"matrix is not Hermitian (asymmetry {asym:.3e} > {tol:.1e})")
    a -= 0.5 * diff
    a.flags.writeable = False
    return a


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def identity(d: int) -> np.ndarray:
    return _frozen(np.eye(d, dtype=complex))


def projector(v) -> np.ndarray:
    """Rank-one projector ``|v><v|`` (``v`` is used as given, not normalized)."""
    v = np.asarray(v, dtype=complex).reshape(-1)
    return _frozen(np.outer(v, v.conj()))


def jacobi_eigh(m: np.ndarray, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS):
    """Eigenvalues (ascending) and eigenvector columns of a Hermitian matrix.

    Cyclic Jacobi sweeps; each rotation first removes the phase of the pivot
    entry and then applies a real Givens rotation. Iteration stops when the
    off-diagonal Frobenius norm falls below ``tol * ||m||_F``.
    """
    a = np.array(m, dtype=complex)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = np.linalg.norm(a)
    threshold = tol * scale

    offdiag = ~np.eye(n, dtype=bool)

    def off_norm():
        return np.linalg.norm(a[offdiag])

    off = off_norm()
    sweeps = 0
    while off > threshold:
        if sweeps >= max_sweeps:
            raise NumericalFailure(
                f"Jacobi eigensolver did not converge in {max_sweeps} sweeps", residual=off
            )
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                phase = apq / mag
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (aqq - app) / (2.0 * mag)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                    if theta < 0:
                        t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # U acts on columns p, q: U = [[c, s], [-s conj(phase), c conj(phase)]]
                sb = s * phase.conjugate()
                cb = c * phase.conjugate()
                ap, aq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * ap - sb * aq
                a[:, q] = s * ap + cb * aq
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * rp - sb.conjugate() * rq
                a[q, :] = s * rp + cb.conjugate() * rq
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - sb * vq
                v[:, q] = s * vp + cb * vq
        sweeps += 1
        off = off_norm()
    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def _group_indices(w: np.ndarray, tol: float) -> tuple[tuple[int, ...], ...]:
    groups = []
    current = [0]
    for i in range(1, len(w)):
        if w[i] - w[i - 1] <= tol:
            current.append(i)
        else:
            groups.append(tuple(current))
            current = [i]
    groups.append(tuple(current))
    return tuple(groups)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Ascending eigenvalues, orthonormal eigenvector columns and eigenspace groups."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    groups: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    @property
    def lambda_min(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[-1])

    def eigenspace(self, group: int) -> np.ndarray:
        """Orthonormal basis (columns) of the ``group``-th eigenspace."""
        return self.eigenvectors[:, list(self.groups[group])]

    def min_eigenspace(self) -> np.ndarray:
        return self.eigenspace(0)

    def max_eigenspace(self) -> np.ndarray:
        return self.eigenspace(len(self.groups) - 1)

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def apply(self, fn) -> np.ndarray:
        """Matrix function ``sum_i fn(lambda_i) |v_i><v_i|``."""
        v = self.eigenvectors
        return as_hermitian((v * fn(self.eigenvalues)) @ v.conj().T, tol=1e-10)


def spectral_decompose(m, degeneracy_tol: float = DEGENERACY_TOL) -> SpectralDecomposition:
    """Spectral decomposition of a Hermitian matrix.

    Eigenvalues closer than ``degeneracy_tol`` (absolute gap between
    neighbours) are merged into one eigenspace group.
    """
    m = as_hermitian(m)
    w, v = jacobi_eigh(m)
    w.flags.writeable = False
    v.flags.writeable = False
    return SpectralDecomposition(w, v, _group_indices(w, degeneracy_tol))


def eigvalsh(m) -> np.ndarray:
    """Ascending eigenvalues."""
    return jacobi_eigh(as_hermitian(m))[0]


def lambda_min(m) -> float:
    return float(eigvalsh(m)[0])


def lambda_max(m) -> float:
    return float(eigvalsh(m)[-1])


def is_psd(m, tol: float = 1e-10) -> bool:
    return lambda_min(m) >= -tol


def positive_negative_parts(m) -> tuple[np.ndarray, np.ndarray]:
    """Split ``m`` into its positive and negative parts ``(m_plus, m_minus)``.

    ``m_plus`` is PSD, ``m_minus`` is negative semidefinite, they sum to ``m``
    and have orthogonal supports.

    >>> p, n = positive_negative_parts(np.diag([3.0, -1.0]))
    >>> np.diag(p).real.tolist(), np.diag(n).real.tolist()
    ([3.0, 0.0], [0.0, -1.0])
    """
    dec = spectral_decompose(m)
    return dec.apply(lambda w: np.maximum(w, 0.0)), dec.apply(lambda w: np.minimum(w, 0.0))


def trace_norm(m) -> float:
    """Sum of the absolute eigenvalues."""
    return float(np.sum(np.abs(eigvalsh(m))))


def trace(m) -> float:
    return float(np.trace(np.asarray(m)).real)


def tensor_product(a, b) -> np.ndarray:
    return as_hermitian(np.kron(as_hermitian(a), as_hermitian(b)))


def partial_transpose(m, dim_a: int, dim_b: int) -> np.ndarray:
    """Transpose on the second tensor factor: ``(i,k; j,l) -> (i,l; j,k)``."""
    m = as_hermitian(m)
    if m.shape[0] != dim_a * dim_b:
        raise DimensionMismatchError(
            f"matrix of dimension {m.shape[0]} is not {dim_a}x{dim_b} bipartite"
        )
    t = m.reshape(dim_a, dim_b, dim_a, dim_b).transpose(0, 3, 2, 1)
    return _frozen(t.reshape(dim_a * dim_b, dim_a * dim_b).copy())


def _check_same_dim(a, b):
    if np.shape(a) != np.shape(b):
        raise DimensionMismatchError(f"dimension mismatch: {np.shape(a)} vs {np.shape(b)}")


def hs_inner(a, b) -> float:
    """Hilbert-Schmidt pairing ``Tr(ab)``; real for Hermitian inputs."""
    _check_same_dim(a, b)
    return float(np.sum(np.asarray(a) * np.asarray(b).conj()).real)


def hs_norm(a) -> float:
    return float(np.linalg.norm(np.asarray(a)))


@lru_cache(maxsize=None)
def _orthonormal_basis(d: int) -> np.ndarray:
    basis = []
    for k in range(d):
        e = np.zeros((d, d), dtype=complex)
        e[k, k] = 1.0
        basis.append(e)
    r = 1.0 / np.sqrt(2.0)
    for k in range(d):
        for l in range(k + 1, d):
            e = np.zeros((d, d), dtype=complex)
            e[k, l] = e[l, k] = r
            basis.append(e)
            e = np.zeros((d, d), dtype=complex)
            e[k, l] = -1j * r
            e[l, k] = 1j * r
            basis.append(e)
    out = np.array(basis)
    out.flags.writeable = False
    return out


def orthonormal_hermitian_basis(d: int) -> np.ndarray:
    """Stack of ``d*d`` Hermitian matrices orthonormal under ``hs_inner``.

    Diagonal units come first, then the symmetric and antisymmetric
    off-diagonal pairs.
    """
    return _orthonormal_basis(d)


def to_coords(m) -> np.ndarray:
    """Real coordinates of a Hermitian matrix in the orthonormal basis.

    The map is an isometry: ``hs_inner(a, b) == to_coords(a) @ to_coords(b)``.
    """
    m = np.asarray(m)
    basis = _orthonormal_basis(m.shape[0])
    return np.einsum("kij,ij->k", basis.conj(), m).real


def from_coords(x, d: int) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (d * d,):
        raise DimensionMismatchError(f"expected {d * d} coordinates, got {x.shape}")
    return as_hermitian(np.einsum("k,kij->ij", x, _orthonormal_basis(d)), tol=1e-10)


def random_hermitian(d: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return as_hermitian(scale * 0.5 * (g + g.conj().T))


def random_density_matrix(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random density matrix from the induced (Ginibre) measure."""
    k = d if rank is None else rank
    g = rng.normal(size=(d, k)) + 1j * rng.normal(size=(d, k))
    rho = g @ g.conj().T
    return as_hermitian(rho / np.trace(rho).real, tol=1e-10)


def random_unit_vector(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)
