"""Dense complex linear algebra on small Hilbert spaces.

Conventions used throughout the package:

* matrices are numpy ``complex128`` arrays;
* a subsystem profile ``dims`` lists local dimensions with the leftmost
  factor most significant, so the joint index is
  ``i = i_1*d_2*...*d_N + ... + i_N``;
* every Hilbert space has total dimension at most :data:`MAX_DIM`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, InvalidStateError, NotHermitianError

MAX_DIM = 64
DEFAULT_TOL = 1e-9


def as_matrix(m) -> np.ndarray:
    """Return ``m`` as a finite 2-D complex array (copy-free when possible)."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {a.shape}")
    if a.size == 0:
        raise DimensionError("empty matrix")
    if not np.all(np.isfinite(a)):
        raise DimensionError("matrix has non-finite entries")
    return a


def check_profile(dims: Sequence[int], size: int | None = None) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims:
        raise DimensionError("dimension profile must be nonempty")
    if any(d < 1 for d in dims):
        raise DimensionError(f"dimensions must be positive, got {dims}")
    if size is not None and prod(dims) != size:
        raise DimensionError(f"profile {dims} does not multiply to {size}")
    return dims


@dataclass(frozen=True)
class DensityCheck:
    """Outcome of :func:`is_density`; truthy iff every invariant holds."""

    ok: bool
    hermitian_error: float
    trace_error: float
    min_eigenvalue: float
    violations: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def is_density(m, dims: Sequence[int] | None = None, tol: float = DEFAULT_TOL) -> DensityCheck:
    """Check the three density-operator invariants at absolute tolerance ``tol``.

    Never raises on numeric input; the returned diagnostics name every
    violated invariant (``"hermitian"``, ``"trace"``, ``"psd"``, ``"profile"``).
    """
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.size == 0:
        return DensityCheck(False, np.inf, np.inf, -np.inf, ("square",))
    if not np.all(np.isfinite(a)):
        return DensityCheck(False, np.inf, np.inf, -np.inf, ("finite",))
    violations = []
    if dims is not None and prod(dims) != a.shape[0]:
        violations.append("profile")
    herm_err = float(np.max(np.abs(a - a.conj().T)))
    tr_err = float(abs(np.trace(a) - 1.0))
    min_ev = float(np.linalg.eigvalsh((a + a.conj().T) / 2)[0])
    if herm_err > tol:
        violations.append("hermitian")
    if tr_err > tol:
        violations.append("trace")
    if min_ev < -tol:
        violations.append("psd")
    return DensityCheck(not violations, herm_err, tr_err, min_ev, tuple(violations))


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Validated density matrix together with its subsystem profile.

    The stored matrix is read-only. Construction raises
    :class:`InvalidStateError` if the matrix is not Hermitian, unit-trace
    and positive semidefinite within ``tol``.
    """

    matrix: np.ndarray
    dims: tuple[int, ...] = field(default=None)
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        a = as_matrix(self.matrix)
        if a.shape[0] != a.shape[1]:
            raise DimensionError(f"density matrix must be square, got {a.shape}")
        if a.shape[0] > MAX_DIM:
            raise DimensionError(f"dimension {a.shape[0]} exceeds the cap of {MAX_DIM}")
        dims = (a.shape[0],) if self.dims is None else self.dims
        dims = check_profile(dims, a.shape[0])
        check = is_density(a, dims, self.tol)
        if not check:
            raise InvalidStateError(
                f"not a density operator ({', '.join(check.violations)}): "
                f"hermitian error {check.hermitian_error:.3g}, "
                f"trace error {check.trace_error:.3g}, "
                f"min eigenvalue {check.min_eigenvalue:.3g}"
            )
        a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "matrix", a)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __repr__(self) -> str:
        return f"DensityOperator(dims={self.dims})"


def as_density(x, dims: Sequence[int] | None = None, tol: float = DEFAULT_TOL) -> DensityOperator:
    """Coerce a matrix or :class:`DensityOperator` to a :class:`DensityOperator`."""
    if isinstance(x, DensityOperator):
        if dims is not None and tuple(dims) != x.dims:
            return DensityOperator(x.matrix, tuple(dims), tol)
        return x
    return DensityOperator(x, None if dims is None else tuple(dims), tol)


def _matrix_and_dims(x, dims):
    if isinstance(x, DensityOperator):
        return x.matrix, x.dims if dims is None else check_profile(dims, x.dim)
    a = as_matrix(x)
    return a, check_profile(dims if dims is not None else (a.shape[0],), a.shape[0])


def kron(*ms) -> np.ndarray:
    """Kronecker product of one or more matrices, left factor most significant."""
    if not ms:
        raise DimensionError("kron needs at least one factor")
    out = as_matrix(ms[0])
    for m in ms[1:]:
        out = np.kron(out, as_matrix(m))
    return out


def kron_states(*states: DensityOperator) -> DensityOperator:
    """Tensor product of density operators, concatenating their profiles."""
    dims = tuple(d for s in states for d in s.dims)
    return DensityOperator(kron(*(s.matrix for s in states)), dims)


def partial_trace(rho, keep: Iterable[int], dims: Sequence[int] | None = None):
    """Trace out every subsystem not listed in ``keep``.

    Returns a :class:`DensityOperator` when given one, otherwise an array.
    ``keep`` is returned in ascending order regardless of how it is listed.
    """
    a, dims = _matrix_and_dims(rho, dims)
    n = len(dims)
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise DimensionError("keep must name at least one subsystem")
    if keep[0] < 0 or keep[-1] >= n:
        raise DimensionError(f"subsystem index out of range for profile {dims}")
    traced = [k for k in range(n) if k not in keep]
    t = a.reshape(dims + dims)
    # einsum labels: row axes 0..n-1, column axes n..2n-1, traced pairs share a label
    row = list(range(n))
    col = [n + k if k in keep else k for k in range(n)]
    out_labels = keep + [n + k for k in keep]
    reduced = np.einsum(t, row + col, out_labels)
    kd = tuple(dims[k] for k in keep)
    m = reduced.reshape(prod(kd), prod(kd))
    if not traced:
        m = a.copy()
    if isinstance(rho, DensityOperator):
        return DensityOperator(m, kd, rho.tol)
    return m


def partial_transpose(rho, subsystems, dims: Sequence[int] | None = None) -> np.ndarray:
    """Transpose the listed subsystem(s); ``subsystems`` is an int or an iterable."""
    a, dims = _matrix_and_dims(rho, dims)
    n = len(dims)
    if isinstance(subsystems, (int, np.integer)):
        subsystems = [int(subsystems)]
    subs = sorted(set(int(s) for s in subsystems))
    if any(s < 0 or s >= n for s in subs):
        raise DimensionError(f"subsystem index out of range for profile {dims}")
    t = a.reshape(dims + dims)
    axes = list(range(2 * n))
    for s in subs:
        axes[s], axes[n + s] = axes[n + s], axes[s]
    return t.transpose(axes).reshape(a.shape)


def permute_subsystems(rho, perm: Sequence[int], dims: Sequence[int] | None = None):
    """Reorder tensor factors so that new factor ``k`` is old factor ``perm[k]``."""
    a, dims = _matrix_and_dims(rho, dims)
    n = len(dims)
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(n)):
        raise DimensionError(f"{perm} is not a permutation of {n} subsystems")
    t = a.reshape(dims + dims)
    m = t.transpose(perm + [n + p for p in perm]).reshape(a.shape)
    new_dims = tuple(dims[p] for p in perm)
    if isinstance(rho, DensityOperator):
        return DensityOperator(m, new_dims, rho.tol)
    return m


def eig_hermitian(a, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix."""
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got {a.shape}")
    err = float(np.max(np.abs(a - a.conj().T)))
    if err > tol:
        raise NotHermitianError(f"matrix is not Hermitian (max deviation {err:.3g})")
    return np.linalg.eigh((a + a.conj().T) / 2)


def trace_distance(rho, sigma) -> float:
    """Half the trace norm of ``rho - sigma``."""
    a = rho.matrix if isinstance(rho, DensityOperator) else as_matrix(rho)
    b = sigma.matrix if isinstance(sigma, DensityOperator) else as_matrix(sigma)
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {b.shape}")
    d = a - b
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh((d + d.conj().T) / 2))))


def max_entry_distance(a, b) -> float:
    a = np.asarray(a.matrix if isinstance(a, DensityOperator) else a)
    b = np.asarray(b.matrix if isinstance(b, DensityOperator) else b)
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.max(np.abs(a - b)))


def ginibre_matrix(dim: int, rng: np.random.Generator) -> np.ndarray:
    return (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)


def rng_from_seed(seed: int) -> np.random.Generator:
    return np.random.default_rng(int(seed) & 0xFFFF_FFFF_FFFF_FFFF)


def random_density(dim: int, seed: int, dims: Sequence[int] | None = None) -> DensityOperator:
    """Ginibre state ``G G^† / Tr(G G^†)`` drawn from a PCG64 stream seeded by ``seed``."""
    if dim < 1:
        raise DimensionError("dim must be positive")
    g = ginibre_matrix(dim, rng_from_seed(seed))
    m = g @ g.conj().T
    m = (m + m.conj().T) / 2
    return DensityOperator(m / np.trace(m).real, dims)


def random_pure(dim: int, seed: int, dims: Sequence[int] | None = None) -> DensityOperator:
    rng = rng_from_seed(seed)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return pure(v, dims)


def random_unitary(dim: int, seed: int) -> np.ndarray:
    """Haar unitary via QR of a Ginibre matrix with phase correction."""
    q, r = np.linalg.qr(ginibre_matrix(dim, rng_from_seed(seed)))
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def basis_projector(dim: int, index: int) -> np.ndarray:
    """``|index><index|`` in dimension ``dim``."""
    if dim < 1 or not 0 <= index < dim:
        raise DimensionError(f"basis index {index} out of range for dimension {dim}")
    p = np.zeros((dim, dim), dtype=complex)
    p[index, index] = 1.0
    return p


def pure(vector, dims: Sequence[int] | None = None) -> DensityOperator:
    """Projector onto the normalized ``vector``."""
    v = np.asarray(vector, dtype=complex).reshape(-1)
    nrm = np.linalg.norm(v)
    if nrm == 0:
        raise InvalidStateError("zero vector has no projector")
    v = v / nrm
    return DensityOperator(np.outer(v, v.conj()), dims)


def maximally_mixed(dim: int, dims: Sequence[int] | None = None) -> DensityOperator:
    return DensityOperator(np.eye(dim, dtype=complex) / dim, dims)


def max_coherent(dim: int, dims: Sequence[int] | None = None) -> DensityOperator:
    """Uniform superposition of all computational basis states."""
    return pure(np.ones(dim), dims)


def max_entangled(d: int) -> DensityOperator:
    """``|Ω><Ω|`` with ``|Ω> = Σ_i |ii>/√d`` on profile ``(d, d)``."""
    v = np.eye(d, dtype=complex).reshape(-1)
    return pure(v, (d, d))


BELL_VECTORS = {
    "phi_plus": np.array([1, 0, 0, 1]) / np.sqrt(2),
    "phi_minus": np.array([1, 0, 0, -1]) / np.sqrt(2),
    "psi_plus": np.array([0, 1, 1, 0]) / np.sqrt(2),
    "psi_minus": np.array([0, 1, -1, 0]) / np.sqrt(2),
}


def bell_state(name: str = "phi_plus") -> DensityOperator:
    try:
        return pure(BELL_VECTORS[name], (2, 2))
    except KeyError:
        raise ValueError(f"unknown Bell state {name!r}; choose from {sorted(BELL_VECTORS)}") from None


def werner_state(p: float) -> DensityOperator:
    """``p |φ+><φ+| + (1-p) I/4`` on two qubits."""
    m = p * bell_state("phi_plus").matrix + (1 - p) * np.eye(4) / 4
    return DensityOperator(m, (2, 2))


def hermitian_basis(dim: int) -> list[np.ndarray]:
    """Trace-orthonormal basis of the real space of ``dim x dim`` Hermitian matrices."""
    out = []
    for j in range(dim):
        out.append(basis_projector(dim, j))
    for j in range(dim):
        for k in range(j + 1, dim):
            s = np.zeros((dim, dim), dtype=complex)
            s[j, k] = s[k, j] = 1 / np.sqrt(2)
            out.append(s)
            a = np.zeros((dim, dim), dtype=complex)
            a[j, k] = -1j / np.sqrt(2)
            a[k, j] = 1j / np.sqrt(2)
            out.append(a)
    return out


def density_spanning_set(dim: int) -> list[DensityOperator]:
    """``dim**2`` density operators whose real span is every Hermitian matrix.

    Basis projectors plus, for each pair ``j < k``, the states
    ``(|j>+|k>)/√2`` and ``(|j>+i|k>)/√2``.
    """
    out = [DensityOperator(basis_projector(dim, j)) for j in range(dim)]
    for j in range(dim):
        for k in range(j + 1, dim):
            for phase in (1, 1j):
                v = np.zeros(dim, dtype=complex)
                v[j], v[k] = 1, phase
                out.append(pure(v))
    return out
