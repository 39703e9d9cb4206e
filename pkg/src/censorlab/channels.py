"""Quantum channels in Kraus form.

Superoperators act on column-stacked vectors, ``vec(A) = A.T.reshape(-1)``,
so that ``vec(K A K^†) = (conj(K) ⊗ K) vec(A)``.  Choi matrices use the
normalized convention ``(id ⊗ Λ)(|Ω><Ω|)`` with the input factor first,
which makes them density operators on ``(in_dim, out_dim)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from math import prod
from typing import Sequence

import numpy as np

from .errors import ChannelError, DimensionError
from .qmath import (
    DEFAULT_TOL,
    MAX_DIM,
    DensityOperator,
    as_density,
    as_matrix,
    check_profile,
    partial_transpose,
    trace_distance,
)

FIXED_POINT_WINDOW = 1e-8
PPT_CONCLUSIVE_DIM = 6


def vec(a: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization."""
    return np.asarray(a).T.reshape(-1)


def unvec(v: np.ndarray, rows: int, cols: int | None = None) -> np.ndarray:
    cols = rows if cols is None else cols
    return np.asarray(v).reshape(cols, rows).T


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """A CPTP map ``ρ -> Σ_k K_k ρ K_k^†``.

    ``check=False`` skips the trace-preservation test so that invalid Kraus
    lists can still be built and handed to :func:`is_cptp`.
    """

    kraus_ops: tuple[np.ndarray, ...]
    in_dims: tuple[int, ...] = None
    out_dims: tuple[int, ...] = None
    label: str = ""
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        ops = [as_matrix(k) for k in self.kraus_ops]
        if not ops:
            raise ChannelError("a channel needs at least one Kraus operator")
        shape = ops[0].shape
        if any(k.shape != shape for k in ops):
            raise ChannelError("Kraus operators must share one shape")
        out_dim, in_dim = shape
        if max(in_dim, out_dim) > MAX_DIM:
            raise DimensionError(f"channel dimension exceeds the cap of {MAX_DIM}")
        in_dims = check_profile(self.in_dims if self.in_dims is not None else (in_dim,), in_dim)
        out_dims = check_profile(
            self.out_dims if self.out_dims is not None else (in_dims if out_dim == in_dim else (out_dim,)),
            out_dim,
        )
        frozen = []
        for k in ops:
            k = k.copy()
            k.setflags(write=False)
            frozen.append(k)
        object.__setattr__(self, "kraus_ops", tuple(frozen))
        object.__setattr__(self, "in_dims", in_dims)
        object.__setattr__(self, "out_dims", out_dims)
        if self.check:
            err = tp_error(self)
            if err > DEFAULT_TOL:
                raise ChannelError(f"Kraus operators are not trace preserving (max error {err:.3g})")

    @property
    def in_dim(self) -> int:
        return self.kraus_ops[0].shape[1]

    @property
    def out_dim(self) -> int:
        return self.kraus_ops[0].shape[0]

    def __call__(self, rho) -> DensityOperator:
        return apply(self, rho)

    def __repr__(self) -> str:
        name = f" {self.label!r}" if self.label else ""
        return f"KrausChannel{name}({len(self.kraus_ops)} ops, {self.in_dims} -> {self.out_dims})"


def tp_error(ch: KrausChannel) -> float:
    s = sum(k.conj().T @ k for k in ch.kraus_ops)
    return float(np.max(np.abs(s - np.eye(ch.in_dim))))


def identity_channel(dims: Sequence[int] | int) -> KrausChannel:
    dims = (dims,) if isinstance(dims, (int, np.integer)) else tuple(dims)
    return KrausChannel((np.eye(prod(dims)),), dims, dims, label="identity")


def unitary_channel(u, dims: Sequence[int] | None = None, label: str = "unitary") -> KrausChannel:
    u = as_matrix(u)
    err = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
    if u.shape[0] != u.shape[1] or err > 1e-10:
        raise ChannelError("unitary channel needs a square unitary matrix")
    return KrausChannel((u,), dims, dims, label=label)


def apply(ch: KrausChannel, rho) -> DensityOperator:
    """Apply the channel; the output is validated at tolerance ``1e-8``."""
    rho = as_density(rho)
    if rho.dim != ch.in_dim:
        raise DimensionError(f"state of dimension {rho.dim} does not fit channel input {ch.in_dims}")
    out = sum(k @ rho.matrix @ k.conj().T for k in ch.kraus_ops)
    return DensityOperator((out + out.conj().T) / 2, ch.out_dims, 1e-8)


def apply_matrix(ch: KrausChannel, a: np.ndarray) -> np.ndarray:
    """Apply the linear extension of the channel to an arbitrary operator."""
    return sum(k @ a @ k.conj().T for k in ch.kraus_ops)


def compose(after: KrausChannel, before: KrausChannel) -> KrausChannel:
    """``after ∘ before``; Kraus operators are all products ``A_j B_k``."""
    if before.out_dim != after.in_dim:
        raise DimensionError(f"cannot compose {after.in_dims} after {before.out_dims}")
    ops = tuple(a @ b for a in after.kraus_ops for b in before.kraus_ops)
    label = f"{after.label}∘{before.label}" if after.label and before.label else ""
    return KrausChannel(ops, before.in_dims, after.out_dims, label=label, check=after.check and before.check)


def tensor_channels(chs: Sequence[KrausChannel]) -> KrausChannel:
    """Parallel composition; Kraus operators are all Kronecker products."""
    chs = list(chs)
    if not chs:
        raise ChannelError("tensor_channels needs at least one channel")
    ops = [np.eye(1, dtype=complex)]
    for ch in chs:
        ops = [np.kron(a, k) for a in ops for k in ch.kraus_ops]
    in_dims = tuple(d for ch in chs for d in ch.in_dims)
    out_dims = tuple(d for ch in chs for d in ch.out_dims)
    label = "⊗".join(ch.label or "?" for ch in chs)
    return KrausChannel(tuple(ops), in_dims, out_dims, label=label, check=all(c.check for c in chs))


def tensor_power(ch: KrausChannel, n: int) -> KrausChannel:
    return tensor_channels([ch] * n)


def superoperator_of(ch: KrausChannel) -> np.ndarray:
    """Matrix ``M`` with ``M vec(ρ) = vec(Λ(ρ))``, shape ``(out_dim², in_dim²)``."""
    if max(ch.in_dim, ch.out_dim) > MAX_DIM:
        raise DimensionError(f"channel dimension exceeds the cap of {MAX_DIM}")
    return sum(np.kron(k.conj(), k) for k in ch.kraus_ops)


def superoperator_distance(a: KrausChannel, b: KrausChannel) -> float:
    """Max-entry distance between superoperators; channels are equal iff this is ~0."""
    sa, sb = superoperator_of(a), superoperator_of(b)
    if sa.shape != sb.shape:
        raise DimensionError("channels act between different spaces")
    return float(np.max(np.abs(sa - sb)))


def is_idempotent(ch: KrausChannel, tol: float = DEFAULT_TOL) -> bool:
    if ch.in_dim != ch.out_dim:
        return False
    s = superoperator_of(ch)
    return float(np.max(np.abs(s @ s - s))) <= tol


def _choi_array(ch: KrausChannel) -> np.ndarray:
    # (id ⊗ K)|Ω> has components K[o, i]/√d at index i*out + o, i.e. vec(K)/√d
    vs = [vec(k) for k in ch.kraus_ops]
    return sum(np.outer(v, v.conj()) for v in vs) / ch.in_dim


def choi_of(ch: KrausChannel) -> DensityOperator:
    """Normalized Choi state on profile ``(in_dim, out_dim)``."""
    return DensityOperator(_choi_array(ch), (ch.in_dim, ch.out_dim))


@dataclass(frozen=True)
class Check:
    """Pass/fail verdict with named diagnostics; truthy iff ``ok``."""

    ok: bool
    details: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok


def is_cptp(ch: KrausChannel, tol: float = DEFAULT_TOL) -> Check:
    """Trace preservation of the Kraus list and positivity of the Choi matrix."""
    tp = tp_error(ch)
    choi = _choi_array(ch)
    min_ev = float(np.linalg.eigvalsh((choi + choi.conj().T) / 2)[0])
    problems = []
    if tp > tol:
        problems.append("trace_preserving")
    if min_ev < -tol:
        problems.append("completely_positive")
    return Check(not problems, {"tp_error": tp, "choi_min_eigenvalue": min_ev, "violations": problems})


class EBClass(str, enum.Enum):
    YES = "Yes"
    NO = "No"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class EBResult:
    verdict: EBClass
    reason: str
    min_pt_eigenvalue: float


def _block_diagonal_in_first(m: np.ndarray, d1: int, d2: int, tol: float) -> bool:
    t = m.reshape(d1, d2, d1, d2)
    off = t.copy()
    for i in range(d1):
        off[i, :, i, :] = 0
    return float(np.max(np.abs(off))) <= tol


def is_entanglement_breaking(ch: KrausChannel, tol: float = DEFAULT_TOL) -> EBResult:
    """Three-valued separability test of the Choi state across (in, out).

    A negative partial transpose always gives ``NO``.  A PPT Choi gives
    ``YES`` at total dimension ``<= 6``.  Above that, ``YES`` is issued only
    for Choi states that are separable by construction (block-diagonal in
    the computational basis of one factor); otherwise ``INCONCLUSIVE``.
    """
    choi = _choi_array(ch)
    din, dout = ch.in_dim, ch.out_dim
    pt = partial_transpose(choi, 1, (din, dout))
    min_ev = float(np.linalg.eigvalsh((pt + pt.conj().T) / 2)[0])
    if min_ev < -tol:
        return EBResult(EBClass.NO, "Choi state has a negative partial transpose", min_ev)
    if din * dout <= PPT_CONCLUSIVE_DIM:
        return EBResult(EBClass.YES, f"PPT Choi state at total dimension {din * dout}", min_ev)
    if _block_diagonal_in_first(choi, din, dout, tol):
        return EBResult(EBClass.YES, "Choi state is classical on the input factor", min_ev)
    swapped = choi.reshape(din, dout, din, dout).transpose(1, 0, 3, 2).reshape(choi.shape)
    if _block_diagonal_in_first(swapped, dout, din, tol):
        return EBResult(EBClass.YES, "Choi state is classical on the output factor", min_ev)
    return EBResult(EBClass.INCONCLUSIVE, f"PPT Choi state above total dimension {PPT_CONCLUSIVE_DIM}", min_ev)


@dataclass(frozen=True, eq=False)
class FixedPointSubspace:
    """Trace-orthonormal Hermitian basis of the fixed operators of a channel."""

    basis: tuple[np.ndarray, ...]
    dims: tuple[int, ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def _stack(self) -> np.ndarray:
        n = int(np.prod(self.dims))
        return np.array(self.basis).reshape(len(self.basis), n * n) if self.basis else np.zeros((0, n * n))

    def coefficients(self, a: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=complex)
        return self._stack().conj() @ a.reshape(-1)

    def project(self, a: np.ndarray) -> np.ndarray:
        """Hilbert-Schmidt orthogonal projection of ``a`` onto the subspace."""
        a = np.asarray(a, dtype=complex)
        return (self.coefficients(a) @ self._stack()).reshape(a.shape)

    def residual(self, a: np.ndarray) -> float:
        return float(np.max(np.abs(self.project(a) - np.asarray(a))))

    def contains(self, a: np.ndarray, tol: float = FIXED_POINT_WINDOW) -> bool:
        return self.residual(a) <= tol


def _hermitian_orthonormalize(mats: Sequence[np.ndarray], rank: int, dim: int) -> tuple[np.ndarray, ...]:
    # real coordinates (Re vec, Im vec) make the trace inner product Euclidean
    rows = []
    for m in mats:
        for h in ((m + m.conj().T) / 2, (m - m.conj().T) / 2j):
            rows.append(np.concatenate([h.real.reshape(-1), h.imag.reshape(-1)]))
    if not rows or rank == 0:
        return ()
    u, s, vt = np.linalg.svd(np.array(rows).T, full_matrices=False)
    out = []
    for k in range(rank):
        r = u[:, k]
        h = (r[: dim * dim] + 1j * r[dim * dim:]).reshape(dim, dim)
        h = (h + h.conj().T) / 2
        h.setflags(write=False)
        out.append(h)
    return tuple(out)


def fixed_point_subspace(ch: KrausChannel, window: float = FIXED_POINT_WINDOW) -> FixedPointSubspace:
    """Eigenvalue-1 eigenspace of the superoperator as a Hermitian basis.

    Computed as the numerical null space of ``S - I`` (singular values below
    ``window``), which is exactly the eigenvalue-1 eigenspace.
    """
    if tuple(ch.in_dims) != tuple(ch.out_dims):
        raise DimensionError("fixed points need a channel from a space to itself")
    d = ch.in_dim
    s = superoperator_of(ch) - np.eye(d * d)
    _, sv, vh = np.linalg.svd(s)
    null = vh[sv <= window].conj()
    mats = [unvec(v, d) for v in null]
    return FixedPointSubspace(_hermitian_orthonormalize(mats, len(mats), d), ch.in_dims)


def product_fixed_point_subspace(chs: Sequence[KrausChannel],
                                 window: float = FIXED_POINT_WINDOW) -> FixedPointSubspace:
    """Fixed operators of ``⊗ chs`` for idempotent factors, without the joint superoperator.

    Idempotent channels have spectrum in {0, 1}, so the eigenvalue-1 space of
    the product is exactly the tensor product of the factors' spaces.
    """
    parts = []
    for ch in chs:
        if not is_idempotent(ch):
            raise ChannelError(f"channel {ch.label or '?'} is not idempotent")
        parts.append(fixed_point_subspace(ch, window))
    basis = [np.ones((1, 1), dtype=complex)]
    for part in parts:
        basis = [np.kron(a, b) for a in basis for b in part.basis]
    for b in basis:
        b.setflags(write=False)
    return FixedPointSubspace(tuple(basis), tuple(d for ch in chs for d in ch.in_dims))


def is_fixed_point(ch: KrausChannel, rho, tol: float = FIXED_POINT_WINDOW) -> bool:
    rho = as_density(rho)
    if rho.dim != ch.in_dim or ch.in_dim != ch.out_dim:
        raise DimensionError("state does not fit the channel")
    return trace_distance(apply(ch, rho), rho) <= tol
