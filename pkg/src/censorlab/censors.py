"""Censor channels and verifiers for their defining conditions.

Incoherent and classical bases are always the computational basis; the
optical states |H>, |V> correspond to indices 0 and 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .channels import (
    FIXED_POINT_WINDOW,
    KrausChannel,
    apply,
    apply_matrix,
    fixed_point_subspace,
    superoperator_distance,
)
from .errors import DimensionError, GroupAxiomError, InvalidStateError
from .qmath import (
    DEFAULT_TOL,
    DensityOperator,
    rng_from_seed,
    as_density,
    as_matrix,
    basis_projector,
    bell_state,
    eig_hermitian,
    is_density,
    max_coherent,
    max_entangled,
    random_density,
    random_pure,
    trace_distance,
)
from .resources import (
    FreeSetOracle,
    GeneratorSet,
    Incoherent,
    SeparablePPT,
    TwirlInvariant,
    Verdict,
    cq_generators,
    incoherent_generators,
    span_generators,
)

ADVERSARIAL_SET_VERSION = 1

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def _equal_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float) -> bool:
    overlap = np.vdot(b, a)
    if abs(overlap) < tol:
        return False
    phase = overlap / abs(overlap)
    return float(np.max(np.abs(a - phase * b))) <= tol


@dataclass(frozen=True, eq=False)
class TwirlGroup:
    """Finite unitary group, closed under products and inverses up to a global phase."""

    unitaries: tuple[np.ndarray, ...]
    label: str = ""
    tol: float = field(default=1e-10, repr=False)

    def __post_init__(self):
        us = [as_matrix(u) for u in self.unitaries]
        if not us:
            raise GroupAxiomError("a group needs at least one element")
        d = us[0].shape[0]
        for u in us:
            if u.shape != (d, d):
                raise GroupAxiomError("group elements must be square matrices of one size")
            if np.max(np.abs(u.conj().T @ u - np.eye(d))) > self.tol:
                raise GroupAxiomError("group element is not unitary")
        frozen = []
        for u in us:
            u = u.copy()
            u.setflags(write=False)
            frozen.append(u)
        object.__setattr__(self, "unitaries", tuple(frozen))
        self._check_closure()

    def _find(self, m: np.ndarray) -> bool:
        return any(_equal_up_to_phase(m, u, 1e-8) for u in self.unitaries)

    def _check_closure(self):
        for a in self.unitaries:
            if not self._find(a.conj().T):
                raise GroupAxiomError(f"group {self.label!r} is not closed under inverses")
            for b in self.unitaries:
                if not self._find(a @ b):
                    raise GroupAxiomError(f"group {self.label!r} is not closed under products")

    @property
    def dim(self) -> int:
        return self.unitaries[0].shape[0]

    @property
    def order(self) -> int:
        return len(self.unitaries)

    @classmethod
    def trivial(cls, dim: int) -> "TwirlGroup":
        return cls((np.eye(dim, dtype=complex),), "trivial")

    @classmethod
    def z2(cls) -> "TwirlGroup":
        """``{I, Z}`` on a qubit: an unknown phase reference of order two."""
        return cls((PAULI["I"], PAULI["Z"]), "z2")

    @classmethod
    def pauli(cls) -> "TwirlGroup":
        """Single-qubit Pauli group modulo phases."""
        return cls(tuple(PAULI[k] for k in "IXYZ"), "pauli1")

    @classmethod
    def collective_pauli(cls) -> "TwirlGroup":
        """``{σ ⊗ σ}`` on two qubits: a shared but unknown Pauli frame."""
        return cls(tuple(np.kron(PAULI[k], PAULI[k]) for k in "IXYZ"), "collective_pauli2")

    @classmethod
    def collective_z2(cls) -> "TwirlGroup":
        """``{I⊗I, Z⊗Z}``: the same unknown phase flip on both qubits."""
        return cls((np.eye(4, dtype=complex), np.kron(PAULI["Z"], PAULI["Z"])), "collective_z2")

    @classmethod
    def cyclic_phase(cls, dim: int) -> "TwirlGroup":
        """Powers of ``diag(1, ω, ..., ω^{d-1})``, ``ω = exp(2πi/d)``."""
        w = np.exp(2j * np.pi / dim)
        gen = np.diag(w ** np.arange(dim))
        return cls(tuple(np.linalg.matrix_power(gen, k) for k in range(dim)), f"zphase{dim}")


# --- censor specs ------------------------------------------------------------


@dataclass(frozen=True)
class Dephasing:
    dim: int

    def channel(self) -> KrausChannel:
        return dephasing_channel(self.dim)


@dataclass(frozen=True, eq=False)
class Twirl:
    group: TwirlGroup

    def channel(self) -> KrausChannel:
        return twirl_channel(self.group)


@dataclass(frozen=True)
class CqCensor:
    x_dim: int
    y_dim: int

    def channel(self) -> KrausChannel:
        return cq_censor_channel(self.x_dim, self.y_dim)


@dataclass(frozen=True, eq=False)
class Replacement:
    target: DensityOperator

    def __post_init__(self):
        object.__setattr__(self, "target", as_density(self.target))

    def channel(self) -> KrausChannel:
        return replacement_channel(self.target)


CensorSpec = Dephasing | Twirl | CqCensor | Replacement


def dephasing_channel(dim: int) -> KrausChannel:
    """Completely dephasing channel, Kraus set ``{|x><x|}``."""
    if dim < 2:
        raise DimensionError("dephasing needs dimension at least 2")
    return KrausChannel(tuple(basis_projector(dim, x) for x in range(dim)), (dim,), (dim,),
                        label=f"dephasing:{dim}")


def twirl_channel(group: TwirlGroup) -> KrausChannel:
    """Group average ``(1/|G|) Σ U ρ U^†``, Kraus set ``{U/√|G|}``."""
    if not isinstance(group, TwirlGroup):
        group = TwirlGroup(tuple(group))
    n = group.order
    return KrausChannel(tuple(u / np.sqrt(n) for u in group.unitaries), (group.dim,), (group.dim,),
                        label=f"twirl:{group.label or group.order}")


def cq_censor_channel(x_dim: int, y_dim: int) -> KrausChannel:
    """Dephase the classical factor, leave the quantum factor alone: ``Δ ⊗ id``."""
    if x_dim < 2 or y_dim < 1:
        raise DimensionError("cq censor needs x_dim >= 2 and y_dim >= 1")
    ops = tuple(np.kron(basis_projector(x_dim, x), np.eye(y_dim)) for x in range(x_dim))
    return KrausChannel(ops, (x_dim, y_dim), (x_dim, y_dim), label=f"cq:{x_dim}x{y_dim}")


def replacement_channel(target, dims: Sequence[int] | None = None) -> KrausChannel:
    """``ρ -> Tr(ρ) σ``.

    Kraus operators ``√λ_j |v_j><i|`` over input basis states ``i`` and the
    eigenpairs ``(λ_j, v_j)`` of σ with ``λ_j > 0``.
    """
    try:
        target = as_density(target, dims)
    except InvalidStateError as exc:
        raise InvalidStateError(f"replacement target is invalid: {exc}") from exc
    evals, evecs = eig_hermitian(target.matrix)
    d = target.dim
    ops = []
    for lam, v in zip(evals, evecs.T):
        if lam <= 1e-14:
            continue
        for i in range(d):
            e = np.zeros(d, dtype=complex)
            e[i] = 1
            ops.append(np.sqrt(lam) * np.outer(v, e))
    return KrausChannel(tuple(ops), target.dims, target.dims, label="replacement")


def censor_kind(ch: KrausChannel, tol: float = 1e-12) -> str | None:
    """Recognize one of the constructors by superoperator comparison."""
    dims = ch.in_dims
    if dims != ch.out_dims:
        return None
    d = ch.in_dim
    if len(dims) == 2 and dims[0] >= 2:
        if superoperator_distance(ch, cq_censor_channel(*dims)) <= tol:
            return "cq"
    if d >= 2 and superoperator_distance(ch, dephasing_channel(d)) <= tol:
        return "dephasing"
    return None


# --- verifiers ---------------------------------------------------------------


def adversarial_states(dims: Sequence[int]) -> list[tuple[str, DensityOperator]]:
    """Fixed, versioned list of resourceful probe states for a profile."""
    dims = tuple(dims)
    d = int(np.prod(dims))
    out = [("max_coherent", max_coherent(d, dims))]
    if dims == (2, 2):
        for name in ("phi_plus", "phi_minus", "psi_plus", "psi_minus"):
            out.append((f"bell_{name}", bell_state(name)))
    elif len(dims) == 2 and dims[0] == dims[1]:
        out.append(("max_entangled", max_entangled(dims[0])))
    for k in range(4):
        out.append((f"random_pure_{k}", random_pure(d, 0xADE0 + k, dims)))
    return out


@dataclass
class RDReport:
    passed: bool
    checked: int
    failures: list = field(default_factory=list)
    inconclusive: list = field(default_factory=list)

    @property
    def witness(self):
        return self.failures[0] if self.failures else None


def verify_resource_destroying(ch: KrausChannel, free: FreeSetOracle, samples: int = 500,
                               seed: int = 0) -> RDReport:
    """Check that every probed output is a member of ``free``.

    Probes are the adversarial list followed by ``samples`` Ginibre states.
    Inconclusive outputs are listed separately and make the report fail.
    """
    if ch.out_dim != free.dim:
        raise DimensionError("channel output does not match the free set")
    probes = adversarial_states(ch.in_dims)
    probes += [(f"ginibre_{k}", random_density(ch.in_dim, seed * 1_000_003 + k, ch.in_dims))
               for k in range(samples)]
    failures, inconclusive = [], []
    for name, rho in probes:
        out = apply(ch, rho)
        v = free.membership(out)
        if v.verdict is Verdict.NON_MEMBER:
            failures.append({"input": name, "state": rho, "output": out, "certificate": v.certificate})
        elif v.verdict is Verdict.INCONCLUSIVE:
            inconclusive.append({"input": name, "certificate": v.certificate})
    return RDReport(not failures and not inconclusive, len(probes), failures, inconclusive)


@dataclass
class FreenessReport:
    passed: bool
    generators_checked: int
    combinations_checked: int
    combinations_skipped: int
    max_distance: float
    witness: dict | None = None


def random_affine_weights(m: int, rng: np.random.Generator, spread: float = 0.5) -> np.ndarray:
    """Dirichlet weights perturbed off the simplex, renormalized to sum to one."""
    t = rng.dirichlet(np.ones(m)) + rng.normal(scale=spread / m, size=m)
    return t + (1.0 - t.sum()) / m


def verify_freeness_preserving(ch: KrausChannel, subspace_gens: GeneratorSet,
                               tol: float = FIXED_POINT_WINDOW, combinations: int = 100,
                               seed: int = 0) -> FreenessReport:
    """Every generator and random affine combinations of them must be fixed points.

    Combinations that are not density operators are skipped and counted.
    """
    if ch.in_dim != subspace_gens.dim or ch.out_dim != ch.in_dim:
        raise DimensionError("generators do not fit the channel")
    worst, witness = 0.0, None
    for k, g in enumerate(subspace_gens):
        dist = trace_distance(apply(ch, g), g)
        if dist > worst:
            worst = dist
        if dist > tol and witness is None:
            witness = {"generator": k, "state": g, "distance": dist}
    rng = rng_from_seed(seed)
    mats = subspace_gens.matrices()
    checked = skipped = 0
    for _ in range(combinations):
        t = random_affine_weights(len(mats), rng)
        m = sum(ti * g for ti, g in zip(t, mats))
        if not is_density(m, tol=DEFAULT_TOL):
            skipped += 1
            continue
        rho = DensityOperator((m + m.conj().T) / 2, subspace_gens.dims)
        checked += 1
        dist = trace_distance(apply(ch, rho), rho)
        worst = max(worst, dist)
        if dist > tol and witness is None:
            witness = {"weights": t.tolist(), "state": rho, "distance": dist}
    return FreenessReport(witness is None, len(subspace_gens), checked, skipped, worst, witness)


def authorized_generators(spec: CensorSpec) -> GeneratorSet:
    """Generators of the affine subspace a censor is meant to stabilize."""
    if isinstance(spec, Dephasing):
        return incoherent_generators(spec.dim)
    if isinstance(spec, CqCensor):
        return cq_generators(spec.x_dim, spec.y_dim)
    if isinstance(spec, Replacement):
        return GeneratorSet((spec.target,))
    if isinstance(spec, Twirl):
        ch = spec.channel()
        fix = fixed_point_subspace(ch)
        return span_generators(fix.basis, ch.in_dims, lambda a: apply_matrix(ch, a))
    raise TypeError(f"unknown censor spec {spec!r}")


def free_oracle_for(spec: CensorSpec) -> FreeSetOracle:
    """The local free set each censor is built for (separable for cq censors)."""
    if isinstance(spec, Dephasing):
        return Incoherent(spec.dim)
    if isinstance(spec, CqCensor):
        return SeparablePPT((spec.x_dim, spec.y_dim))
    if isinstance(spec, Twirl):
        return TwirlInvariant(spec.group)
    if isinstance(spec, Replacement):
        return SeparablePPT(spec.target.dims)
    raise TypeError(f"unknown censor spec {spec!r}")

