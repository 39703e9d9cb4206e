"""Free-state membership oracles and hull feasibility tests.

An oracle answers ``Member``, ``NonMember`` or ``Inconclusive`` and always
attaches a certificate: the violated constraint, hull coefficients, or the
negative partial-transpose eigenvalue that rules a state out.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations, product
from math import prod
from typing import TYPE_CHECKING, Sequence

import numpy as np
from scipy.optimize import nnls

from .channels import (
    FIXED_POINT_WINDOW,
    PPT_CONCLUSIVE_DIM,
    KrausChannel,
    fixed_point_subspace,
    is_idempotent,
)
from .errors import DimensionError, InvalidStateError, UnsupportedError
from .qmath import (
    DEFAULT_TOL,
    DensityOperator,
    as_density,
    basis_projector,
    density_spanning_set,
    kron,
    partial_trace,
    partial_transpose,
    trace_distance,
)

if TYPE_CHECKING:
    from .censors import TwirlGroup

HULL_TOL = 1e-8


class Verdict(str, enum.Enum):
    MEMBER = "Member"
    NON_MEMBER = "NonMember"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class MembershipVerdict:
    verdict: Verdict
    certificate: dict = field(default_factory=dict)

    @property
    def is_member(self) -> bool:
        return self.verdict is Verdict.MEMBER

    @property
    def is_nonmember(self) -> bool:
        return self.verdict is Verdict.NON_MEMBER


def _member(**cert) -> MembershipVerdict:
    return MembershipVerdict(Verdict.MEMBER, cert)


def _nonmember(**cert) -> MembershipVerdict:
    return MembershipVerdict(Verdict.NON_MEMBER, cert)


def _inconclusive(reason: str, **cert) -> MembershipVerdict:
    return MembershipVerdict(Verdict.INCONCLUSIVE, {"reason": reason, **cert})


# --- oracles -----------------------------------------------------------------


class FreeSetOracle:
    """Base class for free-set membership deciders."""

    tol: float = DEFAULT_TOL

    @property
    def dims(self) -> tuple[int, ...]:
        raise NotImplementedError

    @property
    def dim(self) -> int:
        return prod(self.dims)

    #: affine free sets expose the projector onto their linear span
    affine: bool = False

    def membership(self, rho: DensityOperator) -> MembershipVerdict:
        raise NotImplementedError

    def _check_dim(self, rho: DensityOperator):
        if rho.dim != self.dim:
            raise DimensionError(f"oracle on {self.dims} cannot judge a state of dimension {rho.dim}")


def _offdiag_by_key(m: np.ndarray, keys: np.ndarray) -> float:
    mask = keys[:, None] != keys[None, :]
    return float(np.max(np.abs(m[mask]))) if mask.any() else 0.0


@dataclass(frozen=True)
class Incoherent(FreeSetOracle):
    """States diagonal in the computational basis."""

    basis_dim: int
    tol: float = DEFAULT_TOL
    affine = True

    @property
    def dims(self):
        return (self.basis_dim,)

    def keys(self) -> np.ndarray:
        return np.arange(self.basis_dim)

    def project(self, a: np.ndarray) -> np.ndarray:
        return np.diag(np.diag(a))

    def membership(self, rho):
        rho = as_density(rho)
        self._check_dim(rho)
        off = _offdiag_by_key(rho.matrix, self.keys())
        if off <= self.tol:
            return _member(max_offdiagonal=off)
        return _nonmember(max_offdiagonal=off)


@dataclass(frozen=True)
class ClassicalQuantum(FreeSetOracle):
    """States ``Σ_x p_x |x><x| ⊗ σ^x``: block diagonal in the classical factor."""

    x_dim: int
    y_dim: int
    tol: float = DEFAULT_TOL
    affine = True

    @property
    def dims(self):
        return (self.x_dim, self.y_dim)

    def keys(self) -> np.ndarray:
        return np.repeat(np.arange(self.x_dim), self.y_dim)

    def project(self, a: np.ndarray) -> np.ndarray:
        keys = self.keys()
        return np.where(keys[:, None] == keys[None, :], a, 0)

    def membership(self, rho):
        rho = as_density(rho)
        self._check_dim(rho)
        off = _offdiag_by_key(rho.matrix, self.keys())
        if off <= self.tol:
            return _member(max_offblock=off)
        return _nonmember(max_offblock=off)


def _twirl(unitaries: Sequence[np.ndarray], a: np.ndarray) -> np.ndarray:
    return sum(u @ a @ u.conj().T for u in unitaries) / len(unitaries)


@dataclass(frozen=True, eq=False)
class TwirlInvariant(FreeSetOracle):
    """States left unchanged by averaging over a finite unitary group."""

    group: "TwirlGroup"
    tol: float = DEFAULT_TOL
    affine = True

    @property
    def dims(self):
        return (self.group.dim,)

    def project(self, a: np.ndarray) -> np.ndarray:
        return _twirl(self.group.unitaries, a)

    def membership(self, rho):
        rho = as_density(rho)
        self._check_dim(rho)
        dist = trace_distance(self.project(rho.matrix), rho.matrix)
        if dist <= self.tol:
            return _member(twirl_distance=dist)
        return _nonmember(twirl_distance=dist)


def min_pt_eigenvalue(m: np.ndarray, dims: Sequence[int], cut: Sequence[int]) -> float:
    pt = partial_transpose(m, cut, dims)
    return float(np.linalg.eigvalsh((pt + pt.conj().T) / 2)[0])


def bipartitions(n: int) -> list[tuple[int, ...]]:
    """One side (the one holding subsystem 0) of every bipartition of ``n`` subsystems."""
    out = []
    for r in range(1, n):
        for side in combinations(range(n), r):
            if 0 in side:
                out.append(side)
    return out


def quantum_subsystem(mats: Sequence[np.ndarray], dims: Sequence[int], tol: float) -> int | None:
    """Index ``j`` such that every matrix is block diagonal in the product basis of all
    subsystems other than ``j``, or ``None``.

    Such density operators are ``Σ_k p_k |k><k| ⊗ σ^k`` with ``σ^k`` on subsystem ``j``
    alone, hence fully separable.
    """
    dims = tuple(dims)
    digits = np.array(np.unravel_index(np.arange(prod(dims)), dims))
    for j in reversed(range(len(dims))):
        others = np.delete(digits, j, axis=0)
        keys = np.ravel_multi_index(others, tuple(np.delete(np.array(dims), j))) if len(dims) > 1 \
            else np.zeros(prod(dims), dtype=int)
        if all(_offdiag_by_key(np.asarray(m), keys) <= tol for m in mats):
            return j
    return None


def _ppt_scan(rho: DensityOperator, dims: tuple[int, ...], cuts: Sequence[Sequence[int]], tol: float):
    """Minimum PT eigenvalue over ``cuts``; returns (worst value, cut achieving it)."""
    worst, worst_cut = np.inf, None
    for cut in cuts:
        ev = min_pt_eigenvalue(rho.matrix, dims, cut)
        if ev < worst - 1e-15:
            worst, worst_cut = ev, tuple(cut)
    return worst, worst_cut


@dataclass(frozen=True)
class SeparablePPT(FreeSetOracle):
    """Fully separable states over the subsystems of ``profile``, tested by PPT.

    Conclusive ``Member`` answers come from the PPT criterion on two
    subsystems of total dimension at most 6, or from a state that is
    diagonal in the product basis (a mixture of product basis states).
    """

    profile: tuple[int, ...]
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        object.__setattr__(self, "profile", tuple(int(d) for d in self.profile))

    @property
    def dims(self):
        return self.profile

    def membership(self, rho):
        rho = as_density(rho)
        self._check_dim(rho)
        n = len(self.profile)
        if n == 1:
            return _member(reason="single subsystem: every state is separable")
        worst, cut = _ppt_scan(rho, self.profile, bipartitions(n), self.tol)
        if worst < -self.tol:
            return _nonmember(min_pt_eigenvalue=worst, cut=list(cut))
        if n == 2 and self.dim <= PPT_CONCLUSIVE_DIM:
            return _member(min_pt_eigenvalue=worst, reason=f"PPT at total dimension {self.dim}")
        j = quantum_subsystem([rho.matrix], self.profile, self.tol)
        if j is not None:
            return _member(min_pt_eigenvalue=worst, reason=f"classical on every subsystem but {j}")
        return _inconclusive(
            f"PPT above conclusive dimension {PPT_CONCLUSIVE_DIM}", min_pt_eigenvalue=worst
        )


@dataclass(frozen=True, eq=False)
class _Composite(FreeSetOracle):
    factors: tuple[FreeSetOracle, ...]
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        factors = tuple(self.factors)
        if not factors:
            raise ValueError("a composite oracle needs at least one factor")
        object.__setattr__(self, "factors", factors)

    @property
    def dims(self):
        return tuple(d for f in self.factors for d in f.dims)

    @property
    def party_dims(self) -> tuple[int, ...]:
        return tuple(f.dim for f in self.factors)

    def membership(self, rho):
        return composite_membership(self, rho)


class AffineComposite(_Composite):
    """``Aff[F(A_1) ⊗ ... ⊗ F(A_N)] ∩ D`` for affine local free sets."""

    affine = True

    def project(self, a: np.ndarray) -> np.ndarray:
        return _composite_projector(self)(a)


class ConvexComposite(_Composite):
    """``Conv[F(A_1) ⊗ ... ⊗ F(A_N)]`` for convex local free sets."""


def membership(oracle: FreeSetOracle, rho) -> MembershipVerdict:
    return oracle.membership(as_density(rho))


# --- composite sets ----------------------------------------------------------


def _composite_projector(oracle: AffineComposite):
    kinds = {type(f) for f in oracle.factors}
    if kinds <= {Incoherent, ClassicalQuantum}:
        keys = _joint_keys(oracle.factors)
        return lambda a: np.where(keys[:, None] == keys[None, :], a, 0)
    if kinds == {TwirlInvariant}:
        unitaries = [kron(*us) for us in product(*(f.group.unitaries for f in oracle.factors))]
        return lambda a: _twirl(unitaries, a)
    raise UnsupportedError(f"no structural projector for factors {sorted(k.__name__ for k in kinds)}")


def _joint_keys(factors: Sequence[FreeSetOracle]) -> np.ndarray:
    """Classical label of each joint basis index: the tuple of classical digits."""
    keys = np.zeros(1, dtype=np.int64)
    for f in factors:
        local = f.keys()
        keys = (keys[:, None] * (local.max() + 1) + local[None, :]).reshape(-1)
    return keys


def _product_member(oracle: _Composite, rho: DensityOperator) -> MembershipVerdict | None:
    """Containment axiom: a product of factor members is a member."""
    pd = oracle.party_dims
    n = len(pd)
    if n == 1:
        return None
    marginals = [partial_trace(rho.matrix, [a], pd) for a in range(n)]
    if np.max(np.abs(kron(*marginals) - rho.matrix)) > oracle.tol:
        return None
    verdicts = []
    for f, m in zip(oracle.factors, marginals):
        v = f.membership(DensityOperator(m, f.dims, max(oracle.tol, DEFAULT_TOL)))
        if not v.is_member:
            return None
        verdicts.append(v.certificate)
    return _member(reason="product of factor members", factors=verdicts)


def composite_membership(oracle: _Composite, rho, sample_budget: int = 0) -> MembershipVerdict:
    """Decide membership in a composite free set from its structure.

    Affine composites of incoherent / classical-quantum factors reduce to a
    joint block-diagonal test, affine composites of twirl-invariant factors
    to invariance under the product-group twirl.  Convex composites of
    separable factors use PPT over every bipartition of the fine profile.
    ``sample_budget`` is accepted for interface stability; no decision here
    relies on sampling.
    """
    rho = as_density(rho)
    if rho.dim != oracle.dim:
        raise DimensionError(f"composite oracle on {oracle.dims} cannot judge dimension {rho.dim}")
    kinds = {type(f) for f in oracle.factors}
    tol = oracle.tol

    if isinstance(oracle, AffineComposite):
        if kinds <= {Incoherent, ClassicalQuantum}:
            off = _offdiag_by_key(rho.matrix, _joint_keys(oracle.factors))
            if off <= tol:
                return _member(max_offblock=off)
            return _nonmember(max_offblock=off)
        if kinds == {TwirlInvariant}:
            dist = trace_distance(oracle.project(rho.matrix), rho.matrix)
            if dist <= tol:
                return _member(twirl_distance=dist)
            return _nonmember(twirl_distance=dist)

    if isinstance(oracle, ConvexComposite):
        if kinds == {Incoherent}:
            off = _offdiag_by_key(rho.matrix, np.arange(rho.dim))
            return _member(max_offdiagonal=off) if off <= tol else _nonmember(max_offdiagonal=off)
        if kinds == {SeparablePPT}:
            prod_v = _product_member(oracle, rho)
            if prod_v is not None:
                return prod_v
            fine = oracle.dims
            n = len(fine)
            if n == 1:
                return _member(reason="single subsystem: every state is separable")
            # party-level cuts first so the reported certificate names the sender split
            offsets = np.cumsum((0,) + tuple(len(f.dims) for f in oracle.factors))
            party_cuts = []
            for side in bipartitions(len(oracle.factors)):
                party_cuts.append(tuple(i for a in side for i in range(offsets[a], offsets[a + 1])))
            cuts = party_cuts + [c for c in bipartitions(n) if c not in party_cuts]
            worst, cut = _ppt_scan(rho, fine, cuts, tol)
            if worst < -tol:
                return _nonmember(min_pt_eigenvalue=worst, cut=list(cut))
            if n == 2 and rho.dim <= PPT_CONCLUSIVE_DIM:
                return _member(min_pt_eigenvalue=worst, reason=f"PPT at total dimension {rho.dim}")
            j = quantum_subsystem([rho.matrix], fine, tol)
            if j is not None:
                return _member(min_pt_eigenvalue=worst, reason=f"classical on every subsystem but {j}")
            return _inconclusive(
                f"PPT across every bipartition above conclusive dimension {PPT_CONCLUSIVE_DIM}",
                min_pt_eigenvalue=worst,
            )

    prod_v = _product_member(oracle, rho)
    if prod_v is not None:
        return prod_v
    return _inconclusive("no structural decision procedure")


# --- generator sets and hulls ------------------------------------------------


@dataclass(frozen=True, eq=False)
class GeneratorSet:
    """Nonempty list of density operators sharing one profile."""

    states: tuple[DensityOperator, ...]

    def __post_init__(self):
        states = tuple(as_density(s) for s in self.states)
        if not states:
            raise ValueError("a generator set needs at least one state")
        if len({s.dims for s in states}) != 1:
            raise DimensionError("generators must share one profile")
        object.__setattr__(self, "states", states)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.states[0].dims

    @property
    def dim(self) -> int:
        return self.states[0].dim

    def __len__(self):
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def matrices(self) -> list[np.ndarray]:
        return [s.matrix for s in self.states]


def incoherent_generators(dim: int) -> GeneratorSet:
    return GeneratorSet(tuple(DensityOperator(basis_projector(dim, x)) for x in range(dim)))


def cq_generators(x_dim: int, y_dim: int) -> GeneratorSet:
    """``|x><x| ⊗ τ`` for each classical label and each τ of a spanning set on Y."""
    taus = density_spanning_set(y_dim)
    return GeneratorSet(tuple(
        DensityOperator(np.kron(basis_projector(x_dim, x), t.matrix), (x_dim, y_dim))
        for x in range(x_dim) for t in taus
    ))


def span_generators(fixed_basis: Sequence[np.ndarray], dims: Sequence[int], project) -> GeneratorSet:
    """Independent density operators spanning the image of ``project`` (a channel-like projector)."""
    d = prod(dims)
    chosen, rows = [], []
    for s in density_spanning_set(d):
        m = project(s.matrix)
        r = np.concatenate([m.real.reshape(-1), m.imag.reshape(-1)])
        if np.linalg.matrix_rank(np.array(rows + [r]), tol=1e-9) > len(rows):
            rows.append(r)
            chosen.append(DensityOperator((m + m.conj().T) / 2, tuple(dims)))
        if len(chosen) == len(fixed_basis):
            break
    return GeneratorSet(tuple(chosen))


def _hull_system(rho: DensityOperator, gens: GeneratorSet):
    if rho.dim != gens.dim:
        raise DimensionError("state and generators live in different dimensions")
    cols = [np.concatenate([g.real.reshape(-1), g.imag.reshape(-1)]) for g in gens.matrices()]
    a = np.vstack([np.array(cols).T, np.ones(len(cols))])
    b = np.concatenate([rho.matrix.real.reshape(-1), rho.matrix.imag.reshape(-1), [1.0]])
    return a, b


def _substitution_residual(rho: DensityOperator, gens: GeneratorSet, t: np.ndarray) -> float:
    combo = sum(ti * g for ti, g in zip(t, gens.matrices()))
    return float(max(np.max(np.abs(combo - rho.matrix)), abs(np.sum(t) - 1.0)))


def _require_density(rho) -> DensityOperator:
    try:
        return as_density(rho)
    except InvalidStateError as exc:
        raise InvalidStateError(f"hull membership needs a density operator: {exc}") from exc


def affine_hull_membership(rho, gens: GeneratorSet, tol: float = HULL_TOL) -> MembershipVerdict:
    """Is ``rho = Σ t_a σ_a`` for real ``t`` with ``Σ t_a = 1``?

    Solved by least squares with the normalization appended as an extra row.
    """
    rho = _require_density(rho)
    a, b = _hull_system(rho, gens)
    t, *_ = np.linalg.lstsq(a, b, rcond=None)
    res = _substitution_residual(rho, gens, t)
    if res <= tol:
        return _member(coefficients=t.tolist(), residual=res)
    return _nonmember(residual=res, reason="no affine combination reproduces the state")


def convex_hull_membership(rho, gens: GeneratorSet, tol: float = HULL_TOL) -> MembershipVerdict:
    """As :func:`affine_hull_membership` with ``t >= 0``, via Lawson-Hanson NNLS."""
    rho = _require_density(rho)
    a, b = _hull_system(rho, gens)
    t, _ = nnls(a, b, maxiter=50 * a.shape[1] + 100)
    res = _substitution_residual(rho, gens, t)
    if res <= tol:
        return _member(coefficients=t.tolist(), residual=res)
    return _nonmember(residual=res, reason="no convex combination reproduces the state")


def fixed_set_equals_affine_hull_check(censor: KrausChannel, subspace_gens: GeneratorSet,
                                       tol: float = FIXED_POINT_WINDOW) -> dict:
    """Compare span(Fix(censor)) with the linear span of the generators.

    The affine span of density operators, extended to operator space, is their
    linear span.  Equality is decided by mutual containment.
    """
    if not is_idempotent(censor):
        raise UnsupportedError("fixed-set comparison needs an idempotent censor")
    fix = fixed_point_subspace(censor)
    gen_mats = subspace_gens.matrices()
    gens_in_fix = max(fix.residual(g) for g in gen_mats)

    cols = np.array([np.concatenate([g.real.reshape(-1), g.imag.reshape(-1)]) for g in gen_mats]).T
    u, s, _ = np.linalg.svd(cols, full_matrices=False)
    u = u[:, s > 1e-10 * max(1.0, s[0])]
    fix_in_gens = 0.0
    for bmat in fix.basis:
        v = np.concatenate([bmat.real.reshape(-1), bmat.imag.reshape(-1)])
        fix_in_gens = max(fix_in_gens, float(np.max(np.abs(u @ (u.T @ v) - v))))
    gen_dim = u.shape[1]
    equal = gens_in_fix <= tol and fix_in_gens <= tol and gen_dim == fix.dimension
    return {
        "equal": bool(equal),
        "fixed_dimension": fix.dimension,
        "generator_span_dimension": int(gen_dim),
        "generators_outside_fixed": gens_in_fix,
        "fixed_outside_generators": fix_in_gens,
    }
