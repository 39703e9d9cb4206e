"""Multi-party censorship protocol and breakability analysis.

Each sender ``A_a`` passes its share of a joint state through optional
noise ``Φ`` and then the local censor ``Δ'``.  Censorship is broken when a
state outside the composite free set survives ``(Δ')^{⊗N}`` unchanged.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from math import prod
from typing import Sequence

import numpy as np

from .channels import (
    FIXED_POINT_WINDOW,
    EBClass,
    FixedPointSubspace,
    KrausChannel,
    apply,
    product_fixed_point_subspace,
    identity_channel,
    is_entanglement_breaking,
    is_fixed_point,
    is_idempotent,
    superoperator_distance,
    tensor_channels,
    unitary_channel,
)
from .censors import censor_kind, cq_censor_channel
from .errors import CensorlabError, ChannelError, DimensionError, UnsupportedError
from .qmath import (
    DensityOperator,
    as_density,
    basis_projector,
    ginibre_matrix,
    is_density,
    kron,
    max_entangled,
    permute_subsystems,
    rng_from_seed,
    trace_distance,
)
from .resources import (
    AffineComposite,
    ClassicalQuantum,
    ConvexComposite,
    FreeSetOracle,
    GeneratorSet,
    Incoherent,
    MembershipVerdict,
    SeparablePPT,
    Verdict,
    _Composite,
    quantum_subsystem,
)

DEFAULT_BUDGET = 256
UNALTERED_TOL = 1e-8


class ConsistencyError(CensorlabError, AssertionError):
    """Two independent routes to the same verdict disagree."""


@dataclass(frozen=True, eq=False)
class Party:
    """One sender-receiver link: optional noise, then the censor."""

    label: str
    dims: tuple[int, ...]
    censor: KrausChannel
    authorized: GeneratorSet
    free_oracle: FreeSetOracle
    noise: KrausChannel | None = None

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        d = prod(dims)
        for name, ch in (("censor", self.censor), ("noise", self.noise)):
            if ch is not None and (ch.in_dim != d or ch.out_dim != d):
                raise DimensionError(f"party {self.label}: {name} does not act on {dims}")
        if self.authorized.dim != d or self.free_oracle.dim != d:
            raise DimensionError(f"party {self.label}: authorized set or oracle does not match {dims}")
        for k, g in enumerate(self.authorized):
            if not is_fixed_point(self.censor, g, FIXED_POINT_WINDOW):
                raise ChannelError(f"party {self.label}: authorized generator {k} is not fixed by the censor")

    @property
    def dim(self) -> int:
        return prod(self.dims)


@dataclass(frozen=True, eq=False)
class Scenario:
    parties: tuple[Party, ...]
    input_state: DensityOperator
    composite_oracle: _Composite

    def __post_init__(self):
        parties = tuple(self.parties)
        if not parties:
            raise ValueError("a scenario needs at least one party")
        object.__setattr__(self, "parties", parties)
        joint = tuple(d for p in parties for d in p.dims)
        rho = as_density(self.input_state)
        if rho.dim != prod(joint):
            raise DimensionError(f"input state of dimension {rho.dim} does not fit profile {joint}")
        object.__setattr__(self, "input_state", as_density(rho, joint))
        oracle = self.composite_oracle
        if len(oracle.factors) != len(parties) or oracle.party_dims != tuple(p.dim for p in parties):
            raise DimensionError("composite oracle factors do not match the parties")
        if len({type(f) for f in oracle.factors}) != 1:
            raise UnsupportedError("mixed free-set families across parties are not supported")

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(d for p in self.parties for d in p.dims)

    @property
    def noisy(self) -> bool:
        return any(p.noise is not None for p in self.parties)

    def product_censor(self) -> KrausChannel:
        return tensor_channels([p.censor for p in self.parties])

    def product_noise(self) -> KrausChannel:
        return tensor_channels([p.noise or identity_channel(p.dims) for p in self.parties])


@dataclass
class Transcript:
    stages: list[tuple[str, DensityOperator]]
    transmitted_unaltered: bool
    output_membership: MembershipVerdict

    @property
    def final(self) -> DensityOperator:
        return self.stages[-1][1]


def run_scenario(s: Scenario) -> Transcript:
    """Push the joint input through ``⊗Φ`` (if any) and then ``⊗Δ'``."""
    stages = [("input", s.input_state)]
    state = s.input_state
    if s.noisy:
        state = apply(s.product_noise(), state)
        stages.append(("noise", state))
    state = apply(s.product_censor(), state)
    stages.append(("censor", state))
    for label, st in stages:
        if not is_density(st.matrix, tol=1e-8):
            raise CensorlabError(f"stage {label!r} left the set of density operators")
    unaltered = trace_distance(s.input_state, state) <= UNALTERED_TOL
    return Transcript(stages, unaltered, s.composite_oracle.membership(state))


class BreakStatus(str, enum.Enum):
    UNBREAKABLE = "UnbreakableProved"
    BROKEN = "BrokenWitness"
    NO_WITNESS = "NoWitnessFound"


@dataclass
class BreakabilityVerdict:
    status: BreakStatus
    fixed_subspace: FixedPointSubspace
    argument: str = ""
    witness: DensityOperator | None = None
    certificate: dict = field(default_factory=dict)
    samples: dict = field(default_factory=dict)


# --- structural containment --------------------------------------------------


def _all_diagonal(basis: Sequence[np.ndarray], tol: float) -> bool:
    return all(np.max(np.abs(b - np.diag(np.diag(b)))) <= tol for b in basis)


def _containment_argument(fix: FixedPointSubspace, oracle: _Composite, tol: float) -> str | None:
    """A proof that every density operator in span(fix) is free, or ``None``."""
    kinds = {type(f) for f in oracle.factors}
    if isinstance(oracle, AffineComposite):
        try:
            worst = max(float(np.max(np.abs(oracle.project(b) - b))) for b in fix.basis)
        except UnsupportedError:
            worst = np.inf
        if worst <= tol:
            return ("fixed span lies inside the linear span of the affine composite free set, "
                    "so every fixed density operator is free")
    if kinds <= {Incoherent, ClassicalQuantum, SeparablePPT} and _all_diagonal(fix.basis, tol):
        return ("every fixed operator is diagonal in the product basis; diagonal density operators "
                "are mixtures of product basis states and therefore free")
    if isinstance(oracle, ConvexComposite) and kinds == {SeparablePPT}:
        j = quantum_subsystem(fix.basis, oracle.dims, tol)
        if j is not None:
            return (f"every fixed operator is block diagonal in the product basis of all subsystems "
                    f"except {j}; such density operators are fully separable and therefore free")
    if fix.dimension == 1:
        b = fix.basis[0]
        tr = np.trace(b).real
        if abs(tr) > tol:
            m = b / tr
            if is_density(m, tol=1e-8):
                v = oracle.membership(DensityOperator((m + m.conj().T) / 2, oracle.dims, 1e-8))
                if v.is_member:
                    return "the fixed set is the single state σ⊗…⊗σ, which is free"
    return None


# --- witnesses ---------------------------------------------------------------


def breaking_state(party_dims: Sequence[tuple[int, int]]) -> DensityOperator:
    """Classical labels |0>, |1>, ... on the X factors and a maximally entangled pair on Y_1 Y_2.

    Parties beyond the first two hold ``|0><0|`` on both factors.  The result
    is ordered ``X_1 Y_1 X_2 Y_2 ...``.
    """
    party_dims = [tuple(p) for p in party_dims]
    if len(party_dims) < 2 or any(len(p) != 2 for p in party_dims):
        raise DimensionError("breaking state needs at least two (X, Y) parties")
    (x1, y1), (x2, y2) = party_dims[:2]
    if y1 != y2 or y1 < 2:
        raise DimensionError("breaking state needs equal quantum factors of dimension >= 2")
    xs = [basis_projector(x1, 0), basis_projector(x2, 1 % x2)]
    rest = [kron(basis_projector(x, 0), basis_projector(y, 0)) for x, y in party_dims[2:]]
    # built as X1 X2 Y1 Y2 rest..., then permuted to X1 Y1 X2 Y2 rest...
    m = kron(xs[0], xs[1], max_entangled(y1).matrix, *rest)
    dims = [x1, x2, y1, y2] + [d for p in party_dims[2:] for d in p]
    perm = [0, 2, 1, 3] + list(range(4, len(dims)))
    return permute_subsystems(DensityOperator(m, tuple(dims)), perm)


def _cq_witness(s: Scenario):
    if len(s.parties) < 2:
        return None
    if not all(len(p.dims) == 2 and censor_kind(p.censor) == "cq" for p in s.parties):
        return None
    try:
        return breaking_state([p.dims for p in s.parties])
    except DimensionError:
        return None


def _sample_fixed(fix: FixedPointSubspace, dims, rng: np.random.Generator):
    d = prod(dims)
    g = ginibre_matrix(d, rng)
    rho = g @ g.conj().T
    m = fix.project(rho / np.trace(rho).real)
    m = (m + m.conj().T) / 2
    tr = np.trace(m).real
    if tr <= 1e-12:
        return None
    m = m / tr
    if np.linalg.eigvalsh(m)[0] < -1e-9:
        return None
    return DensityOperator(m, tuple(dims), 1e-8)


def breakability_analysis(s: Scenario, budget: int = DEFAULT_BUDGET, seed: int = 0) -> BreakabilityVerdict:
    """Decide whether a free-set violating state survives ``(Δ')^{⊗N}``.

    Order of attempts: a structural proof that the fixed set is free, the
    known classical-quantum witness, then ``budget`` random states projected
    onto the fixed subspace.  Sampling never upgrades to a proof.
    """
    for p in s.parties:
        if not is_idempotent(p.censor):
            raise UnsupportedError(f"party {p.label}: breakability analysis needs an idempotent censor")
    big = s.product_censor()
    fix = product_fixed_point_subspace([p.censor for p in s.parties])
    oracle = s.composite_oracle

    argument = _containment_argument(fix, oracle, FIXED_POINT_WINDOW)
    if argument is not None:
        return BreakabilityVerdict(BreakStatus.UNBREAKABLE, fix, argument)

    witness = _cq_witness(s)
    if witness is not None:
        v = oracle.membership(witness)
        if v.is_nonmember and is_fixed_point(big, witness, FIXED_POINT_WINDOW):
            return BreakabilityVerdict(
                BreakStatus.BROKEN, fix,
                "classical labels on the X factors with a Bell pair across the Y factors pass unchanged",
                witness, v.certificate,
            )

    rng = rng_from_seed(seed)
    tried = skipped = inconclusive = 0
    for k in range(budget):
        rho = _sample_fixed(fix, s.dims, rng)
        if rho is None:
            skipped += 1
            continue
        tried += 1
        v = oracle.membership(rho)
        if v.is_nonmember and is_fixed_point(big, rho, FIXED_POINT_WINDOW):
            return BreakabilityVerdict(
                BreakStatus.BROKEN, fix, f"sampled fixed state {k} lies outside the free set",
                rho, v.certificate, {"tried": tried, "skipped": skipped, "inconclusive": inconclusive},
            )
        if v.verdict is Verdict.INCONCLUSIVE:
            inconclusive += 1
    return BreakabilityVerdict(
        BreakStatus.NO_WITNESS, fix, "no structural proof and no sampled witness",
        samples={"tried": tried, "skipped": skipped, "inconclusive": inconclusive},
    )


@dataclass
class EBReport:
    applicable: bool
    status: str
    classifications: list[str]
    analysis_status: BreakStatus
    consistent: bool
    note: str = ""


def eb_unbreakability_check(s: Scenario, budget: int = DEFAULT_BUDGET, seed: int = 0) -> EBReport:
    """Entanglement-breaking censors of a convex theory cannot be broken.

    When every censor is classified entanglement breaking the predicted
    verdict is ``UnbreakableProved``; a ``BrokenWitness`` from
    :func:`breakability_analysis` then raises :class:`ConsistencyError`.
    """
    if not isinstance(s.composite_oracle, ConvexComposite):
        raise UnsupportedError("the entanglement-breaking route needs a convex composite free set")
    classes = [is_entanglement_breaking(p.censor).verdict for p in s.parties]
    analysis = breakability_analysis(s, budget, seed)
    names = [c.value for c in classes]
    if any(c is EBClass.INCONCLUSIVE for c in classes):
        return EBReport(False, "Inconclusive", names, analysis.status, True,
                        "an entanglement-breaking classification is inconclusive")
    if any(c is EBClass.NO for c in classes):
        return EBReport(False, "NotApplicable", names, analysis.status, True,
                        "some censor is not entanglement breaking")
    if analysis.status is BreakStatus.BROKEN:
        raise ConsistencyError("entanglement-breaking censors, yet a breaking witness was found")
    consistent = analysis.status is BreakStatus.UNBREAKABLE
    note = "" if consistent else "analysis found no proof on its own; entanglement breaking alone implies it"
    return EBReport(True, BreakStatus.UNBREAKABLE.value, names, analysis.status, consistent, note)


# --- noise -------------------------------------------------------------------


def swap_channel(x_dim: int, y_dim: int) -> KrausChannel:
    """Unitary exchange of two equal tensor factors."""
    if x_dim != y_dim:
        raise DimensionError("swap needs two factors of equal dimension")
    d = x_dim
    u = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            u[j * d + i, i * d + j] = 1
    return unitary_channel(u, (d, d), label=f"swap:{d}x{d}")


def _free_samples(gens: GeneratorSet, samples: int, seed: int) -> list[tuple[str, DensityOperator]]:
    out = [(f"generator_{k}", g) for k, g in enumerate(gens)]
    rng = rng_from_seed(seed)
    mats = gens.matrices()
    for k in range(samples):
        t = rng.dirichlet(np.ones(len(mats)))
        m = sum(ti * g for ti, g in zip(t, mats))
        out.append((f"mixture_{k}", DensityOperator((m + m.conj().T) / 2, gens.dims, 1e-8)))
    return out


@dataclass
class CommutationReport:
    passed: bool
    checked: int
    max_distance: float
    witness: dict | None = None


def commutation_check(noise: KrausChannel, censor: KrausChannel, free_gens: GeneratorSet,
                      samples: int = 100, seed: int = 0, tol: float = 1e-8) -> CommutationReport:
    """Does ``Δ∘Φ`` agree with ``Φ∘Δ`` on the generators and their convex mixtures?"""
    if noise.in_dim != censor.in_dim or free_gens.dim != censor.in_dim:
        raise DimensionError("noise, censor and generators must share one space")
    worst, witness = 0.0, None
    probes = _free_samples(free_gens, samples, seed)
    for name, sigma in probes:
        a = apply(censor, apply(noise, sigma))
        b = apply(noise, apply(censor, sigma))
        dist = trace_distance(a, b)
        if dist > worst:
            worst = dist
            if dist > tol:
                witness = {"input": name, "state": sigma, "censor_after_noise": a,
                           "noise_after_censor": b, "distance": dist}
    return CommutationReport(worst <= tol, len(probes), worst, witness)


@dataclass
class NonGeneratingReport:
    passed: bool
    checked: int
    failures: list = field(default_factory=list)
    inconclusive: list = field(default_factory=list)


def nongenerating_check(noise: KrausChannel, free_oracle: FreeSetOracle, free_gens: GeneratorSet,
                        samples: int = 100, seed: int = 0) -> NonGeneratingReport:
    """Does the noise keep free states free?  Inconclusive outputs are listed, not passed."""
    if noise.in_dim != free_gens.dim or noise.out_dim != free_oracle.dim:
        raise DimensionError("noise, oracle and generators must share one space")
    probes = _free_samples(free_gens, samples, seed)
    failures, inconclusive = [], []
    for name, sigma in probes:
        out = apply(noise, sigma)
        v = free_oracle.membership(out)
        if v.is_nonmember:
            failures.append({"input": name, "state": sigma, "output": out, "certificate": v.certificate})
        elif v.verdict is Verdict.INCONCLUSIVE:
            inconclusive.append({"input": name, "certificate": v.certificate})
    return NonGeneratingReport(not failures, len(probes), failures, inconclusive)


@dataclass
class CorrectionReport:
    noisy_distance: float
    censored_distance: float

    @property
    def corrected(self) -> bool:
        return self.censored_distance < self.noisy_distance


def correction_effect_probe(noise: KrausChannel, censor: KrausChannel, sigma) -> CorrectionReport:
    """Compare ``Φ(σ)`` and ``Δ'(Φ(σ))`` against an authorized message σ."""
    sigma = as_density(sigma)
    if not is_fixed_point(censor, sigma, FIXED_POINT_WINDOW):
        raise ValueError("σ is not authorized: the censor changes it")
    noisy = apply(noise, sigma)
    censored = apply(censor, noisy)
    return CorrectionReport(trace_distance(noisy, sigma), trace_distance(censored, sigma))


def cq_decompose(rho, x_dim: int, y_dim: int) -> tuple[np.ndarray, list[np.ndarray | None]]:
    """Split a classical-quantum state into weights ``p_x`` and conditional states ``σ^x``."""
    rho = as_density(rho)
    t = rho.matrix.reshape(x_dim, y_dim, x_dim, y_dim)
    p = np.array([np.trace(t[x, :, x, :]).real for x in range(x_dim)])
    sig = [t[x, :, x, :] / p[x] if p[x] > 1e-14 else None for x in range(x_dim)]
    return p, sig


def swap_censor_prediction(p: Sequence[float], sigmas: Sequence[np.ndarray | None]) -> np.ndarray:
    """``Σ_{x,y} p_x <y|σ^x|y> |y><y| ⊗ |x><x|``: what a receiver gets after swap noise and a cq censor."""
    d = len(p)
    out = np.zeros((d * d, d * d), dtype=complex)
    for x in range(d):
        if sigmas[x] is None:
            continue
        for y in range(d):
            out += p[x] * sigmas[x][y, y].real * np.kron(basis_projector(d, y), basis_projector(d, x))
    return out


def is_swap_cq_pair(noise: KrausChannel | None, censor: KrausChannel) -> bool:
    if noise is None or len(censor.in_dims) != 2 or censor.in_dims[0] != censor.in_dims[1]:
        return False
    d = censor.in_dims[0]
    return (superoperator_distance(censor, cq_censor_channel(d, d)) <= 1e-12
            and superoperator_distance(noise, swap_channel(d, d)) <= 1e-12)
