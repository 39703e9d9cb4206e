"""JSON scenario files, named presets, and deterministic reports.

Scenario file (version 1)::

    {
      "version": 1,
      "seed": 0,
      "budget": 256,
      "composite": "convex",            # optional: "affine" | "convex"
      "parties": [
        {"label": "A1", "dims": [2, 2], "censor": "cq:2x2",
         "noise": "swap", "free": "separable_ppt", "authorized": null}
      ],
      "input_state": {"kron": ["zero", "plus"]}
    }

Complex numbers are two-element arrays ``[re, im]``; matrices are lists of
rows of such pairs.
"""

from __future__ import annotations

import copy
import hashlib
import json
from dataclasses import dataclass
from math import prod
from typing import Any

import numpy as np

from . import __version__
from .channels import (
    KrausChannel,
    identity_channel,
    is_cptp,
    is_entanglement_breaking,
    is_idempotent,
    superoperator_distance,
    unitary_channel,
)
from .censors import (
    HADAMARD,
    PAULI,
    CqCensor,
    Dephasing,
    Replacement,
    Twirl,
    TwirlGroup,
    authorized_generators,
    dephasing_channel,
    free_oracle_for,
    replacement_channel,
    verify_freeness_preserving,
    verify_resource_destroying,
)
from .errors import CensorlabError
from .protocol import (
    BreakStatus,
    Party,
    Scenario,
    breakability_analysis,
    breaking_state,
    commutation_check,
    correction_effect_probe,
    cq_decompose,
    eb_unbreakability_check,
    is_swap_cq_pair,
    nongenerating_check,
    run_scenario,
    swap_censor_prediction,
    swap_channel,
)
from .qmath import (
    BELL_VECTORS,
    DensityOperator,
    basis_projector,
    kron_states,
    max_coherent,
    maximally_mixed,
    pure,
    trace_distance,
)
from .resources import (
    AffineComposite,
    ClassicalQuantum,
    ConvexComposite,
    GeneratorSet,
    Incoherent,
    SeparablePPT,
    TwirlInvariant,
    fixed_set_equals_affine_hull_check,
)

FILE_VERSION = 1
CHECK_SAMPLES = 100
EQUIV_TOL = 1e-12


class ScenarioParseError(CensorlabError):
    """Malformed scenario file; ``where`` names the line or field."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


# --- JSON helpers ------------------------------------------------------------


def num(x) -> float:
    v = round(float(x), 12)
    return 0.0 if v == 0 else v


def matrix_to_json(m: np.ndarray) -> list:
    return [[[num(z.real), num(z.imag)] for z in row] for row in np.asarray(m)]


def matrix_from_json(data, where: str) -> np.ndarray:
    try:
        a = np.array(data, dtype=float)
    except (TypeError, ValueError):
        raise ScenarioParseError(where, "matrix must be a list of rows of [re, im] pairs") from None
    if a.ndim != 3 or a.shape[2] != 2 or a.shape[0] != a.shape[1]:
        raise ScenarioParseError(where, f"expected a square matrix of [re, im] pairs, got shape {a.shape}")
    return a[..., 0] + 1j * a[..., 1]


def jsonable(obj):
    """Recursively convert certificates and reports to plain, rounded JSON values."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, DensityOperator):
        return matrix_to_json(obj.matrix)
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj) and obj.ndim == 2:
            return matrix_to_json(obj)
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return num(obj) if np.isfinite(obj) else str(float(obj))
    if hasattr(obj, "value"):
        return obj.value
    return obj


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, ensure_ascii=False)


def digest(data: dict) -> str:
    canon = json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


# --- spec resolution ---------------------------------------------------------


def _dims_arg(text: str, where: str) -> tuple[int, ...]:
    try:
        dims = tuple(int(p) for p in text.split("x"))
    except ValueError:
        raise ScenarioParseError(where, f"bad dimension list {text!r}") from None
    if not dims or any(d < 1 for d in dims):
        raise ScenarioParseError(where, f"bad dimension list {text!r}")
    return dims


GROUPS = {
    "trivial2": lambda: TwirlGroup.trivial(2),
    "z2": TwirlGroup.z2,
    "pauli1": TwirlGroup.pauli,
    "collective_z2": TwirlGroup.collective_z2,
    "collective_pauli2": TwirlGroup.collective_pauli,
}


def resolve_group(name: str, where: str) -> TwirlGroup:
    if name.startswith("zphase"):
        return TwirlGroup.cyclic_phase(int(name[len("zphase"):]))
    try:
        return GROUPS[name]()
    except KeyError:
        raise ScenarioParseError(where, f"unknown group {name!r}; known: {sorted(GROUPS)} or zphase<d>") from None


def resolve_censor(spec, where: str):
    """Censor spec string or object -> (CensorSpec, default dims)."""
    if isinstance(spec, dict):
        kind = spec.get("kind")
        if kind == "replacement":
            if "target" not in spec:
                raise ScenarioParseError(where, "replacement censor needs a target")
            dims = spec.get("dims")
            target = resolve_state(spec["target"], tuple(dims) if dims else None, f"{where}.target")
            return Replacement(target), target.dims
        if kind is None:
            raise ScenarioParseError(where, "censor object needs a 'kind'")
        spec = ":".join([kind] + [str(v) for k, v in spec.items() if k != "kind"])
    if not isinstance(spec, str):
        raise ScenarioParseError(where, "censor must be a string or an object")
    kind, _, arg = spec.partition(":")
    if kind == "dephasing":
        (d,) = _dims_arg(arg or "2", where)
        return Dephasing(d), (d,)
    if kind == "cq":
        dims = _dims_arg(arg or "2x2", where)
        if len(dims) != 2:
            raise ScenarioParseError(where, "cq censor takes XxY dimensions")
        return CqCensor(*dims), dims
    if kind == "twirl":
        group = resolve_group(arg, where)
        dims = (2, 2) if group.dim == 4 and group.label.startswith("collective") else (group.dim,)
        return Twirl(group), dims
    if kind == "replacement":
        name, _, d = arg.partition(":")
        dims = _dims_arg(d or "2", where)
        target = resolve_state(name or "max_mixed", dims, where)
        return Replacement(target), dims
    raise ScenarioParseError(where, f"unknown censor kind {kind!r}")


def _mixture(weights, channels, dims) -> KrausChannel:
    ops = [np.sqrt(w) * k for w, ch in zip(weights, channels) for k in ch.kraus_ops]
    return KrausChannel(tuple(ops), dims, dims, label="mixture")


def resolve_noise(spec, dims: tuple[int, ...], where: str) -> KrausChannel | None:
    d = prod(dims)
    if spec is None:
        return None
    if isinstance(spec, dict):
        kind = spec.get("kind")
        if kind == "unitary":
            return unitary_channel(matrix_from_json(spec.get("matrix"), f"{where}.matrix"), dims)
        if kind == "kraus":
            ops = [matrix_from_json(m, f"{where}.ops[{i}]") for i, m in enumerate(spec.get("ops", []))]
            return KrausChannel(tuple(ops), dims, dims, label="kraus")
        if kind == "mixture":
            ws = spec.get("weights")
            chs = spec.get("channels")
            if not isinstance(ws, list) or not isinstance(chs, list) or len(ws) != len(chs):
                raise ScenarioParseError(where, "mixture needs equal-length 'weights' and 'channels'")
            parts = [resolve_noise(c, dims, f"{where}.channels[{i}]") for i, c in enumerate(chs)]
            return _mixture([float(w) for w in ws], [p or identity_channel(dims) for p in parts], dims)
        raise ScenarioParseError(where, f"unknown noise kind {kind!r}")
    if not isinstance(spec, str):
        raise ScenarioParseError(where, "noise must be a string, an object, or null")
    kind, _, arg = spec.partition(":")
    if kind == "identity":
        return identity_channel(dims)
    if kind == "swap":
        if len(dims) != 2:
            raise ScenarioParseError(where, "swap noise needs a two-factor party")
        return swap_channel(*dims)
    if kind == "unitary":
        gates = {"hadamard": HADAMARD, **{k.lower(): v for k, v in PAULI.items()}}
        if arg.startswith("phase"):
            phi = float(arg[len("phase"):] or 0.3)
            return unitary_channel(np.diag(np.exp(1j * phi * np.arange(d))), dims, label=f"phase{phi}")
        if arg not in gates:
            raise ScenarioParseError(where, f"unknown gate {arg!r}")
        u = gates[arg]
        if u.shape[0] != d:
            raise ScenarioParseError(where, f"gate {arg!r} does not act on dimension {d}")
        return unitary_channel(u, dims, label=arg)
    censor_like, _ = resolve_censor(spec, where)
    ch = censor_like.channel()
    return KrausChannel(ch.kraus_ops, dims, dims, label=ch.label)


def resolve_free(spec, censor_spec, dims: tuple[int, ...], where: str):
    if spec is None:
        oracle = free_oracle_for(censor_spec)
        if oracle.dim == prod(dims) and isinstance(oracle, SeparablePPT) and oracle.dims != dims:
            oracle = SeparablePPT(dims)
        return oracle
    if not isinstance(spec, str):
        raise ScenarioParseError(where, "free-set spec must be a string")
    kind, _, arg = spec.partition(":")
    if kind == "incoherent":
        return Incoherent(prod(_dims_arg(arg, where)) if arg else prod(dims))
    if kind == "cq":
        x, y = _dims_arg(arg, where) if arg else dims
        return ClassicalQuantum(x, y)
    if kind == "separable_ppt":
        return SeparablePPT(_dims_arg(arg, where) if arg else dims)
    if kind == "twirl":
        if arg:
            return TwirlInvariant(resolve_group(arg, where))
        if isinstance(censor_spec, Twirl):
            return TwirlInvariant(censor_spec.group)
        raise ScenarioParseError(where, "twirl free set needs a group")
    raise ScenarioParseError(where, f"unknown free-set kind {kind!r}")


def _local_state(name: str, where: str) -> DensityOperator:
    kind, _, arg = name.partition(":")
    simple = {
        "zero": lambda: DensityOperator(basis_projector(2, 0)),
        "one": lambda: DensityOperator(basis_projector(2, 1)),
        "plus": lambda: pure([1, 1]),
        "minus": lambda: pure([1, -1]),
    }
    if kind in simple and not arg:
        return simple[kind]()
    if kind.startswith("bell_") and kind[5:] in BELL_VECTORS:
        return pure(BELL_VECTORS[kind[5:]], (2, 2))
    if kind in ("max_mixed", "max_coherent"):
        dims = _dims_arg(arg or "2", where)
        make = maximally_mixed if kind == "max_mixed" else max_coherent
        return make(prod(dims), dims)
    if kind == "basis":
        d, _, k = arg.partition(":")
        dims = _dims_arg(d, where)
        try:
            return DensityOperator(basis_projector(prod(dims), int(k)), dims)
        except (ValueError, CensorlabError) as exc:
            raise ScenarioParseError(where, f"bad basis state {name!r}: {exc}") from None
    raise ScenarioParseError(where, f"unknown state {name!r}")


def resolve_state(spec, dims: tuple[int, ...] | None, where: str, party_dims=None) -> DensityOperator:
    """Named state, ``{"kron": [...]}``, ``{"pure": [...]}`` or ``{"matrix": [...]}``."""
    if isinstance(spec, str):
        if spec == "breaking_state":
            if party_dims is None:
                raise ScenarioParseError(where, "breaking_state is only defined for a scenario input")
            return breaking_state(party_dims)
        if dims is not None and spec in ("max_coherent", "max_mixed"):
            return _local_state(f"{spec}:{'x'.join(map(str, dims))}", where)
        rho = _local_state(spec, where)
    elif isinstance(spec, dict) and "kron" in spec:
        parts = [resolve_state(s, None, f"{where}.kron[{i}]") for i, s in enumerate(spec["kron"])]
        rho = kron_states(*parts)
    elif isinstance(spec, dict) and "pure" in spec:
        v = np.array(spec["pure"], dtype=float)
        if v.ndim != 2 or v.shape[1] != 2:
            raise ScenarioParseError(f"{where}.pure", "expected a list of [re, im] amplitudes")
        rho = pure(v[:, 0] + 1j * v[:, 1], dims)
    elif isinstance(spec, dict) and "matrix" in spec:
        rho = DensityOperator(matrix_from_json(spec["matrix"], f"{where}.matrix"), dims)
    else:
        raise ScenarioParseError(where, "state must be a name or an object with kron/pure/matrix")
    if dims is not None and rho.dim != prod(dims):
        raise ScenarioParseError(where, f"state of dimension {rho.dim} does not fit {dims}")
    return DensityOperator(rho.matrix, tuple(dims), rho.tol) if dims is not None else rho


# --- scenario assembly -------------------------------------------------------


@dataclass
class LoadedScenario:
    data: dict
    scenario: Scenario
    seed: int
    budget: int
    censor_specs: list


def _require(obj: dict, key: str, where: str):
    if key not in obj:
        raise ScenarioParseError(where, f"missing field {key!r}")
    return obj[key]


def build_scenario(data: dict) -> LoadedScenario:
    """Turn parsed JSON into a :class:`Scenario`; raises ScenarioParseError or CensorlabError."""
    if not isinstance(data, dict):
        raise ScenarioParseError("$", "scenario must be a JSON object")
    version = _require(data, "version", "$")
    if version != FILE_VERSION:
        raise ScenarioParseError("$.version", f"unsupported version {version!r}; expected {FILE_VERSION}")
    raw_parties = _require(data, "parties", "$")
    if not isinstance(raw_parties, list) or not raw_parties:
        raise ScenarioParseError("$.parties", "expected a nonempty list")
    parties, specs = [], []
    for i, rp in enumerate(raw_parties):
        where = f"$.parties[{i}]"
        if not isinstance(rp, dict):
            raise ScenarioParseError(where, "party must be an object")
        cspec, cdims = resolve_censor(_require(rp, "censor", where), f"{where}.censor")
        dims = tuple(rp.get("dims") or cdims)
        if prod(dims) != prod(cdims):
            raise ScenarioParseError(f"{where}.dims", f"{list(dims)} does not fit censor dimensions {list(cdims)}")
        base = cspec.channel()
        censor = KrausChannel(base.kraus_ops, dims, dims, label=base.label)
        noise = resolve_noise(rp.get("noise"), dims, f"{where}.noise")
        free = resolve_free(rp.get("free"), cspec, dims, f"{where}.free")
        if rp.get("authorized") is None:
            gens = authorized_generators(cspec)
        else:
            gens = GeneratorSet(tuple(resolve_state(s, dims, f"{where}.authorized[{k}]")
                                      for k, s in enumerate(rp["authorized"])))
        gens = GeneratorSet(tuple(DensityOperator(g.matrix, dims, g.tol) for g in gens))
        parties.append(Party(rp.get("label", f"A{i + 1}"), dims, censor, gens, free, noise))
        specs.append(cspec)
    mode = data.get("composite")
    if mode is None:
        mode = "affine" if all(p.free_oracle.affine for p in parties) else "convex"
    if mode not in ("affine", "convex"):
        raise ScenarioParseError("$.composite", "expected 'affine' or 'convex'")
    factors = tuple(p.free_oracle for p in parties)
    composite = AffineComposite(factors) if mode == "affine" else ConvexComposite(factors)
    joint = tuple(d for p in parties for d in p.dims)
    rho = resolve_state(_require(data, "input_state", "$"), joint, "$.input_state",
                        party_dims=[p.dims for p in parties])
    seed = data.get("seed", 0)
    budget = data.get("budget", 256)
    if not isinstance(seed, int) or not isinstance(budget, int) or budget < 0:
        raise ScenarioParseError("$", "seed and budget must be integers (budget >= 0)")
    return LoadedScenario(data, Scenario(tuple(parties), rho, composite), seed, budget, specs)


def load_text(text: str) -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(f"line {exc.lineno}, column {exc.colno}", exc.msg) from None


# --- reports -----------------------------------------------------------------


def _membership_json(v) -> dict:
    return {"verdict": v.verdict.value, "certificate": jsonable(v.certificate)}


def run_report(loaded: LoadedScenario, name: str | None = None) -> dict:
    """Run the protocol, the breakability analysis and every applicable check."""
    s = loaded.scenario
    seed, budget = loaded.seed, loaded.budget
    data = copy.deepcopy(loaded.data)
    data["seed"], data["budget"] = seed, budget

    tr = run_scenario(s)
    transcript = {
        "stages": [
            {"label": label, "trace_distance_from_input": num(trace_distance(st, s.input_state))}
            for label, st in tr.stages
        ],
        "transmitted_unaltered": tr.transmitted_unaltered,
        "output_membership": _membership_json(tr.output_membership),
        "final_state": matrix_to_json(tr.final.matrix),
    }

    verdict = breakability_analysis(s, budget, seed)
    breakability = {
        "status": verdict.status.value,
        "argument": verdict.argument,
        "fixed_dimension": verdict.fixed_subspace.dimension,
        "certificate": jsonable(verdict.certificate),
        "samples": jsonable(verdict.samples),
        "witness": matrix_to_json(verdict.witness.matrix) if verdict.witness is not None else None,
    }

    checks: dict[str, Any] = {
        "entanglement_breaking": [
            {"party": p.label, "verdict": r.verdict.value, "reason": r.reason}
            for p in s.parties for r in [is_entanglement_breaking(p.censor)]
        ]
    }
    if isinstance(s.composite_oracle, ConvexComposite):
        eb = eb_unbreakability_check(s, budget, seed)
        checks["eb_unbreakability"] = {
            "applicable": eb.applicable, "status": eb.status, "analysis_status": eb.analysis_status.value,
            "consistent": eb.consistent, "note": eb.note,
        }
    if s.noisy:
        comm, nongen, corr, swap = [], [], [], []
        for a, p in enumerate(s.parties):
            if p.noise is None:
                continue
            c = commutation_check(p.noise, p.censor, p.authorized, CHECK_SAMPLES, seed)
            comm.append({
                "party": p.label, "passed": c.passed, "checked": c.checked, "max_distance": num(c.max_distance),
                "witness": None if c.witness is None else jsonable(
                    {k: c.witness[k] for k in ("input", "state", "censor_after_noise", "noise_after_censor", "distance")}
                ),
            })
            n = nongenerating_check(p.noise, p.free_oracle, p.authorized, CHECK_SAMPLES, seed)
            nongen.append({"party": p.label, "passed": n.passed, "checked": n.checked,
                           "failures": len(n.failures), "inconclusive": len(n.inconclusive)})
            probes = []
            for k, g in enumerate(p.authorized):
                r = correction_effect_probe(p.noise, p.censor, g)
                probes.append({"generator": k, "noisy_distance": num(r.noisy_distance),
                               "censored_distance": num(r.censored_distance), "corrected": r.corrected})
            corr.append({"party": p.label, "probes": probes})
            if is_swap_cq_pair(p.noise, p.censor) and len(s.parties) == 1 and a == 0:
                d = p.dims[0]
                if ClassicalQuantum(d, d).membership(s.input_state).is_member:
                    pred = swap_censor_prediction(*cq_decompose(s.input_state, d, d))
                    swap.append({"party": p.label, "predicted_final": matrix_to_json(pred),
                                 "max_entry_distance": num(np.max(np.abs(pred - tr.final.matrix)))})
        checks["commutation"] = comm
        checks["nongenerating"] = nongen
        checks["correction"] = corr
        if swap:
            checks["swap_formula"] = swap

    return {
        "tool": "censorlab",
        "tool_version": __version__,
        "report_version": FILE_VERSION,
        "scenario": name or "file",
        "scenario_digest": digest(data),
        "seed": seed,
        "budget": budget,
        "profile": list(s.dims),
        "parties": [
            {"label": p.label, "dims": list(p.dims), "censor": p.censor.label,
             "noise": None if p.noise is None else p.noise.label}
            for p in s.parties
        ],
        "transcript": transcript,
        "breakability": breakability,
        "checks": checks,
    }


def report_body(report: dict) -> bytes:
    """Canonical bytes of a report with the timing field removed."""
    body = {k: v for k, v in report.items() if k != "timing"}
    return dumps(body).encode("utf-8")


# --- presets -----------------------------------------------------------------

PRESETS: dict[str, tuple[str, dict]] = {
    "coherence_censorship": (
        "two senders, dephasing censors, coherent input |++>: coherence is removed, censorship unbreakable",
        {
            "version": 1, "seed": 0, "budget": 256,
            "parties": [{"label": "A1", "censor": "dephasing:2"}, {"label": "A2", "censor": "dephasing:2"}],
            "input_state": "max_coherent",
        },
    ),
    "entanglement_break": (
        "two senders, classical-quantum censors, X-labels plus a Bell pair on Y: censorship broken",
        {
            "version": 1, "seed": 0, "budget": 256, "composite": "convex",
            "parties": [
                {"label": "A1", "censor": "cq:2x2", "free": "separable_ppt"},
                {"label": "A2", "censor": "cq:2x2", "free": "separable_ppt"},
            ],
            "input_state": "breaking_state",
        },
    ),
    "swap_noise": (
        "one sender, classical-quantum censor after swap noise on |0><0| x |+><+|: censor does not commute",
        {
            "version": 1, "seed": 0, "budget": 256, "composite": "convex",
            "parties": [{"label": "A1", "censor": "cq:2x2", "noise": "swap", "free": "separable_ppt"}],
            "input_state": {"kron": ["zero", "plus"]},
        },
    ),
    "reference_frame_twirl": (
        "two senders, each twirled by {II, ZZ}: twirl-invariant states pass, censorship unbreakable",
        {
            "version": 1, "seed": 0, "budget": 256,
            "parties": [
                {"label": "A1", "censor": "twirl:collective_z2"},
                {"label": "A2", "censor": "twirl:collective_z2"},
            ],
            "input_state": {"kron": ["bell_phi_plus", "max_coherent:2x2"]},
        },
    ),
    "replacement_minimal": (
        "two senders, replacement censors toward |0><0| x I/2: entanglement-breaking and unbreakable",
        {
            "version": 1, "seed": 0, "budget": 256, "composite": "convex",
            "parties": [
                {"label": "A1", "censor": {"kind": "replacement", "target": {"kron": ["zero", "max_mixed:2"]}},
                 "free": "separable_ppt"},
                {"label": "A2", "censor": {"kind": "replacement", "target": {"kron": ["zero", "max_mixed:2"]}},
                 "free": "separable_ppt"},
            ],
            "input_state": "breaking_state",
        },
    ),
    "entanglement_via_coherence": (
        "the breaking state against full dephasing of each sender: stricter censorship, unbreakable",
        {
            "version": 1, "seed": 0, "budget": 256, "composite": "convex",
            "parties": [
                {"label": "A1", "dims": [2, 2], "censor": "dephasing:4", "free": "separable_ppt"},
                {"label": "A2", "dims": [2, 2], "censor": "dephasing:4", "free": "separable_ppt"},
            ],
            "input_state": "breaking_state",
        },
    ),
    "coherence_phase_noise": (
        "one sender, incoherent-preserving phase noise before dephasing: noise and censor commute",
        {
            "version": 1, "seed": 0, "budget": 256,
            "parties": [{"label": "A1", "censor": "dephasing:2", "noise": "unitary:phase0.3"}],
            "input_state": {"kron": ["plus"]},
        },
    ),
}


def preset_names() -> list[str]:
    return list(PRESETS)


def preset_data(name: str) -> dict:
    try:
        return copy.deepcopy(PRESETS[name][1])
    except KeyError:
        raise ScenarioParseError("preset", f"unknown preset {name!r}; known: {', '.join(PRESETS)}") from None


def is_unbroken(report: dict) -> bool:
    return report["breakability"]["status"] == BreakStatus.UNBREAKABLE.value


# --- channel verification ----------------------------------------------------


def verify_report(censor: str, free: str | None = None, samples: int = 500, seed: int = 0) -> dict:
    """Property table for one censor: CPTP, idempotence, EB class, RD, freeness, equivalences."""
    cspec, dims = resolve_censor(censor, "--censor")
    base = cspec.channel()
    ch = KrausChannel(base.kraus_ops, dims, dims, label=base.label)
    oracle = resolve_free(free, cspec, dims, "--free")
    gens = GeneratorSet(tuple(DensityOperator(g.matrix, dims, g.tol) for g in authorized_generators(cspec)))
    rows = []

    def row(name, passed, **detail):
        rows.append({"check": name, "passed": None if passed is None else bool(passed), "detail": jsonable(detail)})

    c = is_cptp(ch)
    row("cptp", c.ok, tp_error=c.details["tp_error"], choi_min_eigenvalue=c.details["choi_min_eigenvalue"])
    idem = is_idempotent(ch)
    row("idempotent", idem)
    eb = is_entanglement_breaking(ch)
    row("entanglement_breaking", eb.verdict.value != "Inconclusive", verdict=eb.verdict.value, reason=eb.reason)
    rd = verify_resource_destroying(ch, oracle, samples, seed)
    row("resource_destroying", rd.passed, oracle=type(oracle).__name__, checked=rd.checked,
        failures=len(rd.failures), inconclusive=len(rd.inconclusive))
    fp = verify_freeness_preserving(ch, gens, seed=seed)
    row("freeness_preserving", fp.passed, generators=fp.generators_checked,
        combinations=fp.combinations_checked, max_distance=fp.max_distance)
    if idem:
        fx = fixed_set_equals_affine_hull_check(ch, gens)
        row("fixed_set_equals_authorized_span", fx["equal"], fixed_dimension=fx["fixed_dimension"],
            generator_span_dimension=fx["generator_span_dimension"])
    d = ch.in_dim
    if len(dims) == 1 and d > 1:
        dist = superoperator_distance(ch, KrausChannel(dephasing_channel(d).kraus_ops, dims, dims))
        row("equals_dephasing", None, distance=dist, equal=dist <= EQUIV_TOL)
    target = maximally_mixed(d, dims)
    dist = superoperator_distance(ch, replacement_channel(target, dims))
    row("equals_replacement_max_mixed", None, distance=dist, equal=dist <= EQUIV_TOL)
    return {
        "tool": "censorlab",
        "tool_version": __version__,
        "report_version": FILE_VERSION,
        "censor": ch.label,
        "dims": list(dims),
        "free": type(oracle).__name__,
        "seed": seed,
        "samples": samples,
        "checks": rows,
        "all_passed": all(r["passed"] is not False for r in rows),
    }
