"""Acceptance criteria 1-9, one test each, one PASS/FAIL line each."""

import time

import numpy as np
import pytest

from conftest import random_incoherent_channel, record
from censorlab import scenarios as sc
from censorlab.censors import (
    TwirlGroup,
    cq_censor_channel,
    dephasing_channel,
    replacement_channel,
    twirl_channel,
)
from censorlab.channels import (
    EBClass,
    apply,
    fixed_point_subspace,
    identity_channel,
    is_entanglement_breaking,
    product_fixed_point_subspace,
    superoperator_distance,
    tensor_power,
)
from censorlab.protocol import (
    BreakStatus,
    breakability_analysis,
    breaking_state,
    commutation_check,
    eb_unbreakability_check,
    run_scenario,
)
from censorlab.qmath import (
    basis_projector,
    bell_state,
    kron,
    kron_states,
    maximally_mixed,
    partial_transpose,
    pure,
    random_density,
    trace_distance,
    werner_state,
)
from censorlab.resources import (
    GeneratorSet,
    SeparablePPT,
    affine_hull_membership,
    convex_hull_membership,
    incoherent_generators,
)

SIGMA = {"kron": ["zero", "max_mixed:2"]}


def _scenario(censor, n, input_state, **extra):
    data = {"version": 1, "parties": [{"label": f"A{i + 1}", "censor": censor, **extra} for i in range(n)],
            "input_state": input_state}
    return sc.build_scenario(data).scenario


@pytest.mark.parametrize("n", [1, 2, 3])
def test_criterion_1_coherence_censorship_unbreakable(n):
    t0 = time.perf_counter()
    fix = fixed_point_subspace(tensor_power(dephasing_channel(2), n))
    diagonal = all(np.allclose(b, np.diag(np.diag(b)), atol=1e-12) for b in fix.basis)
    verdict = breakability_analysis(_scenario("dephasing:2", n, "max_coherent"))
    elapsed = time.perf_counter() - t0
    ok = fix.dimension == 2 ** n and diagonal and verdict.status is BreakStatus.UNBREAKABLE and elapsed < 5
    record(1, ok, f"N={n} dim={fix.dimension} diagonal={diagonal} {verdict.status.value} {elapsed:.3f}s")
    assert ok


def test_criterion_2_entanglement_censorship_broken():
    rho = breaking_state([(2, 2), (2, 2)])
    out = apply(tensor_power(cq_censor_channel(2, 2), 2), rho)
    dist = trace_distance(out, rho)
    # receiver cut: first sender's pair against the second's
    lam = float(np.linalg.eigvalsh(partial_transpose(rho, [0, 1], (2, 2, 2, 2)))[0])
    s = sc.build_scenario(sc.preset_data("entanglement_break")).scenario
    verdict = breakability_analysis(s)
    ok = dist <= 1e-12 and abs(lam + 0.5) <= 1e-9 and verdict.status is BreakStatus.BROKEN
    record(2, ok, f"distance={dist:.1e} min_pt={lam:.12f} {verdict.status.value}")
    assert ok


@pytest.mark.parametrize("n", [1, 2, 3])
def test_criterion_3_replacement_unbreakable(n):
    sigma = kron_states(pure([1, 0]), maximally_mixed(2))
    censor = replacement_channel(sigma)
    big = tensor_power(censor, n)
    # direct null space where the joint superoperator is small enough
    fix = fixed_point_subspace(big) if n < 3 else product_fixed_point_subspace([censor] * n)
    # an idempotent superoperator's rank is its trace, sum_k |Tr K_k|^2
    rank = sum(abs(np.trace(k)) ** 2 for k in big.kraus_ops)
    target = kron(*([sigma.matrix] * n))
    (b,) = fix.basis if fix.dimension == 1 else (None,)
    dist = np.inf if b is None else float(np.max(np.abs(b / np.trace(b) - target)))
    s = _scenario({"kind": "replacement", "target": SIGMA}, n, "max_mixed", free="separable_ppt")
    eb = eb_unbreakability_check(s)
    analysis = breakability_analysis(s)
    ok = fix.dimension == 1 and abs(rank - 1) <= 1e-9 and dist <= 1e-9 and eb.applicable and eb.consistent \
        and eb.status == analysis.status.value
    record(3, ok, f"N={n} dim={fix.dimension} distance={dist:.1e} eb={eb.status} analysis={analysis.status.value}")
    assert ok


def test_criterion_4_entanglement_breaking_classification():
    cases = {
        "dephasing": (dephasing_channel(2), EBClass.YES),
        "replacement": (replacement_channel(maximally_mixed(2)), EBClass.YES),
        "identity": (identity_channel((2,)), EBClass.NO),
        "cq_2x2": (cq_censor_channel(2, 2), EBClass.NO),
    }
    got = {k: is_entanglement_breaking(ch).verdict for k, (ch, _) in cases.items()}
    ok = all(got[k] is want for k, (_, want) in cases.items()) and EBClass.INCONCLUSIVE not in got.values()
    record(4, ok, " ".join(f"{k}={v.value}" for k, v in got.items()))
    assert ok


def test_criterion_5_twirl_identities():
    d_z = superoperator_distance(twirl_channel(TwirlGroup.z2()), dephasing_channel(2))
    d_p = superoperator_distance(twirl_channel(TwirlGroup.pauli()), replacement_channel(maximally_mixed(2)))
    ok = d_z <= 1e-12 and d_p <= 1e-12
    record(5, ok, f"z2-vs-dephasing={d_z:.1e} pauli-vs-replacement={d_p:.1e}")
    assert ok


def test_criterion_6_noise_commutation():
    rng = np.random.default_rng(2024)
    censor = dephasing_channel(2)
    gens = incoherent_generators(2)
    worst, checked = 0.0, set()
    for k in range(200):
        rep = commutation_check(random_incoherent_channel(2, rng), censor, gens, samples=200 - len(gens), seed=k)
        worst = max(worst, rep.max_distance)
        checked.add(rep.checked)

    s = sc.build_scenario(sc.preset_data("swap_noise")).scenario
    p = s.parties[0]
    swap_rep = commutation_check(p.noise, p.censor, p.authorized)
    final = run_scenario(s).final.matrix
    expected = np.kron(np.eye(2) / 2, basis_projector(2, 0))
    formula = float(np.max(np.abs(final - expected)))
    report = sc.run_report(sc.build_scenario(sc.preset_data("swap_noise")), "swap_noise")
    recorded = report["checks"]["swap_formula"][0]["max_entry_distance"]
    ok = (worst <= 1e-8 and checked == {200} and not swap_rep.passed and swap_rep.witness is not None
          and formula <= 1e-10 and recorded <= 1e-10)
    record(6, ok, f"noise max_distance={worst:.1e} swap commutes={swap_rep.passed} formula={formula:.1e}")
    assert ok


def test_criterion_7_separability_calibration():
    oracle = SeparablePPT((2, 2))
    lo, hi = 0.0, 1.0
    while hi - lo > 1e-8:
        mid = (lo + hi) / 2
        if oracle.membership(werner_state(mid)).is_member:
            lo = mid
        else:
            hi = mid
    threshold = (lo + hi) / 2
    certs = {n: oracle.membership(bell_state(n)) for n in ("phi_plus", "phi_minus", "psi_plus", "psi_minus")}
    bell_ok = all(v.is_nonmember and abs(v.certificate["min_pt_eigenvalue"] + 0.5) <= 1e-9 for v in certs.values())
    ok = abs(threshold - 1 / 3) <= 1e-6 and bell_ok
    record(7, ok, f"werner threshold={threshold:.9f} bell certificates ok={bell_ok}")
    assert ok


def _verify_certificate(rho, gens, v, convex):
    t = np.asarray(v.certificate["coefficients"])
    recon = sum(ti * g for ti, g in zip(t, gens.matrices()))
    good = np.max(np.abs(recon - rho.matrix)) <= 1e-8 and abs(t.sum() - 1) <= 1e-8
    return good and (not convex or t.min() >= -1e-12)


def test_criterion_8_hull_consistency():
    rng = np.random.default_rng(7)
    exceptions = bad_certs = convex_members = affine_members = 0
    for k in range(500):
        d = int(rng.integers(2, 4))
        m = int(rng.integers(1, d * d + 2))
        gens = GeneratorSet(tuple(random_density(d, 10_000 * k + j) for j in range(m)))
        mode = k % 3
        if mode == 0:
            w = rng.dirichlet(np.ones(m))
        elif mode == 1:
            w = rng.normal(size=m)
            w = w / w.sum() if abs(w.sum()) > 1e-3 else np.full(m, 1 / m)
        if mode == 2:
            rho = random_density(d, 7 + k)
        else:
            mat = sum(wi * g for wi, g in zip(w, gens.matrices()))
            if np.linalg.eigvalsh((mat + mat.conj().T) / 2)[0] < 1e-12:
                mat = sum(g for g in gens.matrices()) / m
            rho = sc.DensityOperator((mat + mat.conj().T) / 2)
        cv = convex_hull_membership(rho, gens)
        av = affine_hull_membership(rho, gens)
        convex_members += cv.is_member
        affine_members += av.is_member
        if cv.is_member and not av.is_member:
            exceptions += 1
        for v, convex in ((cv, True), (av, False)):
            if v.is_member and not _verify_certificate(rho, gens, v, convex):
                bad_certs += 1
    ok = exceptions == 0 and bad_certs == 0 and convex_members > 0
    record(8, ok, f"pairs=500 convex={convex_members} affine={affine_members} "
                  f"exceptions={exceptions} bad_certificates={bad_certs}")
    assert ok


def test_criterion_9_determinism():
    mismatched = []
    for name in sc.preset_names():
        bodies = [sc.report_body(sc.run_report(sc.build_scenario(sc.preset_data(name)), name)) for _ in range(2)]
        if bodies[0] != bodies[1]:
            mismatched.append(name)
    ok = not mismatched
    record(9, ok, f"presets={len(sc.preset_names())} mismatched={mismatched}")
    assert ok
