import numpy as np
import pytest

from censorlab import scenarios as sc
from censorlab.qmath import basis_projector


def test_numbers_are_rounded_and_signed_zero_normalized():
    assert sc.num(-0.0) == 0.0 and str(sc.num(-1e-15)) == "0.0"
    assert sc.num(1 / 3) == 0.333333333333


def test_matrix_json_round_trip():
    m = np.array([[0.5, 0.5j], [-0.5j, 0.5]])
    assert np.allclose(sc.matrix_from_json(sc.matrix_to_json(m), "$"), m)
    with pytest.raises(sc.ScenarioParseError):
        sc.matrix_from_json([[1, 2], [3, 4]], "$.m")


def test_digest_ignores_key_order():
    assert sc.digest({"a": 1, "b": [1, 2]}) == sc.digest({"b": [1, 2], "a": 1})


@pytest.mark.parametrize("spec, dims", [
    ({"kron": ["zero", "plus"]}, None),
    ("bell_psi_minus", None),
    ({"pure": [[1, 0], [0, 1]]}, (2,)),
    ("basis:2x2:3", None),
    ("max_coherent:3", None),
])
def test_state_forms(spec, dims):
    rho = sc.resolve_state(spec, dims, "$")
    assert np.trace(rho.matrix).real == pytest.approx(1)


def test_basis_state_index():
    rho = sc.resolve_state("basis:2x2:3", None, "$")
    assert np.allclose(rho.matrix, basis_projector(4, 3)) and rho.dims == (2, 2)


@pytest.mark.parametrize("spec", ["dephasing:3", "cq:2x3", "twirl:pauli1", "twirl:zphase3",
                                  "twirl:collective_z2", "replacement:max_mixed:2x2"])
def test_censor_specs_resolve(spec):
    cspec, dims = sc.resolve_censor(spec, "$")
    assert cspec.channel().in_dim == int(np.prod(dims))


def test_noise_mixture_and_kraus():
    mix = sc.resolve_noise({"kind": "mixture", "weights": [0.5, 0.5], "channels": ["identity", "unitary:x"]},
                           (2,), "$")
    assert mix.in_dim == 2 and len(mix.kraus_ops) == 2
    with pytest.raises(sc.ScenarioParseError):
        sc.resolve_noise({"kind": "mixture", "weights": [1.0]}, (2,), "$")


def test_every_preset_builds_and_reports():
    for name in sc.preset_names():
        report = sc.run_report(sc.build_scenario(sc.preset_data(name)), name)
        assert report["scenario"] == name and report["tool"] == "censorlab"


def test_preset_expectations():
    status = {n: sc.run_report(sc.build_scenario(sc.preset_data(n)), n)["breakability"]["status"]
              for n in sc.preset_names()}
    assert status["entanglement_break"] == "BrokenWitness"
    for n in ("coherence_censorship", "reference_frame_twirl", "replacement_minimal", "entanglement_via_coherence"):
        assert status[n] == "UnbreakableProved"


def test_composite_mode_default_follows_oracles():
    s = sc.build_scenario(sc.preset_data("coherence_censorship")).scenario
    assert type(s.composite_oracle).__name__ == "AffineComposite"
