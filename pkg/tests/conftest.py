import numpy as np
import pytest

from censorlab.channels import KrausChannel

ACCEPTANCE_LINES: list[str] = []


def record(criterion: int, ok: bool, detail: str) -> None:
    line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


def random_incoherent_channel(d: int, rng: np.random.Generator) -> KrausChannel:
    """Mixture of phased permutations and classical maps; never creates coherence."""
    ops = []
    weights = rng.dirichlet(np.ones(3))
    for w in weights:
        if rng.random() < 0.5:
            perm = rng.permutation(d)
            phases = np.exp(2j * np.pi * rng.random(d))
            k = np.zeros((d, d), dtype=complex)
            k[perm, np.arange(d)] = phases
            ops.append(np.sqrt(w) * k)
        else:
            f = rng.integers(0, d, size=d)
            for i in range(d):
                k = np.zeros((d, d), dtype=complex)
                k[f[i], i] = np.exp(2j * np.pi * rng.random())
                ops.append(np.sqrt(w) * k)
    return KrausChannel(tuple(ops), (d,), (d,), label="incoherent_noise")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
