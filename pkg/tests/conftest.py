import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "repo",
    derandomize=True,
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def brute_inner(a, b):
    """<a|b> as an explicit sum, independent of numpy's vdot."""
    return sum(complex(x).conjugate() * complex(y) for x, y in zip(a, b))


def brute_ket(terms, dims):
    """Sum of coefficient * |i1 i2 ...> from a dict {(i1, i2, ...): coefficient}."""
    out = np.zeros(int(np.prod(dims)), dtype=complex)
    for idx, c in terms.items():
        flat = 0
        for i, d in zip(idx, dims):
            flat = flat * d + i
        out[flat] += c
    return out


@pytest.fixture
def criterion(request):
    """Report one PASS/FAIL line for an acceptance criterion, then assert it."""
    reporter = request.config.pluginmanager.getplugin("terminalreporter")

    def report(number: int, text: str, ok: bool) -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {text}"
        print(line)
        if reporter is not None:
            reporter.write_line("")
            reporter.write_line(line)
        assert ok, line

    return report
