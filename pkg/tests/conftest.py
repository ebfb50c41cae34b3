import numpy as np
import pytest

from frhs.catalog import catalog_get, catalog_list

CATALOG_IDS = [e.id for e in catalog_list()]
NR_IDS = [e.id for e in catalog_list() if e.expected_verdict == "NaturallyReductive"]


def naive_bracket(dim, entries, x, y):
    """Bracket straight from the raw quadruples, both halves written out by hand."""
    out = np.zeros(dim)
    for i, j, k, c in entries:
        out[k] += c * x[i] * y[j]
        out[k] -= c * x[j] * y[i]
    return out


def naive_jacobi_max(dim, entries):
    eye = np.eye(dim)
    br = lambda a, b: naive_bracket(dim, entries, a, b)
    worst = 0.0
    for i in range(dim):
        for j in range(dim):
            for k in range(dim):
                a, b, c = eye[i], eye[j], eye[k]
                cyc = br(a, br(b, c)) + br(b, br(c, a)) + br(c, br(a, b))
                worst = max(worst, np.abs(cyc).max())
    return worst


@pytest.fixture(params=CATALOG_IDS)
def catalog_model(request):
    return catalog_get(request.param)


@pytest.fixture(params=NR_IDS)
def nr_model(request):
    return catalog_get(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


def unit_samples(model, rng, count):
    """Seeded unit vectors that lie in the phi domain."""
    out = []
    while len(out) < count:
        w = rng.standard_normal(model.dim_m)
        y = w / model.inner.norm(w)
        if model.phi.in_domain(model.r_value(y)):
            out.append(y)
    return out


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
