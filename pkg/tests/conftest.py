import numpy as np
import pytest

from spectral_ssr import _backend, ssr

BACKENDS = ["python"] + (["cython"] if _backend.HAVE_EXTENSION else [])

# max |(1^T H^T H)_j - 1| of every SSR pipeline output produced during the run
WEIGHT_SUM_LOG = []
WEIGHT_SUM_TOL = 1e-6

# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES = {}


def report(number, ok, detail):
    line = f"[acceptance {number}] {'PASS' if ok else 'FAIL'} {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)
    return ok


def _recording(fn):
    def wrapper(*args, **kwargs):
        res = fn(*args, **kwargs)
        WEIGHT_SUM_LOG.append((fn.__name__, ssr.weight_sum_error(res.H)))
        return res

    wrapper.__wrapped__ = fn
    return wrapper


def pytest_configure(config):
    for name in ("ssrk", "ssro"):
        fn = getattr(ssr, name)
        if not hasattr(fn, "__wrapped__"):
            setattr(ssr, name, _recording(fn))


def _weight_sum_summary():
    worst = max(err for _, err in WEIGHT_SUM_LOG)
    bad = sum(err > WEIGHT_SUM_TOL for _, err in WEIGHT_SUM_LOG)
    status = "PASS" if not bad else "FAIL"
    line = (f"[acceptance 4] {status} weight-sum identity over {len(WEIGHT_SUM_LOG)} "
            f"pipeline outputs: max error {worst:.2e} (tol {WEIGHT_SUM_TOL:g})")
    return bad, line


def pytest_sessionfinish(session, exitstatus):
    if WEIGHT_SUM_LOG and _weight_sum_summary()[0]:
        session.exitstatus = 1


def pytest_terminal_summary(terminalreporter):
    lines = dict(ACCEPTANCE_LINES)
    if WEIGHT_SUM_LOG:
        lines[4.5] = _weight_sum_summary()[1].replace("[acceptance 4]", "[acceptance 4, session]")
    if lines:
        terminalreporter.section("acceptance criteria")
        for key in sorted(lines):
            terminalreporter.write_line(lines[key])


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def block_graph(sizes, rng, density=0.5):
    """Random block-diagonal similarity with each block connected (path + extras)."""
    n = sum(sizes)
    W = np.zeros((n, n))
    start = 0
    for size in sizes:
        idx = np.arange(start, start + size)
        for a, b in zip(idx[:-1], idx[1:]):
            W[a, b] = W[b, a] = rng.uniform(0.5, 1.5)
        extra = np.triu(rng.random((size, size)) < density, 2)
        ii, jj = np.nonzero(extra)
        w = rng.uniform(0.1, 1.0, ii.size)
        W[idx[ii], idx[jj]] = w
        W[idx[jj], idx[ii]] = w
        start += size
    labels = np.repeat(np.arange(len(sizes)), sizes)
    perm = rng.permutation(n)
    return W[np.ix_(perm, perm)], labels[perm]
