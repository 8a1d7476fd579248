import pytest

from lindeberg_lab import make_context, make_discrete
from lindeberg_lab.gclass import parse_gspec
from lindeberg_lab.verify.corpus import G_SPECS, build_contexts, default_corpus, theorem2_contexts


@pytest.fixture
def pm1():
    return make_discrete([(-1, 0.5), (1, 0.5)])


@pytest.fixture
def tp():
    """Two-point law on {-0.2, 0.8} with probabilities (0.8, 0.2)."""
    return make_discrete([(-0.2, 0.8), (0.8, 0.2)])


@pytest.fixture
def ctx_pm1(pm1):
    return make_context([pm1])


@pytest.fixture
def ctx_tp(tp):
    return make_context([tp])


@pytest.fixture(scope="session")
def corpus_contexts():
    """Union of the inequality corpus and the extremal-g identity corpus."""
    seen, out = set(), []
    for c in build_contexts(default_corpus()) + theorem2_contexts():
        if c.describe() not in seen:
            seen.add(c.describe())
            out.append(c)
    return out


def gfuncs_for(ctx):
    return [parse_gspec(s, ctx.bn) for s in G_SPECS]


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS, key=lambda s: int(s.split()[2].rstrip(":"))):
        terminalreporter.write_line(line)
