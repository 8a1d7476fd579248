import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import enumerate_sum, phi_lower_tail_asymptotic, phi_series
from strategies import contexts
from lindeberg_lab import make_context, make_discrete
from lindeberg_lab.clt_engine import (
    MAX_SUPPORT,
    SumDistribution,
    SupportTooLarge,
    convolve,
    delta_n,
    kolmogorov_delta,
    kolmogorov_delta_at,
    normal_cdf,
)
from lindeberg_lab.distributions import point_mass_zero


def test_convolve_single(ctx_pm1):
    s = convolve(ctx_pm1)
    assert s.atoms == [(-1.0, 0.5), (1.0, 0.5)]
    assert s.dropped_mass == 0.0


def test_convolve_two(pm1):
    s = convolve(make_context([pm1] * 2))
    r2 = math.sqrt(2)
    assert s.values.tolist() == pytest.approx([-r2, 0.0, r2], rel=1e-15)
    assert s.probs.tolist() == [0.25, 0.5, 0.25]


def test_convolve_four_is_binomial(pm1):
    s = convolve(make_context([pm1] * 4))
    assert s.values.tolist() == [-2.0, -1.0, 0.0, 1.0, 2.0]
    assert s.probs.tolist() == [k / 16 for k in (1, 4, 6, 4, 1)]


def test_output_is_immutable(ctx_pm1):
    s = convolve(ctx_pm1)
    with pytest.raises(ValueError):
        s.probs[0] = 1.0


def _cluster(atoms, tol=1e-12):
    """Merge sorted atoms whose values differ only by rounding of the summation order."""
    out = []
    for v, p in atoms:
        if out and v - out[-1][0] <= tol * max(1.0, abs(v)):
            out[-1][1] += p
        else:
            out.append([v, p])
    return out


def test_matches_enumeration_on_corpus(corpus_contexts):
    checked = exact = 0
    for ctx in corpus_contexts:
        paths = math.prod(len(d) for d in ctx.summands)
        if paths > 2**10:
            continue
        s = convolve(ctx)
        ref = enumerate_sum(ctx)
        if s.atoms == ref:
            exact += 1
        got, want = _cluster(s.atoms), _cluster(ref)
        assert len(got) == len(want), ctx.describe()
        assert [v for v, _ in got] == pytest.approx([v for v, _ in want], rel=1e-12, abs=1e-15)
        assert [p for _, p in got] == pytest.approx([p for _, p in want], rel=1e-12, abs=1e-17)
        checked += 1
    assert checked > 100
    assert exact > 0


def test_dyadic_contexts_match_enumeration_exactly(pm1):
    law = make_discrete([(-0.5, 0.5), (0.25, 0.25), (0.75, 0.25)])
    for ctx in (make_context([law] * 5), make_context([pm1, law, law.scaled(4.0), pm1.scaled(0.125)])):
        assert convolve(ctx).atoms == enumerate_sum(ctx)


def test_mass_conservation_on_corpus(corpus_contexts):
    for ctx in corpus_contexts:
        for tol in (0.0, 1e-3):
            s = convolve(ctx, tol)
            assert math.fsum(s.probs.tolist()) + s.dropped_mass == pytest.approx(1.0, abs=1e-12)
            assert np.all(np.diff(s.values) > 0)


def test_pruning_reports_dropped_mass(pm1):
    ctx = make_context([pm1] * 10)
    s = convolve(ctx, prune_tol=0.01)
    # pruning runs after every step, so at least the final 1/1024 and 10/1024 tails go
    assert s.dropped_mass >= 22 / 1024
    assert math.fsum(s.probs.tolist()) + s.dropped_mass == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(ValueError):
        convolve(ctx, -1.0)


def test_support_guard():
    wide = make_discrete([(v - 31.5, 1 / 64) for v in range(64)])
    ctx = make_context([wide.scaled(1.0), wide.scaled(math.pi), wide.scaled(math.e), wide.scaled(math.sqrt(2))])
    with pytest.raises(SupportTooLarge):
        convolve(ctx)
    assert MAX_SUPPORT == 10**7


def test_normal_cdf_examples():
    assert normal_cdf(0.0) == 0.5
    assert normal_cdf(1.0) == pytest.approx(0.8413447460685429, abs=1e-16)


def test_normal_cdf_against_series():
    xs = np.linspace(-8, 8, 1000)
    worst = max(abs(normal_cdf(float(x)) - phi_series(float(x))) for x in xs)
    assert worst <= 1e-14


@settings(max_examples=300)
@given(st.floats(-40, 40))
def test_normal_cdf_symmetry(x):
    assert normal_cdf(-x) == pytest.approx(1 - normal_cdf(x), abs=1e-14)


@pytest.mark.parametrize("x", [8.0, 10.0, 15.0, 20.0, 30.0, 37.0])
def test_normal_cdf_lower_tail(x):
    assert normal_cdf(-x) == pytest.approx(phi_lower_tail_asymptotic(x, terms=8), rel=1e-9)


def test_normal_cdf_underflow():
    assert normal_cdf(-40.0) == 0.0
    assert normal_cdf(40.0) == 1.0
    assert 0 < normal_cdf(-38.0) < 1e-300


def test_delta_examples(pm1, ctx_pm1):
    assert kolmogorov_delta(convolve(ctx_pm1)) == pytest.approx(0.5 - normal_cdf(-1.0), abs=1e-12)
    assert kolmogorov_delta(convolve(ctx_pm1)) == pytest.approx(0.3413447460685429, abs=1e-15)
    d, x = kolmogorov_delta_at(convolve(make_context([pm1] * 2)))
    assert d == 0.25 and x == 0.0


def test_delta_of_fine_normal_discretisation():
    h = 1e-3
    xs = np.arange(-9.0, 9.0 + h / 2, h)
    w = np.exp(-xs**2 / 2)
    w /= w.sum()
    s = SumDistribution(xs, w)
    assert kolmogorov_delta(s) < h


def test_delta_ignores_zero_summands(corpus_contexts):
    zero = point_mass_zero()
    for ctx in corpus_contexts[::7]:
        with_zero = make_context(list(ctx.summands) + [zero])
        assert delta_n(with_zero) == delta_n(ctx)


@settings(max_examples=40, deadline=None)
@given(contexts())
def test_delta_ignores_zero_summands_random(ctx):
    with_zero = make_context([point_mass_zero(), *ctx.summands])
    assert delta_n(with_zero) == delta_n(ctx)


def test_symmetric_bernoulli_rate(pm1):
    ds = [delta_n(make_context([pm1] * n))[0] for n in (1, 4, 16, 64)]
    assert all(a >= b for a, b in zip(ds, ds[1:]))
    for n in range(1, 65):
        assert delta_n(make_context([pm1] * n))[0] <= 0.4690 / math.sqrt(n)


def test_kolmogorov_uses_both_sides():
    # a single atom at 0: left gap 0.5, right gap 0.5
    s = SumDistribution(np.array([0.0]), np.array([1.0]))
    assert kolmogorov_delta(s) == 0.5
    s = SumDistribution(np.array([3.0]), np.array([1.0]))
    assert kolmogorov_delta(s) == pytest.approx(normal_cdf(3.0))
