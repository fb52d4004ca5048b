import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from metac.core import Interval, MetricProgram, TimedTrace, UNBOUNDED, atom
from metac.mht import (
    FINAL_FORMULA,
    TOP,
    Always,
    And,
    Atom,
    Bot,
    Eventually,
    Impl,
    Initial,
    Neg,
    Next,
    Or,
    enumerate_metric_equilibrium_models,
    is_model,
    rule_holds,
    satisfies,
    timing_functions,
)
from metac.parser import parse_file, parse_program

from oracles import brute_metric_models, trace_model
from strategies import atom_names, intervals, programs, traces

A, B = atom("a"), atom("b")
TINY = parse_program("a :- initially.\nnext((2,3), b) :- a.")


def tiny_model():
    return TimedTrace.total(({A}, {B}), (0, 2))


def test_next_interval_examples():
    m = tiny_model()
    assert satisfies(m, 0, Next(Interval(2, 3), Atom(B)))
    assert not satisfies(m, 0, Next(Interval(3, 4), Atom(B)))
    # every admissible second time point, checked against plain arithmetic
    for d in (1, 2, 3):
        m = TimedTrace.total(({A}, {B}), (0, d))
        assert satisfies(m, 0, Next(Interval(2, 3), Atom(B))) == (d == 2)


@given(traces())
def test_final_and_initial_positions(m):
    for k in range(m.length):
        assert satisfies(m, k, FINAL_FORMULA) == (k == m.length - 1)
        assert satisfies(m, k, Initial()) == (k == 0)
        assert satisfies(m, k, TOP)


def test_rule_holds_examples(corpus):
    r = parse_program("a :- initially.").rules[0]
    assert rule_holds(TimedTrace.total(({A},), (0,)), r)
    assert not rule_holds(TimedTrace.total((set(),), (0,)), r)


def test_travel_rule_checks_duration(corpus):
    rules = parse_file(corpus / "dentist.mlp").rules
    travel = next(r for r in rules if str(getattr(r.head, "atom", "")) == "at(ram,home)" and r.is_next
                  and "office" in str(r.body[0].atom))
    office, go, home = atom("at(ram,office)"), atom("go(ram,home)"), atom("at(ram,home)")
    for gap in range(1, 21):
        m = TimedTrace.total(({office, go}, {home}), (0, gap))
        assert rule_holds(m, travel) == (gap == 15)


def test_always_eventually_clauses():
    m = TimedTrace.total(({A}, {A}, {B}), (0, 1, 5))
    assert satisfies(m, 0, Always(Interval(0, 2), Atom(A)))
    assert not satisfies(m, 0, Always(UNBOUNDED, Atom(A)))
    assert satisfies(m, 0, Eventually(Interval(5, 6), Atom(B)))
    assert not satisfies(m, 0, Eventually(Interval(0, 5), Atom(B)))
    assert satisfies(m, 1, Eventually(Interval(4, 5), Atom(B)))


def test_negation_uses_both_worlds():
    m = TimedTrace(({},), ({A},), (0,))
    assert not satisfies(m, 0, Atom(A))
    assert not satisfies(m, 0, Neg(Atom(A)))
    assert not satisfies(m, 0, Or(Atom(A), Neg(Atom(A))))


def test_enumeration_examples():
    assert enumerate_metric_equilibrium_models(TINY, 2, 3) == [tiny_model()]
    assert enumerate_metric_equilibrium_models(TINY, 1, 0) == []
    assert enumerate_metric_equilibrium_models(MetricProgram(), 2, 1) == [TimedTrace.total((set(), set()), (0, 1))]
    with pytest.raises(ValueError):
        enumerate_metric_equilibrium_models(TINY, 0, 3)


def test_tiny_against_literal_enumeration():
    assert set(enumerate_metric_equilibrium_models(TINY, 2, 3)) == brute_metric_models(TINY, 2, 3)


def test_timing_functions_count():
    assert len(list(timing_functions(3, 4))) == 6
    assert list(timing_functions(1, 0))[0].values == (0,)


@st.composite
def formulas(draw, depth=3):
    if depth == 0:
        return draw(st.one_of(st.builds(Atom, atom_names), st.just(Initial()), st.just(TOP)))
    sub = formulas(depth - 1)
    return draw(
        st.one_of(
            st.builds(Atom, atom_names),
            st.builds(And, sub, sub),
            st.builds(Or, sub, sub),
            st.builds(Impl, sub, sub),
            st.builds(Next, intervals, sub),
            st.builds(Always, intervals, sub),
            st.builds(Eventually, intervals, sub),
        )
    )


@given(traces(), formulas(), st.data())
def test_persistence(m, phi, data):
    k = data.draw(st.integers(0, m.length - 1))
    if satisfies(m, k, phi):
        assert satisfies(m.totalized(), k, phi)


def _classical(m, k, phi):
    if isinstance(phi, Bot):
        return False
    if isinstance(phi, Atom):
        return phi.name in m.t[k]
    if isinstance(phi, Initial):
        return k == 0
    if isinstance(phi, And):
        return _classical(m, k, phi.left) and _classical(m, k, phi.right)
    if isinstance(phi, Or):
        return _classical(m, k, phi.left) or _classical(m, k, phi.right)
    if isinstance(phi, Impl):
        return not _classical(m, k, phi.left) or _classical(m, k, phi.right)
    if isinstance(phi, Next):
        return k + 1 < m.length and m.tau[k + 1] - m.tau[k] in phi.interval and _classical(m, k + 1, phi.sub)
    window = [j for j in range(k, m.length) if m.tau[j] - m.tau[k] in phi.interval]
    if isinstance(phi, Always):
        return all(_classical(m, j, phi.sub) for j in window)
    return any(_classical(m, j, phi.sub) for j in window)


@given(traces(total=True), formulas(), st.data())
def test_totalization_is_classical(m, phi, data):
    k = data.draw(st.integers(0, m.length - 1))
    assert satisfies(m, k, phi) == _classical(m, k, phi)


@settings(max_examples=60)
@given(programs(), st.integers(1, 2), st.integers(1, 3))
def test_oracle_matches_literal_enumeration(p, lam, nu):
    nu = max(nu, lam - 1)
    assert set(enumerate_metric_equilibrium_models(p, lam, nu)) == brute_metric_models(p, lam, nu)


@settings(max_examples=60)
@given(programs(), traces())
def test_rule_evaluation_matches_direct_reading(p, m):
    assert is_model(m, p) == trace_model(m.h, m.t, m.tau, p)


@settings(max_examples=60)
@given(programs(), st.integers(1, 3), st.integers(2, 3))
def test_timing_monotonicity(p, lam, nu):
    small = set(enumerate_metric_equilibrium_models(p, lam, nu))
    assert small <= set(enumerate_metric_equilibrium_models(p, lam, nu + 1))


def _unbounded(p):
    from metac.core import MetricNext, MetricRule

    return MetricProgram(
        tuple(MetricRule(MetricNext(UNBOUNDED, r.head.atom), r.body) if r.is_next else r for r in p.rules)
    )


@settings(max_examples=60)
@given(programs(), st.integers(1, 3))
def test_interval_free_models_ignore_timing(p, lam):
    p = _unbounded(p)
    by_tau = {}
    for m in enumerate_metric_equilibrium_models(p, lam, lam + 1):
        by_tau.setdefault(m.tau, set()).add(m.t)
    taus = list(timing_functions(lam, lam + 1))
    assert all(by_tau.get(tau, set()) == by_tau.get(taus[0], set()) for tau in taus)
