import pytest
from hypothesis import given
from hypothesis import strategies as st

from metac.core import (
    AtomName,
    Interval,
    MetricProgram,
    StepAtom,
    TimedTrace,
    TimingFunction,
    Valuation,
    atom,
    fact,
    interval_contains,
    program_alphabet,
)
from metac.parser import parse_file, parse_program


def test_interval_contains_examples():
    assert interval_contains(Interval(15, 16), 15)
    assert not interval_contains(Interval(15, 16), 16)
    assert interval_contains(Interval(0, None), 0)
    assert not interval_contains(Interval(2, 2), 2)
    assert 7 in Interval(3, None)


@given(st.integers(0, 20), st.integers(0, 20), st.integers(0, 40))
def test_interval_empty_when_lower_reaches_upper(m, n, d):
    i = Interval(m, n)
    if m >= n:
        assert i.is_empty()
        assert not interval_contains(i, d)
    else:
        assert not i.is_empty()
    assert interval_contains(i, d) == (m <= d < n)


def test_negative_interval_bound_rejected():
    with pytest.raises(ValueError):
        Interval(-1, 2)


def test_atom_name_validation_and_text():
    assert str(atom("at(ram,office)")) == "at(ram,office)"
    assert atom("at(ram,office)") == AtomName("at", ("ram", "office"))
    for bad in ("At", "a(X)", "1a", "a(b"):
        with pytest.raises(ValueError):
            atom(bad)


def test_alphabet_examples(corpus):
    assert program_alphabet(MetricProgram((fact(atom("a")),))) == (atom("a"),)
    assert program_alphabet(MetricProgram()) == ()
    names = program_alphabet(parse_file(corpus / "dentist.mlp"))
    # 4 positions of ram, 8 item positions, 4 destinations, 2 held items
    assert len(names) == 18
    assert sum(n.symbol == "go" for n in names) == 4
    assert sum(n.symbol == "has" for n in names) == 2
    assert sum(n.symbol == "at" for n in names) == 12
    assert list(names) == sorted(names)


def test_alphabet_excludes_markers():
    p = parse_program("a :- initially, not finally. next((0,w), b) :- finally.")
    assert program_alphabet(p) == (atom("a"), atom("b"))


@given(st.lists(st.integers(0, 6), min_size=1, max_size=5))
def test_timing_function_accepts_exactly_strict_sequences(values):
    ok = values[0] == 0 and all(a < b for a, b in zip(values, values[1:]))
    if ok:
        assert TimingFunction(tuple(values)).values == tuple(values)
    else:
        with pytest.raises(ValueError):
            TimingFunction(tuple(values))


def test_timed_trace_invariants():
    a, b = atom("a"), atom("b")
    with pytest.raises(ValueError):
        TimedTrace(({a},), ({b},), (0,))
    with pytest.raises(ValueError):
        TimedTrace(({a}, set()), ({a}, set()), (0,))
    m = TimedTrace.total(({a}, {b}), (0, 2))
    assert m.is_total and m.length == 2
    assert str(m) == "step 0: {a} @ time 0\nstep 1: {b} @ time 2"


def test_structural_equality_and_hash():
    assert StepAtom(atom("f(x)"), 1) == StepAtom(AtomName("f", ("x",)), 1)
    assert len({StepAtom(atom("f(x)"), 1), StepAtom(atom("f(x)"), 1)}) == 1


def test_valuation_rules():
    a0 = StepAtom(atom("a"), 0)
    v = Valuation.of([a0], {0: 0, 1: 2})
    assert v.atoms == {a0} and v.times == {0: 0, 1: 2}
    assert Valuation.of([], {0: 0}) <= v
    with pytest.raises(ValueError):
        Valuation.of([], {0: -1})
    with pytest.raises(ValueError):
        Valuation(frozenset({(a0, False)}))
