"""Acceptance criteria 1-10. Each test records one PASS/FAIL line that is
repeated in the terminal summary."""

import functools
import itertools
import os
import random
import subprocess
import sys
import time

import pytest

from conftest import GOLDEN, record_criterion

from metac import adapters
from metac.compiler import CompileContext, compile_core
from metac.core import TimeAtomBool
from metac.emit import emit_asp, emit_dc
from metac.ht import enumerate_equilibrium_models, is_ht_model
from metac.htc import enumerate_constraint_equilibrium_models_bounded, is_htc_model
from metac.mht import enumerate_metric_equilibrium_models, timing_functions
from metac.parser import parse_file
from metac.timing_bool import compile_bool, compile_delta_bool, compile_psi_bool, count_psi_bool
from metac.timing_dc import compile_dc, compile_delta_dc, compile_psi_dc
from metac.verify import (
    GeneratorParams,
    bench,
    crosscheck_backends,
    crosscheck_bool,
    crosscheck_dc,
    is_timed_bool,
    is_timed_c,
    random_corpus,
)

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "scripts"))
import regenerate_golden  # noqa: E402

SEED = 2024
CORPUS_SIZE = 200
LAMBDAS = (1, 2, 3)
NUS = (2, 3, 4)
CAP = 64

# model count of the reduced dentist (2 locations, 1 item, lambda=3, nu=6),
# fixed by the metric oracle when first derived
REDUCED_DENTIST_MODELS = 1


@functools.lru_cache(maxsize=None)
def corpus():
    return tuple(random_corpus(CORPUS_SIZE, SEED, GeneratorParams()))


def instances():
    for i, p in enumerate(corpus()):
        for lam, nu in itertools.product(LAMBDAS, NUS):
            yield i, p, lam, nu


@functools.lru_cache(maxsize=None)
def oracle(i: int, lam: int, nu: int):
    return tuple(enumerate_metric_equilibrium_models(corpus()[i], lam, nu))


def _sweep(check):
    start = time.perf_counter()
    failures = []
    total = 0
    for i, p, lam, nu in instances():
        total += 1
        report = check(i, p, lam, nu)
        if not report.passed:
            failures.append(report)
    return total, failures, time.perf_counter() - start


def _first_failure(failures):
    return "" if not failures else "\n" + failures[0].to_table()


def test_criterion_1_bool_bijection():
    total, failures, secs = _sweep(lambda i, p, lam, nu: crosscheck_bool(p, lam, nu, CAP, list(oracle(i, lam, nu))))
    ok = not failures and secs < 300
    record_criterion(1, ok, f"bool bijection on {total} instances, {len(failures)} mismatches, {secs:.1f}s (< 300s)")
    assert not failures, _first_failure(failures)
    assert secs < 300


def test_criterion_2_dc_bijection():
    def check(i, p, lam, nu):
        report = crosscheck_dc(p, lam, nu, CAP, list(oracle(i, lam, nu)))
        report.checks = [c for c in report.checks if c.name != "dc enumerator = bounded"]
        return report

    total, failures, secs = _sweep(check)
    ok = not failures and secs < 600
    record_criterion(2, ok, f"dc bijection on {total} instances, {len(failures)} mismatches, {secs:.1f}s (< 600s)")
    assert not failures, _first_failure(failures)
    assert secs < 600


def test_criterion_3_dc_enumerator_soundness():
    def check(i, p, lam, nu):
        report = crosscheck_dc(p, lam, nu, CAP, list(oracle(i, lam, nu)))
        report.checks = [c for c in report.checks if c.name == "dc enumerator = bounded"]
        return report

    total, failures, secs = _sweep(check)
    ok = not failures and secs < 300
    record_criterion(3, ok, f"dc enumerator vs bounded HT_c on {total} instances, {len(failures)} mismatches, {secs:.1f}s")
    assert not failures, _first_failure(failures)
    assert secs < 300


def test_criterion_4_backend_agreement():
    total, failures, secs = _sweep(lambda i, p, lam, nu: crosscheck_backends(p, lam, nu, CAP))
    record_criterion(4, not failures, f"bool vs dc traces on {total} instances, {len(failures)} mismatches, {secs:.1f}s")
    assert not failures, _first_failure(failures)


def test_criterion_5_size_laws():
    rng = random.Random(5)
    programs = random_corpus(20, 55, GeneratorParams(max_rules=6))
    problems = []
    for p in programs:
        lam = rng.randint(1, 6)
        nu = rng.randint(lam - 1, 12)
        core = compile_core(p, CompileContext(lam, simplify=False))
        delta = compile_delta_bool(lam, nu)
        psi = compile_psi_bool(p, lam, nu, simplify=False)
        psi_c = compile_psi_dc(p, lam, simplify=False)
        laws = {
            "core": len(core) == lam * len(p),
            "delta": len(delta) == 1 + (lam - 1) * (nu + 1),
            "delta_c": len(compile_delta_dc(lam)) == lam,
            "psi_c": len(psi_c) <= 2 * (lam - 1) * len(p),
            "psi": len(psi) == count_psi_bool(p, lam, nu),
        }
        problems += [f"{name} at lambda={lam} nu={nu}" for name, ok in laws.items() if not ok]
    record_criterion(5, not problems, f"size laws on 20 random (lambda, nu, P), {len(problems)} violations")
    assert not problems, problems


def test_criterion_6_scaling_trend(corpus):
    p = parse_file(corpus / "dentist.mlp")
    report = bench({"dentist": p}, [1, 5, 10], lam=4, base_nu=110, repeats=7)
    checks = report.trend_checks(tolerance=0.2, time_ratio=2.0)["dentist"]
    dc = [r.rules for r in report.rows if r.backend == "dc"]
    bl = [r.rules for r in report.rows if r.backend == "bool"]
    ok = all(checks.values())
    record_criterion(6, ok, f"dc rules {dc}, bool rules {bl}, " + ", ".join(f"{k}={v}" for k, v in checks.items()))
    assert ok, report.to_table()


def test_criterion_7_timing_encodings():
    problems = []
    for lam in range(1, 5):
        for nu in range(lam - 1, 5):
            # generator only produces timed interpretations, and all of them
            models = enumerate_equilibrium_models(compile_delta_bool(lam, nu), CAP)
            if any(is_timed_bool(t, lam) is None for t in models):
                problems.append(f"untimed Delta model lambda={lam} nu={nu}")
            expected = {frozenset(TimeAtomBool(k, d) for k, d in enumerate(tau)) for tau in timing_functions(lam, nu)}
            if set(models) != expected:
                problems.append(f"Delta models differ from timings lambda={lam} nu={nu}")
            # every timed interpretation satisfies Delta at its own horizon
            for tau in timing_functions(lam, nu):
                x = frozenset(TimeAtomBool(k, d) for k, d in enumerate(tau))
                if not is_ht_model(x, x, compile_delta_bool(lam, tau[-1])):
                    problems.append(f"timed interpretation {tau.values} violates Delta")
        # HT_c: models of Delta^c are exactly the timed pairs, and define every variable
        delta_c = compile_delta_dc(lam)
        for values in itertools.product([None] + list(range(5)), repeat=lam):
            from metac.core import Valuation

            t = Valuation.of((), {k: d for k, d in enumerate(values) if d is not None})
            pairs = sorted(t.pairs, key=str)
            for n in range(len(pairs) + 1):
                for c in itertools.combinations(pairs, n):
                    h = Valuation(frozenset(c))
                    timed = is_timed_c(t, lam) is not None and h.times == t.times
                    if is_htc_model(h, t, delta_c) != timed:
                        problems.append(f"Delta^c pair h={h} t={t}")
        for v in enumerate_constraint_equilibrium_models_bounded(delta_c, 4):
            if sorted(v.times) != list(range(lam)):
                problems.append(f"undefined time variable in {v}")
    record_criterion(7, not problems, f"timing encoding properties for lambda, nu <= 4, {len(problems)} violations")
    assert not problems, problems[:5]


def test_criterion_8_reduced_dentist(corpus):
    p = parse_file(corpus / "reduced_dentist.mlp")
    models = enumerate_metric_equilibrium_models(p, 3, 6)
    reports = [
        crosscheck_bool(p, 3, 6, CAP, models),
        crosscheck_dc(p, 3, 6, CAP, models),
        crosscheck_backends(p, 3, 6, CAP),
    ]
    ok = all(r.passed for r in reports) and len(models) == REDUCED_DENTIST_MODELS
    record_criterion(8, ok, f"reduced dentist: oracle {len(models)} model(s), both backends agree={ok}")
    assert ok, "".join(r.to_table() for r in reports)


def _external_counts(corpus):
    counts = {}
    dentist = parse_file(corpus / "dentist.mlp")
    goal = parse_file(corpus / "dentist_goal.mlp")
    counts["dc"] = len(adapters.run_external("asp_dc", emit_dc(compile_dc(dentist, CompileContext(4)))).models)
    counts["bool"] = len(adapters.run_external("asp", emit_asp(compile_bool(dentist, CompileContext(4, 110)))).models)
    counts["goal dc"] = len(
        adapters.run_external("asp_dc", emit_dc(compile_dc(goal, CompileContext(4), deadline=60))).models
    )
    counts["goal bool"] = len(adapters.run_external("asp", emit_asp(compile_bool(goal, CompileContext(4, 60)))).models)
    return counts


def test_criterion_9_full_dentist_external(corpus):
    if not (adapters.available("asp") and adapters.available("asp_dc")):
        record_criterion(9, False, "external solvers not configured", skipped=True)
        pytest.skip("external ASP / hybrid solvers not configured")
    counts = _external_counts(corpus)
    expected = {"dc": 27, "bool": 27, "goal dc": 1, "goal bool": 1}
    ok = counts == expected
    record_criterion(9, ok, "full dentist via external solvers (dc answers projected on step atoms): " + ", ".join(
        f"{k}={v}" for k, v in counts.items()))
    assert ok, counts


def test_criterion_10_golden_files():
    mismatched = []
    for name, *case in regenerate_golden.CASES:
        expected = (GOLDEN / name).read_bytes()
        if regenerate_golden.render(*case).encode("utf-8") != expected or b"\r" in expected:
            mismatched.append(name)
    # a fresh interpreter with a different hash seed must print the same bytes
    code = (
        "import sys; sys.path.insert(0, sys.argv[1]); import regenerate_golden as g; "
        "sys.stdout.buffer.write(g.render('dentist.mlp', 'dc', 4, None, 'dc', True).encode())"
    )
    scripts = os.path.join(os.path.dirname(__file__), "..", "scripts")
    for seed in ("1", "12345"):
        out = subprocess.run(
            [sys.executable, "-c", code, scripts], capture_output=True, env={**os.environ, "PYTHONHASHSEED": seed}
        ).stdout
        if out != (GOLDEN / "dentist_l4.dc.lp").read_bytes():
            mismatched.append(f"dentist_l4.dc.lp with PYTHONHASHSEED={seed}")
    record_criterion(10, not mismatched, f"{len(regenerate_golden.CASES)} golden files, mismatches: {mismatched or 'none'}")
    assert not mismatched
