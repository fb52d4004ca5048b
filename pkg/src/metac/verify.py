"""Cross-checks between the metric semantics and both compiled pipelines.

The maps ``sigma``/``theta`` (Boolean timing) and ``sigma_c``/``theta_c``
(integer timing) translate between timed traces and interpretations of the
compiled programs. ``crosscheck_*`` compare model sets through them; the
benchmark driver measures how each backend grows with the time scale.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .compiler import CompileContext, compile_core
from .core import (
    AtomName,
    Disjunction,
    Interval,
    Literal,
    MetricNext,
    MetricProgram,
    MetricRule,
    FINAL,
    INITIAL,
    StepAtom,
    TimeAtomBool,
    TimedTrace,
    TimingFunction,
    Valuation,
)
from .ht import DEFAULT_ATOM_CAP, enumerate_equilibrium_models
from .htc import enumerate_constraint_equilibrium_models_bounded, enumerate_dc_models
from .mht import enumerate_metric_equilibrium_models
from .parser import format_program
from .timing_bool import compile_bool, count_psi_bool
from .timing_dc import compile_dc

REPORT_VERSION = 1


# ---------------------------------------------------------------------------
# interpretation <-> trace maps
# ---------------------------------------------------------------------------


def is_timed_bool(t, lam: int) -> Optional[TimingFunction]:
    """The timing encoded by the ``t_{k,d}`` atoms of ``t``, if it encodes one."""
    values: dict[int, int] = {}
    for a in t:
        if isinstance(a, TimeAtomBool):
            if a.step >= lam or a.step in values:
                return None
            values[a.step] = a.value
    if sorted(values) != list(range(lam)):
        return None
    try:
        return TimingFunction(tuple(values[k] for k in range(lam)))
    except ValueError:
        return None


def _time_atoms(tau: TimingFunction) -> frozenset:
    return frozenset(TimeAtomBool(k, d) for k, d in enumerate(tau))


def sigma(m: TimedTrace) -> tuple[frozenset, frozenset]:
    x = _time_atoms(m.tau)
    h = frozenset(StepAtom(a, k) for k, hk in enumerate(m.h) for a in hk)
    t = frozenset(StepAtom(a, k) for k, tk in enumerate(m.t) for a in tk)
    return h | x, t | x


def _steps(atoms, lam: int) -> tuple[frozenset, ...]:
    per = [set() for _ in range(lam)]
    for a in atoms:
        if isinstance(a, StepAtom):
            if a.step >= lam:
                raise ValueError(f"{a} lies beyond trace length {lam}")
            per[a.step].add(a.base)
    return tuple(frozenset(s) for s in per)


def theta(pair, lam: int) -> TimedTrace:
    h, t = pair
    tau = is_timed_bool(t, lam)
    if tau is None or is_timed_bool(h, lam) != tau:
        raise ValueError("interpretation is not timed")
    return TimedTrace(_steps(h, lam), _steps(t, lam), tau)


def sigma_c(m: TimedTrace) -> tuple[Valuation, Valuation]:
    times = dict(enumerate(m.tau))
    h = Valuation.of((StepAtom(a, k) for k, hk in enumerate(m.h) for a in hk), times)
    t = Valuation.of((StepAtom(a, k) for k, tk in enumerate(m.t) for a in tk), times)
    return h, t


def is_timed_c(v: Valuation, lam: int) -> Optional[TimingFunction]:
    times = v.times
    if sorted(times) != list(range(lam)):
        return None
    try:
        return TimingFunction(tuple(times[k] for k in range(lam)))
    except ValueError:
        return None


def theta_c(pair, lam: int) -> TimedTrace:
    h, t = pair
    tau = is_timed_c(t, lam)
    if tau is None or is_timed_c(h, lam) != tau:
        raise ValueError("valuation is not timed")
    return TimedTrace(_steps(h.atoms, lam), _steps(t.atoms, lam), tau)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


@dataclass
class CheckResult:
    name: str
    passed: bool
    left: int
    right: int
    counterexamples: list = field(default_factory=list)


@dataclass
class VerificationReport:
    program: str
    lam: int
    nu: int
    backend: str
    checks: list = field(default_factory=list)
    oracle_models: int = 0
    seed: Optional[int] = None
    generator: Optional[dict] = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "format": "metac-verification",
            "version": REPORT_VERSION,
            "program": self.program,
            "lambda": self.lam,
            "nu": self.nu,
            "backend": self.backend,
            "passed": self.passed,
            "oracle_models": self.oracle_models,
            "seed": self.seed,
            "generator": self.generator,
            "checks": [
                {
                    "name": c.name,
                    "passed": c.passed,
                    "left": c.left,
                    "right": c.right,
                    "counterexamples": c.counterexamples,
                }
                for c in self.checks
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1) + "\n"

    def to_table(self) -> str:
        head = f"lambda={self.lam} nu={self.nu} backend={self.backend} oracle models={self.oracle_models}"
        lines = [head]
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            lines.append(f"  {status}  {c.name:<28} {c.left} vs {c.right}")
            for ce in c.counterexamples:
                lines.extend("        " + line for line in ce.splitlines())
        if not self.passed:
            lines.append("  program:")
            lines.extend("    " + line for line in self.program.splitlines())
        return "\n".join(lines) + "\n"


def _compare(name: str, left: set, right: set, render) -> CheckResult:
    diff = sorted(left ^ right, key=str)[:3]
    examples = [("only left: " if x in left else "only right: ") + render(x) for x in diff]
    return CheckResult(name, left == right, len(left), len(right), examples)


def _trace_text(m: TimedTrace) -> str:
    return str(m)


def _program_text(p: MetricProgram) -> str:
    try:
        return format_program(p)
    except ValueError:
        return "\n".join(map(repr, p.rules))


def crosscheck_bool(
    p: MetricProgram, lam: int, nu: int, cap: int = DEFAULT_ATOM_CAP, oracle: Optional[list] = None
) -> VerificationReport:
    """Metric equilibrium models vs stable models of the Boolean-timing program."""
    if oracle is None:
        oracle = enumerate_metric_equilibrium_models(p, lam, nu)
    prog = compile_bool(p, CompileContext(lam, nu)).program
    stable = enumerate_equilibrium_models(prog, cap)
    report = VerificationReport(_program_text(p), lam, nu, "bool", oracle_models=len(oracle))
    forward = {sigma(m)[1] for m in oracle}
    report.checks.append(
        _compare("sigma(oracle) = stable", forward, set(stable), lambda x: " ".join(sorted(map(str, x))))
    )
    back = set()
    for t in stable:
        try:
            back.add(theta((t, t), lam))
        except ValueError:
            report.checks.append(CheckResult("stable model is timed", False, 0, 0, [str(sorted(map(str, t)))]))
    report.checks.append(_compare("theta(stable) = oracle", back, set(oracle), _trace_text))
    return report


def crosscheck_dc(
    p: MetricProgram, lam: int, nu: int, cap: int = DEFAULT_ATOM_CAP, oracle: Optional[list] = None
) -> VerificationReport:
    """Metric equilibrium models vs constraint equilibrium models (domain 0..nu)."""
    if oracle is None:
        oracle = enumerate_metric_equilibrium_models(p, lam, nu)
    prog = compile_dc(p, CompileContext(lam)).program
    bounded = enumerate_constraint_equilibrium_models_bounded(prog, nu, cap)
    report = VerificationReport(_program_text(p), lam, nu, "dc", oracle_models=len(oracle))
    forward = {sigma_c(m)[1] for m in oracle}
    report.checks.append(_compare("sigma_c(oracle) = bounded", forward, set(bounded), str))
    back = set()
    for v in bounded:
        try:
            back.add(theta_c((v, v), lam))
        except ValueError:
            report.checks.append(CheckResult("bounded model is timed", False, 0, 0, [str(v)]))
    report.checks.append(_compare("theta_c(bounded) = oracle", back, set(oracle), _trace_text))
    practical = {m.valuation for m in enumerate_dc_models(prog, nu, cap)}
    report.checks.append(_compare("dc enumerator = bounded", practical, set(bounded), str))
    return report


def crosscheck_backends(p: MetricProgram, lam: int, nu: int, cap: int = DEFAULT_ATOM_CAP) -> VerificationReport:
    """Traces decoded from the Boolean and integer pipelines coincide."""
    ctx = CompileContext(lam, nu)
    stable = enumerate_equilibrium_models(compile_bool(p, ctx).program, cap)
    dc = enumerate_dc_models(compile_dc(p, ctx).program, nu, cap)
    from_bool = {theta((t, t), lam) for t in stable}
    from_dc = {theta_c((m.valuation, m.valuation), lam) for m in dc}
    report = VerificationReport(_program_text(p), lam, nu, "both")
    report.checks.append(_compare("bool traces = dc traces", from_bool, from_dc, _trace_text))
    return report


def crosscheck(p: MetricProgram, lam: int, nu: int, backend: str = "both", cap: int = DEFAULT_ATOM_CAP):
    oracle = enumerate_metric_equilibrium_models(p, lam, nu)
    reports = []
    if backend in ("bool", "both"):
        reports.append(crosscheck_bool(p, lam, nu, cap, oracle))
    if backend in ("dc", "both"):
        reports.append(crosscheck_dc(p, lam, nu, cap, oracle))
    if backend == "both":
        reports.append(crosscheck_backends(p, lam, nu, cap))
    return reports


# ---------------------------------------------------------------------------
# random programs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GeneratorParams:
    atoms: int = 3
    max_rules: int = 4
    max_bound: int = 3
    max_body: int = 2
    max_head: int = 2
    p_next: float = 0.35
    p_negate: float = 0.3

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def random_program(rng: random.Random, params: GeneratorParams = GeneratorParams()) -> MetricProgram:
    pool = [AtomName(chr(ord("a") + i)) for i in range(params.atoms)]
    body_pool = pool + [INITIAL, FINAL]
    rules = []
    for _ in range(rng.randint(1, params.max_rules)):
        body = tuple(
            Literal(rng.choice(body_pool), rng.random() < params.p_negate)
            for _ in range(rng.randint(0, params.max_body))
        )
        if rng.random() < params.p_next:
            lower = rng.randint(0, params.max_bound)
            upper = rng.choice([None] + list(range(params.max_bound + 1)))
            head = MetricNext(Interval(lower, upper), rng.choice(pool))
        else:
            size = rng.randint(0 if body else 1, params.max_head)
            head = Disjunction(
                tuple(Literal(rng.choice(pool), rng.random() < params.p_negate) for _ in range(size))
            )
        rules.append(MetricRule(head, body))
    return MetricProgram(tuple(rules))


def random_corpus(n: int, seed: int, params: GeneratorParams = GeneratorParams()) -> list[MetricProgram]:
    rng = random.Random(seed)
    return [random_program(rng, params) for _ in range(n)]


# ---------------------------------------------------------------------------
# benchmark
# ---------------------------------------------------------------------------


def scale_interval(i: Interval, factor: int) -> Interval:
    """Multiply the admitted durations ``[lower, upper-1]`` by ``factor``."""
    if i.upper is None:
        return Interval(i.lower * factor, None)
    return Interval(i.lower * factor, (i.upper - 1) * factor + 1)


def scale_durations(p: MetricProgram, factor: int) -> MetricProgram:
    rules = []
    for r in p.rules:
        if isinstance(r.head, MetricNext):
            r = MetricRule(MetricNext(scale_interval(r.head.interval, factor), r.head.atom), r.body)
        rules.append(r)
    return MetricProgram(tuple(rules))


@dataclass
class BenchRow:
    program: str
    scale: int
    backend: str
    lam: int
    nu: Optional[int]
    rules: int
    materialized: bool
    compile_seconds: float
    solve_seconds: Optional[float] = None
    models: Optional[int] = None


@dataclass
class BenchReport:
    rows: list = field(default_factory=list)

    def _series(self, program: str, backend: str) -> list[BenchRow]:
        return sorted((r for r in self.rows if r.program == program and r.backend == backend), key=lambda r: r.scale)

    def programs(self) -> list[str]:
        return sorted({r.program for r in self.rows})

    def trend_checks(self, tolerance: float = 0.2, time_ratio: float = 2.0) -> dict:
        out = {}
        for name in self.programs():
            dc = self._series(name, "dc")
            bl = self._series(name, "bool")
            checks = {}
            if dc:
                checks["dc_rules_constant"] = len({r.rules for r in dc}) == 1
                checks["dc_compile_time_ratio"] = dc[-1].compile_seconds <= time_ratio * max(dc[0].compile_seconds, 1e-9)
            if bl:
                counts = [r.rules for r in bl]
                checks["bool_rules_increasing"] = all(a < b for a, b in zip(counts, counts[1:]))
                checks["bool_quadratic_fit"] = quadratic_fit_ok(
                    [(r.lam, r.nu) for r in bl], counts, tolerance
                )
            out[name] = checks
        return out

    def to_dict(self) -> dict:
        return {
            "format": "metac-bench",
            "version": REPORT_VERSION,
            "rows": [dict(r.__dict__) for r in self.rows],
            "trends": self.trend_checks(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1) + "\n"

    def to_table(self) -> str:
        header = f"{'program':<20} {'scale':>5} {'backend':<7} {'nu':>6} {'#rules':>10} {'compile[s]':>11} {'solve[s]':>9} {'models':>6}"
        lines = [header]
        for r in sorted(self.rows, key=lambda r: (r.program, r.backend, r.scale)):
            nu = "-" if r.nu is None else str(r.nu)
            count = f"{r.rules}{'' if r.materialized else '*'}"
            solve = "-" if r.solve_seconds is None else f"{r.solve_seconds:.3f}"
            models = "-" if r.models is None else str(r.models)
            lines.append(
                f"{r.program:<20} {r.scale:>5} {r.backend:<7} {nu:>6} {count:>10} {r.compile_seconds:>11.4f} {solve:>9} {models:>6}"
            )
        if any(not r.materialized for r in self.rows):
            lines.append("* counted without materializing")
        for name, checks in self.trend_checks().items():
            for check, ok in checks.items():
                lines.append(f"{'PASS' if ok else 'FAIL'}  {name}: {check}")
        return "\n".join(lines) + "\n"


def quadratic_fit_ok(points: list[tuple[int, int]], counts: list[int], tolerance: float) -> bool:
    """Least-squares fit ``count ~ c * lam * nu^2``; every point within ``tolerance``."""
    xs = [lam * nu * nu for lam, nu in points]
    c = sum(x * y for x, y in zip(xs, counts)) / sum(x * x for x in xs)
    return all(abs(y - c * x) <= tolerance * c * x for x, y in zip(xs, counts))


def delta_bool_size(lam: int, nu: int) -> int:
    return 1 + (lam - 1) * (nu + 1)


def _best_time(fn, repeats: int):
    best, result = None, None
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn()
        elapsed = time.perf_counter() - start
        best = elapsed if best is None else min(best, elapsed)
    return best, result


def bench(
    corpus: dict,
    scales: Iterable[int],
    lam: int = 4,
    base_nu: int = 110,
    materialize_limit: int = 1_000_000,
    repeats: int = 3,
    solve=None,
) -> BenchReport:
    """Compile every program at every duration scale with both backends.

    The Boolean horizon grows with the scale (``base_nu * scale``). Boolean
    programs larger than ``materialize_limit`` rules are counted, not built.
    ``solve``, if given, is called as ``solve(backend, program_text, lam)`` and
    returns a model count; it is timed separately.
    """
    from .emit import emit_asp, emit_dc

    report = BenchReport()
    for name, p in sorted(corpus.items()):
        for scale in scales:
            scaled = scale_durations(p, scale)
            ctx = CompileContext(lam)
            secs, compiled = _best_time(lambda: compile_dc(scaled, ctx), repeats)
            row = BenchRow(name, scale, "dc", lam, None, compiled.program.unsimplified_count, True, secs)
            if solve is not None:
                row.solve_seconds, row.models = _best_time(lambda: solve("dc", emit_dc(compiled), lam), 1)
            report.rows.append(row)

            nu = base_nu * scale
            bctx = CompileContext(lam, nu)
            expected = len(p) * lam + delta_bool_size(lam, nu) + count_psi_bool(scaled, lam, nu)
            if expected <= materialize_limit:
                secs, compiled_b = _best_time(lambda: compile_bool(scaled, bctx), 1)
                row = BenchRow(name, scale, "bool", lam, nu, compiled_b.program.unsimplified_count, True, secs)
                if solve is not None:
                    row.solve_seconds, row.models = _best_time(lambda: solve("bool", emit_asp(compiled_b), lam), 1)
            else:
                secs, _ = _best_time(lambda: compile_core(scaled, bctx), 1)
                row = BenchRow(name, scale, "bool", lam, nu, expected, False, secs)
            report.rows.append(row)
    return report
