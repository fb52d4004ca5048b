"""Domain types shared across the package.

Everything here is immutable. Source-level objects (atoms, intervals, metric
rules and programs) live next to the target-level ones (step atoms, Boolean
time atoms, difference constraint atoms, ground rules) and the semantic
objects (timing functions, timed traces, valuations).
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Generic, Iterable, Iterator, Optional, TypeVar, Union

_SYMBOL_RE = re.compile(r"[a-z][A-Za-z0-9_]*\Z")
_TERM_RE = re.compile(r"([a-z][A-Za-z0-9_]*|[0-9]+)\Z")


# ---------------------------------------------------------------------------
# source level
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class AtomName:
    symbol: str
    args: tuple[str, ...] = ()

    def __post_init__(self):
        if not _SYMBOL_RE.match(self.symbol):
            raise ValueError(f"invalid atom symbol {self.symbol!r}")
        object.__setattr__(self, "args", tuple(self.args))
        for arg in self.args:
            if not _TERM_RE.match(arg):
                raise ValueError(f"non-ground or malformed term {arg!r}")

    def __str__(self):
        if not self.args:
            return self.symbol
        return f"{self.symbol}({','.join(self.args)})"

    @classmethod
    def parse(cls, text: str) -> "AtomName":
        """Build from ``f(x,y)`` style text (no nesting)."""
        text = text.strip()
        if "(" not in text:
            return cls(text)
        symbol, rest = text.split("(", 1)
        if not rest.endswith(")"):
            raise ValueError(f"malformed atom {text!r}")
        args = tuple(a.strip() for a in rest[:-1].split(","))
        return cls(symbol.strip(), args)


def atom(text: str) -> AtomName:
    return AtomName.parse(text)


@dataclass(frozen=True)
class Interval:
    """Half-open window ``[lower, upper)``; ``upper=None`` stands for omega."""

    lower: int
    upper: Optional[int] = None

    def __post_init__(self):
        if self.lower < 0 or (self.upper is not None and self.upper < 0):
            raise ValueError(f"interval bounds must be natural: {self}")

    @property
    def unbounded(self) -> bool:
        return self.upper is None

    def is_empty(self) -> bool:
        return self.upper is not None and self.lower >= self.upper

    def __contains__(self, d: int) -> bool:
        return interval_contains(self, d)

    def __str__(self):
        upper = "w" if self.upper is None else str(self.upper)
        return f"[{self.lower},{upper})"


UNBOUNDED = Interval(0, None)


def interval_contains(i: Interval, d: int) -> bool:
    return d >= i.lower and (i.upper is None or d < i.upper)


class Marker(enum.Enum):
    """Temporal markers usable in rule bodies."""

    INITIAL = "initially"
    FINAL = "finally"

    def __str__(self):
        return self.value

    def __lt__(self, other):
        return self.value < other.value


INITIAL = Marker.INITIAL
FINAL = Marker.FINAL

BodyAtom = Union[AtomName, Marker]

X = TypeVar("X")


@dataclass(frozen=True)
class Literal(Generic[X]):
    atom: X
    negated: bool = False

    def __str__(self):
        return f"not {self.atom}" if self.negated else str(self.atom)


def pos(a) -> Literal:
    return Literal(a, False)


def neg(a) -> Literal:
    return Literal(a, True)


@dataclass(frozen=True)
class Disjunction:
    literals: tuple[Literal[AtomName], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "literals", tuple(self.literals))


@dataclass(frozen=True)
class MetricNext:
    interval: Interval
    atom: AtomName


Head = Union[Disjunction, MetricNext]


@dataclass(frozen=True)
class MetricRule:
    head: Head
    body: tuple[Literal[BodyAtom], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "body", tuple(self.body))

    @property
    def is_next(self) -> bool:
        return isinstance(self.head, MetricNext)

    def atoms(self) -> Iterator[AtomName]:
        if isinstance(self.head, MetricNext):
            yield self.head.atom
        else:
            for lit in self.head.literals:
                yield lit.atom
        for lit in self.body:
            if isinstance(lit.atom, AtomName):
                yield lit.atom


def fact(a: AtomName) -> MetricRule:
    return MetricRule(Disjunction((pos(a),)))


@dataclass(frozen=True)
class MetricProgram:
    rules: tuple[MetricRule, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))

    @property
    def alphabet(self) -> tuple[AtomName, ...]:
        return program_alphabet(self)

    def __len__(self):
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)

    def next_rules(self) -> Iterator[tuple[int, MetricRule]]:
        for index, rule in enumerate(self.rules):
            if rule.is_next:
                yield index, rule


def program_alphabet(p: MetricProgram) -> tuple[AtomName, ...]:
    """All atom names occurring in ``p``, lexicographically ordered."""
    return tuple(sorted({a for r in p.rules for a in r.atoms()}))


# ---------------------------------------------------------------------------
# target level
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class StepAtom:
    base: AtomName
    step: int

    def __str__(self):
        return f"{self.base}_{self.step}"


@dataclass(frozen=True, order=True)
class TimeAtomBool:
    """``t_{k,d}``: the state at ``step`` happens at time ``value``."""

    step: int
    value: int

    def __str__(self):
        return f"t_{self.step},{self.value}"


@dataclass(frozen=True, order=True)
class TimeVar:
    step: int

    def __str__(self):
        return f"t_{self.step}"


@dataclass(frozen=True)
class EqConst:
    """``var = const``."""

    var: TimeVar
    const: int

    def variables(self) -> tuple[TimeVar, ...]:
        return (self.var,)

    def __str__(self):
        return f"{self.var} = {self.const}"


@dataclass(frozen=True)
class DiffLeq:
    """``x - y <= bound`` with a signed integer bound."""

    x: TimeVar
    y: TimeVar
    bound: int

    def variables(self) -> tuple[TimeVar, ...]:
        return (self.x, self.y)

    def __str__(self):
        return f"{self.x} - {self.y} <= {self.bound}"


DiffConstraintAtom = Union[EqConst, DiffLeq]


class Const(enum.Enum):
    """Truth constants left in unsimplified ground rules."""

    TOP = "#true"
    BOT = "#false"

    def __str__(self):
        return self.value


GroundAtom = Union[StepAtom, TimeAtomBool, EqConst, DiffLeq, Const]
BOOLEAN_ATOMS = (StepAtom, TimeAtomBool)
CONSTRAINT_ATOMS = (EqConst, DiffLeq)


def ground_atom_key(a) -> tuple:
    """Total order over ground atoms of mixed kinds."""
    if isinstance(a, StepAtom):
        return (0, a.base.symbol, a.base.args, a.step)
    if isinstance(a, TimeAtomBool):
        return (1, a.step, a.value)
    if isinstance(a, EqConst):
        return (2, a.var.step, a.const)
    if isinstance(a, DiffLeq):
        return (3, a.x.step, a.y.step, a.bound)
    if isinstance(a, Const):
        return (4, a.value)
    raise TypeError(f"not a ground atom: {a!r}")


def atoms_key(atoms: Iterable) -> tuple:
    return tuple(sorted(ground_atom_key(a) for a in atoms))


@dataclass(frozen=True)
class GroundRule:
    """``head_1 v ... v head_n <- body_1 & ... & body_m``; empty head is bottom."""

    head: tuple[Literal, ...] = ()
    body: tuple[Literal, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "head", tuple(self.head))
        object.__setattr__(self, "body", tuple(self.body))

    def atoms(self) -> Iterator:
        for lit in self.head + self.body:
            yield lit.atom

    @property
    def is_fact(self) -> bool:
        return not self.body and len(self.head) == 1 and not self.head[0].negated

    def __str__(self):
        head = " v ".join(map(str, self.head)) or "#false"
        if not self.body:
            return f"{head}."
        return f"{head} <- {' & '.join(map(str, self.body))}."


@dataclass(frozen=True)
class GroundProgram:
    """Ordered ground rules.

    ``unsimplified_count`` is the number of rules before simplification, when
    the producer simplified; it defaults to the actual rule count.
    """

    rules: tuple[GroundRule, ...] = ()
    backend: Optional[str] = None
    unsimplified_count: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        if self.unsimplified_count is None:
            object.__setattr__(self, "unsimplified_count", len(self.rules))
        if self.backend not in (None, "bool", "dc"):
            raise ValueError(f"unknown backend {self.backend!r}")

    def __len__(self):
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)

    def __add__(self, other: "GroundProgram") -> "GroundProgram":
        backends = {b for b in (self.backend, other.backend) if b is not None}
        if len(backends) > 1:
            raise ValueError("cannot mix bool and dc programs")
        return GroundProgram(
            self.rules + other.rules,
            backends.pop() if backends else None,
            self.unsimplified_count + other.unsimplified_count,
        )

    def atoms(self) -> set:
        return {a for r in self.rules for a in r.atoms() if not isinstance(a, Const)}

    def boolean_atoms(self) -> list:
        return sorted((a for a in self.atoms() if isinstance(a, BOOLEAN_ATOMS)), key=ground_atom_key)

    def time_vars(self) -> list[TimeVar]:
        found = set()
        for a in self.atoms():
            if isinstance(a, CONSTRAINT_ATOMS):
                found.update(a.variables())
        return sorted(found)

    def infer_backend(self) -> str:
        if self.backend:
            return self.backend
        kinds = {type(a) for a in self.atoms()}
        if kinds & {EqConst, DiffLeq}:
            return "dc"
        return "bool"


# ---------------------------------------------------------------------------
# semantic objects
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class TimingFunction:
    values: tuple[int, ...]

    def __post_init__(self):
        values = tuple(self.values)
        object.__setattr__(self, "values", values)
        if not values:
            raise ValueError("timing function needs at least one step")
        if values[0] != 0:
            raise ValueError(f"timing must start at 0, got {values}")
        if any(v < 0 for v in values):
            raise ValueError(f"timing values must be natural: {values}")
        if any(a >= b for a, b in zip(values, values[1:])):
            raise ValueError(f"timing must be strictly increasing: {values}")

    def __len__(self):
        return len(self.values)

    def __getitem__(self, k: int) -> int:
        return self.values[k]

    def __iter__(self):
        return iter(self.values)


AtomSet = frozenset


def _trace(seq) -> tuple[frozenset, ...]:
    return tuple(frozenset(s) for s in seq)


@dataclass(frozen=True)
class TimedTrace:
    h: tuple[frozenset, ...]
    t: tuple[frozenset, ...]
    tau: TimingFunction

    def __post_init__(self):
        object.__setattr__(self, "h", _trace(self.h))
        object.__setattr__(self, "t", _trace(self.t))
        if not isinstance(self.tau, TimingFunction):
            object.__setattr__(self, "tau", TimingFunction(tuple(self.tau)))
        if not (len(self.h) == len(self.t) == len(self.tau)):
            raise ValueError("trace components must have equal length")
        if any(not h <= t for h, t in zip(self.h, self.t)):
            raise ValueError("here trace must be included in there trace")

    @classmethod
    def total(cls, t, tau) -> "TimedTrace":
        t = _trace(t)
        return cls(t, t, tau)

    @property
    def length(self) -> int:
        return len(self.t)

    @property
    def is_total(self) -> bool:
        return self.h == self.t

    def totalized(self) -> "TimedTrace":
        return TimedTrace(self.t, self.t, self.tau)

    def sort_key(self) -> tuple:
        def steps(seq):
            return tuple(tuple(sorted(s)) for s in seq)

        return (steps(self.t), self.tau.values, steps(self.h))

    def __str__(self):
        lines = []
        for k, (h, t) in enumerate(zip(self.h, self.t)):
            there = ",".join(map(str, sorted(t)))
            if h == t:
                lines.append(f"step {k}: {{{there}}} @ time {self.tau[k]}")
            else:
                here = ",".join(map(str, sorted(h)))
                lines.append(f"step {k}: {{{here}}} / {{{there}}} @ time {self.tau[k]}")
        return "\n".join(lines)


Variable = Union[StepAtom, TimeVar]


@dataclass(frozen=True)
class Valuation:
    """Partial assignment stored as a set of ``(variable, value)`` pairs.

    Boolean variables (step atoms) only ever map to ``True``; time variables
    map to naturals. Undefined variables are simply absent.
    """

    pairs: frozenset = field(default_factory=frozenset)
    _map: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        pairs = frozenset(self.pairs)
        object.__setattr__(self, "pairs", pairs)
        seen = {}
        for var, value in pairs:
            if var in seen:
                raise ValueError(f"variable {var} assigned twice")
            seen[var] = value
            if isinstance(var, TimeVar):
                if isinstance(value, bool) or not isinstance(value, int) or value < 0:
                    raise ValueError(f"time variable {var} needs a natural value, got {value!r}")
            elif isinstance(var, StepAtom):
                if value is not True:
                    raise ValueError(f"Boolean variable {var} can only be true")
            else:
                raise TypeError(f"unsupported variable {var!r}")
        object.__setattr__(self, "_map", seen)

    @classmethod
    def of(cls, atoms: Iterable[StepAtom] = (), times: Optional[dict] = None) -> "Valuation":
        pairs = {(a, True) for a in atoms}
        for var, value in (times or {}).items():
            if isinstance(var, int):
                var = TimeVar(var)
            pairs.add((var, value))
        return cls(frozenset(pairs))

    def get(self, var):
        return self._map.get(var)

    def as_dict(self) -> dict:
        return dict(self._map)

    @property
    def atoms(self) -> frozenset:
        return frozenset(v for v, _ in self.pairs if isinstance(v, StepAtom))

    @property
    def times(self) -> dict[int, int]:
        return {v.step: value for v, value in self.pairs if isinstance(v, TimeVar)}

    def __le__(self, other: "Valuation") -> bool:
        return self.pairs <= other.pairs

    def __lt__(self, other: "Valuation") -> bool:
        return self.pairs < other.pairs

    def sort_key(self) -> tuple:
        return (atoms_key(self.atoms), tuple(sorted(self.times.items())))

    def __str__(self):
        parts = [f"{a}=t" for a in sorted(self.atoms)]
        parts += [f"t_{k}={d}" for k, d in sorted(self.times.items())]
        return "{" + ", ".join(parts) + "}"
