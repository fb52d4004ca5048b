"""Subprocess adapters for external ASP and hybrid (ASP + difference logic) solvers.

Binaries come from ``METAC_ASP_BIN`` / ``METAC_ASPDC_BIN`` or from a
``metac.toml`` file (``[solvers] asp = ...``, ``asp_dc = ...``); the
environment wins. Values are command lines, so ``"python3 -m clingo"`` works.
The emitted program is passed on stdin.
"""

from __future__ import annotations

import functools
import logging
import os
import re
import shlex
import shutil
import subprocess
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .core import AtomName, StepAtom, TimingFunction

log = logging.getLogger(__name__)

ENV_KEYS = {"asp": "METAC_ASP_BIN", "asp_dc": "METAC_ASPDC_BIN"}
CONFIG_NAME = "metac.toml"


class AdapterError(RuntimeError):
    pass


class BinaryNotFound(AdapterError):
    pass


class SolverTimeout(AdapterError):
    pass


class ParseFailure(AdapterError):
    def __init__(self, message: str, raw: str):
        super().__init__(message)
        self.raw = raw


class SolverError(AdapterError):
    def __init__(self, message: str, raw: str = ""):
        super().__init__(message)
        self.raw = raw


@dataclass
class Config:
    solvers: dict = field(default_factory=dict)
    atom_cap: Optional[int] = None


def load_config(path=None) -> Config:
    """Read ``metac.toml`` (default: the current directory) and apply the environment."""
    path = Path(path) if path is not None else Path.cwd() / CONFIG_NAME
    cfg = Config()
    if path.is_file():
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
        cfg.solvers.update({k: str(v) for k, v in doc.get("solvers", {}).items()})
        cap = doc.get("caps", {}).get("atom_cap")
        cfg.atom_cap = int(cap) if cap is not None else None
    for kind, key in ENV_KEYS.items():
        if os.environ.get(key):
            cfg.solvers[kind] = os.environ[key]
    if os.environ.get("METAC_ATOM_CAP"):
        cfg.atom_cap = int(os.environ["METAC_ATOM_CAP"])
    return cfg


def solver_command(kind: str, config: Optional[Config] = None) -> list[str]:
    if kind not in ENV_KEYS:
        raise ValueError(f"unknown solver kind {kind!r}")
    config = config or load_config()
    text = config.solvers.get(kind)
    if not text:
        raise BinaryNotFound(f"no {kind} solver configured (set {ENV_KEYS[kind]} or [solvers] in {CONFIG_NAME})")
    cmd = shlex.split(text)
    if shutil.which(cmd[0]) is None:
        raise BinaryNotFound(f"solver executable {cmd[0]!r} not found")
    return cmd


@functools.lru_cache(maxsize=None)
def solver_version(cmd: tuple) -> str:
    try:
        out = subprocess.run(list(cmd) + ["--version"], capture_output=True, text=True, timeout=30).stdout
    except (OSError, subprocess.TimeoutExpired):
        return "unknown"
    return out.splitlines()[0].strip() if out.strip() else "unknown"


def available(kind: str, config: Optional[Config] = None) -> bool:
    try:
        cmd = solver_command(kind, config)
    except BinaryNotFound:
        return False
    try:
        subprocess.run(cmd + ["--version"], capture_output=True, timeout=30, check=True)
    except (OSError, subprocess.SubprocessError):
        return False
    return True


# ---------------------------------------------------------------------------
# output parsing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExternalModel:
    atoms: frozenset
    tau: Optional[TimingFunction]

    def sort_key(self):
        return (sorted(map(str, self.atoms)), () if self.tau is None else self.tau.values)


@dataclass
class ExternalResult:
    status: str  # "SAT" or "UNSAT"
    models: list
    version: str
    command: list

    def __len__(self):
        return len(self.models)


_STEP_RE = re.compile(r"o\((.*),(\d+)\)\Z")
_TBOOL_RE = re.compile(r"t\((\d+),(\d+)\)\Z")
_ASSIGN_RE = re.compile(r"t\((\d+)\)=(-?\d+)\Z")


def _timing(times: dict, raw: str) -> Optional[TimingFunction]:
    if not times:
        return None
    if sorted(times) != list(range(len(times))):
        raise ParseFailure(f"timing steps {sorted(times)} are not contiguous", raw)
    try:
        return TimingFunction(tuple(times[k] for k in range(len(times))))
    except ValueError as exc:
        raise ParseFailure(f"solver returned an invalid timing: {exc}", raw) from None


def _parse_atoms(line: str, raw: str) -> tuple[frozenset, dict]:
    atoms, times = set(), {}
    for token in line.split():
        m = _STEP_RE.match(token)
        if m:
            try:
                atoms.add(StepAtom(AtomName.parse(m.group(1)), int(m.group(2))))
            except ValueError:
                raise ParseFailure(f"cannot read atom {token!r}", raw) from None
            continue
        m = _TBOOL_RE.match(token)
        if m:
            k, d = int(m.group(1)), int(m.group(2))
            if k in times:
                raise ParseFailure(f"two time values for step {k}", raw)
            times[k] = d
        # any other shown atom lies outside the step alphabet and is dropped
    return frozenset(atoms), times


def parse_output(text: str) -> tuple[str, list]:
    """Models from the solver's ``Answer:`` / ``Assignment:`` output."""
    lines = text.splitlines()
    models = []
    status = None
    i = 0
    while i < len(lines):
        line = lines[i].strip()
        if line.startswith("Answer:"):
            if i + 1 >= len(lines):
                raise ParseFailure("answer header without atoms", text)
            atoms, times = _parse_atoms(lines[i + 1].strip(), text)
            i += 2
            if i < len(lines) and lines[i].strip() == "Assignment:":
                for token in (lines[i + 1].split() if i + 1 < len(lines) else []):
                    m = _ASSIGN_RE.match(token)
                    if m:
                        times[int(m.group(1))] = int(m.group(2))
                i += 2
            models.append(ExternalModel(atoms, _timing(times, text)))
            continue
        if line in ("SATISFIABLE", "OPTIMUM FOUND"):
            status = "SAT"
        elif line == "UNSATISFIABLE":
            status = "UNSAT"
        elif line == "UNKNOWN":
            raise SolverError("solver reported UNKNOWN", text)
        i += 1
    if status is None:
        raise ParseFailure("no satisfiability verdict in solver output", text)
    models.sort(key=ExternalModel.sort_key)
    return status, models


# 0 comes from the python module wrappers, which do not forward the result code
_OK_EXIT = {0, 10, 20, 30}


def run_external(
    kind: str,
    program_text: str,
    enumerate_all: bool = True,
    timeout_s: int = 600,
    config: Optional[Config] = None,
) -> ExternalResult:
    """Solve ``program_text`` with the configured ``asp`` or ``asp_dc`` solver.

    For ``asp_dc`` the answers are projected onto the step atoms, so each
    Boolean model is reported once with one witness timing.
    """
    cmd = solver_command(kind, config)
    args = ["0" if enumerate_all else "1"]
    if kind == "asp_dc":
        program_text = program_text + "#show o/2.\n"
        args.append("--project=show")
    version = solver_version(tuple(cmd))
    log.info("running %s (%s)", " ".join(cmd), version)
    try:
        proc = subprocess.run(
            cmd + args, input=program_text, capture_output=True, text=True, timeout=timeout_s
        )
    except subprocess.TimeoutExpired:
        raise SolverTimeout(f"{kind} solver exceeded {timeout_s}s") from None
    except OSError as exc:
        raise BinaryNotFound(str(exc)) from None
    if proc.returncode not in _OK_EXIT:
        raise SolverError(f"{kind} solver exited with status {proc.returncode}: {proc.stderr.strip()}", proc.stdout)
    status, models = parse_output(proc.stdout)
    return ExternalResult(status, models, version, cmd + args)
