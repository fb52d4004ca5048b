"""Cross-check both pipelines against the metric oracle on a random corpus.

Writes a JSON report next to a one-line summary per (lambda, nu) cell.
"""

from __future__ import annotations

import argparse
import itertools
import json
import time
from pathlib import Path

from metac.mht import enumerate_metric_equilibrium_models
from metac.verify import GeneratorParams, crosscheck_backends, crosscheck_bool, crosscheck_dc, random_corpus


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--programs", type=int, default=200)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--lambdas", default="1,2,3")
    ap.add_argument("--nus", default="2,3,4")
    ap.add_argument("--cap", type=int, default=64)
    ap.add_argument("--out", type=Path, default=Path("verify_report.json"))
    args = ap.parse_args()

    params = GeneratorParams()
    corpus = random_corpus(args.programs, args.seed, params)
    lambdas = [int(x) for x in args.lambdas.split(",")]
    nus = [int(x) for x in args.nus.split(",")]
    cells = []
    for lam, nu in itertools.product(lambdas, nus):
        start = time.perf_counter()
        failed = []
        for p in corpus:
            oracle = enumerate_metric_equilibrium_models(p, lam, nu)
            reports = [
                crosscheck_bool(p, lam, nu, args.cap, oracle),
                crosscheck_dc(p, lam, nu, args.cap, oracle),
                crosscheck_backends(p, lam, nu, args.cap),
            ]
            failed += [r.to_dict() for r in reports if not r.passed]
        secs = time.perf_counter() - start
        print(f"lambda={lam} nu={nu}: {len(corpus) - len({f['program'] for f in failed})}/{len(corpus)} ok ({secs:.1f}s)")
        cells.append({"lambda": lam, "nu": nu, "seconds": secs, "failures": failed[:3]})
    doc = {"seed": args.seed, "generator": params.to_dict(), "programs": args.programs, "cells": cells}
    args.out.write_text(json.dumps(doc, indent=1) + "\n")
    print(f"report written to {args.out}")


if __name__ == "__main__":
    main()
