"""Rule counts and compile times of both backends on the dentist program.

Durations are multiplied by each scale; the Boolean horizon grows with them.
With --external, the emitted programs are also solved by the configured
solvers (see metac.toml / METAC_ASP_BIN / METAC_ASPDC_BIN).
"""

from __future__ import annotations

import argparse
from pathlib import Path

from metac import adapters
from metac.parser import parse_file
from metac.verify import bench

CORPUS = Path(__file__).resolve().parents[1] / "src" / "metac" / "corpus"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--program", type=Path, default=CORPUS / "dentist.mlp")
    ap.add_argument("--scales", default="1,5,10")
    ap.add_argument("--lambda", dest="lam", type=int, default=4)
    ap.add_argument("--nu", type=int, default=110)
    ap.add_argument("--materialize-limit", type=int, default=1_000_000)
    ap.add_argument("--external", action="store_true")
    ap.add_argument("--json", type=Path)
    args = ap.parse_args()

    def solve(backend, text, lam):
        kind = "asp" if backend == "bool" else "asp_dc"
        return len(adapters.run_external(kind, text).models)

    scales = [int(s) for s in args.scales.split(",")]
    report = bench(
        {args.program.stem: parse_file(args.program)}, scales, args.lam, args.nu, args.materialize_limit, solve=solve if args.external else None
    )
    print(report.to_table(), end="")
    if args.json:
        args.json.write_text(report.to_json())


if __name__ == "__main__":
    main()
