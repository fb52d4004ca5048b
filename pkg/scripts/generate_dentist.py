"""Write the ground dentist programs into src/metac/corpus/.

Ram starts at the office, cash is at the ATM and the ID card at home. Every
non-final step Ram travels to another location; the travel time between two
locations is fixed. Items Ram picks up travel with Ram.
"""

from __future__ import annotations

import argparse
import itertools
from pathlib import Path

CORPUS = Path(__file__).resolve().parents[1] / "src" / "metac" / "corpus"

DURATIONS = {
    ("dentist", "home"): 20,
    ("dentist", "office"): 30,
    ("atm", "dentist"): 40,
    ("home", "office"): 15,
    ("atm", "home"): 15,
    ("atm", "office"): 20,
}
START = {"ram": "office", "cash": "atm", "icard": "home"}


def duration(durations: dict, a: str, b: str) -> int:
    return durations[tuple(sorted((a, b)))]


def dentist_program(durations: dict, start: dict, goal: bool = False) -> str:
    locations = sorted({loc for pair in durations for loc in pair})
    items = sorted(k for k in start if k != "ram")
    out = [f"at({who},{where}) :- initially." for who, where in sorted(start.items())]
    out.append("")
    for here in locations:
        heads = "; ".join(f"go(ram,{there})" for there in locations if there != here)
        out.append(f"{heads} :- at(ram,{here}), not finally.")
    out.append("")
    for item, loc in itertools.product(items, locations):
        out.append(f"has(ram,{item}) :- at(ram,{loc}), at({item},{loc}).")
        out.append(f"at({item},{loc}) :- at(ram,{loc}), has(ram,{item}).")
    out.append("")
    for here, there in itertools.permutations(locations, 2):
        d = duration(durations, here, there)
        out.append(f"next(({d},{d + 1}), at(ram,{there})) :- at(ram,{here}), go(ram,{there}).")
    out.append("")
    for item in items:
        out.append(f"next((0,w), has(ram,{item})) :- has(ram,{item}), not finally.")
        for loc in locations:
            out.append(f"next((0,w), at({item},{loc})) :- not has(ram,{item}), at({item},{loc}), not finally.")
    if goal:
        held = ", ".join(f"has(ram,{item})" for item in items)
        out += ["", f"goal :- at(ram,dentist), {held}.", ":- finally, not goal."]
    return "\n".join(out) + "\n"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=CORPUS)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    files = {
        "dentist.mlp": dentist_program(DURATIONS, START),
        "dentist_goal.mlp": dentist_program(DURATIONS, START, goal=True),
        "reduced_dentist.mlp": dentist_program({("atm", "office"): 3}, {"ram": "office", "cash": "atm"}),
        "tiny.mlp": "a :- initially.\nnext((2,3), b) :- a.\n",
    }
    for name, text in files.items():
        (args.out / name).write_text(text, encoding="utf-8", newline="\n")
        print(f"wrote {args.out / name}")


if __name__ == "__main__":
    main()
