"""Write the example group specs and a few machines to data/."""
from __future__ import annotations

import argparse
from pathlib import Path

from multipass import serialize as ser
from multipass.automaton import Mode
from multipass.catalog import CATALOG
from multipass.groups import build_wp
from multipass.pda import PushdownAutomaton
from multipass.transducers import projection


def anbn_pda() -> PushdownAutomaton:
    """Deterministic pda for ``a^n b^n``, accepting by final state."""
    T = {("s", "a", "Z"): (("p", ("Z", "A")),), ("p", "a", "A"): (("p", ("A", "A")),),
         ("p", "b", "A"): (("q", ()),), ("q", "b", "A"): (("q", ()),),
         ("q", None, "Z"): (("f", ("Z",)),)}
    return PushdownAutomaton(frozenset("spqf"), ("a", "b"), frozenset({"Z", "A"}), T, "s",
                             frozenset({"s", "f"}), "Z", Mode.DETERMINISTIC, "a^n b^n")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "data"))
    args = ap.parse_args(argv)
    out = Path(args.out)
    (out / "groups").mkdir(parents=True, exist_ok=True)
    (out / "machines").mkdir(parents=True, exist_ok=True)
    for name, make in CATALOG.items():
        ser.dump(make(), out / "groups" / f"{name}.json")
    for name in ("z2", "klein", "even-conjugation", "dihedral", "free2"):
        ser.dump(build_wp(CATALOG[name]()), out / "machines" / f"wp-{name}.json")
    ser.dump(anbn_pda(), out / "machines" / "anbn-pda.json")
    ser.dump(projection(("a", "a^-1", "b", "b^-1"), ("a", "a^-1")), out / "machines" / "project-a.json")
    print(f"wrote {len(CATALOG)} group specs and 7 machine files under {out}")


if __name__ == "__main__":
    main()
