"""Lookup tables and density-evolution thresholds for two-bit decoders.

Run with ``python demos/thresholds_and_tables.py``. Prints the decision rows
where the (2,2,1) decoder overrides the received bit, then a threshold table
for several decoders on the (4, rho) regular ensembles.
"""

from twobit import GallagerA, GallagerB, TwoBitRule, extract_lookup_tables, find_threshold
from twobit.decoders import AlgorithmE
from twobit.density import find_threshold_dynamic

LABELS = ("-S", "-W", "W", "S")


def show_decision_flips() -> None:
    tables = extract_lookup_tables(TwoBitRule(2, 2, 1), gamma=4)
    print("Incoming messages that overturn the received bit, (2,2,1), gamma=4")
    for *counts, received, estimate in tables.decision_flips():
        msgs = " ".join(f"{k}x{lbl}" for k, lbl in zip(counts, LABELS) if k)
        print(f"  r={received} -> {estimate}   {msgs}")


def show_thresholds() -> None:
    rhos = (8, 16, 32)
    rules = [GallagerA(), GallagerB(None), TwoBitRule(1, 2, 1), TwoBitRule(2, 2, 1),
             TwoBitRule(3, 3, 1), TwoBitRule(4, 3, 1), AlgorithmE(None)]
    print("\nBSC thresholds, gamma=4")
    print(f"  {'decoder':<16}" + "".join(f"rho={r:<9}" for r in rhos))
    for rule in rules:
        row = [find_threshold(rule, 4, rho, precision=1e-5).threshold for rho in rhos]
        print(f"  {str(rule):<16}" + "".join(f"{t:<13.5f}" for t in row))
    dyn = [find_threshold_dynamic(4, rho, 2, 1, precision=1e-5) for rho in rhos]
    print(f"  {'dynamic C':<16}" + "".join(f"{d.threshold:<13.5f}" for d in dyn))
    print("  channel weights chosen at rho=8:", ",".join(map(str, dyn[0].schedule[:12])), "...")


if __name__ == "__main__":
    show_decision_flips()
    show_thresholds()
