"""Frame error rates of the (2,2,1) two-bit decoder against Gallager B.

Run with ``python demos/fer_comparison.py``. Uses a certified 64-bit graph and
a seeded simulation, so the numbers are identical on every run and for any
thread count (set TWOBIT_THREADS to parallelise).
"""

from twobit import SimConfig, construct_fixture, fer_sweep

ALPHAS = [0.01, 0.02, 0.03, 0.04, 0.05, 0.06]


def main() -> None:
    g = construct_fixture("theorem1_positive", n=64, seed=0)
    cfg = SimConfig(trials=4000, target_errors=None, max_iterations=100, seed=1)
    reports = fer_sweep(g, ["twobit:2,2,1", "gallagerB"], ALPHAS, cfg)
    by_cell = {(r.decoder, r.alpha): r for r in reports}
    print(f"{'alpha':>6}  {'two-bit FER':>24}  {'Gallager B FER':>24}")
    for a in ALPHAS:
        cells = [by_cell[(d, a)] for d in ("twobit:2,2,1", "gallagerB")]
        text = [f"{r.fer:.4f} [{r.wilson_ci_95[0]:.4f},{r.wilson_ci_95[1]:.4f}]" for r in cells]
        print(f"{a:>6}  {text[0]:>24}  {text[1]:>24}")


if __name__ == "__main__":
    main()
