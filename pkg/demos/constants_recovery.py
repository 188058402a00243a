"""Recover the closed-form lattice constants by Monte Carlo.

Three of the window constants have exact values: the alpha=1 constant is 1,
the alpha=2 constant is 1/sqrt(pi), and the drifted alpha=1 constant with
drift coefficient b is 1 + 1/b.  This demo estimates all three with a
desk-scale budget and prints the recovery error, which is dominated by the
finite window and lattice step rather than by Monte Carlo noise.

Run time is about half a minute; pass --reps to trade accuracy for speed.
"""
import argparse
import math

from gxtr.constants import estimate_pickands, estimate_piterbarg
from gxtr.simulate import RngStream


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--reps", type=int, default=20000,
                    help="Monte Carlo replications (default 20000)")
    ap.add_argument("--seed", type=int, default=0, help="master seed")
    ns = ap.parse_args()

    jobs = [
        ("H_1 (alpha=1)", 1.0,
         lambda s: estimate_pickands(1.0, T=4.0, a=0.01, reps=ns.reps,
                                     stream=s)),
        ("H_2 (alpha=2)", 1.0 / math.sqrt(math.pi),
         lambda s: estimate_pickands(2.0, T=4.0, a=0.01, reps=ns.reps,
                                     stream=s)),
        ("P_1^1 (alpha=1, b=1)", 2.0,
         lambda s: estimate_piterbarg(1.0, 1.0, T=4.0, a=0.01, reps=ns.reps,
                                      stream=s)),
        ("P_1^4 (alpha=1, b=4)", 1.25,
         lambda s: estimate_piterbarg(1.0, 4.0, T=4.0, a=0.01, reps=ns.reps,
                                      stream=s)),
    ]
    print(f"window constant recovery ({ns.reps} replications, seed {ns.seed})")
    print(f"{'constant':<22} {'exact':>8} {'estimate':>10} {'std err':>9} "
          f"{'rel err':>9}")
    for label, exact, fn in jobs:
        est = fn(RngStream(ns.seed))
        rel = abs(est.value - exact) / exact
        print(f"{label:<22} {exact:>8.4f} {est.value:>10.4f} "
              f"{est.std_error:>9.2e} {rel:>9.2e}")
    print("\nthe residual error shrinks as the window grows and the lattice")
    print("step falls; the test suite runs the full-budget version")


if __name__ == "__main__":
    main()
