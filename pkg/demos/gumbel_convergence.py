"""Watch the normalized supremum converge to the Gumbel law.

Over a horizon of length S the supremum of the Brownian windowed-increment
field, centered at b_S and scaled by a_S, approaches the Gumbel
distribution exp(-e^{-x}).  The centering needs one model constant with no
closed form, so the demo first estimates it from matched-lattice
simulations, then runs a ladder of horizons and reports the
Kolmogorov-Smirnov distance at each rung.  A deliberately faulty centering
(b_S + 1) shows what the KS statistic looks like when the norming is
wrong.

Convergence in S is logarithmic, so the improvement along the ladder is
gradual.  Roughly a minute at the default size.
"""
import argparse

from gxtr.asymptotics import ConstantProvider
from gxtr.constants import estimate_pickands_piterbarg
from gxtr.harness import run_gumbel_experiment
from gxtr.model import mapped_regime_params, parse_model_config
from gxtr.simulate import RngStream

BROWNIAN = "kind = fbm_mixture\nlambdas = 1\nhursts = 0.5"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--reps", type=int, default=600,
                    help="maxima per ladder rung (default 600)")
    ap.add_argument("--seed", type=int, default=5, help="master seed")
    ns = ap.parse_args()

    model = parse_model_config(BROWNIAN)
    mapped, _ = mapped_regime_params(model, 1.0)
    print("estimating the window constant for the Brownian increment "
          "field...")
    est = estimate_pickands_piterbarg(mapped, float("inf"), 20.0, a=0.05,
                                      reps=400, stream=RngStream(ns.seed))
    print(f"  estimate {est.value:.4f} +- {est.std_error:.4f}\n")
    provider = ConstantProvider().inject(
        "mixed(alpha=1,a1=0.5,a2=0.5,a3=0.5,b=0.5)", est.value)

    ladder = [20.0, 80.0, 200.0]
    report = run_gumbel_experiment(model, ladder, 1.0, ns.reps, "theory",
                                   RngStream(ns.seed), provider=provider)
    print(f"KS distance of a_S(sup - b_S) from the Gumbel law "
          f"({ns.reps} maxima per rung)")
    print(f"{'S':>6} {'grid step':>10} {'b_S':>8} {'KS':>8}")
    for row in report.rows:
        print(f"{row.S:>6g} {row.step:>10.4g} {row.b_S:>8.4f} {row.ks:>8.4f}")

    fault = run_gumbel_experiment(model, ladder[-1:], 1.0, ns.reps, "theory",
                                  RngStream(ns.seed), provider=provider,
                                  inject_bs_shift=1.0)
    print(f"\nsame run with the centering displaced by +1: "
          f"KS = {fault.rows[0].ks:.3f}")
    print("a unit shift moves essentially the whole distribution, so the")
    print("small KS values above are evidence the norming is right, not an")
    print("artifact of a forgiving metric")


if __name__ == "__main__":
    main()
