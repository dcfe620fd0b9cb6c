"""Gauge maintenance policies and what they cost.

The potential system is integrated with phi = 0, which does not preserve
div A = 0; the div A = 0 gauge is enforced by projection.  The two
conditions are genuinely in tension: the projection gap shows up as a
nonzero "ohmic residual" diagnostic (1/c)||grad phi_proj||_2, the part of
v x H the solenoidal evolution cannot represent.

This script evolves the same band-limited random state under three
policies -- no projection, projection every 10th step, projection every
step -- and tabulates ||div A||_2, the residual, and the energy drift.
Energy is not conserved by the modified force (it is not j x H/c); the
drift is reported, not asserted away.
"""

import numpy as np

from modmhd import (
    Formulation,
    GaugePolicy,
    GridSpec,
    PhysParams,
    random_solenoidal,
    run,
)

TWO_PI = 2.0 * np.pi


def evolve(policy, label):
    grid = GridSpec(24, 24, 24, TWO_PI, TWO_PI, TWO_PI)
    case = random_solenoidal(grid, Formulation.MODIFIED, amplitude=0.05)
    params = PhysParams(gauge=policy)
    final, records = run(case.state, params, t_end=4.0, out_every=1)
    first, last = records[0], records[-1]
    e_drift = (last.e_tot - first.e_tot) / first.e_tot
    print(f"{label:<16} steps {len(records) - 1:4d}   "
          f"||div A||_2 {first.divA_l2:.2e} -> {last.divA_l2:.2e}   "
          f"ohm resid {last.ohm_resid:.2e}   energy drift {e_drift:+.2e}")
    return records


def main():
    print("modified formulation, random solenoidal state, t = 0 .. 4")
    print()
    rec_off = evolve(GaugePolicy.off(), "no projection")
    rec_ten = evolve(GaugePolicy.every_n(10), "every 10 steps")
    rec_one = evolve(GaugePolicy.every_step(), "every step")

    print()
    print("div A growth under 'no projection' (every 10th record):")
    for r in rec_off[::10]:
        print(f"  t = {r.t:6.3f}   ||div A||_2 = {r.divA_l2:.4e}")

    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("(matplotlib not available; skipping plot)")
        return
    fig, ax = plt.subplots(figsize=(6, 3.5))
    for recs, label in ((rec_off, "off"), (rec_ten, "every 10"),
                        (rec_one, "every step")):
        ax.semilogy([r.t for r in recs],
                    [max(r.divA_l2, 1e-18) for r in recs], label=label)
    ax.set_xlabel("t")
    ax.set_ylabel("||div A||_2")
    ax.legend(title="projection")
    fig.tight_layout()
    fig.savefig("gauge_tension.png", dpi=130)
    print("wrote gauge_tension.png")


if __name__ == "__main__":
    main()
