"""The complete two-iteration outcome atlas.

Two iterations involve three measurements, so at 50 Fock levels there are
50^3 = 125,000 outcome sequences. This enumerates all of them exactly and
answers: how lucky do you have to be? The cumulative curves trade success
probability against output quality.
"""

import math

from qpbreed import (
    FockConfig,
    default_target,
    effective_squeezing_curve,
    enumerate_two_iterations,
    probability_fidelity_curve,
    sign_aggregated,
)

cfg = FockConfig()
leaves = enumerate_two_iterations(cfg, target=default_target(cfg))

valid = [l for l in leaves if not math.isnan(l.fidelity)]
print(f"enumerated {len(leaves)} outcome sequences "
      f"(total probability {sum(l.probability for l in leaves):.10f})")

best = sorted(valid, key=lambda l: -l.fidelity)[:5]
print("\nhighest-fidelity sequences (probability aggregates the mirror-sign twins):")
print(f"{'q1':>4} {'q2':>4} {'p':>4} {'fidelity':>9} {'probability':>12} {'squeezing':>10}")
for leaf in best:
    print(f"{leaf.q1:4d} {leaf.q2:4d} {leaf.p:4d} {leaf.fidelity:9.4f} "
          f"{sign_aggregated(leaf.probability, 3):12.5f} {leaf.effective_squeezing:10.4f}")

print("\nprobability of doing at least this well:")
for threshold, cumulative in probability_fidelity_curve(leaves, [0.94, 0.96, 0.98]):
    print(f"  fidelity >= {threshold:.2f}: {100 * cumulative:6.2f}%")
for bound, cumulative in effective_squeezing_curve(leaves, [0.36, 0.40, 0.46]):
    print(f"  squeezing <= {bound:.2f}: {100 * cumulative:6.2f}%")
