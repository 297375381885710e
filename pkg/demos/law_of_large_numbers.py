"""Weak and strong law experiments at desk scale.

The weak-law table shows the tail probability P(||S_k/sqrt(k) - m|| > eps)
dropping with k when the index grows along the schedule.  The strong-law
trace follows a single path along the schedule and prints the deviation
plus its reverse running supremum, whose decay is the trend evidence.
"""

import numpy as np

from conebessel import (
    ConeMatrix,
    RadialLaw,
    Schedule,
    StructureParams,
    slln_experiment,
    wlln_experiment,
)

law = RadialLaw(
    weights=(0.5, 0.5),
    atoms=(ConeMatrix(np.diag([1.0, 0.4])), ConeMatrix(np.diag([0.6, 0.2]))),
)
params = StructureParams(q=2, d=1, mu=2.0)
schedule = Schedule(mu_family="poly", mu_c=1.0, mu_b=1.0)

print("weak law: tail probabilities at eps = 0.15, index schedule mu_k = k")
report = wlln_experiment(law, params, schedule, (8, 32, 128), 150, 0.15, master_seed=20)
for row in report.rows:
    print(
        f"  k = {row.k:4d}  mu_k = {row.mu:8.0f}  "
        f"P(deviation > eps) = {row.value:.3f} +- {row.stderr:.3f}"
    )

print()
print("strong law: one path along a pow2 index schedule, n_k = k steps")
strong = slln_experiment(law, params, Schedule(mu_family="pow2"), 14, master_seed=21)
for diag in strong.diagnostics:
    print(f"  schedule condition {diag.name}: {diag.verdict}")
sup = {r.k: r.value for r in strong.rows if r.statistic == "tail_sup"}
for k in (1, 4, 8, 12, 14):
    print(f"  k = {k:2d}   sup of deviations from k on = {sup[k]:.4f}")
print("(finite-k diagnostics; the limit itself is not observable)")
