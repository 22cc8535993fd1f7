"""Four consensus models on the same pair of networks.

The oscillator model uses a common unit drift f(x) = 1, so agents keep
moving while they (try to) agree.

A directed ring has a spanning diverging tree, so every model reaches
agreement.  Two independent leaders feeding a follower do not, and every
model stalls with the follower somewhere in between.
"""

import numpy as np

from digraph_consensus import SimConfig, WeightedDigraph, convergence_report
from digraph_consensus.dynamics import (
    simulate_continuous,
    simulate_discrete,
    simulate_double_integrator,
    simulate_oscillator,
)

ring = WeightedDigraph.cycle(4)
leaders = WeightedDigraph.from_edges(3, [(0, 2, 1.0), (1, 2, 1.0)])

for name, g in (("ring", ring), ("two leaders", leaders)):
    x0 = np.arange(1.0, g.n + 1)
    cfg = SimConfig(t_end=40.0)
    runs = {
        "continuous": simulate_continuous(g, x0, cfg),
        "discrete": simulate_discrete(g, x0, 0.5, 400),
        "oscillator": simulate_oscillator(g, np.ones_like, 1.0, x0, cfg),
        "double-int.": simulate_double_integrator(g, 1.5, x0, np.zeros(g.n), SimConfig(t_end=80.0)),
    }
    print(f"--- {name}")
    for model, traj in runs.items():
        v = convergence_report(traj)
        final = np.array2string(traj.final, precision=4)
        print(f"  {model:<12} {v.verdict:<12} spread {v.final_disagreement:.2e}  final {final}")

# At the upper end of the admissible step size the 2-cycle swaps opinions forever,
# even though its time average is the consensus value.
g = WeightedDigraph.cycle(2)
traj = simulate_discrete(g, [0.0, 1.0], 1.0, 5)
print("\n2-cycle at eps = 1:", traj.states.tolist())
print("verdict:", convergence_report(traj).verdict, "| time average:", traj.states.mean(axis=0))
