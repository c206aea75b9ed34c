"""The headline experiment: mean component count over sqrt(n).

Runs modest trial counts at a few degrees and prints the normalized
means next to the limiting constant sqrt((zeta(2) - 1)/pi) = 0.45309.
Convergence is logarithmically slow, so desk-scale n sits visibly above
the limit; the trend is what the scaling acceptance criterion pins down.
"""

import io

from lemlab import ExperimentConfig, run_scaling

cfg = ExperimentConfig(
    command="scaling",
    n_list=(50, 100, 200, 400),
    trials=300,
    master_seed=2024,
    kappa=2.0,
    no_timing=True,
)
buf = io.StringIO()
run_scaling(cfg, out=buf)
print(buf.getvalue())
