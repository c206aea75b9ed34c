"""The heavy-tailed increment Y(r) = r - Re(1/(r - X)) and its walk.

Outside a compact middle interval the CDF of Y is exactly 1/(4 (r-t)^2)
on the left and 1 - 1/(4 (r-t)^2) on the right.  Sums of n increments
land deep in the tail essentially only when a single increment does, so
interval probabilities follow n * [tail(a) - tail(b)] once the threshold
dwarfs the walk's typical spread (which grows like sqrt(n log n)).
"""

import numpy as np

from lemlab import (
    cdf_y_tail,
    derive_substream,
    sample_y,
    single_jump_prediction,
    tail_law,
    walk_interval_prob_mc,
)

r = 0.5
law = tail_law(r)
print("cut points for r=%.1f: left %.4f, right %.4f" % (r, law.left_cut, law.right_cut))

y = sample_y(r, derive_substream(3, 0), count=500_000)
print("empirical mean %.5f (the walk is mean-zero)" % y.mean())
for t in (law.left_cut, -1.0, -3.0, law.right_cut, 5.0):
    emp = float(np.mean(y <= t))
    print("  F(%7.3f): empirical %.5f   closed form %.5f" % (t, emp, cdf_y_tail(r, t)))

print("\nsingle-big-jump regime (r=0.9, n=200, deep thresholds):")
for a, b in ((500.0, 550.0), (1000.0, 1100.0)):
    est = walk_interval_prob_mc(0.9, 200, a, b, 2_000_000, derive_substream(3, 1))
    pred = single_jump_prediction(0.9, 200, a, b)
    print("  [%6.0f, %6.0f]: MC %.3e +- %.1e   prediction %.3e"
          % (a, b, est.estimate, est.se, pred))
