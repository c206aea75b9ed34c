"""Uniform disc sampling and the closed-form moments of log|r - X|.

Every experiment in the package consumes randomness through numbered
Philox substreams, so everything here is exactly reproducible.  The demo
checks the textbook identities E[1/(z - X)] = conj(z) and
E[log|r - X|] = (r^2 - 1)/2 by plain Monte Carlo.
"""

import numpy as np

from lemlab import derive_substream, moments_log_dist, sample_disc_array

N = 400_000

stream = derive_substream(2024, 0)
pts = sample_disc_array(stream, N)
print("drew %d uniform disc points, max |z| = %.6f" % (N, np.abs(pts).max()))
print("mean = (%.5f, %.5f), expect about (0, 0)" % (pts.real.mean(), pts.imag.mean()))

z0 = 0.3 + 0.4j
recip = 1.0 / (z0 - pts)
print("\nE[1/(z0 - X)] for z0 = %s:" % z0)
print("   monte carlo : %.5f %+.5fi" % (recip.real.mean(), recip.imag.mean()))
print("   closed form : %.5f %+.5fi" % (z0.real, -z0.imag))

print("\nmean and std of log|r - X|:")
print("   r      MC mean    (r^2-1)/2    MC std     sigma(r)")
for r in (0.0, 0.5, 0.9, 1.0):
    v = np.log(np.abs(r - pts))
    tab = moments_log_dist(r)
    print("  %.2f  %9.5f   %9.5f   %8.5f   %8.5f"
          % (r, v.mean(), tab.u, v.std(ddof=1), tab.sigma))
