# Testing whether a network is sparse.
#
# Vertices play the role of blocks and degrees the role of block sizes.
# For ordinary graphs (mu = 2) sparsity is alpha > 1/2, and the test
# rejects H0: alpha <= 1/2 when sqrt(K_n I) (alpha_hat - 1/2) is large.

# %%
import numpy as np

from epkit import EpParams, simulate, sparsity_test
from epkit.partition import stats_from_degrees

rng = np.random.default_rng(5)
for alpha in (0.4, 0.5, 0.7):
    st = simulate(EpParams(alpha, 1.0), 2**16, rng)
    # turn the block sizes back into a degree list, as if read from a graph
    degrees = [j for j, c in st.s.items() for _ in range(c)]
    stats, mu = stats_from_degrees(degrees, mu=2.0)
    res = sparsity_test(stats, mu, 0.05)
    print(f"alpha={alpha}  alpha_hat={res.alpha_hat:.3f}  z={res.z_stat:+.2f}  "
          f"p={res.p_value:.4f}  reject={res.reject}")

# %%
# Size at the boundary of the null, from a small Monte Carlo run.
rej = [sparsity_test(simulate(EpParams(0.5, 1.0), 2**14, rng)).reject for _ in range(200)]
print("rejection rate at alpha = 1/2:", np.mean(rej))
