# Simulating Ewens-Pitman partitions with the sequential urn scheme.
#
# Balls arrive one at a time. Ball m+1 opens a new urn with probability
# (theta + K alpha) / (theta + m), otherwise it joins an existing urn of
# size j with probability (j - alpha) / (theta + m).

# %%
import numpy as np

from epkit import EpParams, gmtl_moment, simulate_trajectory
from epkit.partition import empirical_measure, naive_alpha
from epkit.sibuya import sibuya_pmf

params = EpParams(alpha=0.6, theta=1.0)
rng = np.random.default_rng(1)

# %%
# One trajectory observed at a few checkpoints. K_n grows like M n^alpha,
# where M has the generalized Mittag-Leffler law; E[M] is known in closed form.
checkpoints = [10**3, 10**4, 10**5, 10**6]
path = simulate_trajectory(params, checkpoints, rng)
print("E[M] =", round(gmtl_moment(params, 1.0), 4))
for st in path:
    print(f"n={st.n:>8}  K_n={st.k:>6}  K_n/n^alpha={st.k / st.n**params.alpha:.4f}")

# %%
# Block-size frequencies S_{n,j}/K_n settle on the Sibuya law p_alpha(j).
pn = empirical_measure(path[-1])
for j in range(1, 6):
    print(f"j={j}  empirical={pn(j):.4f}  sibuya={sibuya_pmf(0.6, j):.4f}")

# %%
# The naive estimate log K_n / log n converges only at a log n rate.
for st in path:
    print(f"n={st.n:>8}  log K / log n = {naive_alpha(st):.4f}")
