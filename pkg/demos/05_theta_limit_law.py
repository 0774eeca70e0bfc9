# The limit law of theta_hat.
#
# theta_hat converges to alpha f_alpha^{-1}(log M) with M generalized
# Mittag-Leffler. The law is skewed to the right and close to normal only
# when alpha is small or theta is large.

# %%
import numpy as np

from epkit.experiments import histogram_rows, run_theta_limit_study
from epkit.mittag import GmtlParam

for a, t in [(0.5, 1.0), (0.1, 10.0)]:
    rep = run_theta_limit_study(GmtlParam(a, t), 10**5, np.random.default_rng(6))
    s = rep.summary()
    print(f"alpha={a} theta={t}: mean={s['mean']:.3f} var={s['variance']:.3f} "
          f"skew={s['skewness']:.3f}  normal ref var={s['ref_variance']:.3f}  KS={s['ks_to_reference']:.4f}")

# %%
# A coarse text histogram of the first case; the long right tail is cut
# where the bars become empty.
rep = run_theta_limit_study(GmtlParam(0.5, 1.0), 10**5, np.random.default_rng(6), bins=60)
for r in histogram_rows(rep):
    bar = "*" * int(200 * r["density"] * (r["bin_right"] - r["bin_left"]))
    if bar:
        print(f"{r['bin_left']:7.2f} {bar}")
