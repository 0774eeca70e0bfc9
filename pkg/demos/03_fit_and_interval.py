# Maximum likelihood for (alpha, theta) and a confidence interval for alpha.
#
# theta cannot be estimated consistently, yet alpha_hat is and the
# interval alpha_hat +- z / sqrt(K_n I_alpha_hat) has the right coverage.

# %%
import numpy as np

from epkit import EpParams, confidence_interval, fit_mle, fit_qmle, simulate

st = simulate(EpParams(0.6, 1.0), 2**14, np.random.default_rng(3))
print(f"n={st.n}  K_n={st.k}")

# %%
fit = fit_mle(st)
ci = confidence_interval(fit, 0.95)
print(f"MLE   alpha={fit.alpha_hat:.4f}  theta={fit.theta_hat:.3f}  I={fit.fisher_at_hat:.3f}")
print(f"95% interval [{ci.lo:.4f}, {ci.hi:.4f}]")
print("unique root certified:", fit.diagnostics["unique_certificate"])

# %%
# Plugging in a value for theta gives the QMLE. A wrong plug-in costs
# little when theta is small compared with n^alpha.
for t in (0.0, 1.0, 20.0):
    q = fit_qmle(st, t)
    print(f"QMLE theta*={t:>5}  alpha={q.alpha_hat:.4f}")

# %%
# Repeating the fit on fresh data shows the spread of theta_hat; it stays
# random and sits above the truth on average.
rng = np.random.default_rng(4)
th = [fit_mle(simulate(EpParams(0.6, 1.0), 2**14, rng)).theta_hat for _ in range(200)]
print("theta_hat quantiles (5, 50, 95%):", np.round(np.quantile(th, [0.05, 0.5, 0.95]), 2))
