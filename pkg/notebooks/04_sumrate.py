# %% [markdown]
# # Multi-user sum rate with maximum-ratio transmission
#
# Five users per drop, ranges uniform in [2D, R_D] and directions uniform over
# the front hemisphere. Each trial draws from its own Philox stream, so the
# run is reproducible and can be split across threads.

# %%
from nfbeamscope.experiments import sumrate_curves

curves = sumrate_curves(trials=200, seed=7)
print("SNR dB " + "".join(f"{n:>10s}" for n in curves))
for i, snr in enumerate(next(iter(curves.values())).snr_grid_db):
    print(f"{snr:6.0f} " + "".join(f"{c.mean_sumrate[i]:10.2f}" for c in curves.values()))

# %% [markdown]
# ## A single drop in detail

# %%
from nfbeamscope.experiments import reference_layouts
from nfbeamscope.mumimo import draw_users, trial_rng, user_rate

lay = reference_layouts()["ULA"]
users = draw_users(lay, 5, trial_rng(7, 0))
for k, u in enumerate(users):
    b = user_rate(lay, users, k, 1.0)
    print(f"user {k}: r={u.range:6.2f} m  sum I^2={sum(b.interference_terms):.4f}  "
          f"rate={b.rate_bits:.2f} bit/s/Hz")
