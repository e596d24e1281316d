# %% [markdown]
# # Where I_n settles without intrusion
#
# With no disturbance the statistic converges to
# `I(h) = int (h')_+ / int |h'|` over the transfer window.  For the
# quadratic `h(x) = 1 - (x - 0.8)^2` that is 16/17 on [0, 1] and exactly 1/2
# on [0, 1.6], where the endpoints take the same value.

# %%
from intrusion_detect import endpoint_equal, get_transfer, limit_I
from intrusion_detect.transfer import polynomial

for a, b in [(0.0, 1.0), (0.0, 1.6), (0.0, 0.8), (0.8, 1.6)]:
    h = get_transfer("quadratic", a, b)
    print(f"quadratic on [{a}, {b}]: I(h)={limit_I(h):.12f}  endpoints equal={endpoint_equal(h)}")

print("16/17 =", 16 / 17)

# %% [markdown]
# A cubic with two turning points.  The limit is 1/2 exactly when
# `h(a) == h(b)`; any imbalance pushes it away.

# %%
cubic = polynomial([0.0, 3.0, -6.0, 2.5], 0.0, 2.0)
print("cubic h(a), h(b):", cubic(0.0), cubic(2.0))
print("cubic I(h):", limit_I(cubic))

# %% [markdown]
# Intrusion changes the picture: noise makes `I_n` head towards 1/2 no
# matter what `h` is, while `B_n` grows like `sqrt(n)`.  A clean run on a
# window with `h(a) != h(b)` therefore stays away from 1/2.
