# %% [markdown]
# # The rule of thumb on the built-in scenarios
#
# Each preset simulates 300 observations per panel and hands the
# trajectory to the detector, which labels the `I_n` and `B_n` trends and
# combines them into a decision.

# %%
from intrusion_detect import list_presets, run_scenario

for name, scenario in list_presets().items():
    for run in run_scenario(scenario):
        v = run.verdict
        final = run.trajectory.final
        i = "undefined" if final.i is None else f"{final.i:.4f}"
        print(f"{run.stem:<26} I_300={i:<9} B_300={final.b:.4f}  {v.record()}")

# %% [markdown]
# Replications turn single verdicts into frequencies, and the `sqrt(n)` fit
# of `B_n` recovers the mean absolute intrusion difference `2 sigma / sqrt(pi)`.

# %%
from intrusion_detect import get_preset, run_replications

for report in run_replications(get_preset("fig4"), 25):
    print(report.summary())
