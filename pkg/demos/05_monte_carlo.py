"""
Monte-Carlo check of the analytic rate
======================================

The analytic rate assumes every memory is free at the start of each cycle.
Real banks are partly busy, so the simulated rate sits below the formula.
The gap closes as P_S shrinks. Every delivered pair has the same age.
"""

from pnp_repeater import KM, ChannelModel, RepeaterConfig, SimConfig, compare_to_analytic, run

# %%
for ps, pm, N, n, m in [(0.02, 0.9, 20000, 1, 1), (0.05, 0.5, 200, 3, 1), (0.05, 0.5, 200, 3, 3)]:
    rep = RepeaterConfig(1000 * KM, n, m, N=N, p_m=pm, tau_c=5e-3, channel=ChannelModel(ps_override=ps))
    stats = run(SimConfig(rep, cycles=20_000, warmup_cycles=100, seed=1))
    cmp = compare_to_analytic(stats, rep)
    ages = {round(a * 1e3, 6): k for a, k in stats.ages_seconds.items()}
    print(f"P_S={ps} P_M={pm} N={N} n={n} m={m}: measured/analytic = {cmp.pair_ratio:.3f} "
          f"+- {cmp.pair_ratio_se:.3f}, ages [ms] {ages}")

# %%
# Deterministic limit: one pair per cycle, which is c/(2L) per memory.
rep = RepeaterConfig(1000 * KM, 1, 1, p_m=1.0, channel=ChannelModel(ps_override=1.0))
stats = run(SimConfig(rep, cycles=1000, warmup_cycles=10))
print(f"deterministic: {stats.measured_normalized_rate:.6g} /s vs c/(2L) = {2e8 / (2 * rep.L):.6g} /s")
