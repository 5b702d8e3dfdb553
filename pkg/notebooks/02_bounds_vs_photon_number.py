"""
Relative error on the Schwarzschild radius versus photon number
===============================================================

Desk-scale setting: two 1 cm arms 10 m apart on the Earth's surface,
omega = 1e14 rad/s, 1e10 repetitions. The Kerr term takes the Fisher
bound from N^-1/2 to N^-3/2 once N chi exceeds omega; homodyne detection
keeps that scaling at twice the error. Quadrature curves stop where the
linearisation chi tau sqrt(N) <= 0.01 fails.
"""

# %%
import numpy as np

from kerrgrav import SweepSpec, run_sweep
from kerrgrav.runner import format_csv

spec = SweepSpec(points_per_decade=5)
rows = run_sweep(spec)
print(format_csv(rows)[:400])

# %%
# Local slopes of the Fisher bound for each chi over the last two valid decades.
for chi in spec.chis:
    sel = [r for r in rows if r["chi"] == chi and r["valid_flag"]]
    N = np.array([r["N"] for r in sel])
    top = N >= N.max() / 100
    fisher = np.array([r["bound_fisher"] for r in sel])
    slope = np.polyfit(np.log(N[top]), np.log(fisher[top]), 1)[0]
    print(f"chi={chi:g}: last valid N={N.max():.1e}, slope {slope:.3f}")

# %%
try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, ax = plt.subplots(figsize=(6, 4))
    for chi in spec.chis:
        sel = [r for r in rows if r["chi"] == chi]
        N = [r["N"] for r in sel]
        line, = ax.loglog(N, [r["bound_fisher"] for r in sel], label=f"chi={chi:g}")
        valid = [r for r in sel if r["bound_quadrature"] is not None]
        ax.loglog([r["N"] for r in valid], [r["bound_quadrature"] for r in valid], "--", color=line.get_color())
    ax.loglog(N, [r["bound_sql"] for r in sel], "k:", label="SQL")
    ax.set_xlabel("photons per pulse")
    ax.set_ylabel("relative error on r_s")
    ax.legend(fontsize=7)
    fig.savefig("bounds_vs_N.png", dpi=120, bbox_inches="tight")
