"""
Thermal robustness
==================

Snapshot entanglement on a (J, n_th) grid. The state at occupation n_th is
V(t; 0) + n_th W(t), so one integration per coupling covers a whole column.
"""

from ptesd.config import load_config
from ptesd.experiments import run_heatmap

cfg = load_config("heatmap", overrides=["j_points=5", "n_th_points=6", "n_th_max=500"])
table = run_heatmap(cfg)
print("binary, Gamma*t = 0.5")
print("  ".join(f"{c:>9}" for c in table.columns))
for row in table.rows:
    print("  ".join(f"{v:>9.4g}" if isinstance(v, float) else f"{v!s:>9}" for v in row))

cfg = load_config("heatmap", overrides=["experiment=ternary-thermal", "j_points=5", "n_th_points=3", "n_th_max=300"])
print("\nternary, Gamma*t = 0.1: thermal occupation where S crosses 1")
seen = set()
for j, *_, boundary in run_heatmap(cfg).rows:
    if j not in seen:
        seen.add(j)
        print(f"  J/Gamma = {j:.4f}: {boundary}")
