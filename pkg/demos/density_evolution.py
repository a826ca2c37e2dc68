"""
Density evolution for list message passing
==========================================

"""

from srlmp.de import DeConfig, cn_de_step, de_run, optimize_delta, threshold, trajectory_csv, vn_de_step
from srlmp.ensembles import DegreeDistribution

dd = DegreeDistribution.regular(3, 5)

# one iteration by hand, binary field: classes are (empty, correct, wrong)
x0 = [0.0, 0.95, 0.05]
s1 = cn_de_step(x0, dd, 2, 1)
x1 = vn_de_step(s1, 0.05, dd, 2, 1, 1.0)
print("CN step", s1.round(5), " VN step", x1.round(5))

# iterate until the correct-singleton mass reaches one
res = de_run(DeConfig(q=4, dd=dd, eps=0.1, gamma=2, delta=1.25))
print(f"q=4 list size 2 at eps=0.1: converged={res.converged} after {res.iterations} iterations")
print(trajectory_csv(res, 2).splitlines()[-1])

# thresholds at the delta used in simulations, then with delta optimised on a small grid
for gamma, delta in ((1, 1.0), (2, 1.25)):
    print(f"list size {gamma}, delta={delta}: threshold {threshold(4, dd, gamma, delta, resolution=1e-3):.3f}")
best, thr = optimize_delta(4, dd, 1, grid=[0.5, 0.75, 1.0, 1.25], resolution=1e-3, refine=None)
print(f"best delta on the grid {best}, threshold {thr:.3f}")
