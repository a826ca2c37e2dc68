"""
Decoding a PEG code over F_4
============================

"""

import numpy as np

from srlmp.de import schedule_for
from srlmp.decoder import DecoderConfig, SrlmpDecoder
from srlmp.ensembles import DegreeDistribution
from srlmp.qsc import QscParams, sample
from srlmp.sim import SimConfig, simulate_sweep
from srlmp.tanner import peg_construct

dd = DegreeDistribution.regular(3, 5)
g = peg_construct(1200, dd, 4, seed=0)
print(g, " girth >= 6:", g.girth_at_least_6())

# a single frame, with the reliabilities taken from density evolution at the same eps
eps = 0.08
sched = schedule_for(4, dd, 1, eps, 1.0)
dec = SrlmpDecoder(g, DecoderConfig(gamma=1, max_iter=50))
rng = np.random.default_rng(1)
y = sample(np.zeros(g.n, dtype=np.int64), QscParams(4, eps), rng)
res = dec.decode(y, sched, rng)
print(f"channel errors {np.count_nonzero(y)}, left after decoding {np.count_nonzero(res.x_hat)}, "
      f"iterations {res.iterations}")

# a short SER sweep for both list sizes
for gamma, delta in ((1, 1.0), (2, 1.25)):
    eps_list = [0.08, 0.11, 0.14]
    scheds = {e: schedule_for(4, dd, gamma, e, delta) for e in eps_list}
    cfg = SimConfig(q=4, gamma=gamma, eps_list=eps_list, max_frames=100, target_symbol_errors=300,
                    schedule=scheds)
    print(f"list size {gamma}")
    print(simulate_sweep(g, cfg).to_csv())
