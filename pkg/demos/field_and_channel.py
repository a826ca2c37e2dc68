"""
Finite fields and the q-ary symmetric channel
=============================================

"""

import numpy as np

from srlmp.ensembles import qsc_capacity, shannon_limit
from srlmp.gf import field
from srlmp.qsc import QscParams, channel_llv, sample

# symbols are indices: 0 is the zero element, i >= 1 is alpha^(i-1)
gf = field(4)
print("F_4 addition table\n", gf.add_table)
print("F_4 multiplication table\n", gf.mul_table)
a = gf.alpha_power(1)
print("alpha + 1 =", gf.add(a, 1), " alpha * alpha =", gf.mul(a, a), " inv(alpha) =", gf.inv(a))

# send the all-zero word through a QSC and count substitutions
rng = np.random.default_rng(0)
ch = QscParams(q=4, eps=0.1)
y = sample(np.zeros(100_000, dtype=np.int64), ch, rng)
print("empirical error rate", np.mean(y != 0), " per-symbol counts", np.bincount(y, minlength=4))

# the channel log-likelihood vector for an observation y=2
print("L(y=2) =", channel_llv(2, ch))

# capacity and the largest eps a rate-0.4 code could tolerate
for q in (2, 4, 8, 16):
    print(f"q={q:2d}  C(0.1)={qsc_capacity(q, 0.1):.4f}  eps_Sh(R=0.4)={shannon_limit(q, 0.4):.4f}")
