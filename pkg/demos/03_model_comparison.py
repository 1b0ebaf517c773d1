#!/usr/bin/env python3
"""Which error bound does the data prefer?

Two candidate intensities are fed the same primes: the tight MT bound and the
much larger x/log x bound.  The log ratio of their one-step-ahead predictive
densities at the next actual prime keeps growing, i.e. the data keep piling
evidence onto the tighter bound.
"""

from prime_oracle import Hyperparameters, primes_up_to
from prime_oracle import recursive_bayes as rb
from prime_oracle import nonrecursive_bayes as nonrec
from prime_oracle.specialfn import MT, X_OVER_LOG

table = primes_up_to(2_000_000)
primes = [int(p) for p in table.primes[1:]]  # start at 3: both densities positive
hyper = Hyperparameters()

print("recursive predictive log-ratio (MT over x/log x) at the next prime:")
s_mt = s_xl = None
for i, p in enumerate(primes[:-1]):
    if s_mt is None:
        s_mt, s_xl = rb.init(hyper, MT, p), rb.init(hyper, X_OVER_LOG, p)
    else:
        s_mt, s_xl = rb.update(s_mt, p), rb.update(s_xl, p)
    if s_mt.k in (100, 1000, 10_000, 100_000):
        ratio = rb.model_compare_log_ratio(s_mt, s_xl, primes[i + 1])
        print(f"  k = {s_mt.k:>7}  t_k = {p:>9}  log ratio = {ratio:+.4f}")

post_mt = nonrec.build(primes[:50], hyper, MT)
post_xl = nonrec.build(primes[:50], hyper, X_OVER_LOG)
t_next = primes[50]
exact = nonrec.log_predictive(post_mt, t_next) - nonrec.log_predictive(post_xl, t_next)
print(f"\nexact (non-recursive) route at k = 50: log ratio = {exact:+.4f}")
print("same sign; the recursion is the scalable stand-in for the exact posterior.")
