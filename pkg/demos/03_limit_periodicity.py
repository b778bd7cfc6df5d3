# Decay of R_{2^k} and the approach R_{p 2^k + s} -> R_s at lambda = 3

import numpy as np

from bellissard import generate, proposition_decay, proposition_limit, uniformity_table

seq = generate("3", 4 * 2**16 + 8, "float")

decay = proposition_decay(seq, 1, 16)
for x in decay.samples[::4]:
    print(f"k={x.k:2d}  R_{x.index} = {x.value:.3e}")
print("log-slope per k:", round(decay.estimated_rate, 3))

lim = proposition_limit(seq, 3, 2, 16)
print("|R_{3 2^k + 2} - R_2|, last five:", np.round(lim.deviations[-5:], 8))

# worst case over a block of (p, s); a uniform limit would push this to 0
for row in uniformity_table(seq, range(1, 5), range(1, 9), 16)[::4]:
    print(f"k={row.k:2d}  max deviation {row.max_deviation:.3e} at (p, s) = {row.worst}")
