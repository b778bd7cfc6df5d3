# A mass-spring chain as a Jacobi operator

import math

from bellissard import Boundary, ChainSpec, build_chain, dyson_map, mode_frequencies

chain = ChainSpec([1, 2, 1, 2, 1], [1, 1, 1, 1])
print("lambda sequence:", dyson_map(chain))

for boundary in (Boundary.FREE, Boundary.FIXED):
    M = build_chain(ChainSpec(chain.masses, chain.springs, boundary))
    freqs = [round(m.frequency, 6) for m in mode_frequencies(M)]
    print(boundary.value, "ends:", freqs)

# ten equal masses with both ends pinned: E_k = 2 sin(k pi / 18)
M = build_chain(ChainSpec([1] * 10, [1] * 9, Boundary.FIXED))
print(sorted(round(m.frequency, 6) for m in mode_frequencies(M)))
print([round(2 * math.sin(k * math.pi / 18), 6) for k in range(1, 9)])
