# Spectra of finite truncations: Bellissard's H and the almost Mathieu operator

import numpy as np

from bellissard import GOLDEN_MEAN, build_almost_mathieu, build_bellissard, eigenvalues, generate, spectrum_report

seq = generate("3", 1024, "float")
H = build_bellissard(seq, 1024)
e = eigenvalues(H)
print("H: N =", H.N, "range", e[0], e[-1])
print("symmetric about 0:", np.max(np.abs(e + e[::-1])))

rep = spectrum_report(e, gap_threshold=0.05, matrix=H)
widest = sorted(rep.gaps, key=lambda g: g[1] - g[0])[-3:]
print("three widest gaps:", [(round(l, 4), round(r, 4)) for l, r in widest])

# critical coupling, golden-mean frequency
am = build_almost_mathieu(2.0, GOLDEN_MEAN, 0.0, 610)
ea = eigenvalues(am)
print("almost Mathieu: ", len(spectrum_report(ea, 0.02).gaps), "gaps wider than 0.02")
