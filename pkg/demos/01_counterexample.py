# Exact arithmetic and the lambda = 2.1 counterexample
#
# The sequence is generated bottom-up with rationals, so every comparison
# below is decided without rounding.

from fractions import Fraction

from bellissard import check_conjecture, generate

seq = generate(Fraction(21, 10), 64)
for n in (2, 6, 10):
    print(f"R_{n} = {seq[n]}  (~{float(seq[n]):.6f})")

# R_10 sits below R_6, which the conjectured bound for the class 4n+2 forbids.
print("R_10 < R_6 < R_2:", seq[10] < seq[6] < seq[2])

report = check_conjecture(seq)
first = report.first_violation("c2-lower")
print("first c2 violation:", first.n, first.index, "margin", first.margin)
print("inequalities violated:", sorted(report.violated()))
