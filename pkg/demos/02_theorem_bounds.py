# The proved four-way bounds, with sigma = 1/(lambda - 1)

from fractions import Fraction

from bellissard import check_theorem, generate

for lam in (Fraction(21, 10), Fraction(5, 2), Fraction(3), Fraction(10)):
    rep = check_theorem(generate(lam, 4096))
    hits = [(a.index, a.inequality) for a in rep.attained]
    print(f"lambda={lam}: checked {rep.checked_count}, violations {len(rep.violations)}, attained {hits}")

# float mode reaches much further; a tolerance absorbs rounding at R_4, R_5
rep = check_theorem(generate("3", 10**6, "float"), tol=1e-9)
print("float, N=1e6:", "ok" if rep.ok else rep.first_violation())
