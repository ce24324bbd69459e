"""Arbitrary-precision reference values frozen into the unit tests.

Run with: python3 tests/oracles/reference_values.py
"""
from mpmath import mp, mpf, si, ci, cos, sin, quad, inf, exp, pi, gamma, log, euler, atan, re

mp.dps = 40


def gamma_hard(kappa, lam, wc, t):
    # 4 * int_0^wc lam w^(kappa-1) (1 - cos w t) dw
    f = lambda w: lam * w ** (kappa - 1) * 2 * sin(w * t / 2) ** 2
    pts = [mpf(0)] + [mpf(2) * pi * k / t for k in range(1, int(wc * t / (2 * pi)) + 1)] + [mpf(wc)]
    return 4 * quad(f, pts)


def gamma_exp(kappa, lam, wc, t):
    f = lambda w: lam * w ** (kappa - 1) * exp(-w / wc) * 2 * sin(w * t / 2) ** 2
    return 4 * quad(f, [0, 1, 5, 20, 80, inf])


print("Si(0.5)      ", si(mpf("0.5")))
print("Si(2)        ", si(2))
print("Si(10)       ", si(10))
print("Si(100)      ", si(100))
print("Si(1e4)      ", si(10000))
print("Ci(0.5)      ", ci(mpf("0.5")))
print("Ci(2)        ", ci(2))
print("Ci(10)       ", ci(10))
print("Ci(100)      ", ci(100))
print("quad 1-cos100", 100 * si(100) - (1 - cos(100)))
print("gamma k=-1 t=200", 4 * (200 * si(200) - (1 - cos(200))))
print("gamma k=0 t=50 hard", gamma_hard(0, 1, 1, 50))
print("gamma k=0.5 t=7 hard", gamma_hard(mpf("0.5"), 1, 1, 7))
print("gamma k=-1.5 t=3 hard", gamma_hard(mpf("-1.5"), 1, 1, 3))
print("gamma k=2 t=13 hard", gamma_hard(2, 1, 1, 13))
print("gamma k=1 t=5 exp", gamma_exp(1, 1, 1, 5))
print("gamma k=-0.5 t=5 exp", gamma_exp(mpf("-0.5"), 1, 1, 5))
print("gamma k=-1.5 t=5 exp", gamma_exp(mpf("-1.5"), 1, 1, 5))
print("norm exp k=0.5", gamma(mpf("0.5")))
