"""Independent reference values frozen into the C++ unit tests.

Run with `python3 tests/oracles/compute_oracles.py`. Nothing here imports the
library; values come from closed forms, mpmath quadrature or numpy fits.
"""
import mpmath as mp
import numpy as np

mp.mp.dps = 30

# Propagator at |xi|=1, alpha=-1, t=1: roots -1 +- i.
lp, lm = mp.mpc(-1, 1), mp.mpc(-1, -1)
t = 1
G = (mp.e ** (lp * t) - mp.e ** (lm * t)) / (lp - lm)
H = (lp * mp.e ** (lm * t) - lm * mp.e ** (lp * t)) / (lp - lm)
print("G(1,1) =", mp.nstr(G.real, 20), " H(1,1) =", mp.nstr(H.real, 20))

# Gaussian L2 norm of exp(-x^2).
print("||exp(-x^2)||_2 =", mp.nstr(mp.quad(lambda x: mp.e ** (-2 * x * x), [-mp.inf, mp.inf]) ** 0.5, 20))

# Radial quadrature examples, n=1 surface factor 2.
I0 = 2 * mp.quad(lambda r: mp.e ** (-2 * r * r), [0, mp.inf])
I1 = 2 * mp.quad(lambda r: r * r * mp.e ** (-2 * r * r), [0, mp.inf])
print("c1*int exp(-2r^2) =", mp.nstr(I0, 20), " 2*sqrt(pi/8) =", mp.nstr(2 * mp.sqrt(mp.pi / 8), 20))
print("k=1/k=0 norm ratio =", mp.nstr(mp.sqrt(I1 / I0), 20))

# Least-squares slope of (1+t)^-0.5 ln(2+t) against log(1+t), 41 log-spaced
# samples on [1e2, 1e4].
ts = np.logspace(2, 4, 41)
vals = (1 + ts) ** -0.5 * np.log(2 + ts)
slope = np.polyfit(np.log1p(ts), np.log(vals), 1)[0]
print("eta-corrected slope =", repr(slope))

# Single-mode linear ODE u'' + 2u' + 2u = 0, u(0)=0, u'(0)=1 at t=5.
print("e^-5 sin 5 =", mp.nstr(mp.e ** -5 * mp.sin(5), 20))
