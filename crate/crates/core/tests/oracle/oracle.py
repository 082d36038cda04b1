"""Independent arbitrary-precision reference values for the test suites.

Run with `python3 oracle.py`; the printed values are frozen into the Rust
tests. Uses mpmath only, never the crate under test.
"""
from mpmath import mp, mpf, mpc, zeta, pi, log, exp, catalan, zetazero, findroot, diff, gamma, sin, nsum, inf

mp.dps = 40

def show(name, v):
    print(f"{name} = {mp.nstr(v, 25)}")

show("zeta(2)", zeta(2))
show("zeta(0)", zeta(0))
show("zeta(-1)", zeta(-1))
show("zeta'(0)", zeta(0, derivative=1))
show("L(2,chi4) catalan", catalan)
show("L(1,chi4) pi/4", pi / 4)
show("zeta(10)-1", zeta(10) - 1)
show("tail bound sigma0=2 sigma=10", 4 * (pi**2 / 6 - 1) * mpf(2) ** -10)
# first real zero of zeta' by bisection-style root finding on (-3,-2)
v1 = findroot(lambda x: zeta(x, derivative=1), (-3, -2), solver="bisect")
show("zeta' real zero in (-3,-2)", v1)
show("zeta(v1)", zeta(v1))
sstar = findroot(lambda x: zeta(x) - mpf("1.2"), (2.5, 3.5), solver="bisect")
show("sigma* with zeta = 1.2", sstar)
for n in range(1, 14):
    show(f"zero {n}", zetazero(n).imag)
# zeta' zero near 2.46+23.3i
vz = findroot(lambda s: zeta(s, derivative=1), mpc(2.46, 23.3))
show("zeta' zero re", vz.real)
show("zeta' zero im", vz.imag)
show("|zeta(vz)|", abs(zeta(vz)))
show("hadamard gap s=1 levels=2", 1 + exp(-1) + exp(-2) + exp(-4))
show("1+2^-s zero k=0", pi / log(2))
s = mpc(0.3, 2)
show("FE residual at 0.3+2i", abs(zeta(s) - 2**s * pi**(s - 1) * sin(pi * s / 2) * gamma(1 - s) * zeta(1 - s)))
m = mpc(0.5, 10)
show("|M(0.5+10i)|", abs(2**m * pi**(m - 1) * sin(pi * m / 2) * gamma(1 - m)))
show("blaschke zero sum 20 levels", nsum(lambda n: (mpf(2) / 3) ** n, [1, 20]))
# dirichlet eta at 2
show("eta(2)", pi**2 / 12)
