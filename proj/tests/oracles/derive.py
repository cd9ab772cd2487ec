"""Independent high-precision values frozen into the C++ tests.

Everything here uses mpmath quadrature and root finding directly from the
defining integrals, not the incomplete-gamma route the library takes.
Run: python3 derive.py
"""
from mpmath import mp, mpf, quad, exp, sqrt, pi, erf, erfinv, inf

mp.dps = 40


def J(p, R):
    return quad(lambda t: t**p * exp(-t * t / 2), [0, R])


_c = {}


def c(p):
    key = (p, mp.dps)
    if key not in _c:
        _c[key] = quad(lambda t: t**p * exp(-t * t / 2), [0, inf])
    return _c[key]


def psi(t):
    return (1 + erf(t / sqrt(2))) / 2


def psi_inv(a):
    return sqrt(2) * erfinv(2 * a - 1)


def phi_inv(a):
    return sqrt(2) * erfinv(a)


def bisect(f, lo, hi, steps=140):
    flo = f(lo)
    for _ in range(steps):
        mid = (lo + hi) / 2
        fm = f(mid)
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return (lo + hi) / 2


def R_k(k, a):
    if k == 1:
        return phi_inv(a)
    if k == 2:
        return sqrt(-2 * mp.log(1 - a))
    target = c(k - 1) * a
    return bisect(lambda R: J(k - 1, R) - target, mpf(0), mpf(12))


def s_k(k, a):
    R = R_k(k, a)
    return R ** (k - 1) * exp(-R * R / 2) / c(k - 1)


def phi_k(k, a):
    R = R_k(k, a)
    return c(k - 1) * (R * R - k + 1) / (R**k * exp(-R * R / 2))


def line(name, v):
    print(f"{name:40s} {mp.nstr(v, 20)}")


import sys

rest = "--rest" in sys.argv
for p, R in ([] if rest else [(0, 0.3), (1, 1), (2, 2.5), (3, 1.7), (5, 6), (7.5, 2)]):
    line(f"J_{p}({R})", J(p, R))
for p in [] if rest else [0, 1, 2, 3.5]:
    line(f"c_{p}", c(p))
line("psi_inv(0.3)", psi_inv(mpf("0.3")))
line("phi_inv(0.7)", phi_inv(mpf("0.7")))
eta = lambda a: sqrt(2 * pi) * a * psi_inv(a) * exp(psi_inv(a) ** 2 / 2)
line("eta(0.9)", eta(mpf("0.9")))
line("eta(0.3)", eta(mpf("0.3")))

for k in [] if rest else [1, 2, 3]:
    for a in ["0.2", "0.5", "0.8"]:
        a = mpf(a)
        line(f"R_{k}({a})", R_k(k, a))
        line(f"s_{k}({a})", s_k(k, a))
        line(f"phi_{k}({a})", phi_k(k, a))
        line(f"ps_{k}({a})", 1 + a * phi_k(k, a))

# last crossing of phi_1 and phi_2, and the s_1/s_2 crossing
if not rest:
    line("alpha_1", bisect(lambda a: phi_k(1, a) - phi_k(2, a), mpf("0.97"), mpf("0.99"), 70))
line("s crossing", bisect(lambda a: s_k(1, a) - s_k(2, a), mpf("0.6"), mpf("0.8"), 70))

# F(a) for n=2, C0=1/2: int_0^a exp(int_{1/2}^t min(phi_1, phi_2)) dt
a1 = bisect(lambda a: phi_k(1, a) - phi_k(2, a), mpf("0.97"), mpf("0.99"), 70)
m = lambda s: min(phi_k(1, s), phi_k(2, s))
mp.dps = 20
inner = lambda t: quad(m, [mpf("0.5"), t]) if t <= a1 or mpf("0.5") > a1 else quad(m, [mpf("0.5"), a1, t])
line("F_2(0.3)", quad(lambda t: exp(inner(t)), [0, mpf("0.3")]))
line("F_2(0.5)", quad(lambda t: exp(inner(t)), [0, mpf("0.5")]))
mp.dps = 40

# torsion of the round k-cylinder with source 1
def torsion_radial(k, R):
    I = lambda r: quad(lambda s: s ** (k - 1) * exp(-s * s / 2), [0, r])
    return quad(lambda r: r ** (1 - k) * exp(r * r / 2) * I(r) ** 2, [0, R]) / J(k - 1, R)


mp.dps = 25
line("T(ball R=1, n=2)", torsion_radial(2, 1))
line("T(strip w=0.8)", torsion_radial(1, mpf("0.8")))
line("T(cyl k=3 R=1.5)", torsion_radial(3, mpf("1.5")))


def torsion_halfspace(a):
    s = psi_inv(a)
    return sqrt(2 * pi) / a * quad(lambda t: psi(t) ** 2 * exp(t * t / 2), [-inf, s])


line("T(H, a=0.3)", torsion_halfspace(mpf("0.3")))
line("T(H, a=0.7)", torsion_halfspace(mpf("0.7")))
mp.dps = 40

# alpha of the half-space {x <= psi^{-1}(a)} in one dimension
a = mpf("0.3")
s = psi_inv(a)
mom = lambda q: quad(lambda x: x**q * exp(-x * x / 2) / sqrt(2 * pi), [-inf, s]) / a
m2, m4 = mom(2), mom(4)
line("halfspace alpha(0.3)", (0 - 3 * m2 + m4) / (1 - m2) ** 2)
line("printed -s^3 e^{-s^2/2}", -(s**3) * exp(-s * s / 2))

# measures
phi = lambda t: erf(t / sqrt(2))
line("gamma ball(3,1.2)", quad(lambda r: r * r * exp(-r * r / 2), [0, mpf("1.2")]) / c(2))
line("gamma box(0.5,0.8,1.2)", phi(mpf("0.5")) * phi(mpf("0.8")) * phi(mpf("1.2")))
g1 = lambda x: exp(-x * x / 2) / sqrt(2 * pi)
c1, c2 = mpf("0.6"), mpf("1.4")
line("gamma ellipsoid(0.6,1.4)", quad(lambda x: g1(x) * phi(c2 * sqrt(1 - (x / c1) ** 2)), [-c1, c1]))
r = mpf("0.8")
line("gamma diamond(r=0.8)", quad(lambda x: g1(x) * phi(r - abs(x)), [-r, 0, r]))
# (box(0.5,0.8) + ball(0.7)) / 2 = box(0.25,0.4) + ball(0.35)
def section(x):
    x = abs(x)
    if x <= mpf("0.25"):
        return mpf("0.75")
    return mpf("0.4") + sqrt(mpf("0.35") ** 2 - (x - mpf("0.25")) ** 2)
line("gamma interp ball/box n=2", quad(lambda x: g1(x) * phi(section(x)), [-0.6, -0.25, 0, 0.25, 0.6]))
# E|X|^2 on ball(2,1): int r^3 e^{-r^2/2} / int r e^{-r^2/2}
line("EX2 ball(2,1)", J(3, 1) / J(1, 1))

# diamond |x|+|y| <= 1 plus a small disc: thin rounded corners
def rounded_diamond(e):
    r2 = sqrt(2)
    def top(x):
        if x <= e / r2:
            return 1 + sqrt(e * e - x * x)
        if x <= 1 + e / r2:
            return 1 + e * r2 - x
        return sqrt(max(e * e - (x - 1) ** 2, 0))
    return 2 * quad(lambda x: g1(x) * erf(top(x) / r2), [0, e / r2, 1 + e / r2, 1 + e])
for e in ["0.0035355339059327376220", "0.0070710678118654752440"]:
    line(f"gamma diamond+{e[:8]}B", rounded_diamond(mpf(e)))
