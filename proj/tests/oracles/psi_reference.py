"""Reference psi_a(x) values at 50 digits, frozen into test_psi.cpp.

Run: python3 psi_reference.py
"""
import mpmath as mp

mp.mp.dps = 50


def psi(a, x, z, zp, xi):
    a, x, xi = mp.mpf(a), mp.mpf(x), mp.mpf(xi)
    g = mp.gamma(x + z + 0.5) * mp.gamma(x + zp + 0.5) * mp.rgamma(z - a + 0.5) * mp.rgamma(zp - a + 0.5)
    f = mp.hyp2f1(-z + a + 0.5, -zp + a + 0.5, x + a + 1, xi / (xi - 1)) * mp.rgamma(x + a + 1)
    return mp.re(mp.sqrt(mp.re(g)) * xi ** ((x + a) / 2) * (1 - xi) ** ((z + zp) / 2 - a) * f)


CASES = [
    ("principal", mp.mpc(1, 1), mp.mpc(1, -1), "0.3"),
    ("complementary", mp.mpf("0.4"), mp.mpf("0.7"), "0.55"),
    ("near_critical", mp.mpc("0.5", "1.5"), mp.mpc("0.5", "-1.5"), "0.85"),
]
POINTS = [("0.5", "0.5"), ("0.5", "-0.5"), ("1.5", "2.5"), ("-2.5", "3.5"), ("4.5", "0.5"), ("-0.5", "6.5")]

for name, z, zp, xi in CASES:
    for a, x in POINTS:
        print(f"{name} a={a} x={x} {mp.nstr(psi(a, x, z, zp, xi), 20)}")
