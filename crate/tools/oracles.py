"""Reference values for the test suites, computed with mpmath at 30 digits.

Run: python3 tools/oracles.py
"""
from mpmath import mp, mpf, sqrt, log, quad, atan2, pi

mp.dps = 30

K0 = 4 + log(3 + 2 * sqrt(2))
LOWER = mpf(2) ** mpf(-1.5)


def slit_poincare(y):
    # C \ (-inf, 0] -> right half-plane by w = sqrt(z); density 1/Re w there
    w = mp.sqrt(mp.mpc(0, y))
    return abs(1 / (2 * w)) / w.real


def main():
    print("k0", K0)
    # beta vanishes on the positive imaginary axis of the slit plane
    bp = quad(lambda y: LOWER / (y * K0), [1, 2])
    print("slit [i,2i] lower BP length", bp)
    print("slit [i,2i] exact Poincare length", quad(slit_poincare, [1, 2]))
    print("hyperbolic escape bound s=r", LOWER * log(1 + log(2) / K0))
    z, w = mp.mpc(1, 0), mp.mpc(0, 1)
    print("punctured qh d(1,i)", sqrt(log(abs(z) / abs(w)) ** 2 + atan2((z / w).imag, (z / w).real) ** 2))
    print("pi/2", pi / 2)


if __name__ == "__main__":
    main()
