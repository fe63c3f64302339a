#!/usr/bin/env python3
"""Derive the quintic coefficients B, C, D for the two-maxima fiber example.

Profile (radial, in R^3): u(r) = c for r <= R and c*exp(-(r - R)) for r >= R,
with c = 1/sqrt(4 pi) and R = 3.075. With F(u) = B u^3 - C u^4 + D u^5 and
lambda = 3 the amplitude fiber of the action is the quintic polynomial

    I(t u) = A t^2 - (B m3) t^3 + (C m4) t^4 - (D m5) t^5,
    A = (1/2) int |grad u|^2 + lambda u^2,   mk = int u^k.

We fix D m5 = 1 and pick B m3, C m4 so that the polynomial has two interior
maxima of equal height 128 / (25 sqrt 5). Writing p(t) - m = -(t^2 - S t + P)^2 (t - c)
with p(0) = p'(0) = 0 gives c = -P / (2S), m = P^3 / (2S) and
A = P (3 S^2 - 2 P) / (2 S); P is found by bracketing, the rest follows.

The printed moment identities B m3 = 2(4 + sqrt 5), C m4 = 5 + sqrt 5 and
A = 4 (1 + sqrt 5) do not yield two maxima (the cubic p'(t)/t has a single real
root), so this script reports their residuals and uses the construction above.
Run it to regenerate the constants in include/pohozaev/nonlinearity.hpp.
"""

import math

from scipy.optimize import brentq

LAMBDA = 3.0
R = 3.075
TARGET = 128.0 / (25.0 * math.sqrt(5.0))


def tail_moment(k: float) -> float:
    """int_0^inf exp(-k s) (R + s)^2 ds."""
    return R * R / k + 2.0 * R / k**2 + 2.0 / k**3


def moment(k: int) -> float:
    """int_{R^3} u^k dx for the plateau profile."""
    c = 1.0 / math.sqrt(4.0 * math.pi)
    return 4.0 * math.pi * c**k * (R**3 / 3.0 + tail_moment(float(k)))


def quadratic_coefficient() -> float:
    # 4 pi c^2 = 1, so the Jacobian and amplitude cancel for quadratic terms.
    grad = tail_moment(2.0)
    mass = R**3 / 3.0 + tail_moment(2.0)
    return 0.5 * (grad + LAMBDA * mass)


def main() -> None:
    A = quadratic_coefficient()
    m3, m4, m5 = moment(3), moment(4), moment(5)

    def residual(P: float) -> float:
        S = P**3 / (2.0 * TARGET)
        return P * (3.0 * S * S - 2.0 * P) / (2.0 * S) - A

    # smallest P > 0 whose roots t1, t2 are real (S^2 >= 4P)
    grid = [0.05 + 0.01 * i for i in range(2000)]
    P = None
    for lo, hi in zip(grid, grid[1:]):
        if residual(lo) * residual(hi) < 0.0:
            cand = brentq(residual, lo, hi, xtol=1e-15)
            S = cand**3 / (2.0 * TARGET)
            if S * S >= 4.0 * cand:
                P = cand
                break
    if P is None:
        raise SystemExit("no real two-maxima calibration found")

    S = P**3 / (2.0 * TARGET)
    c = -P / (2.0 * S)
    Bm3 = S * S + P
    Cm4 = 2.0 * S + c
    Dm5 = 1.0
    B, C, D = Bm3 / m3, Cm4 / m4, Dm5 / m5
    t1 = 0.5 * (S - math.sqrt(S * S - 4.0 * P))
    t2 = 0.5 * (S + math.sqrt(S * S - 4.0 * P))

    def poly(t: float) -> float:
        return A * t * t - Bm3 * t**3 + Cm4 * t**4 - Dm5 * t**5

    s5 = math.sqrt(5.0)
    print(f"R                     = {R}")
    print(f"lambda                = {LAMBDA}")
    print(f"A (1/2 int |u'|^2 + lambda u^2) = {A:.15g}")
    print(f"A - 4(1+sqrt5)        = {A - 4.0 * (1.0 + s5):.6g}   (printed identity residual)")
    print(f"1/2 ||u||_H1^2 - 4(1+sqrt5) = {0.5 * (2.0 * tail_moment(2.0) + R**3 / 3.0) - 4.0 * (1.0 + s5):.6g}")
    print(f"m3, m4, m5            = {m3:.15g}, {m4:.15g}, {m5:.15g}")
    print(f"B m3 = {Bm3:.15g}  (printed 2(4+sqrt5) = {2 * (4 + s5):.15g})")
    print(f"C m4 = {Cm4:.15g}  (printed 5+sqrt5 = {5 + s5:.15g})")
    print(f"D m5 = {Dm5:.15g}")
    print(f"kB = {B!r}")
    print(f"kC = {C!r}")
    print(f"kD = {D!r}")
    print(f"maxima at t = {t1:.12g}, {t2:.12g}; values {poly(t1):.12g}, {poly(t2):.12g}; target {TARGET:.12g}")
    print(f"C^2 - 3 B D = {C * C - 3.0 * B * D:.6g}  (negative => (1/2) f u - F > 0 for u > 0)")


if __name__ == "__main__":
    main()
