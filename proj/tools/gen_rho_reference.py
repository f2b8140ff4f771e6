#!/usr/bin/env python3
"""Generate high-precision reference values for the delay-equation tests.

Forward continuation of v f'(v) = -f(v-1) in double precision loses one
factor of f(m)/f(m+1) of relative accuracy per unit piece, so a plain C++
oracle degrades past v ~ 8.  This script runs the same piecewise Taylor
continuation at 60 decimal digits, where the ~28 digits lost by v = 20
still leave 30+ correct, and prints frozen constants to paste into
tests/test_special_functions.cpp.

Usage: python3 tools/gen_rho_reference.py
"""

from mpmath import mp, mpf, log, mpmathify

mp.dps = 60
DEG = 160
PIECES = 20

# c[m][k]: Taylor coefficients of the piece on [m, m+1] about m + 1/2
c = [[mpf(0)] * DEG for _ in range(PIECES + 1)]
c[1][0] = 1 - log(mpf(3) / 2)
for k in range(1, DEG):
    c[1][k] = mpf((-1) ** k) / (k * (mpf(3) / 2) ** k)

for m in range(2, PIECES + 1):
    p, q = c[m - 1], c[m]
    a = mpf(2 * m + 1) / 2
    for k in range(DEG - 1):
        q[k + 1] = -(p[k] + k * q[k]) / (a * (k + 1))
    prev = mpf(0)
    part = mpf(0)
    for k in range(DEG - 1, 0, -1):
        prev = prev / 2 + p[k]
        part = part / -2 + q[k]
    prev = prev / 2 + p[0]
    part = part / -2
    q[0] = prev - part


def rho(v):
    v = mpmathify(v)
    if v <= 1:
        return mpf(1)
    m = min(int(mp.floor(v)), PIECES)
    t = v - (mpf(2 * m + 1) / 2)
    acc = mpf(0)
    for k in range(DEG - 1, -1, -1):
        acc = acc * t + c[m][k]
    return acc


def integral(b):
    """integral of rho over [0, b]"""
    b = mpmathify(b)
    if b <= 1:
        return b
    m = min(int(mp.floor(b)), PIECES)
    acc = mpf(1)
    for j in range(1, m):
        for k in range(0, DEG, 2):
            acc += 2 * c[j][k] * mpf(2) ** -(k + 1) / (k + 1)
    t = b - (mpf(2 * m + 1) / 2)
    for k in range(DEG):
        acc += c[m][k] * (t ** (k + 1) - (mpf(-1) ** (k + 1)) * mpf(2) ** -(k + 1)) / (k + 1)
    return acc


def emit(name, pairs):
    print(f"// {name}")
    for v, val in pairs:
        print(f"    {{{v!r}, {mp.nstr(val, 22)}}},")


if __name__ == "__main__":
    value_points = [
        "2.0", "3.0", "4.0", "5.0", "8.5", "10.0", "10.25", "12.5", "14.75",
        "16.5", "18.25", "20.0", "1.1", "2.3", "2.718281828", "3.9999",
        "4.0001", "7.77", "6.77", "11.123", "12.123", "14.5", "15.5", "19.25",
        "2.9999", "3.0001",
    ]
    integral_points = ["1.0", "2.0", "3.7", "6.25", "11.5", "20.0"]
    print("// generated by tools/gen_rho_reference.py (mpmath, 60 digits)")
    emit("rho values", [(p, rho(mpf(p))) for p in value_points])
    emit("integrals over [0, b]", [(p, integral(mpf(p))) for p in integral_points])
