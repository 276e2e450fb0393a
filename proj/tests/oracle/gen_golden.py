#!/usr/bin/env python3
"""Regenerate tests/fixtures/golden_values.txt and the eval JSON fixture.

Theta functions are summed directly at 40 digits; mpmath's jtheta is used as
an independent cross-check of every series value.
"""

import json
import pathlib
import sys

import mpmath as mp

mp.mp.dps = 40
HERE = pathlib.Path(__file__).resolve().parent
FIXTURES = HERE.parent / "fixtures"
TERMS = 64


def nome(tau):
    return mp.exp(1j * mp.pi * tau)


def theta1(z, tau):
    q = nome(tau)
    s = mp.mpc(0)
    for n in range(TERMS):
        s += (-1) ** n * q ** (n * (n + 1)) * mp.sin((2 * n + 1) * mp.pi * z)
    out = 2 * mp.exp(1j * mp.pi * tau / 4) * s
    check = mp.jtheta(1, mp.pi * z, q)
    assert abs(out - check) <= mp.mpf(10) ** -30 * max(1, abs(check)), (z, tau)
    return out


def theta3(z, tau):
    q = nome(tau)
    s = mp.mpc(1)
    for n in range(1, TERMS):
        s += 2 * q ** (n * n) * mp.cos(2 * n * mp.pi * z)
    check = mp.jtheta(3, mp.pi * z, q)
    assert abs(s - check) <= mp.mpf(10) ** -30 * max(1, abs(check)), (z, tau)
    return s


def theta1_deriv_zero(tau):
    q = nome(tau)
    s = mp.mpc(0)
    for n in range(TERMS):
        s += (-1) ** n * q ** (n * (n + 1)) * (2 * n + 1) * mp.pi
    out = 2 * mp.exp(1j * mp.pi * tau / 4) * s
    assert abs(out - mp.pi * mp.jtheta(1, 0, q, 1)) < mp.mpf(10) ** -30 * abs(out)
    return out


def theta3_deriv(z, tau):
    # term-wise derivative, independent of the half-period identity
    q = nome(tau)
    s = mp.mpc(0)
    for n in range(1, TERMS):
        s += -4 * n * mp.pi * q ** (n * n) * mp.sin(2 * n * mp.pi * z)
    return s


def half(tau):
    return (1 + tau) / 2


def theta_shifted(x, w, tau):
    return theta3(w + half(tau) - x, tau)


def sigma(u, z, tau):
    return theta1_deriv_zero(tau) * theta1(u + z, tau) / (theta1(u, tau) * theta1(z, tau))


def eps(n, d):
    return mp.exp(2j * mp.pi * d / n)


def clock_shift(n, d):
    e = eps(n, d)
    X = mp.matrix(n, n)
    Y = mp.matrix(n, n)
    for j in range(n):
        X[j, j] = e ** j
        Y[j, (j + 1) % n] = 1
    return X, Y


def mpow(M, p):
    n = M.rows
    out = mp.eye(n)
    base = M if p >= 0 else mp.inverse(M)
    for _ in range(abs(p)):
        out = out * base
    return out


def z_basis(n, d, k, l):
    X, Y = clock_shift(n, d)
    return mpow(Y, k) * mpow(X, -l)


def z_dual(n, d, k, l):
    X, Y = clock_shift(n, d)
    return mpow(X, l) * mpow(Y, -k) / n


def r_elliptic(n, d, tau, v, x1, x2):
    """Flat row-major (a,b,c,d) entries of sum_kl coeff * Zdual (x) Z."""
    x = x2 - x1
    t = {}
    for k in range(1, n + 1):
        for l in range(1, n + 1):
            c = mp.exp(2j * mp.pi * d * k * x / n) * sigma(v + mp.mpf(d) / n * (k * tau + l), x, tau)
            A = z_dual(n, d, k, l)
            B = z_basis(n, d, k, l)
            for a in range(n):
                for b in range(n):
                    for cc in range(n):
                        for dd in range(n):
                            key = (a, b, cc, dd)
                            t[key] = t.get(key, 0) + c * A[a, b] * B[cc, dd]
    return t


def delta(n, d, k, l, tau):
    return mp.mpf(d) / n * (k * tau - l)


def f_basis(n, d, tau, v, x, k, l, w):
    return mp.exp(-2j * mp.pi * d * k * w / n) * theta3(w + half(tau) + v - x - delta(n, d, k, l, tau), tau)


def res_map(n, d, tau, v, x, k, l):
    return f_basis(n, d, tau, v, x, k, l, x) / theta3_deriv(half(tau), tau) * z_basis(n, d, k, l)


def ev_map(n, d, tau, v, x, y, k, l):
    return f_basis(n, d, tau, v, x, k, l, y) / theta_shifted(x, y, tau) * z_basis(n, d, k, l)


def vec(M):
    n = M.rows
    out = mp.matrix(n * n, 1)
    for c in range(n):
        for r in range(n):
            out[r + n * c] = M[r, c]
    return out


def alpha_dense(n, d, tau, v, x, y):
    R = mp.matrix(n * n, n * n)
    E = mp.matrix(n * n, n * n)
    for k in range(1, n + 1):
        for l in range(1, n + 1):
            col = (k - 1) * n + (l - 1)
            rv = vec(res_map(n, d, tau, v, x, k, l))
            ev = vec(ev_map(n, d, tau, v, x, y, k, l))
            for i in range(n * n):
                R[i, col] = rv[i]
                E[i, col] = ev[i]
    return E * mp.inverse(R)


class Writer:
    def __init__(self):
        self.lines = ["# aybe golden values, format 1",
                      "# generated by tests/oracle/gen_golden.py (mpmath, 40 digits)",
                      "# name, inputs..., re, im"]

    def comment(self, text):
        self.lines.append("")
        self.lines.append("# " + text)

    def add(self, name, inputs, value):
        value = mp.mpc(value)
        fields = [name] + [fmt(x) for x in inputs] + [fmt(value.real), fmt(value.imag)]
        self.lines.append(", ".join(fields))

    def text(self):
        return "\n".join(self.lines) + "\n"


def fmt(x):
    if isinstance(x, int):
        return str(x)
    return repr(float(x))


def cx(z):
    z = mp.mpc(z)
    return [z.real, z.imag]


def main():
    w = Writer()
    c = mp.mpc

    w.comment("nome: tau_re, tau_im")
    for tau in [c(0, 1), c(0.5, 2), c(0.3, 0.9)]:
        w.add("nome", cx(tau), nome(tau))

    w.comment("theta1 / theta3: z_re, z_im, tau_re, tau_im")
    for z, tau in [(c(0.3), c(0, 1)), (c(0.2, 0.1), c(0.3, 0.9)), (c(0.1, 1), c(0, 1)),
                   (c(-0.45, 0.3), c(0.1, 0.6)), (c(2.7, -1.1), c(0, 0.8))]:
        w.add("theta1", cx(z) + cx(tau), theta1(z, tau))
    for z, tau in [(c(0), c(0, 1)), (c(0.2, 0.1), c(0, 0.8)), (c(1.1), c(0, 1)),
                   (c(0.35, -0.2), c(0.3, 1)), (c(-1.6, 0.9), c(0, 0.8))]:
        w.add("theta3", cx(z) + cx(tau), theta3(z, tau))

    w.comment("theta1'(0) and theta3'((1+tau)/2): tau_re, tau_im")
    for tau in [c(0, 1), c(0.3, 0.9), c(0, 2), c(0, 0.8)]:
        w.add("theta1_deriv_zero", cx(tau), theta1_deriv_zero(tau))
        w.add("theta3_deriv_half_period", cx(tau), theta3_deriv(half(tau), tau))

    w.comment("theta_shifted: x_re, x_im, w_re, w_im, tau_re, tau_im")
    for x, ww, tau in [(c(0.1), c(0.4), c(0, 0.8)), (c(-0.2, 0.1), c(0.3, 0.05), c(0.3, 1))]:
        w.add("theta_shifted", cx(x) + cx(ww) + cx(tau), theta_shifted(x, ww, tau))

    w.comment("theta1 reduction multiplier theta1(z)/theta1(z0): z_re, z_im, tau_re, tau_im")
    w.add("theta1_multiplier", [0.1, 1.0, 0.0, 1.0], theta1(c(0.1, 1), c(0, 1)) / theta1(c(0.1), c(0, 1)))
    w.add("theta3_multiplier", [1.3, -0.8, 0.0, 0.8], theta3(c(1.3, -0.8), c(0, 0.8)) / theta3(c(0.3), c(0, 0.8)))

    w.comment("kronecker sigma: u_re, u_im, z_re, z_im, tau_re, tau_im")
    for u, z, tau in [(c(0.2, 0.1), c(0.35), c(0, 1)), (c(0.2), c(0.3), c(0, 0.8)),
                      (c(0.13, 0.07), c(0.22, -0.05), c(0.3, 1)), (c(-0.4, 0.6), c(0.1, 0.2), c(0, 0.8))]:
        w.add("sigma", cx(u) + cx(z) + cx(tau), sigma(u, z, tau))

    w.comment("r_elliptic entries: n, d, tau_re, tau_im, v_re, v_im, x1_re, x1_im, x2_re, x2_im, a, b, c, d")
    eval_cases = [(2, 1, c(0, 0.8), c(0.13, 0.07), c(0.1), c(0.32)),
                  (3, 1, c(0, 1), c(0.21, -0.04), c(0.05, 0.1), c(-0.18, 0.02)),
                  (3, 2, c(0.3, 1), c(-0.11, 0.09), c(0.2), c(0.41, -0.1))]
    eval_fixture = None
    for n, d, tau, v, x1, x2 in eval_cases:
        t = r_elliptic(n, d, tau, v, x1, x2)
        for key in sorted(t):
            w.add("r_elliptic", [n, d] + cx(tau) + cx(v) + cx(x1) + cx(x2) + list(key), t[key])
        if eval_fixture is None:
            eval_fixture = {"schema": 1, "n": n,
                            "entries": [[float(mp.re(t[k])), float(mp.im(t[k]))] for k in sorted(t)]}

    w.comment("res_map of the unit element: n, d, tau_re, tau_im, v_re, v_im, x_re, x_im, k, l, row, col")
    n, d, tau, v, x = 2, 1, c(0, 1), c(0.1, 0.05), c(0.2)
    M = res_map(n, d, tau, v, x, 1, 1)
    for i in range(n):
        for j in range(n):
            w.add("res_map", [n, d] + cx(tau) + cx(v) + cx(x) + [1, 1, i, j], M[i, j])

    w.comment("ev_map of the unit element: n, d, tau, v, x, y, k, l, row, col")
    y = c(0.45)
    M = ev_map(n, d, tau, v, x, y, 1, 2)
    for i in range(n):
        for j in range(n):
            w.add("ev_map", [n, d] + cx(tau) + cx(v) + cx(x) + cx(y) + [1, 2, i, j], M[i, j])

    w.comment("alpha = ev res^-1 by dense solve: n, d, tau, v, x, y, row, col")
    for n, d, tau, v, x, y in [(2, 1, c(0, 1), c(0.1, 0.05), c(0.2), c(0.45)),
                               (3, 1, c(0, 1), c(0.17, -0.08), c(-0.1, 0.05), c(0.26, 0.1))]:
        A = alpha_dense(n, d, tau, v, x, y)
        for i in range(n * n):
            for j in range(n * n):
                w.add("alpha", [n, d] + cx(tau) + cx(v) + cx(x) + cx(y) + [i, j], A[i, j])

    (FIXTURES / "golden_values.txt").write_text(w.text())
    (FIXTURES / "eval_n2_d1.json").write_text(json.dumps(eval_fixture, indent=1) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
