"""Independent oracle for the Jack polynomial values frozen in test_jack.

The library expands Jack polynomials with an eigenoperator recurrence and
normalizes through arm/leg hook products.  This oracle shares none of that
machinery: it works with explicit symmetric polynomials in n = k variables
over exact rationals,

  * expands power sums p_mu and monomials m_lambda as exponent -> Fraction
    dicts and inverts the transition matrix between them,
  * builds the Gram matrix of the monomial basis under the deformed pairing
    <p_mu, p_nu> = delta_{mu nu} z_mu alpha^{length(mu)},
  * Gram-Schmidt orthogonalizes down reverse-lexicographic order (a linear
    extension of dominance), which pins down the monic P family,
  * fixes the C normalization by solving
    sum_lambda c_lambda P_lambda = (x_1 + ... + x_n)^k.

Run as a script to print the frozen table pasted into test_jack.py.
Evaluation points are dyadic so both sides are exact in binary.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction


def partitions(k):
    """All partitions of k, reverse-lexicographic, as tuples."""
    if k == 0:
        return [()]
    out = []
    stack = [((), k, k)]
    while stack:
        prefix, rem, cap = stack.pop()
        if rem == 0:
            out.append(prefix)
            continue
        for first in range(1, min(rem, cap) + 1):
            stack.append((prefix + (first,), rem - first, first))
    return sorted(out, reverse=True)


def poly_mul(f, g):
    out = {}
    for ea, ca in f.items():
        for eb, cb in g.items():
            key = tuple(x + y for x, y in zip(ea, eb))
            out[key] = out.get(key, Fraction(0)) + ca * cb
    return {k: v for k, v in out.items() if v}


def m_poly(lam, n):
    padded = tuple(lam) + (0,) * (n - len(lam))
    return {perm: Fraction(1) for perm in set(itertools.permutations(padded))}


def p_poly(mu, n):
    acc = {(0,) * n: Fraction(1)}
    for r in mu:
        pr = {}
        for i in range(n):
            e = [0] * n
            e[i] = r
            pr[tuple(e)] = Fraction(1)
        acc = poly_mul(acc, pr)
    return acc


def m_coefficient(poly, lam, n):
    return poly.get(tuple(lam) + (0,) * (n - len(lam)), Fraction(0))


def z_factor(mu):
    z = Fraction(1)
    for r, grp in itertools.groupby(mu):
        a = len(list(grp))
        z *= Fraction(r) ** a * math.factorial(a)
    return z


def invert(matrix):
    n = len(matrix)
    aug = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv_p = Fraction(1) / aug[col][col]
        aug[col] = [v * inv_p for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def jack_C_rows(k, alpha):
    """C-normalized Jack coefficient rows in the monomial basis.

    Returns (parts, rows) where rows[i][j] is the coefficient of
    m_{parts[j]} in C_{parts[i]}, all exact Fractions.
    """
    alpha = Fraction(alpha)
    parts = partitions(k)
    n = k
    big = len(parts)
    R = [
        [m_coefficient(p_poly(parts[i], n), parts[j], n) for j in range(big)]
        for i in range(big)
    ]
    M = invert(R)
    weight = [z_factor(p) * alpha ** len(p) for p in parts]
    G = [
        [sum(M[i][t] * M[j][t] * weight[t] for t in range(big)) for j in range(big)]
        for i in range(big)
    ]

    def inner(u, v):
        return sum(
            u[a] * G[a][b] * v[b] for a in range(big) for b in range(big) if u[a] and v[b]
        )

    p_rows = [None] * big
    done = []
    for i in reversed(range(big)):
        vec = [Fraction(0)] * big
        vec[i] = Fraction(1)
        for j in done:
            w = p_rows[j]
            coef = inner(vec, w) / inner(w, w)
            if coef:
                vec = [a - coef * b for a, b in zip(vec, w)]
        p_rows[i] = vec
        done.append(i)

    power = p_poly((1,) * k, n)
    b = [m_coefficient(power, lam, n) for lam in parts]
    c = [Fraction(0)] * big
    for j in range(big):
        c[j] = b[j] - sum(c[i] * p_rows[i][j] for i in range(j))
    return parts, [[c[i] * v for v in p_rows[i]] for i in range(big)]


def m_value(lam, point):
    nv = len(point)
    if len(lam) > nv:
        return Fraction(0)
    padded = tuple(lam) + (0,) * (nv - len(lam))
    total = Fraction(0)
    for perm in set(itertools.permutations(padded)):
        term = Fraction(1)
        for x, e in zip(point, perm):
            term *= Fraction(x) ** e
        total += term
    return total


def jack_C_value(lam, alpha, point):
    parts, rows = jack_C_rows(sum(lam), alpha)
    i = parts.index(tuple(lam))
    return sum(c * m_value(mu, point) for mu, c in zip(parts, rows[i]) if c)


def _selfcheck():
    # weight-2 closed forms: C_2 = m_2 + 2/(1+a) m_11, C_11 = 2a/(1+a) m_11
    for alpha in (Fraction(1, 2), Fraction(1), Fraction(2)):
        parts, rows = jack_C_rows(2, alpha)
        assert parts == [(2,), (1, 1)]
        assert rows[0] == [Fraction(1), Fraction(2) / (1 + alpha)]
        assert rows[1] == [Fraction(0), 2 * alpha / (1 + alpha)]
    # alpha = 1 must be proportional to Schur: s_21 = m_21 + 2 m_111
    parts, rows = jack_C_rows(3, Fraction(1))
    i = parts.index((2, 1))
    j21, j111 = rows[i][parts.index((2, 1))], rows[i][parts.index((1, 1, 1))]
    assert j111 / j21 == 2
    # layer normalization: sum of every row equals the (tr)^k expansion
    power = p_poly((1,) * 4, 4)
    col = [m_coefficient(power, lam, 4) for lam in partitions(4)]
    parts, rows = jack_C_rows(4, Fraction(1, 2))
    summed = [sum(rows[i][j] for i in range(len(parts))) for j in range(len(parts))]
    assert summed == col


if __name__ == "__main__":
    _selfcheck()
    point = (Fraction(1), Fraction(1, 2), Fraction(1, 4), Fraction(1, 8))
    print("# frozen Jack C values at x = (1, 1/2, 1/4, 1/8)")
    print("FROZEN_C = {")
    for alpha in (Fraction(1, 2), Fraction(1), Fraction(2)):
        print(f"    {float(alpha)}: {{")
        for k in range(1, 7):
            for lam in partitions(k):
                if len(lam) > 4:
                    continue
                val = jack_C_value(lam, alpha, point)
                print(f"        {lam!r}: {float(val)!r},")
        print("    },")
    print("}")
