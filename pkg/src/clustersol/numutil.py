"""Small exact number-theory helpers: primality, factoring, integer polynomials."""

import functools
import math
from fractions import Fraction


def is_prime(n):
    """Deterministic Miller-Rabin, valid far beyond any input we see."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n):
    if n % 2 == 0:
        return 2
    x, c = 2, 1
    while True:
        y, d = x, 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
        x, c = c + 2, c + 1


def factorint(n):
    """Return the prime factorisation of n >= 1 as a dict {prime: exponent}."""
    fac = {}
    for q in (2, 3, 5, 7, 11, 13):
        while n % q == 0:
            fac[q] = fac.get(q, 0) + 1
            n //= q
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            fac[m] = fac.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.extend([d, m // d])
    return fac


def mult_order(a, m):
    """Multiplicative order of a modulo m (m >= 1, gcd(a, m) = 1)."""
    if m == 1:
        return 1
    if math.gcd(a, m) != 1:
        raise ValueError(f"{a} not invertible mod {m}")
    k, x = 1, a % m
    while x != 1:
        x = x * a % m
        k += 1
    return k


def vp(n, p):
    """p-adic valuation of a nonzero integer or Fraction."""
    if isinstance(n, Fraction):
        return vp(n.numerator, p) - vp(n.denominator, p)
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


# --- exact integer polynomials, little-endian coefficient lists ---

def poly_trim(f):
    while f and f[-1] == 0:
        f = f[:-1]
    return f


def poly_mul(f, g):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return poly_trim(out)


def poly_add(f, g):
    out = [0] * max(len(f), len(g))
    for i, a in enumerate(f):
        out[i] += a
    for i, b in enumerate(g):
        out[i] += b
    return poly_trim(out)


def poly_scale(f, c):
    return poly_trim([c * a for a in f])


def poly_eval(f, x):
    acc = 0
    for a in reversed(f):
        acc = acc * x + a
    return acc


def poly_deriv(f):
    return poly_trim([i * a for i, a in enumerate(f)][1:])


def poly_divexact(f, g):
    """Exact division of integer polynomials; raises if not exact."""
    f = poly_trim(list(f))
    g = poly_trim(list(g))
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    out = [0] * max(len(f) - len(g) + 1, 1)
    while len(f) >= len(g):
        q, r = divmod(f[-1], g[-1])
        if r:
            raise ValueError("inexact polynomial division")
        k = len(f) - len(g)
        out[k] = q
        for i, b in enumerate(g):
            f[k + i] -= q * b
        f = poly_trim(f[:-1])
    if f:
        raise ValueError("inexact polynomial division")
    return poly_trim(out)


def resultant(f, g):
    """Resultant of two integer polynomials via Bareiss on the Sylvester matrix."""
    f, g = poly_trim(list(f)), poly_trim(list(g))
    n, m = len(f) - 1, len(g) - 1
    if n < 0 or m < 0:
        return 0
    if n == 0:
        return f[0] ** m
    if m == 0:
        return g[0] ** n
    size = n + m
    mat = [[0] * size for _ in range(size)]
    for i in range(m):
        for j, a in enumerate(reversed(f)):
            mat[i][i + j] = a
    for i in range(n):
        for j, b in enumerate(reversed(g)):
            mat[m + i][i + j] = b
    # Bareiss fraction-free elimination
    prev = 1
    sign = 1
    for k in range(size - 1):
        if mat[k][k] == 0:
            for r in range(k + 1, size):
                if mat[r][k] != 0:
                    mat[k], mat[r] = mat[r], mat[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                mat[i][j] = (mat[i][j] * mat[k][k] - mat[i][k] * mat[k][j]) // prev
            mat[i][k] = 0
        prev = mat[k][k]
    return sign * mat[size - 1][size - 1]


@functools.cache
def _cyclotomic(n):
    f = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            f = poly_divexact(f, _cyclotomic(d))
    return tuple(f)


def cyclotomic_poly(n):
    """Integer coefficients of the n-th cyclotomic polynomial."""
    return list(_cyclotomic(n))
