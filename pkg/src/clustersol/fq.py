"""Arithmetic in the residue field F_q, q = p^d, for odd p.

Elements are coefficient tuples (c_0, ..., c_{d-1}) with 0 <= c_i < p,
representing c_0 + c_1*t + ... modulo a fixed monic degree-d modulus.
The modulus is the lexicographically least primitive polynomial over F_p
(coefficient tuples (a_0, ..., a_{d-1}) of t^d + a_{d-1} t^{d-1} + ... + a_0
compared left to right), so t generates the multiplicative group and the
construction is reproducible across runs and machines.
"""

import functools
import math

from .errors import NonOddPrime
from .numutil import factorint, is_prime


def _mulmod(f, g, low, p):
    """Multiply polynomials f, g over F_p modulo t^d + low(t), d = len(low)."""
    d = len(low)
    out = [0] * (2 * d - 1)
    for i, x in enumerate(f):
        if x:
            for j, y in enumerate(g):
                out[i + j] += x * y
    for k in range(2 * d - 2, d - 1, -1):
        c = out[k] % p
        out[k] = 0
        if c:
            for j in range(d):
                out[k - d + j] -= c * low[j]
    return tuple(v % p for v in out[:d])


def _powmod(f, e, low, p):
    d = len(low)
    r = (1,) + (0,) * (d - 1)
    f = tuple(f)
    while e:
        if e & 1:
            r = _mulmod(r, f, low, p)
        f = _mulmod(f, f, low, p)
        e >>= 1
    return r


def _poly_gcd_deg(f, g, p):
    """Degree of gcd over F_p; f, g low-endian coefficient lists."""
    f = [c % p for c in f]
    g = [c % p for c in g]

    def trim(h):
        while h and h[-1] == 0:
            h.pop()
        return h

    f, g = trim(f), trim(g)
    while g:
        inv = pow(g[-1], -1, p)
        while len(f) >= len(g):
            c = f[-1] * inv % p
            k = len(f) - len(g)
            for i, b in enumerate(g):
                f[k + i] = (f[k + i] - c * b) % p
            f = trim(f)
            if not f:
                break
        f, g = g, f
    return len(f) - 1 if f else -1


def _is_irreducible(low, p):
    """Irreducibility of P = t^d + low(t) over F_p by distinct-degree sieve.

    P (squarefree or not) is irreducible iff it has no irreducible factor
    of degree <= d/2, i.e. gcd(t^(p^k) - t, P) = 1 for k = 1..d//2; the
    incremental Frobenius walk exits at the first nontrivial gcd.
    """
    d = len(low)
    if d == 1:
        return True
    # cheap pre-filter: no roots in F_p (rules out linear factors)
    for x in range(p):
        acc = 1
        for c in reversed(low):
            acc = (acc * x + c) % p
        if acc == 0:
            return False
    t = (0, 1) + (0,) * (d - 2)
    full = list(low) + [1]
    h = t
    for _ in range(d // 2):
        h = _powmod(h, p, low, p)
        diff = [(h[i] - t[i]) % p for i in range(d)]
        if _poly_gcd_deg(diff, full, p) != 0:
            return False
    return True


class FqField:
    """The field F_{p^d} with its fixed multiplicative generator omega."""

    def __init__(self, p, d):
        if p == 2 or not is_prime(p):
            raise NonOddPrime(f"p = {p} must be an odd prime")
        if d < 1:
            raise ValueError("d must be >= 1")
        self.p = p
        self.d = d
        self.q = p ** d
        self.q1_factors = factorint(self.q - 1)
        self.modulus = self._find_modulus()
        self.zero = (0,) * d
        self.one = self.from_int(1)
        if d == 1:
            self.omega = self.from_int(-self.modulus[0])
        else:
            self.omega = tuple(1 if i == 1 else 0 for i in range(d))

    def _find_modulus(self):
        """Lexicographically least primitive monic polynomial.

        Coefficient tuples (a_0, ..., a_{d-1}) are scanned left to right,
        a_0 most significant.  Whole a_0 blocks are skipped when
        (-1)^d a_0, the norm of the generator-to-be, is not a primitive
        root mod p; primitivity is impossible there and the blocks
        dominate the search space.
        """
        p, d = self.p, self.d
        one = (1,) + (0,) * (d - 1)
        p1_factors = factorint(p - 1) if p > 2 else {}

        def primitive_root_mod_p(x):
            x %= p
            if x == 0:
                return False
            return all(pow(x, (p - 1) // ell, p) != 1 for ell in p1_factors)

        for a0 in range(p):
            norm = (a0 if d % 2 == 0 else -a0) % p
            if not primitive_root_mod_p(norm):
                continue
            if d == 1:
                return (a0,)
            gen = (0, 1) + (0,) * (d - 2)
            for idx in range(p ** (d - 1)):
                digits = []
                v = idx
                for _ in range(d - 1):
                    digits.append(v % p)
                    v //= p
                low = (a0,) + tuple(reversed(digits))
                if not _is_irreducible(low, p):
                    continue
                if all(_powmod(gen, (self.q - 1) // ell, low, p) != one
                       for ell in self.q1_factors):
                    return low
        raise RuntimeError("no primitive polynomial found")  # unreachable

    # --- element arithmetic ---

    def from_int(self, n):
        return ((n % self.p),) + (0,) * (self.d - 1)

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def mul(self, a, b):
        if self.d == 1:
            return (a[0] * b[0] % self.p,)
        return _mulmod(a, b, self.modulus, self.p)

    def pow(self, a, e):
        if e < 0:
            a = self.inv(a)
            e = -e
        r = self.one
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def inv(self, a):
        if a == self.zero:
            raise ZeroDivisionError("inverse of zero in F_q")
        return self.pow(a, self.q - 2)

    def is_zero(self, a):
        return a == self.zero

    # --- roots ---

    def is_square(self, a):
        if a == self.zero:
            return True
        return self.pow(a, (self.q - 1) // 2) == self.one

    def _prime_root(self, a, ell):
        """One solution of x^ell = a (ell prime), or None."""
        q1 = self.q - 1
        if q1 % ell != 0:
            return self.pow(a, pow(ell, -1, q1))
        if self.pow(a, q1 // ell) != self.one:
            return None
        t, m = 0, q1
        while m % ell == 0:
            m //= ell
            t += 1
        g = self.pow(self.omega, m)          # generates the ell-Sylow subgroup
        v = self.pow(a, m)
        z = self.pow(g, ell ** (t - 1))      # has order ell
        table = {}
        w = self.one
        for i in range(ell):
            table[w] = i
            w = self.mul(w, z)
        k = 0
        for i in range(t):                   # discrete log of v base g, digit by digit
            c = self.pow(self.mul(v, self.pow(g, -k)), ell ** (t - 1 - i))
            k += table[c] * ell ** i
        if k % ell != 0:
            return None
        y = self.pow(g, k // ell)
        alpha = pow(ell, -1, m) if m > 1 else 0
        beta = (1 - alpha * ell) // m
        return self.mul(self.pow(a, alpha), self.pow(y, beta))

    def nth_roots(self, a, n):
        """All solutions of x^n = a in F_q, sorted lexicographically."""
        if a == self.zero:
            return [self.zero]
        r = a
        for ell, mult in sorted(factorint(n).items()):
            for _ in range(mult):
                r = self._prime_root(r, ell)
                if r is None:
                    return []
        g = math.gcd(n, self.q - 1)
        zeta = self.pow(self.omega, (self.q - 1) // g)
        roots = set()
        w = self.one
        for _ in range(g):
            roots.add(self.mul(r, w))
            w = self.mul(w, zeta)
        return sorted(roots)

    def canonical_sqrt(self, a):
        """The lexicographically least square root, or None."""
        roots = self.nth_roots(a, 2)
        return roots[0] if roots else None

    def canonical_nth_root(self, a, n):
        roots = self.nth_roots(a, n)
        return roots[0] if roots else None


@functools.cache
def get_field(p, d):
    return FqField(p, d)
