"""Exact-as-needed arithmetic in a tamely ramified extension L of Q_p.

L has unramified degree d over Q_p and ramification index e prime to p,
with uniformiser pi satisfying pi^e = p exactly.  Internally an element is

    pi^vL * (col_0 + col_1*pi + ... + col_{e-1}*pi^{e-1})

where each column col_i lives in the unramified ring W = Z_p[t]/(Ptilde),
Ptilde the monic integer lift of the residue-field modulus, and column
coordinates are stored modulo p^M.  Valuations are normalised so that
v(p) = 1 and v(pi) = 1/e.

The two tame Galois generators are realised concretely:

    tau:  fixes W pointwise and sends pi to zeta_e * pi
          (zeta_e the Teichmueller lift of omega^((q-1)/e)),
    frob: fixes pi and acts on W as the unique automorphism reducing
          to x -> x^p on the residue field.

These satisfy frob o tau = tau^p o frob exactly, and chi(tau) = zeta_e,
chi(frob) = 1 for the ramification character chi(s) = s(pi)/pi mod m.

Each element carries ``rel``, the number of trusted p-adic digits of its
unit part; additions that cancel below the trusted level raise
PrecisionExhausted rather than fabricating digits.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (DivisionByZero, InternalError, NoSquareRoot, NonOddPrime,
                     PrecisionExhausted, WildRamification, ZeroElement)
from .fq import get_field
from .numutil import is_prime

INF = math.inf


@dataclass(frozen=True)
class GaloisWord:
    """The group word tau^a o frob^b acting on the tower."""

    a: int = 0
    b: int = 0

    @property
    def is_identity(self):
        return self.a == 0 and self.b == 0


TAU = GaloisWord(1, 0)
FROB = GaloisWord(0, 1)


class Tower:
    """A tame tower over Q_p; entry point for all tame-field arithmetic."""

    def __init__(self, p, d, e, prec):
        if not is_prime(p) or p == 2:
            raise NonOddPrime(f"p = {p} must be an odd prime")
        if math.gcd(e, p) != 1:
            raise WildRamification(f"gcd(e, p) != 1 for e = {e}, p = {p}")
        if d < 1 or e < 1 or prec < 1:
            raise ValueError("d, e, prec must all be >= 1")
        self.p = p
        self.d = d
        self.e = e
        self.prec = prec                      # requested pi-adic digits
        self.M = max(-(-prec // e), 8)        # stored p-adic digits per column
        self.pM = p ** self.M
        self.fq = get_field(p, d)
        self.q = self.fq.q
        self._wred = self._w_reduction_rows()
        self._teich_cache = {}
        self._frob_pows = None                # computed lazily
        if e > 1 and (self.q - 1) % e != 0:
            raise WildRamification(
                f"residue field F_{p}^{d} lacks the {e}-th roots of unity "
                "needed for a Galois tame tower")
        self.zeta_e_res = self.fq.pow(self.fq.omega, (self.q - 1) // e) if e > 1 else self.fq.one
        self._zeta_e_pows = None

    # ------------------------------------------------------------------
    # W = Z_p[t]/(Ptilde) arithmetic on coordinate tuples mod p^M
    # ------------------------------------------------------------------

    def _w_reduction_rows(self):
        d, pM = self.d, self.pM
        if d == 1:
            return []
        low = self.fq.modulus                     # integer lift, coefficients in [0, p)
        row = tuple((-a) % pM for a in low)       # t^d
        rows = [row]
        for _ in range(d - 2):
            prev = rows[-1]
            top = prev[d - 1]
            shifted = [0] + list(prev[:-1])
            if top:
                for j in range(d):
                    shifted[j] = (shifted[j] + top * rows[0][j]) % pM
            rows.append(tuple(shifted))
        return rows

    def w_zero(self):
        return (0,) * self.d

    def w_one(self):
        return (1,) + (0,) * (self.d - 1)

    def w_from_int(self, n):
        return (n % self.pM,) + (0,) * (self.d - 1)

    def w_add(self, a, b):
        pM = self.pM
        return tuple((x + y) % pM for x, y in zip(a, b))

    def w_sub(self, a, b):
        pM = self.pM
        return tuple((x - y) % pM for x, y in zip(a, b))

    def w_scale(self, a, c):
        pM = self.pM
        return tuple(x * c % pM for x in a)

    def w_mul(self, a, b):
        d, pM = self.d, self.pM
        if d == 1:
            return (a[0] * b[0] % pM,)
        out = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        for k in range(2 * d - 2, d - 1, -1):
            c = out[k] % pM
            out[k] = 0
            if c:
                row = self._wred[k - d]   # full reduction of t^k to degree < d
                for j in range(d):
                    out[j] += c * row[j]
        return tuple(v % pM for v in out[:d])

    def w_pow(self, a, n):
        r = self.w_one()
        while n:
            if n & 1:
                r = self.w_mul(r, a)
            a = self.w_mul(a, a)
            n >>= 1
        return r

    def w_residue(self, a):
        p = self.p
        return tuple(x % p for x in a)

    def w_inv(self, a):
        res = self.w_residue(a)
        if self.fq.is_zero(res):
            raise DivisionByZero("inverse of non-unit in W")
        z = tuple(self.fq.inv(res))
        k = 1
        while k < self.M:
            z = self.w_sub(self.w_scale(z, 2), self.w_mul(a, self.w_mul(z, z)))
            k *= 2
        return z

    def w_vp(self, a):
        """min p-adic valuation of the coordinates, or None if 0 mod p^M."""
        best = None
        for x in a:
            if x:
                v = 0
                while x % self.p == 0:
                    x //= self.p
                    v += 1
                if best is None or v < best:
                    best = v
                if best == 0:
                    return 0
        return best

    def w_divp(self, a, k):
        pk = self.p ** k
        return tuple(x // pk for x in a)

    def teichmuller(self, res):
        """Teichmueller lift of a nonzero residue-field element into W."""
        if res in self._teich_cache:
            return self._teich_cache[res]
        if self.fq.is_zero(res):
            raise ZeroElement("Teichmueller lift of zero")
        q1 = self.q - 1
        invq1 = pow(q1, -1, self.pM)
        z = tuple(res)  # integer lift, correct mod p
        k = 1
        while k < self.M:
            g = self.w_sub(self.w_pow(z, q1), self.w_one())
            corr = self.w_scale(self.w_mul(z, g), invq1)
            z = self.w_sub(z, self.w_mul(corr, self.w_sub(self.w_one(), g)))
            k *= 2
        if self.w_pow(z, q1) != self.w_one():
            raise InternalError("Teichmueller lift failed to converge")
        self._teich_cache[res] = z
        return z

    def zeta(self, m):
        """Teichmueller m-th root of unity omega^((q-1)/m); requires m | q-1."""
        if (self.q - 1) % m != 0:
            raise InternalError(f"mu_{m} not contained in the residue field")
        return self.teichmuller(self.fq.pow(self.fq.omega, (self.q - 1) // m))

    def frob_t_image(self):
        """Image of the W generator t under the Frobenius lift, with powers."""
        if self._frob_pows is not None:
            return self._frob_pows
        d = self.d
        if d == 1:
            self._frob_pows = [self.w_one()]
            return self._frob_pows
        low = self.fq.modulus
        t = (0, 1) + (0,) * (d - 2)

        def ptilde(z):
            acc = self.w_from_int(low[0])
            zp = z
            for j in range(1, d):
                acc = self.w_add(acc, self.w_scale(zp, low[j]))
                zp = self.w_mul(zp, z)
            return self.w_add(acc, zp)  # + z^d

        def ptilde_deriv(z):
            acc = self.w_from_int(low[1] if d > 1 else 0)
            zp = z
            for j in range(2, d):
                acc = self.w_add(acc, self.w_scale(zp, j * low[j]))
                zp = self.w_mul(zp, z)
            return self.w_add(acc, self.w_scale(zp, d))  # + d z^{d-1}

        z = self.w_pow(t, self.p)
        k = 1
        while k < self.M:
            z = self.w_sub(z, self.w_mul(ptilde(z), self.w_inv(ptilde_deriv(z))))
            k *= 2
        if self.w_vp(ptilde(z)) is not None:
            raise InternalError("Frobenius lift failed to converge")
        pows = [self.w_one()]
        for _ in range(d - 1):
            pows.append(self.w_mul(pows[-1], z))
        self._frob_pows = pows
        return pows

    def w_frob(self, a):
        if self.d == 1:
            return a
        pows = self.frob_t_image()
        acc = self.w_zero()
        for j, c in enumerate(a):
            if c:
                acc = self.w_add(acc, self.w_scale(pows[j], c))
        return acc

    def zeta_e_pows(self):
        if self._zeta_e_pows is None:
            z = self.zeta(self.e) if self.e > 1 else self.w_one()
            pows = [self.w_one()]
            for _ in range(self.e - 1):
                pows.append(self.w_mul(pows[-1], z))
            self._zeta_e_pows = pows
        return self._zeta_e_pows

    # ------------------------------------------------------------------
    # elements
    # ------------------------------------------------------------------

    def _make(self, vL, unit, rel):
        return Elt(self, vL, unit, rel)

    def zero(self):
        return Elt(self, None, None, self.M)

    def one(self):
        return self.from_int(1)

    def from_int(self, n):
        if n % self.p == 0 and n != 0:
            v = 0
            while n % self.p == 0:
                n //= self.p
                v += 1
            return self.from_int(n).shift(self.e * v)
        if n == 0:
            return self.zero()
        unit = (self.w_from_int(n),) + (self.w_zero(),) * (self.e - 1)
        return Elt(self, 0, unit, self.M)

    def pi(self, k=1):
        """pi^k as an element."""
        return Elt(self, k, (self.w_one(),) + (self.w_zero(),) * (self.e - 1), self.M)

    def from_w(self, col, vL=0):
        vp = self.w_vp(col)
        if vp is None:
            return self.zero()
        if vp:
            col = self.w_divp(col, vp)
        unit = (col,) + (self.w_zero(),) * (self.e - 1)
        return Elt(self, vL + self.e * vp, unit, self.M - vp)

    def unit_nth_root(self, u, n):
        """Canonical n-th root in W of an integer u coprime to p.

        The root whose residue is the lexicographically least n-th root of
        u mod p in F_q, refined p-adically.
        """
        res = self.fq.canonical_nth_root(self.fq.from_int(u), n)
        if res is None:
            raise InternalError(f"{u} has no {n}-th root in the residue field")
        z = tuple(res)
        uu = self.w_from_int(u)
        k = 1
        while k < self.M:
            zn1 = self.w_pow(z, n - 1) if n > 1 else self.w_one()
            fz = self.w_sub(self.w_mul(zn1, z), uu)
            z = self.w_sub(z, self.w_mul(fz, self.w_inv(self.w_scale(zn1, n))))
            k *= 2
        if self.w_vp(self.w_sub(self.w_pow(z, n), uu)) is not None:
            raise InternalError("n-th root refinement failed to converge")
        return z

    def word_compose(self, w1, w2):
        """Composition w1 o w2 in normal form tau^a frob^b.

        Exponents are reduced modulo (2e, 2d), the quotient in which both
        the action on L and the epsilon characters factor.
        """
        mod_a, mod_b = 2 * self.e, 2 * self.d
        a = (w1.a + w2.a * pow(self.p, w1.b % mod_b, mod_a)) % mod_a
        return GaloisWord(a, (w1.b + w2.b) % mod_b)


class Elt:
    """One tower element; immutable."""

    __slots__ = ("tower", "vL", "unit", "rel")

    def __init__(self, tower, vL, unit, rel):
        self.tower = tower
        self.vL = vL          # pi-adic valuation (int), None for zero
        self.unit = unit      # tuple of e W-columns, col_0 a unit
        self.rel = rel        # trusted p-adic digits of the unit part

    # --- basics ---

    @property
    def is_zero(self):
        return self.vL is None

    def valuation(self):
        if self.is_zero:
            return INF
        return Fraction(self.vL, self.tower.e)

    def residue(self):
        if self.is_zero:
            raise ZeroElement("residue of zero")
        return self.tower.w_residue(self.unit[0])

    def shift(self, k):
        """Multiply by pi^k (exact)."""
        if self.is_zero:
            return self
        return Elt(self.tower, self.vL + k, self.unit, self.rel)

    def __repr__(self):
        if self.is_zero:
            return "Elt(0)"
        t = self.tower
        return (f"Elt(v={Fraction(self.vL, t.e)}, res={self.residue()}, "
                f"rel={self.rel})")

    # --- ring operations ---

    def _align(self, other):
        """Units of self, other at the common valuation min(vL, vL')."""
        t = self.tower
        v0 = min(self.vL, other.vL)

        def lifted(x):
            delta = x.vL - v0
            if delta == 0:
                return x.unit
            cols = [t.w_zero()] * t.e
            for i, col in enumerate(x.unit):
                k = i + delta
                cols[k % t.e] = t.w_add(cols[k % t.e], t.w_scale(col, t.p ** (k // t.e)))
            return tuple(cols)

        return v0, lifted(self), lifted(other)

    def __add__(self, other):
        t = self.tower
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        v0, u1, u2 = self._align(other)
        raw = tuple(t.w_add(a, b) for a, b in zip(u1, u2))
        abs_pi = min(self.vL + t.e * self.rel, other.vL + t.e * other.rel)
        return _normalise(t, v0, raw, abs_pi)

    def __neg__(self):
        if self.is_zero:
            return self
        t = self.tower
        return Elt(t, self.vL, tuple(t.w_scale(c, -1) for c in self.unit), self.rel)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        t = self.tower
        if self.is_zero or other.is_zero:
            return t.zero()
        e = t.e
        cols = [t.w_zero()] * (2 * e - 1)
        for i, a in enumerate(self.unit):
            for j, b in enumerate(other.unit):
                cols[i + j] = t.w_add(cols[i + j], t.w_mul(a, b))
        out = list(cols[:e])
        for k in range(e, 2 * e - 1):
            out[k - e] = t.w_add(out[k - e], t.w_scale(cols[k], t.p))
        return Elt(t, self.vL + other.vL, tuple(out), min(self.rel, other.rel))

    def inv(self):
        if self.is_zero:
            raise DivisionByZero("inverse of zero")
        t = self.tower
        res_inv = self.fq_residue_inv()
        z = Elt(t, 0, (tuple(res_inv),) + (t.w_zero(),) * (t.e - 1), self.rel)
        u = Elt(t, 0, self.unit, self.rel)
        two = t.from_int(2)
        steps = max(t.e * t.M, 2).bit_length() + 1
        for _ in range(steps):
            z = z * (two - u * z)
        return Elt(t, -self.vL, z.unit, min(self.rel, z.rel))

    def fq_residue_inv(self):
        return self.tower.fq.inv(self.residue())

    def __truediv__(self, other):
        return self * other.inv()

    def __pow__(self, n):
        t = self.tower
        if n < 0:
            return self.inv() ** (-n)
        r = t.one()
        a = self
        while n:
            if n & 1:
                r = r * a
            a = a * a
            n >>= 1
        return r

    # --- comparisons at precision ---

    def distance_vL(self, other):
        """pi-valuation of self - other, capped at the trusted precision."""
        diff = self - other
        if diff.is_zero:
            return None  # indistinguishable
        return diff.vL

    def eq_to_precision(self, other, margin=1):
        try:
            diff = self - other
        except PrecisionExhausted:
            return True
        if diff.is_zero:
            return True
        bounds = [x.vL + self.tower.e * x.rel for x in (self, other) if not x.is_zero]
        return bool(bounds) and diff.vL >= min(bounds) - margin

    # --- Galois action ---

    def tau(self):
        if self.is_zero:
            return self
        t = self.tower
        if t.e == 1:
            return self
        zp = t.zeta_e_pows()
        shift = self.vL % t.e
        cols = []
        for i, col in enumerate(self.unit):
            cols.append(t.w_mul(col, zp[(i + shift) % t.e]))
        return Elt(t, self.vL, tuple(cols), self.rel)

    def frob(self):
        if self.is_zero:
            return self
        t = self.tower
        if t.d == 1:
            return self
        return Elt(t, self.vL, tuple(t.w_frob(c) for c in self.unit), self.rel)

    def galois(self, word):
        """Apply tau^a o frob^b."""
        t = self.tower
        x = self
        for _ in range(word.b % t.d if t.d > 1 else 0):
            x = x.frob()
        for _ in range(word.a % t.e if t.e > 1 else 0):
            x = x.tau()
        return x

    # --- square roots ---

    def sqrt(self):
        if self.is_zero:
            return self
        t = self.tower
        if self.vL % 2 != 0:
            raise NoSquareRoot("odd-valuation")
        res = self.residue()
        s0 = t.fq.canonical_sqrt(res)
        if s0 is None:
            raise NoSquareRoot("non-residue")
        u = Elt(t, 0, self.unit, self.rel)
        z = Elt(t, 0, (tuple(t.fq.inv(s0)),) + (t.w_zero(),) * (t.e - 1), self.rel)
        three = t.from_int(3)
        half = pow(2, -1, t.pM)
        steps = max(t.e * t.M, 2).bit_length() + 1
        for _ in range(steps):
            w = three - u * z * z
            w = Elt(t, w.vL, tuple(t.w_scale(c, half) for c in w.unit), w.rel)
            z = z * w
        root = u * z
        return Elt(t, self.vL // 2, root.unit, min(self.rel, root.rel))

    # --- display ---

    def teichmuller_digits(self, n=None):
        """First n Teichmueller pi-digits of the unit part, as residue elements."""
        t = self.tower
        if self.is_zero:
            return []
        if n is None:
            n = min(t.e * self.rel, 3 * t.e)
        digits = []
        x = Elt(t, 0, self.unit, self.rel)
        for _ in range(n):
            if x.is_zero:
                digits.append(t.fq.zero)
                continue
            if x.vL > 0:
                digits.append(t.fq.zero)
                x = x.shift(-1)
                continue
            a = x.residue()
            digits.append(a)
            lift = Elt(t, 0, (t.teichmuller(a),) + (t.w_zero(),) * (t.e - 1), t.M)
            try:
                y = x - lift
            except PrecisionExhausted:
                break
            x = y.shift(-1) if not y.is_zero else t.zero()
        return digits


def _normalise(tower, v0, raw, abs_pi):
    """Strip leading zero pi-digits from raw columns at valuation v0."""
    t = tower
    best = None
    for i, col in enumerate(raw):
        vpcol = t.w_vp(col)
        if vpcol is not None:
            cand = i + t.e * vpcol
            if best is None or cand < best:
                best = cand
    if best is None:
        return t.zero()
    if v0 + best >= abs_pi:
        raise PrecisionExhausted(
            f"cancellation below trusted precision (pi^{v0 + best} vs O(pi^{abs_pi}))")
    # divide by pi^best
    k, r = divmod(best, t.e)
    cols = list(raw)
    if k:
        cols = [t.w_divp(c, k) for c in cols]
    for _ in range(r):
        head = cols[0]
        cols = cols[1:] + [t.w_divp(head, 1)]
    rel = (abs_pi - (v0 + best)) // t.e
    if rel < 1:
        raise PrecisionExhausted("no trusted leading digit after cancellation")
    return Elt(t, v0 + best, tuple(cols), min(rel, t.M))


# ------------------------------------------------------------------
# free-function operation wrappers
# ------------------------------------------------------------------

def tower_create(p, d, e, prec):
    """Create tower parameters; deterministic given the inputs."""
    return Tower(p, d, e, prec)


def valuation(x):
    return x.valuation()


def residue(x):
    return x.residue()


def sqrt(x):
    return x.sqrt()


def galois_apply(word, x):
    return x.galois(word)


def chi(tower, word):
    """Ramification character on the word tau^a frob^b, as a residue element."""
    if tower.e == 1:
        return tower.fq.one
    return tower.fq.pow(tower.zeta_e_res, word.a)
