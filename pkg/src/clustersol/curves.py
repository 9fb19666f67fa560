"""Curve descriptions: parsing, exact expansion, and root embedding.

The accepted inputs are products of shifted binomials

    y^2 = c * prod_i ((x - c_i)^{n_i} - u_i * p^{m_i})  *  prod_j (x - c_j)

with integer-or-cyclotomic centers, n_i and the conductors prime to p,
and u_i a nonzero integer prime to p.  This family admits exact root
extraction in a tame tower; anything else is rejected as unsupported.
"""

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import (AmbiguousMatch, DegreeTooSmall, InternalError,
                     NonRationalCoefficient, NotGaloisClosed, ParseError,
                     RootCollision, UnsupportedFactor, WildInput)
from .numutil import cyclotomic_poly, is_prime, mult_order
from .tame import Tower


# ------------------------------------------------------------------
# exact cyclotomic integers Z[zeta_N]
# ------------------------------------------------------------------

class Cyclo:
    """An element of Z[zeta_N], reduced modulo the N-th cyclotomic polynomial."""

    __slots__ = ("N", "coeffs")

    def __init__(self, N, coeffs):
        self.N = N
        phi = len(cyclotomic_poly(N)) - 1
        c = list(coeffs)
        if len(c) > phi:
            c = _poly_rem(c, cyclotomic_poly(N))
        c += [0] * (phi - len(c))
        self.coeffs = tuple(c[:phi])

    @classmethod
    def integer(cls, n, N=1):
        return cls(N, [n])

    @classmethod
    def zeta_power(cls, N, k):
        k %= N
        coeffs = [0] * (k + 1)
        coeffs[k] = 1
        return cls(N, coeffs)

    def promote(self, M):
        """Re-express in Z[zeta_M]; requires N | M."""
        if self.N == M:
            return self
        step = M // self.N
        out = [0] * M
        for j, c in enumerate(self.coeffs):
            out[(j * step) % M] += c
        return Cyclo(M, out)

    def __add__(self, other):
        assert self.N == other.N
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        for i, c in enumerate(other.coeffs):
            a[i] += c
        return Cyclo(self.N, a)

    def __neg__(self):
        return Cyclo(self.N, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        assert self.N == other.N
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Cyclo(self.N, out)

    def conj_power(self, k):
        """Apply zeta_N -> zeta_N^k."""
        out = [0] * self.N
        for j, c in enumerate(self.coeffs):
            out[(j * k) % self.N] += c
        return Cyclo(self.N, out)

    @property
    def is_rational(self):
        return all(c == 0 for c in self.coeffs[1:])

    def to_int(self):
        if not self.is_rational:
            raise NonRationalCoefficient(f"{self} is not rational")
        return self.coeffs[0]

    def __eq__(self, other):
        return isinstance(other, Cyclo) and self.N == other.N and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.N, self.coeffs))

    def __repr__(self):
        if self.is_rational:
            return str(self.coeffs[0])
        parts = []
        for j, c in enumerate(self.coeffs):
            if c:
                parts.append(f"{c}*zeta({self.N})^{j}" if j else str(c))
        return " + ".join(parts) or "0"


def _poly_rem(f, g):
    f = list(f)
    while len(f) >= len(g) and any(f):
        while f and f[-1] == 0:
            f.pop()
        if len(f) < len(g):
            break
        c = f[-1]
        k = len(f) - len(g)
        for i, b in enumerate(g):
            f[k + i] -= c * b
        f.pop()
    return f


# ------------------------------------------------------------------
# curve expressions
# ------------------------------------------------------------------

@dataclass(frozen=True)
class Linear:
    center: Cyclo

    @property
    def degree(self):
        return 1


@dataclass(frozen=True)
class Binomial:
    center: Cyclo
    n: int
    rhs_unit: int
    rhs_pow: int

    @property
    def degree(self):
        return self.n


@dataclass
class CurveExpr:
    p: int
    c_unit: int            # sign * unit integer, coprime to p
    c_pow: int             # power of p in the leading coefficient
    factors: list
    text: str = ""

    @property
    def degree(self):
        return sum(f.degree for f in self.factors)

    @property
    def genus(self):
        return -(-self.degree // 2) - 1

    @property
    def conductor(self):
        N = 1
        for f in self.factors:
            N = math.lcm(N, f.center.N)
        return N

    def c_f(self):
        return self.c_unit * self.p ** self.c_pow


# ------------------------------------------------------------------
# tokenizer / parser
# ------------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(\d+|[A-Za-z]+|\*\*|[()^*+\-])")


def _tokenize(text):
    pos, toks = 0, []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character at {text[pos:pos + 10]!r}")
        tok = m.group(1)
        toks.append("^" if tok == "**" else tok)
        pos = m.end()
    toks.append("$")
    return toks


class _Parser:
    def __init__(self, text, p):
        self.toks = _tokenize(text)
        self.i = 0
        self.p = p

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, tok):
        if self.peek() != tok:
            raise ParseError(f"expected {tok!r}, found {self.peek()!r}")
        return self.next()

    def parse_int(self):
        sign = 1
        while self.peek() in "+-":
            if self.next() == "-":
                sign = -sign
        t = self.next()
        if not t.isdigit():
            raise ParseError(f"expected integer, found {t!r}")
        return sign * int(t)

    # curve := term { '*' term }
    def parse_curve(self):
        c_unit, c_pow = 1, 0
        factors = []
        first = True
        while True:
            sign = 1
            while self.peek() in "+-":
                if self.next() == "-":
                    sign = -sign
                if not first:
                    raise ParseError("unexpected sign between factors")
            c_unit *= sign
            t = self.peek()
            if t == "(":
                factors.append(self.parse_factor())
            elif t == "p":
                self.next()
                k = 1
                if self.peek() == "^":
                    self.next()
                    k = self.parse_int()
                if k < 0:
                    raise ParseError("negative power of p in leading coefficient")
                c_pow += k
            elif t.isdigit():
                c_unit *= int(self.next())
            else:
                raise ParseError(f"unexpected token {t!r}")
            first = False
            if self.peek() == "*":
                self.next()
                continue
            break
        self.expect("$")
        return c_unit, c_pow, factors

    # factor := '(' poly ')'
    def parse_factor(self):
        self.expect("(")
        fac = self.parse_poly()
        self.expect(")")
        return fac

    # poly := 'x' ['^' n] [rhs] | '(' linear ')' '^' n rhs | linear
    def parse_poly(self):
        if self.peek() == "(":
            self.next()
            center = self.parse_linear_center()
            self.expect(")")
            self.expect("^")
            n = self.parse_int()
            unit, m = self.parse_rhs()
            return Binomial(center, n, unit, m)
        center = None
        n = 1
        if self.peek() != "x":
            raise UnsupportedFactor(
                f"factor must start with 'x' or '(x ...)', found {self.peek()!r}")
        self.next()
        if self.peek() == "^":
            self.next()
            n = self.parse_int()
            unit, m = self.parse_rhs()
            return Binomial(Cyclo.integer(0), n, unit, m)
        if self.peek() in "+-":
            center = self.parse_center_tail()
        else:
            center = Cyclo.integer(0)
        if self.peek() == ")":
            return Linear(center)
        raise UnsupportedFactor("parenthesised polynomial does not match "
                                "(x - c)^n - u*p^m or a linear x - c")

    # after '(' ... : 'x' [('+'|'-') centersum]
    def parse_linear_center(self):
        if self.peek() != "x":
            raise UnsupportedFactor("expected 'x' at start of linear part")
        self.next()
        if self.peek() in "+-":
            return self.parse_center_tail()
        return Cyclo.integer(0)

    def parse_center_tail(self):
        # consumes ('+'|'-') centersum; returns the CENTER c of (x - c)
        terms = []
        while self.peek() in "+-":
            sign = -1 if self.next() == "+" else 1   # x + a means center -a
            if self.peek() == "(":
                self.next()
                inner = self.parse_center_group()
                self.expect(")")
                terms.extend((sign * s, z) for s, z in inner)
            else:
                s, z = self.parse_center_atom()
                terms.append((sign * s, z))
        return _combine_center(terms)

    def parse_center_group(self):
        # centersum with leading optional sign, inside parentheses
        terms = []
        sign = 1
        if self.peek() in "+-":
            sign = -1 if self.next() == "-" else 1
        s, z = self.parse_center_atom()
        terms.append((sign * s, z))
        while self.peek() in "+-":
            sign = -1 if self.next() == "-" else 1
            s, z = self.parse_center_atom()
            terms.append((sign * s, z))
        return terms

    def parse_center_atom(self):
        # INT ['*' zeta-term] | zeta-term ['*' INT]
        if self.peek().isdigit():
            val = int(self.next())
            if self.peek() == "*" and self.toks[self.i + 1] == "zeta":
                self.next()
                z = self.parse_zeta()
                return val, z
            return val, None
        if self.peek() == "zeta":
            z = self.parse_zeta()
            if self.peek() == "*" and self.toks[self.i + 1].isdigit():
                self.next()
                return int(self.next()), z
            return 1, z
        raise UnsupportedFactor(f"bad center term near {self.peek()!r}")

    def parse_zeta(self):
        self.expect("zeta")
        self.expect("(")
        N = self.parse_int()
        self.expect(")")
        k = 1
        if self.peek() == "^":
            self.next()
            k = self.parse_int()
        if N < 1:
            raise ParseError("zeta conductor must be >= 1")
        return (N, k)

    def parse_rhs(self):
        # ('+'|'-') [INT '*'] 'p' ['^' INT]   representing  - u * p^m
        if self.peek() not in "+-":
            raise UnsupportedFactor("power factor must end with +/- unit*p^m")
        sign = 1 if self.next() == "-" else -1
        unit = 1
        if self.peek().isdigit():
            unit = int(self.next())
            if self.peek() != "*":
                raise UnsupportedFactor(
                    "right-hand side must be unit*p^m with m >= 1")
            self.next()
        if self.peek() != "p":
            raise UnsupportedFactor("right-hand side must be a multiple of a power of p")
        self.next()
        m = 1
        if self.peek() == "^":
            self.next()
            m = self.parse_int()
        if m < 1:
            raise UnsupportedFactor("p must appear with exponent >= 1 on the right-hand side")
        return sign * unit, m


def _combine_center(terms):
    """Combine (coeff, zeta-or-None) terms into one Cyclo over the lcm conductor."""
    N = 1
    for _, z in terms:
        if z is not None:
            N = math.lcm(N, z[0])
    acc = Cyclo.integer(0, N)
    for coeff, z in terms:
        if z is None:
            acc = acc + Cyclo.integer(coeff, N)
        else:
            zn, k = z
            acc = acc + Cyclo.integer(coeff, N) * Cyclo.zeta_power(N, k * (N // zn))
    return acc


def parse_expr(text, p):
    """Parse one curve expression for the prime p."""
    if not is_prime(p) or p == 2:
        raise ParseError(f"p = {p} must be an odd prime")
    c_unit, c_pow, factors = _Parser(text, p).parse_curve()
    if c_unit == 0:
        raise ParseError("zero leading coefficient")
    # absorb p-divisibility of the unit part
    while c_unit % p == 0:
        c_unit //= p
        c_pow += 1
    # promote all centers to the common conductor
    N = 1
    for f in factors:
        N = math.lcm(N, f.center.N)
    promoted = []
    for f in factors:
        c = f.center.promote(N)
        if isinstance(f, Linear):
            promoted.append(Linear(c))
        else:
            if f.n < 1:
                raise UnsupportedFactor("exponent must be >= 1")
            if f.rhs_unit % p == 0:
                raise UnsupportedFactor("rhs unit must be coprime to p")
            promoted.append(Binomial(c, f.n, f.rhs_unit, f.rhs_pow))
    expr = CurveExpr(p, c_unit, c_pow, promoted, text=text.strip())
    if expr.degree < 5:
        raise DegreeTooSmall(f"deg f = {expr.degree} < 5")
    return expr


# ------------------------------------------------------------------
# Galois closure and tower requirements
# ------------------------------------------------------------------

def _factor_key(f):
    if isinstance(f, Linear):
        return ("lin", f.center.coeffs)
    return ("bin", f.center.coeffs, f.n, f.rhs_unit, f.rhs_pow)


def galois_closure_check(expr):
    """Check the factor multiset is stable under zeta_N -> zeta_N^p."""
    bag = {}
    for f in expr.factors:
        bag[_factor_key(f)] = bag.get(_factor_key(f), 0) + 1
    for f in expr.factors:
        c = f.center.conj_power(expr.p)
        g = Linear(c) if isinstance(f, Linear) else \
            Binomial(c, f.n, f.rhs_unit, f.rhs_pow)
        if bag.get(_factor_key(g), 0) != bag.get(_factor_key(f), 0):
            raise NotGaloisClosed(
                f"factor with center {f.center!r} has an incomplete Frobenius orbit")
    return True


def required_tower(expr):
    """Degrees (d, e) of the tame tower needed to split f."""
    p = expr.p
    N = expr.conductor
    if N % p == 0:
        raise WildInput(f"conductor {N} divisible by p = {p}")
    e = 1
    for f in expr.factors:
        if isinstance(f, Binomial):
            if f.n % p == 0:
                raise WildInput(f"binomial exponent {f.n} divisible by p = {p}")
            e = math.lcm(e, f.n)
    d0 = mult_order(p, math.lcm(N, e))
    d = d0
    for _ in range(64):
        q1 = p ** d - 1
        ok = True
        for f in expr.factors:
            if isinstance(f, Binomial):
                g = math.gcd(f.n, q1)
                ex = (q1 // g) % (p - 1)
                if pow(f.rhs_unit % p, ex if ex else p - 1, p) != 1 % p:
                    ok = False
                    break
        if ok:
            return d, e
        d += d0
    raise InternalError("no residue degree makes all units n-th powers")


# ------------------------------------------------------------------
# root embedding
# ------------------------------------------------------------------

@dataclass
class RootSet:
    tower: Tower
    roots: list
    tags: list
    tau_perm: list = None
    frob_perm: list = None
    val_matrix: list = None

    @property
    def size(self):
        return len(self.roots)


def embed_cyclo(tower, c):
    """Exact embedding of a cyclotomic integer via Teichmueller lifts."""
    if c.is_rational:
        return tower.from_int(c.coeffs[0])
    zN = tower.zeta(c.N)
    acc = tower.w_zero()
    zp = tower.w_one()
    for coeff in c.coeffs:
        if coeff:
            acc = tower.w_add(acc, tower.w_scale(zp, coeff))
        zp = tower.w_mul(zp, zN)
    return tower.from_w(acc, 0)


def extract_roots(expr, tower):
    """Embed all roots of f into the tower, tagged by (factor, branch)."""
    roots, tags = [], []
    for fi, f in enumerate(expr.factors):
        center = embed_cyclo(tower, f.center)
        if isinstance(f, Linear):
            roots.append(center)
            tags.append((fi, 0))
            continue
        n, u, m = f.n, f.rhs_unit, f.rhs_pow
        if (m * tower.e) % n != 0:
            raise InternalError("tower ramification does not split the binomial")
        y = tower.unit_nth_root(u, n)
        branch = tower.from_w(y, 0).shift(m * tower.e // n)
        zeta_n = tower.from_w(tower.zeta(n), 0) if n > 1 else tower.one()
        for j in range(n):
            roots.append(center + branch)
            tags.append((fi, j))
            branch = branch * zeta_n
    rs = RootSet(tower, roots, tags)
    rs.val_matrix = _valuation_matrix(rs)
    return rs


def _valuation_matrix(rs):
    n = rs.size
    mat = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            diff = rs.roots[i] - rs.roots[j]
            if diff.is_zero:
                raise RootCollision(
                    f"roots {rs.tags[i]} and {rs.tags[j]} coincide: f is not squarefree")
            mat[i][j] = mat[j][i] = Fraction(diff.vL, rs.tower.e)
    return mat


def galois_perms(rs):
    """Fill tau_perm, frob_perm by matching Galois images against the roots."""
    t = rs.tower
    n = rs.size
    max_pair = max(int(rs.val_matrix[i][j] * t.e)
                   for i in range(n) for j in range(n) if i != j) if n > 1 else 0

    def match(img):
        hits = []
        for j, r in enumerate(rs.roots):
            diff = img - r
            if diff.is_zero or diff.vL > max_pair + 1:
                hits.append(j)
        if len(hits) != 1:
            raise AmbiguousMatch(
                f"Galois image matches {len(hits)} roots; raise the precision")
        return hits[0]

    rs.tau_perm = [match(r.tau()) for r in rs.roots]
    rs.frob_perm = [match(r.frob()) for r in rs.roots]
    for name, perm in (("tau", rs.tau_perm), ("frob", rs.frob_perm)):
        if sorted(perm) != list(range(n)):
            raise AmbiguousMatch(f"{name} image is not a permutation")
    # tame relation frob o tau == tau^p o frob on indices
    lhs = [rs.frob_perm[rs.tau_perm[i]] for i in range(n)]
    rhs = list(range(n))
    for _ in range(t.p % _perm_order(rs.tau_perm)):
        rhs = [rs.tau_perm[i] for i in rhs]
    rhs = [rhs[rs.frob_perm[i]] for i in range(n)]
    if lhs != rhs:
        raise InternalError("tame relation fails on the root permutations")
    return rs


def _perm_order(perm):
    n = len(perm)
    order = 1
    seen = [False] * n
    for i in range(n):
        if not seen[i]:
            length, j = 0, i
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            order = math.lcm(order, length)
    return order


# ------------------------------------------------------------------
# exact integer expansion (oracle input)
# ------------------------------------------------------------------

def expand_to_integer_poly(expr):
    """Exact coefficients of f over Z, including the leading coefficient."""
    N = expr.conductor
    one = Cyclo.integer(1, N)
    poly = [one]
    for f in expr.factors:
        c = f.center
        if isinstance(f, Linear):
            fac = [-c, one]
        else:
            negc_pow = [one]
            for _ in range(f.n):
                negc_pow.append(negc_pow[-1] * (-c))
            fac = [Cyclo.integer(math.comb(f.n, k), N) * negc_pow[f.n - k]
                   for k in range(f.n + 1)]
            fac[0] = fac[0] - Cyclo.integer(f.rhs_unit * expr.p ** f.rhs_pow, N)
        poly = _cyclo_poly_mul(poly, fac)
    cf = expr.c_f()
    out = []
    for coeff in poly:
        if not coeff.is_rational:
            raise NonRationalCoefficient(
                "expanded coefficient has a nonzero cyclotomic part")
        out.append(cf * coeff.to_int())
    return out


def _cyclo_poly_mul(a, b):
    N = a[0].N
    out = [Cyclo.integer(0, N) for _ in range(len(a) + len(b) - 1)]
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


# ------------------------------------------------------------------
# curve file format
# ------------------------------------------------------------------

def read_curve_file(path):
    """Read 'p = <int>' header plus one expression per line."""
    p = None
    exprs = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            m = re.fullmatch(r"p\s*=\s*(\d+)", line)
            if m:
                if p is not None:
                    raise ParseError("duplicate 'p =' header")
                p = int(m.group(1))
                continue
            if p is None:
                raise ParseError("curve file must start with a 'p = <int>' header")
            exprs.append(line)
    if p is None or not exprs:
        raise ParseError("curve file needs a header and at least one expression")
    return p, exprs
