"""Cluster pictures and their invariants.

The picture is the laminar family of subsets of the roots cut out by
p-adic discs, built from the matrix of pairwise valuations.  For each
proper cluster we compute depth, relative depth, nu, lambda, e, genus,
the classification flags, the Galois action, and the +-1 characters
attached to even clusters and cotwins.

Character computation never enlarges the tower: a square root of the
radicand theta^2 = c_f prod_{r not in s}(z_s - r) is tracked through its
leading residue term as  s * (sqrt(omega))^alpha * (sqrt(pi))^(W mod 2),
where omega is the residue-field generator.  The Galois generators act
on the two formal radicals by

    tau(sqrt(omega)) = sqrt(omega)        frob(sqrt(omega)) = sqrt(omega)^p
    tau(sqrt(pi))    = zeta_2e sqrt(pi)   frob(sqrt(pi))    = sqrt(pi)

with zeta_2e a primitive 2e-th root of unity squaring to zeta_e, so
zeta_2e^e = -1.  This realises the quadratic twist layers exactly and
keeps every epsilon value a literal +-1 in the residue field.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InternalError
from .curves import extract_roots, galois_perms, required_tower
from .tame import GaloisWord, Tower

INF = math.inf


# ------------------------------------------------------------------
# picture construction
# ------------------------------------------------------------------

class ClusterNode:
    __slots__ = ("roots", "depth", "parent", "children", "name")

    def __init__(self, roots, depth, children):
        self.roots = tuple(sorted(roots))
        self.depth = depth            # Fraction, or None for singletons
        self.parent = None
        self.children = children
        self.name = None
        for c in children:
            c.parent = self

    @property
    def size(self):
        return len(self.roots)

    @property
    def is_proper(self):
        return self.size > 1

    @property
    def is_even(self):
        return self.size % 2 == 0

    @property
    def is_odd(self):
        return self.size % 2 == 1

    @property
    def rootset(self):
        return frozenset(self.roots)

    def __repr__(self):
        d = "inf" if self.depth is None else str(self.depth)
        return f"ClusterNode({list(self.roots)}, d={d})"


class ClusterPicture:
    """The full laminar tree, with lookups by root set."""

    def __init__(self, top, rootset, expr):
        self.top = top
        self.rootset = rootset
        self.expr = expr
        self.nodes = []
        self._collect(top)
        self.by_set = {n.rootset: n for n in self.nodes}
        self._assign_names()

    def _collect(self, node):
        self.nodes.append(node)
        for c in node.children:
            self._collect(c)

    def _assign_names(self):
        self.top.name = "R"
        twins = others = 0
        for n in self.nodes:
            if n.is_proper and n is not self.top:
                if n.size == 2:
                    twins += 1
                    n.name = f"t{twins}"
                else:
                    others += 1
                    n.name = f"s{others}"

    def proper(self):
        return [n for n in self.nodes if n.is_proper]

    def serialize(self, node=None):
        """Nested textual form: {d=<rational> members...} with leaves as root tags."""
        node = node or self.top
        if not node.is_proper:
            return f"r{node.roots[0] + 1}"
        inner = " ".join(self.serialize(c) for c in node.children)
        return f"{{d={node.depth} {inner}}}"


def build_picture(rs, expr):
    """Ultrametric agglomeration of the root set into the cluster tree."""
    n = rs.size
    if n < 5:
        raise InternalError("picture needs at least 5 roots")
    mat = rs.val_matrix

    def make(indices):
        if len(indices) == 1:
            return ClusterNode(indices, None, [])
        depth = min(mat[i][j] for i in indices for j in indices if i < j)
        blocks = []
        for i in sorted(indices):
            for b in blocks:
                if mat[i][b[0]] > depth:
                    b.append(i)
                    break
            else:
                blocks.append([i])
        children = [make(b) for b in blocks]
        children.sort(key=lambda c: c.roots[0])
        return ClusterNode(indices, depth, children)

    top = make(list(range(n)))
    return ClusterPicture(top, rs, expr)


# ------------------------------------------------------------------
# formal square-root symbols over the residue field
# ------------------------------------------------------------------

class SqrtSymbol:
    """A residue-level value s * sqrt(omega)^alpha, s in F_q, alpha in {0,1}."""

    __slots__ = ("fq", "s", "alpha")

    def __init__(self, fq, s, alpha):
        self.fq = fq
        self.s = s
        self.alpha = alpha & 1

    def __mul__(self, other):
        s = self.fq.mul(self.s, other.s)
        if self.alpha and other.alpha:
            s = self.fq.mul(s, self.fq.omega)
        return SqrtSymbol(self.fq, s, self.alpha ^ other.alpha)

    def inv(self):
        s = self.fq.inv(self.s)
        if self.alpha:
            s = self.fq.mul(s, self.fq.inv(self.fq.omega))
        return SqrtSymbol(self.fq, s, self.alpha)

    def __pow__(self, k):
        if k < 0:
            return self.inv() ** (-k)
        r = SqrtSymbol(self.fq, self.fq.one, 0)
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    def frob_iter(self, b):
        """Image under frob^b: radicals of unity are raised to the p^b."""
        fq = self.fq
        pb = pow(fq.p, b, 2 * (fq.q - 1))
        s = fq.pow(self.s, pb)
        if self.alpha:
            s = fq.mul(s, fq.pow(fq.omega, (pb - 1) // 2))
        return SqrtSymbol(fq, s, self.alpha)

    def __neg__(self):
        return SqrtSymbol(self.fq, self.fq.neg(self.s), self.alpha)

    def as_sign(self):
        """Return +1 / -1 if the symbol is literally a sign, else None."""
        if self.alpha:
            return None
        if self.s == self.fq.one:
            return 1
        if self.s == self.fq.neg(self.fq.one):
            return -1
        return None

    def square(self):
        s2 = self.fq.mul(self.s, self.s)
        if self.alpha:
            s2 = self.fq.mul(s2, self.fq.omega)
        return s2


FLIP_CANONICAL_SQRT = False  # test hook: take the other root everywhere


def canonical_sqrt_symbol(fq, u):
    """Canonical formal square root of u in F_q^*."""
    r = fq.canonical_sqrt(u)
    alpha = 0
    if r is None:
        r = fq.canonical_sqrt(fq.mul(u, fq.inv(fq.omega)))
        alpha = 1
    if FLIP_CANONICAL_SQRT:
        r = fq.neg(r)
    return SqrtSymbol(fq, r, alpha)


# ------------------------------------------------------------------
# invariants, Galois data, characters
# ------------------------------------------------------------------

@dataclass
class ClusterInvariants:
    name: str
    roots: tuple
    size: int
    depth: Fraction
    delta: Fraction          # relative depth; None for the top cluster
    nu: Fraction
    lam: Fraction
    e: int
    genus: int
    vKc: Fraction
    is_even: bool
    ubereven: bool
    twin: bool
    cotwin: bool
    principal: bool
    fixed_inertia: bool = None
    fixed_frob: bool = None
    fixed_galois: bool = None
    orbit: int = None
    eps_tau: int = None      # 0 when epsilon is undefined for this cluster
    eps_frob: int = None
    stable_children: tuple = ()


class ClusterAnalysis:
    """Everything the decision engine consumes, for one embedded curve."""

    def __init__(self, expr, rs, picture, star_mode="direct"):
        self.expr = expr
        self.rs = rs
        self.tower = rs.tower
        self.picture = picture
        self.star_mode = star_mode
        self.curve_genus = expr.genus
        self._radicand_cache = {}
        self._eps_cache = {}
        self._zeta2e = None
        self._group = None
        self.inv = {}
        for node in picture.proper():
            self.inv[node] = self._invariants(node)
        self._fill_galois()
        self._fill_epsilons()

    # --- plain invariants ---

    def val(self, i, j):
        return self.rs.val_matrix[i][j]

    def depth(self, node):
        return node.depth

    def nu(self, node, center_index=None):
        z = center_index if center_index is not None else node.roots[0]
        d = node.depth
        total = Fraction(self.expr.c_pow)
        for r in range(self.rs.size):
            if r == z:
                total += d
            else:
                total += min(d, self.val(z, r))
        return total

    def lam(self, node):
        ch = sum(c.size // 2 for c in node.children)
        return self.nu(node) / 2 - node.depth * ch

    def e_of(self, node):
        d = node.depth
        nu = self.nu(node)
        e = math.lcm(d.denominator, (nu / 2).denominator)
        for div in range(1, e):
            if e % div == 0 and (div * d).denominator == 1 and (div * nu / 2).denominator == 1:
                return div
        return e

    def genus_of(self, node):
        odd = sum(1 for c in node.children if c.size % 2 == 1)
        return max(0, (odd - 1) // 2)

    def vKc(self, node):
        return self.nu(node) - node.size * node.depth

    def _invariants(self, node):
        g2 = 2 * self.curve_genus
        ubereven = all(c.is_even for c in node.children)
        has_2g_child = any(c.size == g2 for c in node.children)
        principal = node.size >= 3 and not has_2g_child and not (
            node is self.picture.top and node.is_even and len(node.children) == 2)
        cotwin = has_2g_child and not ubereven
        return ClusterInvariants(
            name=node.name,
            roots=node.roots,
            size=node.size,
            depth=node.depth,
            delta=None if node.parent is None else node.depth - node.parent.depth,
            nu=self.nu(node),
            lam=self.lam(node),
            e=self.e_of(node),
            genus=self.genus_of(node),
            vKc=self.vKc(node),
            is_even=node.is_even,
            ubereven=ubereven,
            twin=node.size == 2,
            cotwin=cotwin,
            principal=principal,
        )

    # --- Galois action on the picture ---

    def image(self, node, word):
        """Image cluster of a node under tau^a frob^b."""
        idx = set(node.roots)
        for _ in range(word.b % self._frob_order()):
            idx = {self.rs.frob_perm[i] for i in idx}
        for _ in range(word.a % self._tau_order()):
            idx = {self.rs.tau_perm[i] for i in idx}
        out = self.picture.by_set.get(frozenset(idx))
        if out is None:
            raise InternalError("Galois image of a cluster is not a cluster")
        return out

    def _tau_order(self):
        return _perm_order(self.rs.tau_perm)

    def _frob_order(self):
        return _perm_order(self.rs.frob_perm)

    def group(self):
        """All permutations of the roots generated by tau and frob."""
        if self._group is None:
            gens = [tuple(self.rs.tau_perm), tuple(self.rs.frob_perm)]
            seen = {tuple(range(self.rs.size))}
            frontier = list(seen)
            while frontier:
                nxt = []
                for g in frontier:
                    for h in gens:
                        gh = tuple(h[i] for i in g)
                        if gh not in seen:
                            seen.add(gh)
                            nxt.append(gh)
                frontier = nxt
                if len(seen) > 100000:
                    raise InternalError("Galois permutation group unexpectedly large")
            self._group = sorted(seen)
        return self._group

    def stable_children(self, node):
        """Children fixed by every group element stabilising the node."""
        stab = [g for g in self.group()
                if frozenset(g[i] for i in node.roots) == node.rootset]
        out = []
        for c in node.children:
            if all(frozenset(g[i] for i in c.roots) == c.rootset for g in stab):
                out.append(c)
        return out

    def _fill_galois(self):
        orbits = {}
        for node in self.picture.proper():
            rec = self.inv[node]
            rec.fixed_inertia = self.image(node, GaloisWord(1, 0)) is node
            rec.fixed_frob = self.image(node, GaloisWord(0, 1)) is node
            rec.fixed_galois = rec.fixed_inertia and rec.fixed_frob
            rec.stable_children = tuple(self.stable_children(node))
            key = min(tuple(sorted(g[i] for i in node.roots)) for g in self.group())
            orbits.setdefault(key, len(orbits))
            rec.orbit = orbits[key]

    # --- characters ---

    def star(self, node):
        """The cluster whose theta computes epsilon for this node."""
        rec = self.inv[node]
        if rec.cotwin:
            g2 = 2 * self.curve_genus
            return next(c for c in node.children if c.size == g2)
        if self.star_mode == "walkup":
            cur = node
            while cur.parent is not None and self.inv[cur.parent].ubereven:
                cur = cur.parent
            return cur
        return node

    def radicand(self, node):
        """(W, u): pi-valuation and residue of c_f prod_{r not in node}(z - r)."""
        if node in self._radicand_cache:
            return self._radicand_cache[node]
        t = self.tower
        z = self.rs.roots[node.roots[0]]
        acc = t.from_int(self.expr.c_unit).shift(t.e * self.expr.c_pow)
        inside = node.rootset
        for i, r in enumerate(self.rs.roots):
            if i not in inside:
                acc = acc * (z - r)
        out = (acc.vL, acc.residue())
        self._radicand_cache[node] = out
        return out

    def zeta2e_symbol(self):
        """Primitive 2e-th root of unity squaring to zeta_e (so zeta_2e^e = -1)."""
        if self._zeta2e is None:
            fq = self.tower.fq
            zeta_e = self.tower.zeta_e_res
            sym = canonical_sqrt_symbol(fq, zeta_e)
            if (sym ** self.tower.e).as_sign() != -1:
                sym = -sym
            if (sym ** self.tower.e).as_sign() != -1:
                raise InternalError("no primitive 2e-th root of unity found")
            self._zeta2e = sym
        return self._zeta2e

    def epsilon(self, node, word):
        """epsilon_s evaluated on tau^a frob^b; 0 unless s is even or a cotwin."""
        rec = self.inv[node]
        if not (rec.is_even or rec.cotwin):
            return 0
        key = (node.roots, word.a % (2 * self.tower.e), word.b % (2 * self.tower.d))
        if key in self._eps_cache:
            return self._eps_cache[key]
        star = self.star(node)
        target = self.image(star, word)
        w1, u1 = self.radicand(star)
        w2, u2 = self.radicand(target)
        if w1 != w2:
            raise InternalError("Galois image of a radicand changed valuation")
        fq = self.tower.fq
        sym1 = canonical_sqrt_symbol(fq, u1)
        sym2 = canonical_sqrt_symbol(fq, u2)
        sym = sym1.frob_iter(word.b % (2 * self.tower.d))
        sym = sym * self.zeta2e_symbol() ** ((word.a % (2 * self.tower.e)) * w1)
        sym = sym * sym2.inv()
        sign = sym.as_sign()
        if sign is None:
            raise InternalError(
                f"epsilon value is not +-1 on cluster {node.name} (precision or convention bug)")
        self._eps_cache[key] = sign
        return sign

    def epsilon_words(self):
        """Representatives of the quotient through which every epsilon factors."""
        return [GaloisWord(a, b)
                for a in range(2 * self.tower.e) for b in range(2 * self.tower.d)]

    def eps_trivial_galois(self, node):
        return all(self.epsilon(node, w) == 1 for w in self.epsilon_words())

    def eps_trivial_inertia(self, node):
        return all(self.epsilon(node, GaloisWord(a, 0)) == 1
                   for a in range(2 * self.tower.e))

    def _fill_epsilons(self):
        for node in self.picture.proper():
            rec = self.inv[node]
            if rec.is_even or rec.cotwin:
                rec.eps_tau = self.epsilon(node, GaloisWord(1, 0))
                rec.eps_frob = self.epsilon(node, GaloisWord(0, 1))
            else:
                rec.eps_tau = rec.eps_frob = 0

    # --- auxiliary point-level data for the decision engine ---

    def roots_fixed_pointwise(self, node):
        """All roots of the node individually fixed by tau and frob."""
        return all(self.rs.tau_perm[i] == i and self.rs.frob_perm[i] == i
                   for i in node.roots)

    def center_value_is_square(self, node):
        """Whether f at the rational centroid of the node is a square unit times p^nu.

        The centroid of a Galois-fixed cluster is Q_p-rational; f evaluated
        there has valuation nu_s (for a twin always exactly), and the point
        search succeeds at the centre precisely when the unit part is a
        quadratic residue.
        """
        t = self.tower
        n = len(node.roots)
        centroid = t.zero()
        for i in node.roots:
            centroid = centroid + self.rs.roots[i]
        if not centroid.is_zero:
            centroid = centroid * t.from_int(n).inv()
        val = t.from_int(self.expr.c_unit).shift(t.e * self.expr.c_pow)
        for r in self.rs.roots:
            val = val * (centroid - r)
        nu = self.inv[node].nu
        if val.is_zero or Fraction(val.vL, t.e) != nu:
            return None  # degenerate centroid; no verdict from this test
        res = val.residue()
        if any(c != 0 for c in res[1:]):
            return None  # not Q_p-rational; should not happen for fixed clusters
        return pow(res[0], (t.p - 1) // 2, t.p) == 1

    def dual_pair_swap(self, cotwin_node):
        """Swap characters (under tau, frob) of the cotwin's dual pair.

        The pair is the complement of the size-2g child in the full root
        set, completed with the point at infinity when only one root
        remains; infinity is fixed by everything.
        """
        g2 = 2 * self.curve_genus
        child = next(c for c in cotwin_node.children if c.size == g2)
        comp = sorted(set(range(self.rs.size)) - set(child.roots))
        if len(comp) == 1:
            return (False, False)  # pair {root, infinity}: never swapped
        a, b = comp
        tau_swaps = self.rs.tau_perm[a] == b
        frob_swaps = self.rs.frob_perm[a] == b
        return (tau_swaps, frob_swaps)


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
# pipeline entry
# ------------------------------------------------------------------

def default_precision(expr, e):
    """Working pi-adic digits: 8e(1 + largest p-power valuation in the input)."""
    maxval = max([expr.c_pow, 1] +
                 [f.rhs_pow for f in expr.factors if hasattr(f, "rhs_pow")])
    return 8 * e * (1 + maxval)


def analyse(expr, prec=None, star_mode="direct"):
    """Embed the roots, build the picture, and compute all cluster data."""
    d, e = required_tower(expr)
    if prec is None:
        prec = default_precision(expr, e)
    tower = Tower(expr.p, d, e, prec)
    rs = extract_roots(expr, tower)
    galois_perms(rs)
    picture = build_picture(rs, expr)
    return ClusterAnalysis(expr, rs, picture, star_mode=star_mode)
