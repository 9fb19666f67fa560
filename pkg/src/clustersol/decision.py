"""The combinatorial solubility criterion and verdict assembly.

A multiplicity-one component of the special fibre fixed by Frobenius
exists precisely when one of eighteen sub-conditions holds; under the
applicability gate (odd residue characteristic, tameness, and residue
field larger than 2(g^2 - 1)) this is equivalent to the curve having a
rational point over Q_p.  Every sub-condition is evaluated and reported,
even after one fires.
"""

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .clusters import analyse
from .errors import PrecisionExhausted
from .tame import FROB, TAU

CONDITION_IDS = ["i", "ii.a", "ii.b", "ii.c", "ii.d", "iii",
                 "iv.a", "iv.b", "iv.c", "v.a", "v.b", "v.c",
                 "vi.a", "vi.b", "vi.c", "vi.d", "vi.e", "vi.f"]


@dataclass
class ConditionReport:
    cid: str
    satisfied: bool = False
    witnesses: list = dc_field(default_factory=list)
    consumed: dict = dc_field(default_factory=dict)
    convention_marker: bool = False

    def fire(self, witness, consumed=None, marker=False):
        self.satisfied = True
        if witness not in self.witnesses:
            self.witnesses.append(witness)
        if consumed:
            self.consumed.update(consumed)
        self.convention_marker = self.convention_marker or marker

    def note(self, witness, consumed, marker=False):
        """Record an evaluated-but-unsatisfied candidate, e.g. an empty interval."""
        self.consumed.setdefault("evaluated", {})[witness] = consumed
        self.convention_marker = self.convention_marker or marker


@dataclass
class SolubilityVerdict:
    status: str                      # Soluble | Insoluble | Inapplicable
    component_yes: bool
    fired: list
    reports: dict
    reasons: dict
    odd_degree_shortcut: bool
    convention_dependent: bool
    odd_degree_consistent: bool = True


def interval_has_integer(lo, hi):
    """[lo, hi] cap Z nonempty, closed endpoints, exact rationals."""
    return math.ceil(lo) <= math.floor(hi)


def is_int(x):
    return Fraction(x).denominator == 1


def is_even_int(x):
    x = Fraction(x)
    return x.denominator == 1 and x.numerator % 2 == 0


def theorem_decide(A):
    """Evaluate all theorem conditions on a ClusterAnalysis.

    Returns (component_yes, {cid: ConditionReport}).
    """
    reports = {cid: ConditionReport(cid) for cid in CONDITION_IDS}
    top = A.picture.top
    top_rec = A.inv[top]
    proper = A.picture.proper()

    def rec(n):
        return A.inv[n]

    def eps_ok_if_ubereven(n):
        return not rec(n).ubereven or A.eps_trivial_galois(n)

    # (i) and the (ii) preamble
    for s in proper:
        r = rec(s)
        if not (r.principal and r.fixed_galois):
            continue
        if r.e == 1 and eps_ok_if_ubereven(s):
            reports["i"].fire(r.name, {"e": 1})
        if r.e > 1 and eps_ok_if_ubereven(s):
            # (ii)(a)
            if s is top:
                if top_rec.size % 2 == 1:
                    reports["ii.a"].fire(r.name, {"parity": "odd", "e": r.e})
                elif A.eps_trivial_galois(top):
                    reports["ii.a"].fire(r.name, {"parity": "even", "eps": "trivial"})
            # (ii)(b)
            stable = r.stable_children
            center_ok = is_int(r.depth) or A.center_value_is_square(s) is True
            if any(c.size == 1 for c in stable):
                reports["ii.b"].fire(r.name, {"route": "stable singleton"})
            elif (r.genus == 0 and not r.ubereven
                  and not any(c.size > 1 and c.size % 2 == 1 for c in stable)
                  and is_even_int(r.nu) and center_ok):
                reports["ii.b"].fire(r.name,
                                     {"route": "genus 0, no proper stable odd child",
                                      "nu": str(r.nu)}, marker=True)
            # (ii)(c)
            if (not any(c.size > 1 for c in stable)
                    and is_int(r.lam) and is_even_int(r.nu)
                    and (r.genus > 0 or r.ubereven) and center_ok):
                reports["ii.c"].fire(r.name, {"lambda": str(r.lam), "nu": str(r.nu)},
                                     marker=True)
            # (ii)(d)
            singles = [c for c in s.children if c.size == 1]
            if singles and all(
                    A.image(c, TAU) is c and A.image(c, FROB) is c for c in singles):
                reports["ii.d"].fire(r.name, {"singletons": len(singles)})

    # (iii) linking chains between nested principal clusters
    for s in proper:
        r = rec(s)
        if not (r.principal and r.fixed_galois):
            continue
        for sp in s.children:
            if not sp.is_proper:
                continue
            rp = rec(sp)
            if not (rp.principal and rp.fixed_galois):
                continue
            if rp.size % 2 == 1:
                lo, hi = -r.lam - rp.delta / 2, -r.lam
                if interval_has_integer(lo, hi):
                    reports["iii"].fire(f"{rp.name}<{r.name}",
                                        {"branch": "odd", "interval": [str(lo), str(hi)]})
                else:
                    reports["iii"].note(f"{rp.name}<{r.name}",
                                        {"branch": "odd", "interval": [str(lo), str(hi)],
                                         "integer_intersection": "empty"})
            else:
                if A.eps_trivial_galois(sp) and interval_has_integer(-rp.depth, -r.depth):
                    reports["iii"].fire(f"{rp.name}<{r.name}",
                                        {"branch": "even",
                                         "interval": [str(-rp.depth), str(-r.depth)]})

    # (iv) twins
    for s in proper:
        r = rec(s)
        if not (r.twin and r.fixed_galois):
            continue
        parent = s.parent
        triv_inertia = A.eps_trivial_inertia(s)
        if A.eps_trivial_galois(s):
            lo, hi = -r.depth, -rec(parent).depth
            if interval_has_integer(lo, hi):
                reports["iv.a"].fire(r.name, {"interval": [str(lo), str(hi)]})
            else:
                reports["iv.a"].note(r.name, {"interval": [str(lo), str(hi)],
                                              "integer_intersection": "empty"})
        if (triv_inertia and A.epsilon(s, FROB) == -1
                and is_int(r.depth) and is_even_int(r.nu)):
            reports["iv.b"].fire(r.name, {"d": str(r.depth), "nu": str(r.nu)})
        if not triv_inertia:
            if A.roots_fixed_pointwise(s):
                reports["iv.c"].fire(r.name, {"route": "rational branch points"},
                                     marker=True)
            elif is_even_int(r.nu) and (is_int(r.depth)
                                        or A.center_value_is_square(s)):
                reports["iv.c"].fire(r.name, {"route": "crosses fixed",
                                              "nu": str(r.nu), "d": str(r.depth)},
                                     marker=True)

    if not top_rec.principal:
        # (v) cotwins, read with t the cotwin and s its child of size 2g
        for s in proper:
            r = rec(s)
            if not (r.cotwin and r.fixed_galois):
                continue
            child = next(c for c in s.children if c.size == 2 * A.curve_genus)
            d_child = rec(child).depth if child.is_proper else None
            triv_inertia = A.eps_trivial_inertia(s)
            if A.eps_trivial_galois(s) and d_child is not None:
                lo, hi = -d_child, -r.depth
                if interval_has_integer(lo, hi):
                    reports["v.a"].fire(r.name, {"interval": [str(lo), str(hi)]})
            if (triv_inertia and A.epsilon(s, FROB) == -1
                    and is_int(r.depth) and is_even_int(r.nu)):
                reports["v.b"].fire(r.name, {"d": str(r.depth), "nu": str(r.nu)})
            if not triv_inertia:
                tau_swaps, frob_swaps = A.dual_pair_swap(s)
                if tau_swaps or not frob_swaps:
                    reports["v.c"].fire(r.name,
                                        {"dual_pair_tau_swaps": tau_swaps,
                                         "dual_pair_frob_swaps": frob_swaps},
                                        marker=True)

        # (vi) top cluster with exactly two children
        if len(top.children) == 2:
            for a_node, b_node in (top.children, list(reversed(top.children))):
                ra = rec(a_node) if a_node.is_proper else None
                fixed_in = A.image(a_node, TAU) is a_node
                fixed_fr = A.image(a_node, FROB) is a_node
                swaps = A.image(a_node, TAU) is b_node
                name = ra.name if ra else f"r{a_node.roots[0] + 1}"
                if a_node.size % 2 == 1:
                    if ra is None and fixed_in and fixed_fr:
                        # singleton child: the relative depth is infinite, the
                        # interval unbounded below, and the root is rational
                        reports["vi.a"].fire(name,
                                             {"interval": ["-inf", str(-top_rec.lam)],
                                              "note": "rational Weierstrass point"},
                                             marker=True)
                    if ra and fixed_in and fixed_fr:
                        lo, hi = -top_rec.lam - ra.delta / 2, -top_rec.lam
                        if interval_has_integer(lo, hi):
                            reports["vi.a"].fire(name,
                                                 {"interval": [str(lo), str(hi)]},
                                                 marker=True)
                        else:
                            reports["vi.a"].note(
                                name, {"interval": [str(lo), str(hi)],
                                       "integer_intersection": "empty"},
                                marker=True)
                    if (fixed_in and not fixed_fr and is_int(top_rec.depth)
                            and is_even_int(top_rec.nu)):
                        reports["vi.b"].fire(name, {"d_R": str(top_rec.depth),
                                                    "nu_R": str(top_rec.nu)},
                                             marker=True)
                    if swaps and A.epsilon(top, FROB) == 1:
                        reports["vi.c"].fire(name, {"eps_R_frob": 1})
                else:
                    if ra is None:
                        continue
                    if fixed_in and fixed_fr and A.eps_trivial_galois(a_node):
                        lo, hi = -ra.depth, -top_rec.depth
                        if interval_has_integer(lo, hi):
                            reports["vi.d"].fire(name, {"interval": [str(lo), str(hi)]})
                    if (fixed_in and not fixed_fr and A.eps_trivial_galois(a_node)
                            and is_int(top_rec.depth)):
                        reports["vi.e"].fire(name, {"d_R": str(top_rec.depth)})
                    if (swaps and A.eps_trivial_galois(a_node)
                            and A.epsilon(top, FROB) == 1):
                        reports["vi.f"].fire(name, {"eps_R_frob": 1})

    component_yes = any(r.satisfied for r in reports.values())
    return component_yes, reports


def tameness_flags(A):
    """Effective tameness requirements: p odd, p coprime to the tower and all e_s."""
    p = A.expr.p
    flags = {
        "p_odd": p % 2 == 1,
        "tower_tame": math.gcd(A.tower.e, p) == 1,
        "cluster_e_tame": all(math.gcd(A.inv[s].e, p) == 1 for s in A.picture.proper()),
    }
    return flags


def corollary_gate(p, genus, tame_flags):
    """Applicable iff p odd, tame, and q = p exceeds 2(g^2 - 1)."""
    reasons = dict(tame_flags)
    reasons["q"] = p
    reasons["hasse_weil_bound"] = 2 * (genus * genus - 1)
    reasons["q_large_enough"] = p > 2 * (genus * genus - 1)
    applicable = all(v for k, v in reasons.items()
                     if k not in ("q", "hasse_weil_bound"))
    return applicable, reasons


def solubility_decide(expr, prec=None, star_mode="direct", recheck_doubled=True):
    """Full pipeline: analysis at working precision, gate, theorem, verdict.

    The verdict is recomputed at doubled precision and must agree, else
    PrecisionExhausted propagates; truncation must never decide a curve.
    """
    A = analyse(expr, prec=prec, star_mode=star_mode)
    component_yes, reports = theorem_decide(A)
    if recheck_doubled:
        A2 = analyse(expr, prec=2 * A.tower.prec, star_mode=star_mode)
        yes2, reports2 = theorem_decide(A2)
        if yes2 != component_yes or any(
                reports[cid].satisfied != reports2[cid].satisfied
                for cid in CONDITION_IDS):
            raise PrecisionExhausted(
                "verdict unstable under precision doubling")
    flags = tameness_flags(A)
    applicable, reasons = corollary_gate(expr.p, expr.genus, flags)
    fired = [cid for cid in CONDITION_IDS if reports[cid].satisfied]
    convention = any(reports[cid].convention_marker for cid in fired)
    verdict = SolubilityVerdict(
        status=("Soluble" if component_yes else "Insoluble") if applicable
               else "Inapplicable",
        component_yes=component_yes,
        fired=fired,
        reports=reports,
        reasons=reasons,
        odd_degree_shortcut=expr.degree % 2 == 1,
        convention_dependent=convention,
        odd_degree_consistent=(expr.degree % 2 == 0) or not applicable
                              or component_yes,
    )
    return verdict, A
