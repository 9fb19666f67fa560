import random

import pytest

from conftest import EX1, EX2, EX3
from clustersol.curves import expand_to_integer_poly, parse_expr
from clustersol.errors import NotSquarefree
from clustersol.numutil import poly_deriv, poly_eval, resultant, vp
from clustersol.oracle import (class_test, disc_valuation, exhaustive_soluble,
                               infinity_chart, is_locally_soluble)


def test_trivial_unit_point():
    r = is_locally_soluble([1, 0, 0, 0, 0, 0, 1], 7)   # y^2 = x^6 + 1
    assert r.soluble
    assert r.witness["x"] % 7 == 0 and r.witness["y"] % 7 == 1


def test_odd_degree_shortcut():
    f = expand_to_integer_poly(parse_expr(EX1[0], EX1[1]))
    r = is_locally_soluble(f, 17)
    assert r.soluble and r.witness["note"] == "point at infinity"


def test_example2_insoluble():
    for p in (11, 23):
        f = expand_to_integer_poly(parse_expr(EX2, p))
        r = is_locally_soluble(f, p)
        assert r.soluble is False and r.status == "ok"


def test_example3_insoluble():
    f = expand_to_integer_poly(parse_expr(EX3[0], EX3[1]))
    assert is_locally_soluble(f, 7).soluble is False


def test_rejects_non_squarefree():
    # (x+1)^2 (x^5 - 7)
    f = [1, 2, 1]
    g = [-7, 0, 0, 0, 0, 1]
    prod = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            prod[i + j] += a * b
    with pytest.raises(NotSquarefree):
        is_locally_soluble(prod, 7)


def test_infinity_chart_shapes():
    assert infinity_chart([1, 0, 0, 0, 0, 0, 1]) == [1, 0, 0, 0, 0, 0, 1]
    g = infinity_chart([3, 0, 0, 0, 0, 0, 0, 2])      # degree 7
    assert g == [0, 2, 0, 0, 0, 0, 0, 0, 3]


def test_class_test_unit_square_case():
    f = [1, 0, 0, 0, 0, 0, 1]
    verdict, w = class_test(f, poly_deriv(f), 0, 1, 7)
    assert verdict == "accept"
    assert (w["y"] ** 2 - poly_eval(f, w["x"])) % 7 ** 6 == 0


def test_class_test_odd_valuation_reject():
    f = [7, 0, 0, 0, 0, 1]   # f(0) = 7, v = 1 < k = 2
    assert class_test(f, poly_deriv(f), 0, 2, 7)[0] == "reject"


def test_class_test_split_matches_enumeration():
    # deep classes: compare split-decision against brute force over x mod p^4
    rng = random.Random(4)
    for _ in range(30):
        p = rng.choice([3, 5])
        f = [rng.randrange(-9, 10) for _ in range(5)] + [1]
        if resultant(f, poly_deriv(f)) == 0:
            continue
        a = rng.randrange(p)
        verdict, _ = class_test(f, poly_deriv(f), a, 1, p)
        brute = False
        for x in range(a, p ** 4, p):
            val = poly_eval(f, x)
            if val == 0:
                brute = True
                break
            v = vp(val, p)
            if v < 6 and v % 2 == 0 and pow((val // p ** v) % p, (p - 1) // 2, p) == 1:
                brute = True
                break
        if verdict == "accept":
            assert brute
        elif verdict == "reject":
            assert not brute


def test_witness_certificates_hold():
    rng = random.Random(11)
    for _ in range(40):
        p = rng.choice([3, 5, 7])
        f = [rng.randrange(-9, 10) for _ in range(rng.choice([6, 7]))] + [rng.choice([1, 2])]
        if resultant(f, poly_deriv(f)) == 0:
            continue
        r = is_locally_soluble(f, p)
        if not r.soluble or "note" in r.witness:
            continue
        w = r.witness
        F = f if w["chart"] == "affine-x" else infinity_chart(f)
        if w["y"] == 0:
            # truncated Hensel root: certify the x-inequality instead
            fx, fpx = poly_eval(F, w["x"]), poly_eval(poly_deriv(F), w["x"])
            assert fx == 0 or vp(fx, p) > 2 * vp(fpx, p)
        else:
            delta = w["y"] ** 2 - poly_eval(F, w["x"])
            assert delta == 0 or vp(delta, p) > 2 * vp(w["y"], p) + 1


def test_oracle_vs_exhaustive_enumeration():
    # completeness: recursive search agrees with the flat scan of x mod p^6
    rng = random.Random(2024)
    checked = 0
    while checked < 60:
        p = rng.choice([3, 5])
        deg = rng.choice([5, 6])
        f = [rng.randrange(-9, 10) for _ in range(deg)] + [rng.choice([1, 2, 3, -1])]
        if resultant(f, poly_deriv(f)) == 0:
            continue
        if disc_valuation(f, p) > 2:
            continue
        assert is_locally_soluble(f, p).soluble == exhaustive_soluble(f, p), (f, p)
        checked += 1


def test_termination_within_disc_bound():
    for text, p in [(EX2, 11), (EX3[0], 7)]:
        f = expand_to_integer_poly(parse_expr(text, p))
        r = is_locally_soluble(f, p)
        assert r.status == "ok"
        assert r.max_level_reached <= 2 * disc_valuation(f, p) + 4
