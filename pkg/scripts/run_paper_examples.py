#!/usr/bin/env python3
"""Analyse the three reference curves end to end and print full reports.

Each run prints the cluster picture, the invariant table, every condition
evaluation, the verdict, and the independent oracle's answer.
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from clustersol.cli import build_report, _print_text_report
from clustersol.curves import expand_to_integer_poly, parse_expr
from clustersol.decision import solubility_decide
from clustersol.oracle import is_locally_soluble

CURVES = [
    ("(x^4-p^17)*(x^3-p^2)", 17),
    ("p*((x-1)^2+p^2)*((x-zeta(3))^2+p^2)*((x-zeta(3)^2)^2+p^2)", 11),
    ("p*((x-1)^2+p^2)*((x-zeta(3))^2+p^2)*((x-zeta(3)^2)^2+p^2)", 23),
    ("p*(x^3-p^2)*((x-1)^3-p^2)", 7),
]


def main():
    for i, (text, p) in enumerate(CURVES):
        if i:
            print("=" * 70)
        expr = parse_expr(text, p)
        verdict, analysis = solubility_decide(expr)
        oracle = is_locally_soluble(expand_to_integer_poly(expr), p)
        _print_text_report(build_report(expr, verdict, analysis, oracle))


if __name__ == "__main__":
    main()
