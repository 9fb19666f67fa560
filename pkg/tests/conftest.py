import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

EX1 = ("(x^4-p^17)*(x^3-p^2)", 17)
EX2 = "p*((x-1)^2+p^2)*((x-zeta(3))^2+p^2)*((x-zeta(3)^2)^2+p^2)"
EX3 = ("p*(x^3-p^2)*((x-1)^3-p^2)", 7)
