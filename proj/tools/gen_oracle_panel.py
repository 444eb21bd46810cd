#!/usr/bin/env python3
"""Writes data/oracle_panel.json: the labeled d = 1 panel and golden-ratio thresholds.

Values come from exact rationals and 60-digit decimals; nothing here calls the C++ code.
"""

import json
import math
from decimal import Decimal, getcontext
from fractions import Fraction
from pathlib import Path

getcontext().prec = 60

N_LADDER = [10.0 * 10.0 ** (4.0 * i / 15.0) for i in range(16)]
EPS_LADDER = [0.01, 0.05, 0.1, 0.2, 0.4]


def rational_panel():
    out = []
    for i in range(20):
        q = round(300.0 ** ((i + 1) / 20.0)) + 1 + i
        a = (q * 37) // 100 + 1
        while math.gcd(a, q) != 1:
            a += 1
        r = Fraction(a % q, q)
        out.append({"label": f"r{r.numerator}/{r.denominator}", "x": f"{r.numerator}/{r.denominator}",
                    "denominator": r.denominator, "kind": "rational"})
    return out


def constant_cf(a):
    # [0; a, a, a, ...] solves x = 1/(a + x).
    return (Decimal(a * a + 4).sqrt() - a) / 2


def quadratic_panel():
    out = []
    for a in range(1, 21):
        x = constant_cf(a)
        out.append({"label": f"cf{a}", "x": f"{x:.40f}", "partial_quotient": a, "kind": "quadratic"})
    return out


def convergent_denominators(a, terms):
    qs = [1, a]
    while len(qs) < terms:
        qs.append(a * qs[-1] + qs[-2])
    return qs


def dist_to_int(v):
    return abs(v - v.to_integral_value())


def golden_thresholds():
    x = constant_cf(1)
    qs = convergent_denominators(1, 40)
    rows = []
    for N in N_LADDER:
        Q = math.floor(N)
        # Best approximations of a real number are its convergents.
        best = min(dist_to_int(q * x) for q in qs if q <= Q)
        rows.append({"N": N, "eps_star": float(Decimal(N) * best)})
    sqrt5 = Decimal(5).sqrt()
    phi = (1 + sqrt5) / 2
    return {
        "x": f"{x:.40f}",
        "convergent_denominators": qs[:25],
        "thresholds": rows,
        "liminf": float(1 / sqrt5),
        "limsup": float(phi / sqrt5),
    }


def main():
    doc = {
        "eps_ladder": EPS_LADDER,
        "N_ladder": N_LADDER,
        "panel": rational_panel() + quadratic_panel(),
        "golden": golden_thresholds(),
    }
    path = Path(__file__).resolve().parent.parent / "data" / "oracle_panel.json"
    path.write_text(json.dumps(doc, indent=2) + "\n")
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
