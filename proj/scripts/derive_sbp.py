"""Derive diagonal-norm SBP first-derivative boundary closures and emit the
C++ coefficient table include/sbpsat/sbp_coefficients.hpp.

The accuracy conditions Q x^m = m H x^(m-1) on the boundary rows are linear in
the unknown skew part S of Q = S + B/2 and in the norm weights H, so the
closure family is solved exactly with sympy.  Remaining free parameters:

  interior order 6: s4_5 = 0.70128647087585160858 (operator in common use)
  interior order 8: (s5_6, s5_7, s6_7) = (0.649, -0.104, 0.755)

Usage: python3 derive_sbp.py [--emit path]
"""
import sys

import sympy as sp

CENTRAL = {
    1: [sp.Rational(1, 2)],
    2: [sp.Rational(2, 3), sp.Rational(-1, 12)],
    3: [sp.Rational(3, 4), sp.Rational(-3, 20), sp.Rational(1, 60)],
    4: [sp.Rational(4, 5), sp.Rational(-1, 5), sp.Rational(4, 105), sp.Rational(-1, 280)],
}
BLOCK = {1: 1, 2: 4, 3: 6, 4: 8}
FREE = {
    3: {"s4_5": sp.Float("0.70128647087585160858", 30)},
    4: {"s5_6": sp.Rational(649, 1000), "s5_7": sp.Rational(-104, 1000), "s6_7": sp.Rational(755, 1000)},
}


def family(k):
    r = BLOCK[k]
    q = k
    c = CENTRAL[k]
    ncol = r + k
    S = [[0] * ncol for _ in range(r)]
    syms = []
    for i in range(r):
        for j in range(i + 1, r):
            s = sp.Symbol(f"s{i}_{j}")
            syms.append(s)
            S[i][j] = s
    for i in range(r):
        for j in range(i):
            S[i][j] = -S[j][i]
    for i in range(r):
        for j in range(r, ncol):
            if 1 <= j - i <= k:
                S[i][j] = c[j - i - 1]
    Hs = [sp.Symbol(f"h{i}") for i in range(r)]
    Q = [[S[i][j] + (sp.Rational(-1, 2) if (i == 0 and j == 0) else 0) for j in range(ncol)] for i in range(r)]
    eqs = []
    for i in range(r):
        for m in range(q + 1):
            lhs = sum(Q[i][j] * sp.Integer(j) ** m for j in range(ncol))
            rhs = m * Hs[i] * sp.Integer(i) ** (m - 1) if m > 0 else 0
            eqs.append(sp.expand(lhs - rhs))
    sol = sp.solve(eqs, syms + Hs, dict=True)
    return sol, syms, Hs, Q


def closure(k):
    """Return (H weights, D boundary block rows) with free parameters fixed."""
    sol, syms, Hs, Q = family(k)
    s = dict(sol[0])
    sub = {sp.Symbol(n): v for n, v in FREE.get(k, {}).items()}
    for key in list(s):
        s[key] = s[key].subs(sub)
    for sym, v in sub.items():
        s[sym] = v
    H = [s[h] for h in Hs]
    r, ncol = BLOCK[k], BLOCK[k] + k
    D = []
    for i in range(r):
        row = []
        for j in range(ncol):
            qij = sp.sympify(Q[i][j]).subs(s)
            row.append(sp.nsimplify(qij) / H[i] if qij.is_Rational else qij / H[i])
        D.append(row)
    return H, D


def fmt(v):
    v = sp.N(v, 22)
    if v == 0:
        return "0.0"
    return sp.sstr(v, full_prec=False)


def emit(path):
    out = []
    out.append("// Generated by scripts/derive_sbp.py. Do not edit by hand.")
    out.append("#pragma once")
    out.append("")
    out.append("#include <array>")
    out.append("#include <span>")
    out.append("")
    out.append("namespace sbpsat::detail {")
    out.append("")
    out.append("struct ClosureTable {")
    out.append("  int interior_half_width;  // central stencil reaches i +- this")
    out.append("  int block;                // boundary rows with one-sided closure")
    out.append("  int block_cols;           // columns touched by the closure rows")
    out.append("  std::span<const double> interior;  // c_1..c_k, D_ii+j = c_j / h")
    out.append("  std::span<const double> weights;   // H_ii / h for i < block")
    out.append("  std::span<const double> rows;      // block x block_cols, row-major, times 1/h")
    out.append("};")
    out.append("")
    for k in (1, 2, 3, 4):
        H, D = closure(k)
        r, ncol = BLOCK[k], BLOCK[k] + k
        p = k + 1
        out.append(f"inline constexpr std::array<double, {k}> kInterior{p} = {{")
        out.append("    " + ", ".join(fmt(c) for c in CENTRAL[k]) + "};")
        out.append(f"inline constexpr std::array<double, {r}> kWeights{p} = {{")
        for h in H:
            out.append(f"    {fmt(h)},")
        out.append("};")
        out.append(f"inline constexpr std::array<double, {r * ncol}> kRows{p} = {{")
        for row in D:
            out.append("    " + ", ".join(fmt(v) for v in row) + ",")
        out.append("};")
        out.append("")
    out.append("}  // namespace sbpsat::detail")
    with open(path, "w") as f:
        f.write("\n".join(out) + "\n")


if __name__ == "__main__":
    if len(sys.argv) == 3 and sys.argv[1] == "--emit":
        emit(sys.argv[2])
    else:
        for k in (1, 2, 3, 4):
            H, D = closure(k)
            print("p", k + 1, "H", [fmt(h) for h in H])
            print("  D[0]", [fmt(v) for v in D[0]])
