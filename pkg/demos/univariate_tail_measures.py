"""Tour of the univariate tail measures.

Walks a few extreme-value models through VaR, RVaR and TVaR, shows where
TVaR stops existing while RVaR keeps going, and checks the heavy-tail
TVaR/VaR ratio against its limit.
"""

import math

from rvar.marginals import (
    DIVERGES,
    GEV,
    Exponential,
    GPDTail,
    LevelRange,
    ratio_limit,
    tvar_var_ratio,
    uni_rvar,
    uni_tvar,
    uni_var,
)


def fmt(v):
    if v is DIVERGES:
        return "DIVERGES"
    return f"{v:.6f}"


def main():
    band = LevelRange(0.95, 0.99)

    print("Block-maxima models: same location and scale, different tail shape.")
    print(f"{'model':<22} {'VaR 0.99':>12} {'RVaR [.95,.99]':>16} {'TVaR 0.99':>12}")
    for xi in (-0.5, 0.0, 0.5, 1.2):
        m = GEV(0.0, 1.0, xi)
        print(
            f"GEV(0, 1, xi={xi:<5}){'':<2}"
            f"{uni_var(m, 0.99):>12.6f} {fmt(uni_rvar(m, band)):>16} {fmt(uni_tvar(m, 0.99)):>12}"
        )
    print()
    print("At xi >= 1 the tail mean is infinite, so TVaR prints DIVERGES while")
    print("the band average [0.95, 0.99] stays finite. That trade is the point")
    print("of a range measure.")
    print()

    print("Threshold-exceedance model fitted above u=5 with exceedance rate 0.15:")
    g = GPDTail(5.0, 2.0, 0.25, 0.15)
    for a in (0.9, 0.99, 0.999):
        print(f"  VaR_{a}: {uni_var(g, a):10.4f}   TVaR_{a}: {uni_tvar(g, a):10.4f}")
    print()

    print("TVaR/VaR far in the tail approaches 1/(1-xi) for heavy tails, 1 otherwise:")
    for m in (GPDTail(8.0, 2.0, 0.25, 0.05), GPDTail(4.0, 2.0, 0.5, 0.05), GEV(0.0, 1.0, -0.5)):
        a = 1.0 - 1e-6
        print(
            f"  {type(m).__name__} xi={m.xi:<5} ratio at alpha=1-1e-6: "
            f"{tvar_var_ratio(m, a):.6f}  limit: {ratio_limit(m):.6f}"
        )
    print()

    lam = 0.5
    e = Exponential(lam)
    print(f"Exponential(lam={lam}) sanity: TVaR - VaR should equal 1/lam = {1 / lam}:")
    print(f"  {uni_tvar(e, 0.95) - uni_var(e, 0.95):.12f}")
    assert math.isclose(uni_tvar(e, 0.95) - uni_var(e, 0.95), 1 / lam, rel_tol=1e-12)


if __name__ == "__main__":
    main()
