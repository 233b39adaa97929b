"""Integer-valued polynomials in the binomial basis and rational independence."""
from __future__ import annotations

from polyrecur.polyalg import dependence_witness, evaluate, is_rationally_independent, parse_family, parse_polynomial


def main() -> None:
    p = parse_polynomial("n^2/2 - n/2")
    print("n(n-1)/2 =", p, "values:", [evaluate(p, n) for n in range(6)])
    for text in ("{n, n^2}", "{n^2, n^3}", "{n, 2n}", "{n, n^2, n + n^2}"):
        fam = parse_family(text)
        if is_rationally_independent(fam):
            print(f"{text:22} independent")
        else:
            print(f"{text:22} dependent, witness {dependence_witness(fam)}")


if __name__ == "__main__":
    main()
