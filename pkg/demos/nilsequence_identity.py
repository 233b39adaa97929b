"""A multicorrelation sequence on the circle equals a nilsequence term by term."""
from __future__ import annotations

from polyrecur.averages import multicorrelation
from polyrecur.dynsys import RotationSystem
from polyrecur.groups import AbGroup, CharSum, Phase
from polyrecur.nilseq import build_realization, nilsequence_term, verify_identity
from polyrecur.polyalg import PolyFamily


def main() -> None:
    T = AbGroup.torus()
    system = RotationSystem(T, T.point(torus=[Phase.of("alpha")]))
    fam = PolyFamily.of((1, 2), (0, -1, 1))
    fs = [CharSum.character(T, (m,)) for m in (-3, 1, 2)]
    R = build_realization(T, system.a, fs, fam)
    print("phi =", R.phi)
    for n in range(5):
        print(n, multicorrelation(system, fs, fam, n), nilsequence_term(R, n))
    rep = verify_identity(R, system, fs, fam, range(1000))
    print("exact agreement on n < 1000:", rep.passed)


if __name__ == "__main__":
    main()
