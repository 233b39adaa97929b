"""Polynomial ergodic averages on the circle shrink toward the product of integrals."""
from __future__ import annotations

from polyrecur.averages import total_ergodic_gap
from polyrecur.config import DEFAULT_ALPHAS
from polyrecur.dynsys import RotationSystem
from polyrecur.groups import AbGroup, CharSum, Phase
from polyrecur.polyalg import parse_family


def main() -> None:
    T = AbGroup.torus()
    system = RotationSystem(T, T.point(torus=[Phase.of("alpha")]))
    chi = CharSum.character(T, (1,))
    for text, fs in (("{n, n^2}", [chi, chi]), ("{n, 2n}", [CharSum.character(T, (2,)), CharSum.character(T, (-1,))])):
        fam = parse_family(text)
        gaps = [total_ergodic_gap(system, fs, fam, 0, N, DEFAULT_ALPHAS) for N in (100, 1000, 10000)]
        print(f"{text:10}", " ".join(f"{g:.4f}" for g in gaps))


if __name__ == "__main__":
    main()
