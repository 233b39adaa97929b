"""Return times of a set to itself along {n, n^2} in a cyclic rotation."""
from __future__ import annotations

from polyrecur.averages import khintchine_scan
from polyrecur.dynsys import RotationSystem
from polyrecur.groups import AbGroup, indicator
from polyrecur.polyalg import parse_family


def main() -> None:
    G = AbGroup.cyclic(7)
    system = RotationSystem(G, G.point((3,)))
    A = indicator(G, [(0,), (1,), (3,)])
    rep = khintchine_scan(system, A, parse_family("{n, n^2}"), 0.02, range(1, 50))
    print("mu(A)^3 =", (3 / 7) ** 3)
    print("good n:", rep.good)
    print("largest gap:", rep.max_gap)


if __name__ == "__main__":
    main()
