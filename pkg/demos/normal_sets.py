"""Configuration counts in random and Champernowne words."""
from __future__ import annotations

from polyrecur.combinat import normal_word, pattern_frequencies, tightness_report
from polyrecur.config import DEFAULT_SEED
from polyrecur.polyalg import parse_family


def main() -> None:
    N = 10**6
    for name, word in (("coin", normal_word(N, "seeded-coin", DEFAULT_SEED)), ("champernowne", normal_word(N))):
        freqs = pattern_frequencies(word, 2)
        rep = tightness_report(word, parse_family("{n, n^2}"), range(2, 31))
        print(f"{name:13} density={float(word.density):.4f} 2-patterns={[round(float(f), 4) for f in freqs.values()]}")
        print(f"{'':13} target={rep.target} max relative deviation={rep.max_deviation:.4f}")


if __name__ == "__main__":
    main()
