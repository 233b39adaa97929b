"""Polynomial configurations in finite integer sets.

A WindowSet is a subset of ``[1, N]`` held as a Python int used as a bitset:
bit ``j - 1`` is set iff ``j`` belongs to the set.  Shifting by ``p`` is a
left shift, intersections are ANDs, and counts are popcounts, so a
configuration count at ``N = 10**6`` costs a handful of big-int operations.

Densities are taken inside the window with boundary truncation; the loss
against a limit density is at most ``max_i p_i(n) / N``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable

import numpy as np

from .polyalg import PolyFamily


class NegativeShift(ValueError):
    pass


@dataclass(frozen=True)
class WindowSet:
    N: int
    bits: int
    descriptor: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if self.N < 0:
            raise ValueError("N must be nonnegative")
        if self.bits >> self.N:
            raise ValueError("bits outside [1, N]")

    @classmethod
    def from_elements(cls, N: int, elems: Iterable[int], descriptor: dict | None = None) -> "WindowSet":
        arr = np.zeros(N, dtype=bool)
        for x in elems:
            if not 1 <= x <= N:
                raise ValueError(f"{x} is outside [1, {N}]")
            arr[x - 1] = True
        return cls.from_bool(arr, descriptor or {"type": "list"})

    @classmethod
    def from_bool(cls, arr: np.ndarray, descriptor: dict | None = None) -> "WindowSet":
        arr = np.asarray(arr, dtype=bool)
        raw = np.packbits(arr, bitorder="little").tobytes()
        return cls(len(arr), int.from_bytes(raw, "little"), descriptor or {})

    @classmethod
    def full(cls, N: int) -> "WindowSet":
        return cls(N, (1 << N) - 1, {"type": "full", "N": N})

    @classmethod
    def bernoulli(cls, N: int, p: float, seed: int) -> "WindowSet":
        rng = np.random.default_rng(seed)
        return cls.from_bool(rng.random(N) < p, {"type": "bernoulli", "N": N, "p": p, "seed": seed})

    @property
    def mask(self) -> int:
        return (1 << self.N) - 1

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __contains__(self, x: int) -> bool:
        return 1 <= x <= self.N and bool(self.bits >> (x - 1) & 1)

    def __le__(self, other: "WindowSet") -> bool:
        return self.N == other.N and self.bits & ~other.bits == 0

    @property
    def density(self) -> Fraction:
        return Fraction(len(self), self.N) if self.N else Fraction(0)

    def to_bool(self) -> np.ndarray:
        raw = self.bits.to_bytes((self.N + 7) // 8, "little")
        return np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[: self.N].astype(bool)

    def elements(self) -> list[int]:
        return (np.flatnonzero(self.to_bool()) + 1).tolist()

    def complement(self) -> "WindowSet":
        return WindowSet(self.N, self.mask & ~self.bits, {"type": "complement"})


# -- counting -----------------------------------------------------------------


def _shifts(fam: PolyFamily, n: int) -> tuple[int, ...]:
    s = fam.values(n)
    if any(p < 0 for p in s):
        raise NegativeShift(f"p_i({n}) = {s} has a negative entry")
    return s


def configuration_count(L: WindowSet, fam: PolyFamily, n: int) -> int:
    """``|L ∩ (L + p_1(n)) ∩ ... ∩ (L + p_k(n)) ∩ [1, N]|``."""
    m = L.bits
    for p in _shifts(fam, n):
        if p >= L.N:
            return 0
        m &= L.bits << p
    return (m & L.mask).bit_count()


@dataclass(frozen=True)
class CylinderQuery:
    shifts: tuple[int, ...]
    values: tuple[int, ...]

    def __post_init__(self):
        if not self.shifts or len(self.shifts) != len(self.values):
            raise ValueError("need matching, nonempty shift and bit lists")
        if any(v not in (0, 1) for v in self.values):
            raise ValueError("bits must be 0 or 1")


def cylinder_density(L: WindowSet, q: CylinderQuery) -> Fraction:
    """``|(L^{i_1} + n_1) ∩ ... ∩ (L^{i_r} + n_r) ∩ [1, N]| / N`` with ``L^0`` the window complement."""
    N = L.N
    base = L.to_bool()
    out = np.ones(N, dtype=bool)
    for n, i in zip(q.shifts, q.values):
        src = base if i else ~base
        shifted = np.zeros(N, dtype=bool)
        if n >= 0:
            if n < N:
                shifted[n:] = src[: N - n]
        elif -n < N:
            shifted[: N + n] = src[-n:]
        out &= shifted
    return Fraction(int(out.sum()), N)


@dataclass
class CorrespondenceReport:
    n: int
    shifts: tuple[int, ...]
    count_density: Fraction
    cylinder: Fraction

    @property
    def equal(self) -> bool:
        return self.count_density == self.cylinder


def correspondence_check(L: WindowSet, fam: PolyFamily, n: int) -> CorrespondenceReport:
    """Configuration density against the cylinder ``{x_0 = 1, x_{p_1(n)} = 1, ...}``."""
    s = _shifts(fam, n)
    q = CylinderQuery((0,) + s, (1,) * (len(s) + 1))
    return CorrespondenceReport(n, s, Fraction(configuration_count(L, fam, n), L.N), cylinder_density(L, q))


@dataclass
class ScanReport:
    good: list[int]
    max_gap: int | None
    densities: dict[int, Fraction]
    threshold: Fraction


def _as_fraction(x) -> Fraction:
    return Fraction(str(x)) if isinstance(x, float) else Fraction(x)


def good_n_scan(L: WindowSet, fam: PolyFamily, eps, n_range: Iterable[int]) -> ScanReport:
    """n with configuration density at least ``(|L|/N)^{k+1} - eps``; max gap between them."""
    threshold = L.density ** (fam.k + 1) - _as_fraction(eps)
    good, dens = [], {}
    for n in n_range:
        d = Fraction(configuration_count(L, fam, n), L.N)
        dens[n] = d
        if d >= threshold:
            good.append(n)
    gaps = [b - a for a, b in zip(good, good[1:])]
    return ScanReport(good, max(gaps) if gaps else None, dens, threshold)


def exists_good_n(L: WindowSet, fam: PolyFamily, eps, bound: int, delta=None) -> int | None:
    """First ``n <= bound`` with at least ``(1 - eps) delta^{k+1} N`` configurations, else None."""
    delta = L.density if delta is None else _as_fraction(delta)
    if len(L) < delta * L.N:
        raise ValueError("set is smaller than delta * N")
    need = (1 - _as_fraction(eps)) * delta ** (fam.k + 1) * L.N
    for n in range(1, bound + 1):
        if configuration_count(L, fam, n) >= need:
            return n
    return None


# -- normal words -------------------------------------------------------------


def champernowne_bits(N: int) -> np.ndarray:
    """First N binary digits of 1, 10, 11, 100, ... concatenated."""
    chunks, total, i = [], 0, 1
    while total < N:
        b = format(i, "b")
        chunks.append(b)
        total += len(b)
        i += 1
    s = "".join(chunks)[:N].encode()
    return np.frombuffer(s, dtype=np.uint8) == ord("1")


def normal_word(N: int, source: str = "champernowne", seed: int | None = None) -> WindowSet:
    if source == "champernowne":
        return WindowSet.from_bool(champernowne_bits(N), {"type": "champernowne", "N": N})
    if source == "seeded-coin":
        if seed is None:
            raise ValueError("seeded-coin needs a seed")
        return WindowSet.bernoulli(N, 0.5, seed)
    raise ValueError(f"unknown source {source!r}")


def pattern_frequencies(L: WindowSet, k: int) -> dict[str, float]:
    """Sliding-window frequency of each length-k 0/1 pattern."""
    arr = L.to_bool().astype(np.int64)
    codes = np.zeros(len(arr) - k + 1, dtype=np.int64)
    for j in range(k):
        codes = codes * 2 + arr[j : len(arr) - k + 1 + j]
    counts = np.bincount(codes, minlength=2**k)
    total = counts.sum()
    return {format(c, f"0{k}b"): counts[c] / total for c in range(2**k)}


@dataclass
class TightnessReport:
    target: float
    deviations: dict[int, float]
    densities: dict[int, Fraction]
    rejected: list[int]

    @property
    def max_deviation(self) -> float:
        return max(self.deviations.values()) if self.deviations else 0.0


def tightness_report(L: WindowSet, fam: PolyFamily, n_range: Iterable[int]) -> TightnessReport:
    """Relative deviation of configuration densities from ``2^{-(k+1)}``.

    n whose shifts are zero or repeated are listed in ``rejected``: the
    product formula only applies to nonzero distinct shifts.
    """
    target = 2.0 ** -(fam.k + 1)
    dev, dens, rejected = {}, {}, []
    for n in n_range:
        s = fam.values(n)
        if 0 in s or len(set(s)) != len(s):
            rejected.append(n)
            continue
        d = Fraction(configuration_count(L, fam, n), L.N)
        dens[n] = d
        dev[n] = abs(float(d) / target - 1.0)
    return TightnessReport(target, dev, dens, rejected)


def banach_density_estimate(L: WindowSet, length: int) -> Fraction:
    """``max_M |L ∩ [M, M + length)| / length`` over windows inside ``[1, N]``."""
    arr = L.to_bool().astype(np.int64)
    if length > len(arr) or length < 1:
        raise ValueError("window longer than the set")
    c = np.concatenate([[0], np.cumsum(arr)])
    return Fraction(int(np.max(c[length:] - c[:-length])), length)


# -- set files ----------------------------------------------------------------


def write_set(L: WindowSet, path, fmt: str = "rle", comment: str | None = None) -> None:
    """Run-length (``start length`` lines) or one integer per line, after ``#`` header lines."""
    lines = [f"# N={L.N} format={fmt}"]
    if comment:
        lines.append(comment if comment.startswith("#") else "# " + comment)
    if fmt == "rle":
        arr = np.concatenate([[False], L.to_bool(), [False]]).astype(np.int8)
        edges = np.flatnonzero(np.diff(arr))
        for start, stop in zip(edges[::2], edges[1::2]):
            lines.append(f"{start + 1} {stop - start}")
    elif fmt == "list":
        lines.extend(str(x) for x in L.elements())
    else:
        raise ValueError(f"unknown set format {fmt!r}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_set(path) -> WindowSet:
    header: dict[str, str] = {}
    body = []
    for ln in Path(path).read_text().splitlines():
        if ln.startswith("#"):
            if not header:
                header = dict(kv.split("=", 1) for kv in ln.lstrip("# ").split() if "=" in kv)
        elif ln.strip():
            body.append(ln.split())
    fmt = header.get("format", "rle" if body and len(body[0]) == 2 else "list")
    if fmt == "rle":
        elems = [s + j for s, n in ((int(a), int(b)) for a, b in body) for j in range(n)]
    else:
        elems = [int(x[0]) for x in body]
    N = int(header["N"]) if "N" in header else max(elems, default=0)
    return WindowSet.from_elements(N, elems, {"type": "file", "path": str(path)})


def set_from_descriptor(desc: dict, seed: int | None = None) -> WindowSet:
    kind = desc["type"]
    if kind == "full":
        return WindowSet.full(int(desc["N"]))
    if kind == "list":
        return WindowSet.from_elements(int(desc["N"]), desc["elements"])
    if kind == "bernoulli":
        s = desc.get("seed", seed)
        if s is None:
            raise ValueError("randomized set needs a seed")
        return WindowSet.bernoulli(int(desc["N"]), float(desc.get("p", 0.5)), int(s))
    if kind == "champernowne":
        return normal_word(int(desc["N"]), "champernowne")
    if kind == "file":
        return read_set(desc["path"])
    raise ValueError(f"unknown set type {kind!r}")

