"""Points x[M] and x+[M] of {0,1}^Z on finite windows.

A time t is marked in x[M] when it is an expanding time whose length
vector lies in M; x+[M] uses expanding times with positive digits only.
Windows store bits for positions -N..N of the shifted point S^shift x,
where (S^k x)_t = x_{t+k}.  Shifting only moves an offset, so windows
around astronomically large times cost the same as windows around 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .expanding import Expansion, ExpandingSystem, expand, ip_in_interval
from .labels import Label, NVector, minus


# ---------------------------------------------------------------------------
# partitions of N


@dataclass(frozen=True)
class PartitionScheme:
    """A partition of {1, 2, ...} into infinite blocks D_1, D_2, ...

    ``support`` sends n to the index of its block, ``Q(l, i)`` is the i-th
    smallest member of D_l.
    """

    name: str
    support: Callable[[int], int]
    Q: Callable[[int, int], int]

    def block(self, ell: int, count: int) -> list[int]:
        return [self.Q(ell, i) for i in range(1, count + 1)]

    def min_block(self, ell: int) -> int:
        return self.Q(ell, 1)


def _two_adic_support(n: int) -> int:
    if n < 1:
        raise ValueError("support map is defined on positive integers")
    return (n & -n).bit_length()


def default_partition() -> PartitionScheme:
    """D_l = numbers whose 2-adic valuation is l - 1."""
    return PartitionScheme("2-adic", _two_adic_support, lambda ell, i: (1 << (ell - 1)) * (2 * i - 1))


PARTITIONS = {"2-adic": default_partition}


def partition_by_name(name: str) -> PartitionScheme:
    try:
        return PARTITIONS[name]()
    except KeyError:
        raise ValueError(f"unknown partition {name!r}; known: {', '.join(PARTITIONS)}") from None


def length_vector_of(part: PartitionScheme, e: Expansion) -> NVector:
    d: dict[int, int] = {}
    for j in e.digits:
        ell = part.support(abs(j))
        d[ell] = d.get(ell, 0) + 1
    return NVector(d.items())


def length_vector(sys: ExpandingSystem, part: PartitionScheme, t: int) -> NVector | None:
    """r(t), or None when t is not an expanding time."""
    e = expand(sys, t)
    return None if e is None else length_vector_of(part, e)


def in_A(sys: ExpandingSystem, part: PartitionScheme, M: Label, t: int, mode: str = "full") -> bool:
    e = expand(sys, t)
    if e is None or (mode == "plus" and any(j < 0 for j in e.digits)):
        return False
    return M.contains(length_vector_of(part, e))


# ---------------------------------------------------------------------------
# windows


@dataclass(frozen=True)
class SubshiftWindow:
    N: int
    shift: int
    mode: str
    bits: np.ndarray = field(compare=False, repr=False)
    label_name: str = ""

    def __post_init__(self):
        self.bits.setflags(write=False)

    def bit(self, t: int) -> int:
        if abs(t) > self.N:
            raise IndexError(f"position {t} outside [-{self.N}, {self.N}]")
        return int(self.bits[t + self.N])

    def ones(self) -> list[int]:
        return [int(i) - self.N for i in np.flatnonzero(self.bits)]

    def restrict(self, N: int) -> "SubshiftWindow":
        if N > self.N:
            raise ValueError("cannot widen a window")
        return SubshiftWindow(N, self.shift, self.mode, self.bits[self.N - N : self.N + N + 1].copy(), self.label_name)

    def agrees(self, other: "SubshiftWindow", N: int | None = None) -> bool:
        N = min(self.N, other.N) if N is None else N
        a = self.bits[self.N - N : self.N + N + 1]
        b = other.bits[other.N - N : other.N + N + 1]
        return bool(np.array_equal(a, b))

    def agreement_radius(self, other: "SubshiftWindow") -> int:
        """Largest R with agreement on [-R, R]; -1 when position 0 differs."""
        N = min(self.N, other.N)
        a = self.bits[self.N - N : self.N + N + 1]
        b = other.bits[other.N - N : other.N + N + 1]
        diff = np.flatnonzero(a != b)
        if diff.size == 0:
            return N
        return int(np.min(np.abs(diff - N))) - 1

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SubshiftWindow)
            and (self.N, self.shift, self.mode) == (other.N, other.shift, other.mode)
            and bool(np.array_equal(self.bits, other.bits))
        )

    def __hash__(self) -> int:
        return hash((self.N, self.shift, self.mode, self.bits.tobytes()))

    def to_json(self) -> dict:
        return {"N": self.N, "shift": str(self.shift), "mode": self.mode, "ones": [str(t) for t in self.ones()]}

    def ascii(self) -> str:
        row = "".join("#" if b else "." for b in self.bits)
        caret = " " * self.N + "^"
        return row + "\n" + caret

    def pgm(self) -> bytes:
        """One-row binary PGM with maxval 1."""
        header = f"P5\n{len(self.bits)} 1\n1\n".encode("ascii")
        return header + self.bits.astype(np.uint8).tobytes()


def point_window(
    sys: ExpandingSystem,
    part: PartitionScheme,
    M: Label,
    N: int,
    mode: str = "full",
    shift: int = 0,
) -> SubshiftWindow:
    """Bits of S^shift x[M] (or x+[M]) on [-N, N]."""
    if N < 0:
        raise ValueError("window radius must be >= 0")
    if mode not in ("full", "plus"):
        raise ValueError(f"mode must be full or plus, got {mode!r}")
    bits = np.zeros(2 * N + 1, dtype=np.uint8)
    if not M.is_empty():
        listing = ip_in_interval(sys, shift - N, shift + N, "positive" if mode == "plus" else "full")
        for s in listing.members:
            r = length_vector(sys, part, s)
            if M.contains(r):
                bits[s - shift + N] = 1
    return SubshiftWindow(N, shift, mode, bits, getattr(M, "name", ""))


@dataclass(frozen=True)
class SymZer:
    symmetric: bool
    zer: bool

    def to_json(self) -> dict:
        return {"symmetric": self.symmetric, "zer": self.zer}


def sym_zer_classify(w: SubshiftWindow) -> SymZer:
    """Symmetry about position 0, and the ZER shape (1 at 0, zeros at negatives)."""
    sym = bool(np.array_equal(w.bits, w.bits[::-1]))
    zer = bool(w.bits[w.N] == 1 and not w.bits[: w.N].any())
    return SymZer(sym, zer)


# ---------------------------------------------------------------------------
# locality


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class LocalityReport:
    verified: bool
    t: int
    N: int
    r: NVector
    around_t: tuple[int, ...]
    translated: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "verified": self.verified,
            "t": str(self.t),
            "N": self.N,
            "r": self.r.to_json(),
            "around_t": [str(x) for x in self.around_t],
            "translated": [str(x) for x in self.translated],
        }


def locality_precondition(sys: ExpandingSystem, e: Expansion, N: int, rule: str = "magnitude") -> bool:
    """Whether the window [t-N, t+N] only sees extensions of t.

    "literal" asks 2N <= |j_r|; "magnitude" asks b*N <= (b-2)*k(|j_r|), which
    the literal form implies and which is what the extension criterion needs.
    """
    if e.length == 0:
        return True
    jr = abs(e.last)
    if rule == "literal":
        return 2 * N <= jr
    if rule == "magnitude":
        return sys.b * N <= (sys.b - 2) * sys.kabs(jr)
    raise ValueError(f"unknown precondition rule {rule!r}")


def locality_check(
    sys: ExpandingSystem,
    part: PartitionScheme,
    M: Label,
    t: int,
    N: int,
    rule: str = "magnitude",
) -> LocalityReport:
    """Compare [t-N, t+N] ∩ A[M] with t + ([-N, N] ∩ A[M - r(t)])."""
    e = expand(sys, t)
    if e is None:
        raise PreconditionError(f"{t} is not an expanding time")
    r = length_vector_of(part, e)
    if not M.contains(r):
        raise PreconditionError(f"{t} is not in A[M]: r(t) = {r!r}")
    if not locality_precondition(sys, e, N, rule):
        raise PreconditionError(f"window radius {N} too large for last digit {e.last} ({rule} rule)")
    around = point_window(sys, part, M, N, "full", t).ones()
    moved = point_window(sys, part, minus(M, r), N, "full", 0).ones()
    return LocalityReport(around == moved, t, N, r, tuple(t + x for x in around), tuple(t + x for x in moved))


# ---------------------------------------------------------------------------
# asymptotics


def asymptotic_times(part: PartitionScheme, sys: ExpandingSystem, r: NVector, count: int, floor0: int = 1) -> list[Expansion]:
    """Positive times t^i with r(t^i) = r whose smallest digit grows with i.

    Every digit is the smallest member of its block at or above a floor;
    the floor starts at floor0 and then sits just above the previous
    smallest digit, so the times are distinct.
    """
    if r.is_zero():
        raise ValueError("r must be positive")
    out = []
    floor = floor0
    for _ in range(count):
        digits = []
        for ell, c in r.entries:
            q = 1
            while part.Q(ell, q) < floor:
                q += 1
            digits.extend(part.Q(ell, q + k) for k in range(c))
        out.append(Expansion.from_digits(sys, sorted(digits, reverse=True)))
        floor = min(digits) + 1
    return out


@dataclass(frozen=True)
class AsymptoticRow:
    t: int
    last_index: int
    radius: int
    precondition: bool

    def to_json(self) -> dict:
        return {"t": str(self.t), "last_index": self.last_index, "radius": self.radius, "precondition": self.precondition}


@dataclass(frozen=True)
class AsymptoticReport:
    r: NVector
    N: int
    rows: tuple[AsymptoticRow, ...]

    @property
    def verified(self) -> bool:
        return all(row.radius >= self.N for row in self.rows if row.precondition)

    def to_json(self) -> dict:
        return {"r": self.r.to_json(), "N": self.N, "verified": self.verified, "rows": [x.to_json() for x in self.rows]}


def asymptotic_check(
    sys: ExpandingSystem,
    part: PartitionScheme,
    M: Label,
    r: NVector,
    count: int = 10,
    N: int = 5,
    radius_cap: int | None = None,
) -> AsymptoticReport:
    """Agreement radius of S^{t^i} x[M] with x[M - r] along times t^i with r(t^i) = r."""
    cap = N if radius_cap is None else radius_cap
    target = point_window(sys, part, minus(M, r), cap)
    rows = []
    for e in asymptotic_times(part, sys, r, count):
        w = point_window(sys, part, M, cap, "full", e.value)
        rows.append(AsymptoticRow(e.value, abs(e.last), w.agreement_radius(target), abs(e.last) > 2 * N))
    return AsymptoticReport(r, N, tuple(rows))


@dataclass(frozen=True)
class NonAsymptoticWitness:
    r: NVector
    keeps: int  # 1 or 2: which label contains r
    times: tuple[int, ...]
    bits_keep: tuple[int, ...]
    bits_drop: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "r": self.r.to_json(),
            "keeps": self.keeps,
            "times": [str(t) for t in self.times],
            "bits_keep": list(self.bits_keep),
            "bits_drop": list(self.bits_drop),
        }


def nonasymptotic_witness(
    sys: ExpandingSystem,
    part: PartitionScheme,
    M1: Label,
    M2: Label,
    N: int,
    count: int = 5,
) -> NonAsymptoticWitness | None:
    """A positive r in one label but not the other, with times along which the points separate.

    Along the times t^i the shifted point of the label holding r keeps a 1 at
    position 0, while the other one converges to the fixed point e because
    its translate by r is empty.  None is returned only for the pair {∅, 0}.
    """
    w1, w2 = M1.window(N), M2.window(N)
    if w1 == w2:
        raise PreconditionError(f"labels agree on B_{N}")
    for keeps, A, B, wa in ((1, M1, M2, w1), (2, M2, M1, w2)):
        for r in sorted(wa.members(), key=NVector.norm_lex_key):
            if r.is_zero() or B.contains(r):
                continue
            times = asymptotic_times(part, sys, r, count)
            bk = tuple(int(in_A(sys, part, A, e.value)) for e in times)
            bd = tuple(int(in_A(sys, part, B, e.value)) for e in times)
            return NonAsymptoticWitness(r, keeps, tuple(e.value for e in times), bk, bd)
    return None


# ---------------------------------------------------------------------------
# injectivity


def minimal_time(sys: ExpandingSystem, part: PartitionScheme, m: NVector) -> Expansion:
    """The positive time with length vector m using the smallest digits of each block."""
    digits = [part.Q(ell, i) for ell, c in m.entries for i in range(1, c + 1)]
    return Expansion.from_digits(sys, sorted(digits, reverse=True))


@dataclass(frozen=True)
class InjectivityReport:
    R: int
    m: NVector
    t: int
    bit1: int
    bit2: int

    @property
    def verified(self) -> bool:
        return self.bit1 != self.bit2 and abs(self.t) <= self.R

    def to_json(self) -> dict:
        return {"R": str(self.R), "m": self.m.to_json(), "t": str(self.t), "bits": [self.bit1, self.bit2], "verified": self.verified}


def injectivity_radius(sys: ExpandingSystem, part: PartitionScheme, M1: Label, M2: Label, N: int) -> InjectivityReport:
    """R = t(N·χ[1,N]) bounds every t(m), m in B_N; x[M1] and x[M2] differ at t(m) for m in the difference."""
    w1, w2 = M1.window(N), M2.window(N)
    if w1 == w2:
        raise PreconditionError(f"labels agree on B_{N}")
    R = minimal_time(sys, part, NVector((ell, N) for ell in range(1, N + 1))).value
    diff = (w1.members() - w2.members()) | (w2.members() - w1.members())
    m = min(diff, key=NVector.norm_lex_key)
    t = minimal_time(sys, part, m).value
    return InjectivityReport(R, m, t, int(in_A(sys, part, M1, t)), int(in_A(sys, part, M2, t)))
