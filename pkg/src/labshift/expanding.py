"""Numeration of integers by a b-expanding function.

A b-expanding function is an odd map k : Z -> Z with

    k(n+1) > b * (k(0) + k(1) + ... + k(n))     for n >= 0.

Every integer that is a sum of values k(j) at distinct |j| (an expanding
time) has exactly one such representation, its expansion.  This module
recognizes expanding times, splits expansions, enumerates the expanding
times in an interval, and counts them for density estimates.

All arithmetic is exact: Python integers, and the recognition bracket

    (b-1)/b * k(n) <= |t| <= (b+1)/b * k(n)

is tested with the denominators cleared.
"""

from __future__ import annotations

import math
import threading
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

PRESETS = {
    "strict": {"b": 5, "base": 7},
    "paper": {"b": 3, "base": 4},
}
DEFAULT_PRESET = "strict"
DEFAULT_N_MAX = 64


class GrowthViolation(ValueError):
    """The digit function grows too slowly for the chosen b."""

    def __init__(self, n: int, lhs: int, rhs: int):
        super().__init__(
            f"growth fails at n={n}: k({n + 1})={lhs} is not > b*sum(k(0..{n}))={rhs}"
        )
        self.n = n
        self.lhs = lhs
        self.rhs = rhs


class FirstDigitTooSmall(ValueError):
    """k(1) < b + 1."""


class DepthWarning(UserWarning):
    """An interval listing may be incomplete at the requested depth."""


def _sign(n: int) -> int:
    return (n > 0) - (n < 0)


class ExpandingSystem:
    """Parameters (b, k) with a lazily extended, lock-protected memo of k(n).

    ``digit_base`` gives k(n) = sign(n) * digit_base**|n|.  Alternatively
    ``table`` maps n >= 1 to k(n) > 0 and is extended oddly.
    """

    def __init__(
        self,
        b: int,
        digit_base: int | None = None,
        table: Callable[[int], int] | None = None,
        preset_name: str | None = None,
        n_max: int = DEFAULT_N_MAX,
    ):
        if b < 3:
            raise ValueError(f"b must be >= 3, got {b}")
        if (digit_base is None) == (table is None):
            raise ValueError("give exactly one of digit_base or table")
        if digit_base is not None and digit_base < 2:
            raise ValueError(f"digit_base must be >= 2, got {digit_base}")
        self.b = b
        self.digit_base = digit_base
        self.preset_name = preset_name
        self._table = table
        self._lock = threading.Lock()
        self._k = [0]  # k(0), k(1), ...
        self._prefix = [0]  # prefix[n] = k(0) + ... + k(n)
        self._extend(n_max + 1)
        self._verify(n_max)

    # -- construction helpers -------------------------------------------------

    def _raw(self, n: int) -> int:
        if self.digit_base is not None:
            return self.digit_base**n
        return int(self._table(n))

    def _extend(self, n: int) -> None:
        if n < len(self._k):
            return
        with self._lock:
            while len(self._k) <= n:
                m = len(self._k)
                v = self._raw(m)
                self._k.append(v)
                self._prefix.append(self._prefix[-1] + v)

    def _verify(self, n_max: int) -> None:
        for n in range(n_max + 1):
            lhs, rhs = self._k[n + 1], self.b * self._prefix[n]
            if lhs <= rhs:
                raise GrowthViolation(n, lhs, rhs)
        if self._k[1] < self.b + 1:
            raise FirstDigitTooSmall(f"k(1)={self._k[1]} < b+1={self.b + 1}")

    # -- values -----------------------------------------------------------------

    def k(self, n: int) -> int:
        a = abs(n)
        self._extend(a)
        return _sign(n) * self._k[a]

    def kabs(self, n: int) -> int:
        self._extend(n)
        return self._k[n]

    def sk(self, n: int) -> int:
        """1 for n <= 1, else k(1) + ... + k(n-1)."""
        if n <= 1:
            return 1
        self._extend(n)
        return self._prefix[n - 1]

    def partial_sum(self, n: int) -> int:
        """k(0) + ... + k(n) for n >= 0."""
        self._extend(n)
        return self._prefix[n]

    def leading_index(self, a: int) -> int | None:
        """The unique n >= 1 with (b-1) k(n) <= b a <= (b+1) k(n), if any."""
        if a <= 0:
            return None
        b = self.b
        ba = b * a
        hi = 1
        while (b + 1) * self.kabs(hi) < ba:
            hi *= 2
        lo = 1
        while lo < hi:  # smallest n with (b+1) k(n) >= b a
            mid = (lo + hi) // 2
            if (b + 1) * self.kabs(mid) >= ba:
                hi = mid
            else:
                lo = mid + 1
        return lo if (b - 1) * self.kabs(lo) <= ba else None

    def depth_for(self, radius: int) -> int:
        """Largest n whose leading bracket can reach |t| <= radius (at least 1)."""
        n = 1
        while (self.b - 1) * self.kabs(n + 1) <= self.b * radius:
            n += 1
        return n

    def complete_radius(self, depth: int) -> Fraction:
        """Every expanding time with |t| below this has digits of size <= depth."""
        return Fraction((self.b - 1) * self.kabs(depth + 1), self.b)

    # -- identity / JSON -----------------------------------------------------------

    def to_json(self) -> dict:
        if self.preset_name is not None:
            return {"preset": self.preset_name}
        if self.digit_base is not None:
            return {"b": self.b, "base": self.digit_base}
        return {"b": self.b, "table": "custom"}

    def __repr__(self) -> str:
        return f"ExpandingSystem({self.to_json()})"


def build_system(
    preset: str | None = None,
    *,
    b: int | None = None,
    base: int | None = None,
    table: Callable[[int], int] | None = None,
    n_max: int = DEFAULT_N_MAX,
) -> ExpandingSystem:
    """Build from a preset name ("strict", "paper") or explicit parameters."""
    if preset is None and b is None:
        preset = DEFAULT_PRESET
    if preset is not None:
        if preset not in PRESETS:
            raise ValueError(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}")
        p = PRESETS[preset]
        b = p["b"] if b is None else b
        base = p["base"] if base is None and table is None else base
        name = preset if (b, base) == (p["b"], p["base"]) and table is None else None
        return ExpandingSystem(b, digit_base=base, table=table, preset_name=name, n_max=n_max)
    return ExpandingSystem(b, digit_base=base, table=table, n_max=n_max)


def system_from_json(obj: dict) -> ExpandingSystem:
    if "preset" in obj:
        return build_system(obj["preset"])
    return build_system(b=int(obj["b"]), base=int(obj["base"]))


# ---------------------------------------------------------------------------
# Expansions


@dataclass(frozen=True)
class Expansion:
    digits: tuple[int, ...]
    value: int

    def __post_init__(self):
        mags = [abs(j) for j in self.digits]
        if any(m == 0 for m in mags) or any(x <= y for x, y in zip(mags, mags[1:])):
            raise ValueError(f"digits must have strictly decreasing nonzero |j|: {self.digits}")

    @property
    def length(self) -> int:
        return len(self.digits)

    @property
    def last(self) -> int | None:
        """|j_r|, or None for the empty expansion."""
        return abs(self.digits[-1]) if self.digits else None

    @classmethod
    def from_digits(cls, sys: ExpandingSystem, digits: Iterable[int]) -> "Expansion":
        d = tuple(digits)
        return cls(d, sum(sys.k(j) for j in d))

    def to_json(self) -> dict:
        return {"t": str(self.value), "digits": list(self.digits)}


EMPTY = Expansion((), 0)


def expand(sys: ExpandingSystem, t: int) -> Expansion | None:
    """The unique expansion of t, or None when t is not an expanding time."""
    digits: list[int] = []
    rest, bound = t, None
    while rest != 0:
        n = sys.leading_index(abs(rest))
        if n is None or (bound is not None and n >= bound):
            return None
        j = n if rest > 0 else -n
        digits.append(j)
        rest -= sys.k(j)
        bound = n
    return Expansion(tuple(digits), t)


def is_expanding(sys: ExpandingSystem, t: int, positive: bool = False) -> bool:
    e = expand(sys, t)
    if e is None:
        return False
    return not positive or all(j > 0 for j in e.digits)


def truncate(sys: ExpandingSystem, e: Expansion, r: int) -> tuple[Expansion, Expansion]:
    """Split an expansion after r digits into (truncation, residual)."""
    if not 0 <= r <= e.length:
        raise IndexError(f"truncation index {r} outside [0, {e.length}]")
    head = Expansion.from_digits(sys, e.digits[:r])
    return head, Expansion(e.digits[r:], e.value - head.value)


@dataclass(frozen=True)
class NeighborReport:
    ok: bool
    t: int
    index: int
    minus: int
    plus: int
    minus_expanding: bool
    plus_expanding: bool


def neighbor_exclusion(sys: ExpandingSystem, e: Expansion, index: int) -> NeighborReport:
    """Check t - k(j_i) is expanding and t + k(j_i) is not (1-based i)."""
    if not 1 <= index <= e.length:
        raise IndexError(f"digit index {index} outside [1, {e.length}]")
    kj = sys.k(e.digits[index - 1])
    lo, hi = e.value - kj, e.value + kj
    lo_ok, hi_ok = is_expanding(sys, lo), is_expanding(sys, hi)
    return NeighborReport(lo_ok and not hi_ok, e.value, index, lo, hi, lo_ok, hi_ok)


def extends(s: Expansion, t: Expansion) -> bool:
    """s extends t when t's digits are a prefix of s's."""
    return s.digits[: t.length] == t.digits


# ---------------------------------------------------------------------------
# Interval enumeration


def _sumset(choices: Sequence[tuple[int, ...]], lo: int, hi: int) -> list[int]:
    """Sorted distinct sums c_D + ... + c_1 (c_n in choices[n-1]) lying in [lo, hi].

    Works from the largest magnitude down and prunes with the largest
    absolute value the remaining positions can still contribute.
    """
    depth = len(choices)
    reach = [0] * (depth + 1)  # reach[n] = max |sum| over positions 1..n
    for n in range(1, depth + 1):
        reach[n] = reach[n - 1] + max(abs(c) for c in choices[n - 1])
    out: set[int] = set()
    stack = [(depth, 0)]
    while stack:
        n, acc = stack.pop()
        if n == 0:
            if lo <= acc <= hi:
                out.add(acc)
            continue
        r = reach[n - 1]
        for c in choices[n - 1]:
            v = acc + c
            if v + r >= lo and v - r <= hi:
                stack.append((n - 1, v))
    return sorted(out)


@dataclass(frozen=True)
class IntervalListing:
    lo: int
    hi: int
    mode: str
    members: tuple[int, ...]
    depth: int
    complete_radius: Fraction
    S: tuple[int, ...] = ()

    @property
    def complete(self) -> bool:
        return max(abs(self.lo), abs(self.hi)) < self.complete_radius

    def to_json(self) -> dict:
        out = {
            "lo": str(self.lo),
            "hi": str(self.hi),
            "mode": self.mode,
            "members": [str(m) for m in self.members],
        }
        if self.mode == "restricted":
            out["S"] = list(self.S)
            out["depth"] = self.depth
        return out


def _check_S(S: Sequence[int]) -> tuple[int, ...]:
    S = tuple(int(a) for a in S)
    mags = [abs(a) for a in S]
    if not S or mags[0] == 0 or any(x >= y for x, y in zip(mags, mags[1:])):
        raise ValueError(f"S must be a nonempty absolute increasing sequence, got {S}")
    return S


def ip_in_interval(
    sys: ExpandingSystem,
    lo: int,
    hi: int,
    mode: str = "full",
    S: Sequence[int] | None = None,
    depth: int | None = None,
) -> IntervalListing:
    """Expanding times in [lo, hi].

    mode "full" lists IP(k), "positive" lists IP+(k) (positive digits only),
    "restricted" lists IP(k, S) for a finite absolute increasing S: sums
    s' - (sum of k(a) over a subset of S) where s' avoids the digits a in S,
    so the coefficient of k(a) ranges over {0, -1, -2}.
    """
    if lo > hi:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    R = max(abs(lo), abs(hi))
    shift = 0
    if mode == "restricted":
        S = _check_S(S or ())
        shift = sum(sys.kabs(abs(a)) for a in S)
    elif mode not in ("full", "positive"):
        raise ValueError(f"unknown mode {mode!r}")
    auto = depth is None
    if auto:
        depth = sys.depth_for(R + shift)
        if mode == "restricted":
            depth = max(depth, abs(S[-1]))
    radius = sys.complete_radius(depth) - shift
    if not auto and R >= radius:
        warnings.warn(
            f"depth {depth} guarantees completeness only for |t| < {radius}; interval reaches {R}",
            DepthWarning,
            stacklevel=2,
        )
    choices = []
    special = {abs(a): a for a in S} if mode == "restricted" else {}
    for n in range(1, depth + 1):
        kn = sys.kabs(n)
        if n in special:
            ka = sys.k(special[n])
            choices.append((0, -ka, -2 * ka))
        elif mode == "positive":
            choices.append((0, kn))
        else:
            choices.append((0, kn, -kn))
    members = _sumset(choices, lo, hi)
    return IntervalListing(lo, hi, mode, tuple(members), depth, radius, tuple(S or ()))


# ---------------------------------------------------------------------------
# Density


@dataclass(frozen=True)
class DensityRow:
    N: int
    count: int
    ratio: Fraction
    bound: float

    @property
    def within_bound(self) -> bool:
        return self.count <= self.bound

    def to_json(self) -> dict:
        return {
            "N": str(self.N),
            "count": self.count,
            "ratio": f"{self.ratio.numerator}/{self.ratio.denominator}",
            "bound": self.bound,
            "within_bound": self.within_bound,
        }


def density_bound(sys: ExpandingSystem, N: int) -> float:
    """(3N) ** log_base(3), where base is the growth base of k."""
    base = sys.digit_base if sys.digit_base is not None else sys.kabs(1)
    return math.exp(math.log(3 * N) * math.log(3) / math.log(base))


def count_positive_window(sys: ExpandingSystem, N: int) -> int:
    """#(IP(k) intersected with [1, N])."""
    return len(ip_in_interval(sys, 1, N, "full").members)


def density_profile(sys: ExpandingSystem, N_list: Iterable[int]) -> list[DensityRow]:
    rows = []
    for N in N_list:
        c = count_positive_window(sys, N)
        rows.append(DensityRow(N, c, Fraction(c, N), density_bound(sys, N)))
    return rows


def ratios_strictly_decreasing(rows: Sequence[DensityRow]) -> bool:
    return all(a.ratio > b.ratio for a, b in zip(rows, rows[1:]))
