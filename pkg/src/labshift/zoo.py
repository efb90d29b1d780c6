"""Built-in example labels with their expected structural properties.

Each entry pairs a label with the verdicts the checkers should reach.
Infinite labels are oracles: a membership predicate plus a per-index roof
bound.  Index bijections (word indices, subset ranks, block layouts) use
fixed canonical enumerations so every derived value is reproducible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

from .labels import (
    EMPTY,
    FiniteLabel,
    Label,
    NVector,
    OracleLabel,
    ZERO,
    chi,
    chi_set,
    generated,
    limit,
    minus,
    property_check,
    theta,
)
from .verdict import FAILS, HOLDS, INCONCLUSIVE

# ---------------------------------------------------------------------------
# helpers


def _norm_ok(m: NVector, max_entry: int, max_size: int) -> bool:
    return m.max_entry <= max_entry and m.size <= max_size


def _odd(n: int) -> bool:
    return n % 2 == 1


class MaximumLabel(OracleLabel):
    """FIN(N): every vector is a member."""

    def __init__(self):
        super().__init__(
            "exFIN",
            lambda m: True,
            lambda ell: None,
            {"maximum": True, "recurrent": True},
            {"kind": "builtin", "name": "exFIN"},
        )

    def _compute_window(self, N: int) -> FiniteLabel:
        return FiniteLabel([NVector((ell, N) for ell in range(1, N + 1))])


# ---------------------------------------------------------------------------
# index bijections


def word_index(w: str) -> int:
    """Length-lex bijection from binary words onto {1, 2, ...}; the empty word is 1."""
    return (1 << len(w)) + (int(w, 2) if w else 0)


def index_word(ell: int) -> str:
    if ell < 1:
        raise ValueError("word indices start at 1")
    n = ell.bit_length() - 1
    return format(ell - (1 << n), "b").zfill(n) if n else ""


def subset_rank(A, positions: dict[int, int]) -> int:
    return sum(1 << positions[i] for i in A)


@dataclass(frozen=True)
class BlockLayout:
    """A_1, B_1, A_2, B_2, ... laid out consecutively with #A_n = n and #B_n = 2^n."""

    def start_A(self, n: int) -> int:
        # blocks before A_n: sum_{m<n} (m + 2^m)
        return 1 + (n - 1) * n // 2 + (2**n - 2)

    def A(self, n: int) -> range:
        s = self.start_A(n)
        return range(s, s + n)

    def B(self, n: int) -> range:
        s = self.start_A(n) + n
        return range(s, s + 2**n)

    def locate(self, ell: int) -> tuple[str, int, int]:
        """(block letter, n, offset inside the block)."""
        n = 1
        while self.start_A(n + 1) <= ell:
            n += 1
        off = ell - self.start_A(n)
        return ("A", n, off) if off < n else ("B", n, off - n)

    def ell_of(self, n: int, A) -> int:
        """ℓ_A in B_n for A ⊆ A_n, by binary rank."""
        s = self.start_A(n)
        return self.B(n).start + sum(1 << (i - s) for i in A)

    def subset_of(self, n: int, ell: int) -> frozenset[int]:
        rank = ell - self.B(n).start
        s = self.start_A(n)
        return frozenset(s + i for i in range(n) if rank >> i & 1)


LAYOUT = BlockLayout()


def odd_rank(A) -> int:
    return sum(1 << ((i - 1) // 2) for i in A)


def ell_odd_subset(A) -> int:
    """ℓ_A = 2(rank + 1): finite sets of odd numbers onto the even numbers."""
    return 2 * (odd_rank(A) + 1)


def odd_subset_of(ell: int) -> frozenset[int]:
    rank = ell // 2 - 1
    return frozenset(2 * i + 1 for i in range(rank.bit_length()) if rank >> i & 1)


# ---------------------------------------------------------------------------
# membership predicates


def _ex6a(m: NVector) -> bool:
    # generators χ(1) + ... + χ(k) + 2χ(k+1), k >= 1
    if m.is_zero():
        return True
    K = m.max_supp
    if m.max_entry > 2:
        return False
    twos = [e for e, c in m.entries if c == 2]
    if not twos:
        return True
    return len(twos) == 1 and twos[0] == K and K >= 2


def _ex6b(m: NVector) -> bool:
    # generators χ(2k+1) + χ(2) + χ(4) + ... + χ(2k)
    if m.max_entry > 1:
        return False
    odds = [e for e in m.supp if _odd(e)]
    if not odds:
        return True
    if len(odds) > 1 or odds[0] < 3:
        return False
    return all(e < odds[0] for e in m.supp if not _odd(e))


def _ex8a(m: NVector) -> bool:
    if not _norm_ok(m, 1, 2):
        return False
    s = m.supp
    return len(s) < 2 or s[0] == 1 or s[1] == s[0] + 1


def _ex8b(m: NVector) -> bool:
    if not _norm_ok(m, 1, 2):
        return False
    s = m.supp
    return len(s) < 2 or _odd(s[0]) != _odd(s[1])


def _below_any(m: NVector, gens) -> bool:
    return any(m.leq(g) for g in gens)


def _ex10a_gens(m: NVector):
    evens = [e for e in m.supp if not _odd(e)]
    odds = [e for e in m.supp if _odd(e) and e >= 3]
    bs = [e // 2 for e in evens] or [1]
    big = m.max_supp + 1
    a_cands = {(e - 1) // 2 for e in odds} | {1, big}
    for b in bs:
        yield chi(1) + chi(3) + chi(2 * b)
        for a in a_cands | {b}:
            if a >= b:
                yield chi(3) + chi(2 * a + 1) + chi(2 * b)


def _ex10a(m: NVector) -> bool:
    if m.norm > 3 or m.max_entry > 2:
        return False
    return _below_any(m, _ex10a_gens(m))


def _ex10b_third(a: int, b: int) -> int:
    return 3 * 5**a * 7**b + 2


def _decode_57(ell: int) -> tuple[int, int] | None:
    if ell % 3 != 2:
        return None
    q = (ell - 2) // 3
    if q <= 0:
        return None
    a = b = 0
    while q % 5 == 0:
        q //= 5
        a += 1
    while q % 7 == 0:
        q //= 7
        b += 1
    return (a, b) if q == 1 and a >= 1 and b >= 1 else None


def _ex10b(m: NVector) -> bool:
    if not _norm_ok(m, 1, 3):
        return False
    a_c, b_c, pairs = {1}, {1}, []
    for e in m.supp:
        if e % 3 == 0:
            a_c.add(e // 3)
        elif e % 3 == 1:
            if e < 4:
                return False
            b_c.add((e - 1) // 3)
        else:
            ab = _decode_57(e)
            if ab is None:
                return False
            pairs.append(ab)
    if len(pairs) > 1:
        return False
    cands = pairs or list(itertools.product(a_c, b_c))
    return any(m.leq(chi(3 * a) + chi(3 * b + 1) + chi(_ex10b_third(a, b))) for a, b in cands)


def _ex10b_roof(ell: int) -> int:
    if ell % 3 == 0:
        return 1
    if ell % 3 == 1:
        return int(ell >= 4)
    return int(_decode_57(ell) is not None)


def _prefix_comparable(u: str, v: str) -> bool:
    return u.startswith(v) or v.startswith(u)


def _ex10c(m: NVector) -> bool:
    if m.norm > 2 or 1 in m.supp:
        return False
    s = m.supp
    return len(s) < 2 or _prefix_comparable(index_word(s[0]), index_word(s[1]))


def _ex10c_x(x: str) -> Callable[[NVector], bool]:
    """Membership in M_x ⊕ M_x for the periodic extension of the word x."""
    if not x or set(x) - {"0", "1"}:
        raise ValueError("x must be a nonempty binary word")

    def on_path(ell: int) -> bool:
        if ell < 2:
            return False
        w = index_word(ell)
        return all(c == x[i % len(x)] for i, c in enumerate(w))

    return lambda m: m.norm <= 2 and all(on_path(e) for e in m.supp)


def _ex11a(m: NVector) -> bool:
    if not _norm_ok(m, 1, 2):
        return False
    locs = [LAYOUT.locate(e) for e in m.supp]
    if len(locs) == 1:
        kind, n, off = locs[0]
        return kind == "A" or off != 0
    if len(locs) == 2:
        (k1, n1, _), (k2, n2, _) = locs
        if n1 != n2 or {k1, k2} != {"A", "B"}:
            return False
        i = m.supp[0] if k1 == "A" else m.supp[1]
        ell = m.supp[1] if k1 == "A" else m.supp[0]
        return i in LAYOUT.subset_of(n1, ell)
    return len(locs) == 0


def _ex11a_flat(m: NVector) -> bool:
    if m.max_entry > 1:
        return False
    blocks = {LAYOUT.locate(e)[:2] for e in m.supp}
    return len(blocks) <= 1 and all(k == "A" for k, _ in blocks)


def _ex11b(m: NVector) -> bool:
    if not _norm_ok(m, 1, 2):
        return False
    s = m.supp
    if not s:
        return True
    odds = [e for e in s if _odd(e)]
    evens = [e for e in s if not _odd(e)]
    if len(odds) > 1 or len(evens) > 1:
        return False
    if not evens:
        return True
    A = odd_subset_of(evens[0])
    if not odds:
        return bool(A)
    return odds[0] in A


def _index_set(L: str) -> Callable[[int], bool]:
    if L == "all":
        return lambda e: True
    if L == "odd":
        return _odd
    if L == "even":
        return lambda e: not _odd(e)
    raise ValueError(f"index set must be all, odd or even, got {L!r}")


def _units(L: str) -> Callable[[NVector], bool]:
    inL = _index_set(L)
    return lambda m: m.norm <= 1 and all(inL(e) for e in m.supp)


def _chi_L(L: str) -> Callable[[NVector], bool]:
    inL = _index_set(L)
    return lambda m: m.max_entry <= 1 and all(inL(e) for e in m.supp)


def _exx(m: NVector) -> bool:
    # ⟨χ(odds)⟩ ⊕ ({0} ∪ {χ(ℓ) : ℓ even})
    if m.max_entry > 1:
        return False
    return sum(1 for e in m.supp if not _odd(e)) <= 1


# ---------------------------------------------------------------------------
# permex: every finite label, relocated onto its own interval


def _antichains(elements: list[NVector]):
    """All antichains of a finite poset, in a fixed order."""

    def rec(i, chosen):
        if i == len(elements):
            yield tuple(chosen)
            return
        yield from rec(i + 1, chosen)
        e = elements[i]
        if all(not (e.leq(c) or c.leq(e)) for c in chosen):
            chosen.append(e)
            yield from rec(i + 1, chosen)
            chosen.pop()

    yield from rec(0, [])


def _permex_stream():
    """Pairs (N, ℓ) ordered by ℓ + max entry, then ℓ, then canonical antichain order."""
    for s in itertools.count(1):
        for ell in range(1, s + 1):
            c = s - ell
            if c == 0:
                yield EMPTY, ell
                yield FiniteLabel([ZERO]), ell
                continue
            grid = sorted(
                (NVector._from_dict({i + 1: v for i, v in enumerate(p) if v}) for p in itertools.product(range(c + 1), repeat=ell)),
                key=NVector.sort_key,
            )
            for ac in _antichains(grid):
                if ac and max(g.max_entry for g in ac) == c:
                    yield FiniteLabel(ac), ell


class _PermexLayout:
    def __init__(self):
        self._stream = _permex_stream()
        self.blocks: list[tuple[int, FiniteLabel, int]] = []  # (start, label, length)
        self._next = 1

    def block_of(self, idx: int) -> tuple[int, FiniteLabel, int]:
        while self._next <= idx:
            lab, ell = next(self._stream)
            self.blocks.append((self._next, lab, ell))
            self._next += ell
        lo, hi = 0, len(self.blocks) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.blocks[mid][0] <= idx:
                lo = mid
            else:
                hi = mid - 1
        return self.blocks[lo]


_PERMEX = _PermexLayout()


def _permex(m: NVector) -> bool:
    if m.is_zero():
        return True
    start, lab, ell = _PERMEX.block_of(m.max_supp)
    if m.supp[0] < start:
        return False
    return lab.contains(NVector((e - start + 1, c) for e, c in m.entries))


def _permex_roof(idx: int) -> int:
    start, lab, _ = _PERMEX.block_of(idx)
    return lab.roof()[idx - start + 1] if not lab.is_empty() else 0


# ---------------------------------------------------------------------------
# entries


@dataclass
class ZooEntry:
    name: str
    label: Label
    expected: dict[str, bool] = field(default_factory=dict)
    citation: str = ""
    params: dict = field(default_factory=dict)
    semi: frozenset[str] = frozenset()  # tags whose checker may stay inconclusive
    notes: str = ""


def _oracle(name, pred, roof, tags, params=None):
    js = {"kind": "builtin", "name": name}
    if params:
        js["params"] = params
    return OracleLabel(name, pred, roof, tags, js)


def _entry_ex6a():
    lab = _oracle(
        "ex6a",
        _ex6a,
        lambda ell: 1 if ell == 1 else 2,
        {"finite_type": False, "bounded": True, "chain": lambda i: chi_set(range(1, i + 1))},
    )
    return ZooEntry("ex6a", lab, {"finite-type": False}, "generated by its maxima yet not of finite type")


def _entry_ex6b():
    lab = _oracle(
        "ex6b",
        _ex6b,
        lambda ell: 1,
        {"finite_type": False, "bounded": True, "chain": lambda i: chi_set(range(2, 2 * i + 1, 2))},
    )
    return ZooEntry("ex6b", lab, {"finite-type": False}, "f-contains the even numbers")


def _entry_proper_M():
    return ZooEntry("proper_M", generated([chi(1) + chi(2), chi(2, 2) + chi(3)]), {"finite-type": True}, "orbit closure strictly inside the hereditary hull")


def _entry_proper_N():
    return ZooEntry("proper_N", generated([chi(1) + chi(2), chi(2) + chi(3)]), {"finite-type": True}, "sub-label of proper_M outside its orbit closure")


def _entry_ex8a():
    lab = _oracle(
        "ex8a",
        _ex8a,
        lambda ell: 1,
        {
            "finite_type": True,
            "bounded": True,
            "size_bound": 2,
            "finitary": True,
            "simple": False,
            "limit_sequence": lambda i: chi(i + 1),
        },
    )
    return ZooEntry("ex8a", lab, {"finite-type": True, "finitary": True, "simple": False}, "finitary, but not simple")


def _entry_ex8b():
    lab = _oracle(
        "ex8b",
        _ex8b,
        lambda ell: 1,
        {
            "finite_type": True,
            "bounded": True,
            "size_bound": 2,
            "simple": True,
            "finitary": False,
            "limit_sequence": lambda i: chi(2 * i),
        },
    )
    return ZooEntry("ex8b", lab, {"finite-type": True, "simple": True, "finitary": False}, "simple but not finitary")


def _entry_ex10a():
    lab = _oracle(
        "ex10a",
        _ex10a,
        lambda ell: 2 if ell == 3 else 1,
        {"finite_type": True, "bounded": True, "size_bound": 3},
    )
    return ZooEntry("ex10a", lab, {"finite-type": True}, "finite type with non-commuting double limits")


def _entry_ex10b():
    lab = _oracle(
        "ex10b",
        _ex10b,
        _ex10b_roof,
        {"finite_type": True, "bounded": True, "size_bound": 3, "expected_wap": "unproved"},
    )
    return ZooEntry(
        "ex10b",
        lab,
        {"finite-type": True},
        "neither finitary nor simple; WAP claimed without proof",
        notes="expected-WAP (unproved); only window evidence is produced",
    )


def _entry_ex10cmoved(x: str | None = None):
    if x is None:
        lab = _oracle(
            "ex10cmoved",
            _ex10c,
            lambda ell: 0 if ell == 1 else 2,
            {"finite_type": True, "bounded": True, "size_bound": 2},
        )
        return ZooEntry("ex10cmoved", lab, {"finite-type": True}, "finite type with uncountable orbit closure")
    pred = _ex10c_x(x)
    lab = _oracle(
        f"ex10cmoved[x={x}]",
        pred,
        lambda ell: 2 if pred(chi(ell)) else 0,
        {"finite_type": True, "bounded": True, "size_bound": 2},
        {"x": x},
    )
    lab._json = {"kind": "builtin", "name": "ex10cmoved", "params": {"x": x}}
    return ZooEntry("ex10cmoved", lab, {"finite-type": True}, "the branch label for one path x", {"x": x})


def _entry_ex11a():
    lab = _oracle(
        "ex11a",
        _ex11a,
        lambda ell: 1,
        {"finite_type": True, "bounded": True, "size_bound": 2, "finitary": True, "simple": True},
    )
    return ZooEntry("ex11a", lab, {"finite-type": True, "finitary": True, "simple": True}, "simple, finitary and non-null")


def _entry_ex11a_flat():
    lab = _oracle(
        "ex11a_flat",
        _ex11a_flat,
        lambda ell: 1 if LAYOUT.locate(ell)[0] == "A" else 0,
        {"finite_type": True, "bounded": True, "finitary": True, "simple": True},
    )
    return ZooEntry("ex11a_flat", lab, {"finite-type": True, "finitary": True, "simple": True, "flat": True}, "non-null by flatness")


def _entry_ex11b():
    lab = _oracle(
        "ex11b",
        _ex11b,
        lambda ell: 1 if _odd(ell) or ell > 2 else 0,
        {"finite_type": True, "bounded": True, "size_bound": 2},
    )
    return ZooEntry("ex11b", lab, {"finite-type": True}, "finite type, independent over the odd numbers")


def _entry_exFIN():
    return ZooEntry("exFIN", MaximumLabel(), {"recurrent": True, "sublattice": True}, "the maximum label, fixed by the action")


def _entry_permex():
    lab = _oracle(
        "permex",
        _permex,
        _permex_roof,
        {"finite_type": True, "bounded": True, "finitary": True, "simple": True},
    )
    return ZooEntry("permex", lab, {"finite-type": True, "finitary": True, "simple": True}, "a transitive point for the index permutations")


def _entry_exx():
    lab = _oracle("exx", _exx, lambda ell: 1, {"bounded": True, "recurrent": True, "strongly_recurrent": False})
    return ZooEntry(
        "exx",
        lab,
        {"recurrent": True, "strongly-recurrent": False},
        "recurrent but not strongly recurrent",
    )


def _entry_N_n(n: int = 3):
    n = int(n)
    if n < 0:
        raise ValueError("n must be >= 0")
    lab = generated([chi(1, n)]) if n else generated([ZERO])
    return ZooEntry("N_n", lab, {"finite-type": True}, "height n+1 chain label", {"n": n})


def _entry_units_L(L: str = "all"):
    lab = _oracle(
        f"units_L[{L}]",
        _units(L),
        lambda ell, inL=_index_set(L): 1 if inL(ell) else 0,
        {"finite_type": True, "bounded": True, "size_bound": 1, "finitary": True, "simple": True},
        {"L": L},
    )
    return ZooEntry("units_L", lab, {"finite-type": True, "finitary": True, "simple": True}, "height-2 label of units", {"L": L})


def _entry_chi_L(L: str = "all"):
    lab = _oracle(
        f"chi_L[{L}]",
        _chi_L(L),
        lambda ell, inL=_index_set(L): 1 if inL(ell) else 0,
        {
            "finite_type": False,
            "bounded": True,
            "chain": lambda i, inL=_index_set(L): chi_set([e for e in range(1, 2 * i + 1) if inL(e)][:i]),
            "recurrent": True,
            "strongly_recurrent": True,
        },
        {"L": L},
    )
    return ZooEntry(
        "chi_L",
        lab,
        {"finite-type": False, "recurrent": True, "strongly-recurrent": True, "flat": True, "sublattice": True},
        "a sublattice, recurrent and flat",
        {"L": L},
    )


_BUILDERS: dict[str, Callable[..., ZooEntry]] = {
    "ex6a": _entry_ex6a,
    "ex6b": _entry_ex6b,
    "proper_M": _entry_proper_M,
    "proper_N": _entry_proper_N,
    "ex8a": _entry_ex8a,
    "ex8b": _entry_ex8b,
    "ex10a": _entry_ex10a,
    "ex10b": _entry_ex10b,
    "ex10cmoved": _entry_ex10cmoved,
    "ex11a": _entry_ex11a,
    "ex11a_flat": _entry_ex11a_flat,
    "ex11b": _entry_ex11b,
    "exFIN": _entry_exFIN,
    "permex": _entry_permex,
    "exx": _entry_exx,
    "N_n": _entry_N_n,
    "units_L": _entry_units_L,
    "chi_L": _entry_chi_L,
}

NAMES = tuple(_BUILDERS)


class UnknownEntry(KeyError):
    pass


def get(name: str, **params) -> ZooEntry:
    if name not in _BUILDERS:
        raise UnknownEntry(f"unknown zoo entry {name!r}; known: {', '.join(NAMES)}")
    return _cached(name, tuple(sorted(params.items())))


@lru_cache(maxsize=None)
def _cached(name, params):
    return _BUILDERS[name](**dict(params))


def label(name: str, **params) -> Label:
    return get(name, **params).label


# ---------------------------------------------------------------------------
# closed forms used by the checks below


def ex8a_translate(ell: int) -> FiniteLabel:
    """M - χ(ℓ) for the ex8a label, as stated."""
    if ell == 1:
        raise ValueError("M - χ(1) is infinite")
    units = {1, ell + 1} | ({ell - 1} if ell > 1 else set())
    return generated(chi(u) for u in units)


def ex10a_translates(kind: str, ell: int, N: int) -> FiniteLabel:
    """The closed forms of M - χ(·) for ex10a, cut to B_N.

    kind is "1", "3", "odd" (index 2ℓ+1, ℓ >= 2) or "even" (index 2ℓ).
    """
    bs = range(1, N // 2 + 1)
    if kind == "1":
        gens = [chi(3) + chi(2 * b) for b in bs]
    elif kind == "3":
        gens = [chi(2 * a + 1) + chi(2 * b) for b in bs for a in range(b, N)] + [chi(1) + chi(2 * b) for b in bs]
    elif kind == "odd":
        gens = [chi(3) + chi(2 * b) for b in range(1, ell + 1)]
    elif kind == "even":
        gens = [chi(3) + chi(2 * a + 1) for a in range(ell, N)] + [chi(1) + chi(3)]
    else:
        raise ValueError(kind)
    return generated(gens).window(N)


def double_limit(f: Callable[[int, int], Label], N: int, horizon: int):
    """LIM_i LIM_j f(i, j) on B_N, each limit judged by ``limit``.

    The inner horizon grows with i so that its tail starts beyond i.
    """

    def inner(i):
        res = limit(lambda j: f(i, j), N, horizon + 2 * i)
        if not res.converged:
            raise ValueError(f"inner limit at {i} is {res.verdict}")
        return res.liminf

    return limit(inner, N, horizon)


def ex10a_double_limits(N: int = 8, horizon: int = 40):
    """(LIM_b LIM_a, LIM_a LIM_b) of M - χ(2a+1) - χ(2b)."""
    M = label("ex10a")
    ba = double_limit(lambda b, a: minus(M, chi(2 * a + 1) + chi(2 * b)), N, horizon)
    ab = double_limit(lambda a, b: minus(M, chi(2 * a + 1) + chi(2 * b)), N, horizon)
    return ba, ab


# ---------------------------------------------------------------------------
# verification report


@dataclass(frozen=True)
class ReportRow:
    entry: str
    check: str
    expected: str
    verdict: str
    status: str  # pass | fail | inconclusive
    witness: object = None

    def to_json(self, encode=None) -> dict:
        w = encode(self.witness) if encode and self.witness is not None else self.witness
        return {"entry": self.entry, "check": self.check, "expected": self.expected, "verdict": self.verdict, "status": self.status, "witness": w}


def _status(expect: bool, verdict: str, semi: bool) -> str:
    want = HOLDS if expect else FAILS
    if verdict == want:
        return "pass"
    if verdict == INCONCLUSIVE and semi:
        return "inconclusive"
    return "fail"


def verify_entry(entry: ZooEntry, N: int = 12, horizon: int = 40) -> list[ReportRow]:
    rows = []
    for prop, expect in entry.expected.items():
        v = property_check(entry.label, prop, N, horizon)
        rows.append(
            ReportRow(entry.name, prop, HOLDS if expect else FAILS, v.verdict, _status(expect, v.verdict, prop in entry.semi), v.witness)
        )
    return rows


def verify_all(N: int = 12, horizon: int = 40) -> list[ReportRow]:
    """Run every expected tag of every entry, plus the worked identities."""
    rows: list[ReportRow] = []
    for name in NAMES:
        rows.extend(verify_entry(get(name), N, horizon))

    # ex8a: the external limit {0, χ(1)}
    M8 = label("ex8a")
    res = limit(lambda i: minus(M8, chi(i + 1)), N, horizon)
    ok = res.converged and res.liminf == generated([chi(1)])
    rows.append(ReportRow("ex8a", "limit M-χ(ℓ)", "{0, χ1}", res.verdict, "pass" if ok else "fail", res.liminf))

    # ex10a: non-commuting double limit
    N10 = min(N, 8)
    ba, ab = ex10a_double_limits(N10, horizon)
    ok = ba.converged and ab.converged and ba.liminf == generated([chi(3)]) and ab.liminf.is_empty()
    rows.append(ReportRow("ex10a", "double limits", "{0, χ3} vs ∅", f"{ba.verdict}/{ab.verdict}", "pass" if ok else "fail", [ba.liminf, ab.liminf]))

    # exFIN: theta is a singleton
    F = label("exFIN")
    th = theta(F)
    ok = len(th) == 1 and next(iter(th)) is F
    rows.append(ReportRow("exFIN", "theta", "{M}", "singleton" if ok else "other", "pass" if ok else "fail"))

    # proper: N ⊆ M but N outside Θ(M)
    Mp, Np = label("proper_M"), label("proper_N")
    ok = Np.subset_of(Mp) and Np not in theta(Mp)
    rows.append(ReportRow("proper_M", "proper sub-label", "N ⊆ M, N ∉ Θ(M)", "confirmed" if ok else "refuted", "pass" if ok else "fail"))
    return rows


def report_exit_code(rows: list[ReportRow]) -> int:
    return 1 if any(r.status == "fail" for r in rows) else 0


def ex11a_family(n: int) -> tuple[tuple[NVector, ...], dict]:
    """F = {χ(i) : i ∈ A_n} and the witness χ(ℓ_A) for each A ⊆ A_n."""
    block = list(LAYOUT.A(n))
    F = tuple(chi(i) for i in block)
    hints = {}
    for mask in range(1 << n):
        A = [block[i] for i in range(n) if mask >> i & 1]
        hints[frozenset(chi(i) for i in A)] = chi(LAYOUT.ell_of(n, A))
    return F, hints
