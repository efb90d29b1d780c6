"""Labels: hereditary families of finitely supported N-vectors.

An N-vector is a finitely supported map from {1, 2, ...} to the
nonnegative integers.  A label is a set of N-vectors closed under taking
smaller vectors (pointwise).  Labels come in three forms:

* ``FiniteLabel``: stored by its antichain of maximal elements.
* ``OracleLabel``: a membership predicate plus declared structure.
* composites (minus, oplus, union, intersection, meet, Gamow relabeling)
  evaluated lazily from their operands.

Every label can be cut down to the finite label M ∩ B_N, where B_N holds
the vectors with entries <= N and support inside [1, N].  All checks in
this package work on such windows.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .verdict import FAILS, HOLDS, INCONCLUSIVE, Verdict

# ---------------------------------------------------------------------------
# N-vectors


class NVector:
    """Sparse nonnegative integer vector, stored as sorted (index, multiplicity) pairs."""

    __slots__ = ("_e", "_d", "_h")

    def __init__(self, pairs: Iterable[Sequence[int]] = ()):
        d: dict[int, int] = {}
        for ell, mult in pairs:
            ell, mult = int(ell), int(mult)
            if ell < 1 or mult < 0:
                raise ValueError(f"bad entry ({ell}, {mult})")
            if mult:
                d[ell] = d.get(ell, 0) + mult
        self._d = d
        self._e = tuple(sorted(d.items()))
        self._h = hash(self._e)

    @classmethod
    def _from_dict(cls, d: dict[int, int]) -> "NVector":
        v = cls.__new__(cls)
        v._d = d
        v._e = tuple(sorted(d.items()))
        v._h = hash(v._e)
        return v

    @classmethod
    def zero(cls) -> "NVector":
        return ZERO

    @classmethod
    def chi(cls, ell: int, mult: int = 1) -> "NVector":
        return cls([(ell, mult)])

    @classmethod
    def chi_set(cls, ells: Iterable[int]) -> "NVector":
        return cls((e, 1) for e in ells)

    @classmethod
    def from_dict(cls, d: Mapping[int, int]) -> "NVector":
        return cls(d.items())

    # -- accessors ------------------------------------------------------------

    @property
    def entries(self) -> tuple[tuple[int, int], ...]:
        return self._e

    def __getitem__(self, ell: int) -> int:
        return self._d.get(ell, 0)

    def as_dict(self) -> dict[int, int]:
        return dict(self._d)

    @property
    def supp(self) -> tuple[int, ...]:
        return tuple(e for e, _ in self._e)

    @property
    def norm(self) -> int:
        return sum(self._d.values())

    @property
    def size(self) -> int:
        return len(self._e)

    @property
    def max_entry(self) -> int:
        return max(self._d.values(), default=0)

    @property
    def max_supp(self) -> int:
        return self._e[-1][0] if self._e else 0

    @property
    def box(self) -> int:
        """Least N with this vector in B_N."""
        return max(self.max_entry, self.max_supp)

    def is_zero(self) -> bool:
        return not self._e

    def in_box(self, N: int) -> bool:
        return N >= 1 and self.box <= N

    # -- arithmetic -------------------------------------------------------------

    def __add__(self, other: "NVector") -> "NVector":
        if not other._e:
            return self
        d = dict(self._d)
        for e, m in other._e:
            d[e] = d.get(e, 0) + m
        return NVector._from_dict(d)

    def sub(self, other: "NVector") -> "NVector | None":
        """self - other, or None when some entry would go negative."""
        d = dict(self._d)
        for e, m in other._e:
            v = d.get(e, 0) - m
            if v < 0:
                return None
            if v:
                d[e] = v
            else:
                d.pop(e, None)
        return NVector._from_dict(d)

    def add_unit(self, ell: int) -> "NVector":
        d = dict(self._d)
        d[ell] = d.get(ell, 0) + 1
        return NVector._from_dict(d)

    def leq(self, other: "NVector") -> bool:
        od = other._d
        return all(od.get(e, 0) >= m for e, m in self._e)

    def lt(self, other: "NVector") -> bool:
        return self != other and self.leq(other)

    def meet(self, other: "NVector") -> "NVector":
        od = other._d
        return NVector._from_dict({e: min(m, od[e]) for e, m in self._e if e in od})

    def join(self, other: "NVector") -> "NVector":
        d = dict(self._d)
        for e, m in other._e:
            d[e] = max(d.get(e, 0), m)
        return NVector._from_dict(d)

    def restrict(self, F: Iterable[int]) -> "NVector":
        F = set(F)
        return NVector._from_dict({e: m for e, m in self._e if e in F})

    def restrict_upto(self, ell: int) -> "NVector":
        return NVector._from_dict({e: m for e, m in self._e if e <= ell})

    def clip(self, N: int) -> "NVector":
        """The largest vector of B_N below self."""
        return NVector._from_dict({e: min(m, N) for e, m in self._e if e <= N})

    def below(self) -> Iterator["NVector"]:
        """All vectors <= self."""
        keys = [e for e, _ in self._e]
        for combo in itertools.product(*(range(m + 1) for _, m in self._e)):
            yield NVector._from_dict({e: c for e, c in zip(keys, combo) if c})

    # -- identity -----------------------------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, NVector) and self._e == other._e

    def __hash__(self) -> int:
        return self._h

    def sort_key(self):
        return self._e

    def norm_lex_key(self):
        return (self.norm, self._e)

    def to_json(self) -> list[list[int]]:
        return [[e, m] for e, m in self._e]

    @classmethod
    def from_json(cls, obj) -> "NVector":
        return cls(obj)

    def __repr__(self) -> str:
        if not self._e:
            return "0"
        parts = []
        for e, m in self._e:
            parts.append(f"χ{e}" if m == 1 else f"{m}χ{e}")
        return "+".join(parts)


ZERO = NVector()


def chi(ell: int, mult: int = 1) -> NVector:
    return NVector.chi(ell, mult)


def chi_set(ells: Iterable[int]) -> NVector:
    return NVector.chi_set(ells)


def box_vectors(N: int) -> Iterator[NVector]:
    """Every vector of B_N (there are (N+1)**N of them)."""
    for combo in itertools.product(range(N + 1), repeat=N):
        yield NVector._from_dict({i + 1: c for i, c in enumerate(combo) if c})


def maximal_elements(vectors: Iterable[NVector]) -> frozenset[NVector]:
    """The antichain of maximal elements of a finite set of vectors."""
    vs = sorted(set(vectors), key=lambda v: -v.norm)
    kept: list[NVector] = []
    for v in vs:
        if not any(v.leq(k) for k in kept):
            kept.append(v)
    return frozenset(kept)


# ---------------------------------------------------------------------------
# Labels


class WindowExceeded(ValueError):
    """An oracle was queried outside its declared domain."""


class SupportEscape(ValueError):
    """A relabeling met a support index outside its source set."""


class Label:
    """Base class; subclasses supply ``contains`` and may override ``window``."""

    name: str = "label"
    tags: Mapping = {}

    def __init__(self):
        self._windows: dict[int, FiniteLabel] = {}

    def contains(self, m: NVector) -> bool:
        raise NotImplementedError

    def __contains__(self, m: NVector) -> bool:
        return self.contains(m)

    @property
    def is_finite(self) -> bool:
        return False

    def is_empty(self) -> bool:
        return not self.contains(ZERO)

    def window(self, N: int) -> "FiniteLabel":
        """M ∩ B_N as an explicit finite label (cached per N)."""
        w = self._windows.get(N)
        if w is None:
            w = EMPTY if N <= 0 else self._compute_window(N)
            self._windows[N] = w
        return w

    def _compute_window(self, N: int) -> "FiniteLabel":
        return bfs_window(self.contains, N)

    def declared_roof(self, ell: int) -> int | None:
        """A declared upper bound for sup of the ell-th entries, None if unknown or infinite."""
        return None

    # -- operator sugar --------------------------------------------------------------

    def minus(self, r: NVector) -> "Label":
        return minus(self, r)

    def oplus(self, other: "Label") -> "Label":
        return oplus(self, other)

    def union(self, *others: "Label") -> "Label":
        return union(self, *others)

    def intersect(self, *others: "Label") -> "Label":
        return intersect(self, *others)

    def meet(self, ell: int) -> "Label":
        return meet_interval(self, ell)

    def to_json(self) -> dict:
        raise NotImplementedError(f"{type(self).__name__} has no JSON form")

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"


def bfs_window(contains: Callable[[NVector], bool], N: int) -> "FiniteLabel":
    """Grow M ∩ B_N from 0 one unit at a time; heredity makes the pruning sound."""
    if N <= 0 or not contains(ZERO):
        return EMPTY
    seen = {ZERO}
    members = {ZERO}
    maxima = []
    frontier = [ZERO]
    while frontier:
        nxt = []
        for m in frontier:
            grew = False
            for ell in range(1, N + 1):
                if m[ell] >= N:
                    continue
                c = m.add_unit(ell)
                if c in members:
                    grew = True
                    continue
                if c in seen:
                    continue
                seen.add(c)
                if contains(c):
                    members.add(c)
                    nxt.append(c)
                    grew = True
            if not grew:
                maxima.append(m)
        frontier = nxt
    return FiniteLabel._trusted(frozenset(maxima), frozenset(members))


class FiniteLabel(Label):
    """A finite label, determined by its antichain of maximal elements."""

    name = "finite"

    def __init__(self, generators: Iterable[NVector] = ()):
        super().__init__()
        self.maxima = maximal_elements(generators)
        self._members: frozenset[NVector] | None = None
        self._h = hash(self.maxima)

    @classmethod
    def _trusted(cls, maxima: frozenset, members: frozenset | None = None) -> "FiniteLabel":
        obj = cls.__new__(cls)
        Label.__init__(obj)
        obj.maxima = maxima
        obj._members = members
        obj._h = hash(maxima)
        return obj

    @property
    def is_finite(self) -> bool:
        return True

    def contains(self, m: NVector) -> bool:
        if self._members is not None:
            return m in self._members
        return any(m.leq(g) for g in self.maxima)

    def members(self) -> frozenset[NVector]:
        if self._members is None:
            out: set[NVector] = set()
            for g in self.maxima:
                out.update(g.below())
            self._members = frozenset(out)
        return self._members

    def __len__(self) -> int:
        return len(self.members())

    def __iter__(self) -> Iterator[NVector]:
        return iter(sorted(self.members(), key=NVector.sort_key))

    def is_empty(self) -> bool:
        return not self.maxima

    def is_zero(self) -> bool:
        return self.maxima == frozenset([ZERO])

    def _compute_window(self, N: int) -> "FiniteLabel":
        if all(g.in_box(N) or g.is_zero() for g in self.maxima):
            return self
        return FiniteLabel(g.clip(N) for g in self.maxima)

    def roof(self) -> NVector:
        r = ZERO
        for g in self.maxima:
            r = r.join(g)
        return r

    def declared_roof(self, ell: int) -> int | None:
        return self.roof()[ell]

    def supports(self) -> frozenset[frozenset[int]]:
        out = set()
        for g in self.maxima:
            s = g.supp
            for k in range(len(s) + 1):
                out.update(frozenset(c) for c in itertools.combinations(s, k))
        return frozenset(out)

    def union_support(self) -> frozenset[int]:
        return frozenset(e for g in self.maxima for e in g.supp)

    def subset_of(self, other: Label) -> bool:
        return all(other.contains(g) for g in self.maxima)

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteLabel) and self.maxima == other.maxima

    def __hash__(self) -> int:
        return self._h

    def sorted_maxima(self) -> list[NVector]:
        return sorted(self.maxima, key=NVector.sort_key)

    def to_json(self) -> dict:
        return {"kind": "generated", "generators": [g.to_json() for g in self.sorted_maxima()]}

    def __repr__(self) -> str:
        if not self.maxima:
            return "∅"
        if self.is_zero():
            return "0"
        return "⟨" + ", ".join(map(repr, self.sorted_maxima())) + "⟩"


EMPTY = FiniteLabel._trusted(frozenset(), frozenset())
ZERO_LABEL = FiniteLabel._trusted(frozenset([ZERO]), frozenset([ZERO]))


def generated(S: Iterable[NVector]) -> FiniteLabel:
    """⟨S⟩: all vectors below some member of the finite set S."""
    return FiniteLabel(S)


def from_members(members: Iterable[NVector]) -> FiniteLabel:
    """Finite label from an explicit member set, which must be hereditary."""
    ms = frozenset(members)
    lab = FiniteLabel(ms)
    if lab.members() != ms:
        raise ValueError("member set is not hereditary")
    return lab


class OracleLabel(Label):
    """A label given by a membership predicate.

    ``roof`` declares, per index, an upper bound on the entries (None when
    unbounded); it is required so that every check stays total on its
    window.  ``tags`` carries structural facts used by the checkers.
    """

    def __init__(
        self,
        name: str,
        predicate: Callable[[NVector], bool],
        roof: Callable[[int], int | None],
        tags: Mapping | None = None,
        json: dict | None = None,
    ):
        super().__init__()
        if roof is None:
            raise ValueError("oracle labels must declare a roof bound")
        self.name = name
        self._pred = predicate
        self._roof = roof
        self.tags = dict(tags or {})
        self._json = json

    def contains(self, m: NVector) -> bool:
        for e, c in m.entries:
            rb = self._roof(e)
            if rb is not None and c > rb:
                return False
        return bool(self._pred(m))

    def declared_roof(self, ell: int) -> int | None:
        return self._roof(ell)

    def to_json(self) -> dict:
        if self._json is None:
            raise NotImplementedError(f"oracle {self.name} has no JSON form")
        return dict(self._json)


class _Composite(Label):
    def __init__(self, spec: dict):
        super().__init__()
        self._spec = spec

    def to_json(self) -> dict:
        return self._spec


class Minus(_Composite):
    def __init__(self, base: Label, r: NVector):
        super().__init__({"kind": "minus", "base": _json_or_name(base), "r": r.to_json()})
        self.base, self.r = base, r
        self.name = f"({base.name})-{r!r}"
        self.tags = {}

    def contains(self, m: NVector) -> bool:
        return self.base.contains(m + self.r)

    def declared_roof(self, ell: int) -> int | None:
        rb = self.base.declared_roof(ell)
        return None if rb is None else max(rb - self.r[ell], 0)


class Oplus(_Composite):
    def __init__(self, left: Label, right: Label):
        super().__init__({"kind": "oplus", "left": _json_or_name(left), "right": _json_or_name(right)})
        self.left, self.right = left, right
        self.name = f"({left.name})⊕({right.name})"
        self.tags = {}

    def contains(self, m: NVector) -> bool:
        # walk the part of left below m; heredity prunes the walk
        if not self.left.contains(ZERO):
            return False
        seen = {ZERO}
        stack = [ZERO]
        while stack:
            a = stack.pop()
            rest = m.sub(a)
            if self.right.contains(rest):
                return True
            for e, c in m.entries:
                if a[e] < c:
                    n = a.add_unit(e)
                    if n not in seen:
                        seen.add(n)
                        if self.left.contains(n):
                            stack.append(n)
        return False

    def _compute_window(self, N: int) -> FiniteLabel:
        return oplus(self.left.window(N), self.right.window(N)).window(N)

    def declared_roof(self, ell: int) -> int | None:
        a, b = self.left.declared_roof(ell), self.right.declared_roof(ell)
        return None if a is None or b is None else a + b


class Union(_Composite):
    def __init__(self, parts: Sequence[Label]):
        super().__init__({"kind": "union", "parts": [_json_or_name(p) for p in parts]})
        self.parts = tuple(parts)
        self.name = "∪".join(f"({p.name})" for p in parts)
        self.tags = {}

    def contains(self, m: NVector) -> bool:
        return any(p.contains(m) for p in self.parts)

    def _compute_window(self, N: int) -> FiniteLabel:
        return FiniteLabel(g for p in self.parts for g in p.window(N).maxima)

    def declared_roof(self, ell: int) -> int | None:
        vals = [p.declared_roof(ell) for p in self.parts]
        return None if any(v is None for v in vals) else max(vals, default=0)


class Intersect(_Composite):
    def __init__(self, parts: Sequence[Label]):
        super().__init__({"kind": "intersect", "parts": [_json_or_name(p) for p in parts]})
        self.parts = tuple(parts)
        self.name = "∩".join(f"({p.name})" for p in parts)
        self.tags = {}

    def contains(self, m: NVector) -> bool:
        return all(p.contains(m) for p in self.parts)

    def _compute_window(self, N: int) -> FiniteLabel:
        out = self.parts[0].window(N)
        for p in self.parts[1:]:
            out = intersect(out, p.window(N))
        return out

    def declared_roof(self, ell: int) -> int | None:
        vals = [p.declared_roof(ell) for p in self.parts if p.declared_roof(ell) is not None]
        return min(vals) if vals else None


class Meet(_Composite):
    def __init__(self, base: Label, ell: int):
        super().__init__({"kind": "meet", "base": _json_or_name(base), "ell": ell})
        self.base, self.ell = base, ell
        self.name = f"({base.name})∧[1,{ell}]"
        self.tags = {}

    def contains(self, m: NVector) -> bool:
        return self.ell > 0 and m.max_supp <= self.ell and self.base.contains(m)

    def _compute_window(self, N: int) -> FiniteLabel:
        if self.ell <= 0:
            return EMPTY
        return meet_interval(self.base.window(N), self.ell)

    def declared_roof(self, ell: int) -> int | None:
        return 0 if ell > self.ell else self.base.declared_roof(ell)


# ---------------------------------------------------------------------------
# Gamow relabeling


class Relabeling:
    """A bijection tau from a set L1 of indices onto a set L2.

    ``forward(l)`` is tau(l) or None for l outside L1; ``backward(i)`` is
    the preimage of i or None for i outside L2.
    """

    def __init__(self, forward, backward, description=None):
        self.forward = forward
        self.backward = backward
        self.description = description

    @classmethod
    def finite(cls, pairs: Iterable[Sequence[int]]) -> "Relabeling":
        """Explicit finite map, identity elsewhere; it must permute its own domain."""
        fwd = {int(a): int(b) for a, b in pairs}
        if len(set(fwd.values())) != len(fwd) or set(fwd.values()) != set(fwd):
            raise ValueError(f"finite map {sorted(fwd.items())} does not permute its domain")
        bwd = {b: a for a, b in fwd.items()}
        return cls(lambda l: fwd.get(l, l), lambda i: bwd.get(i, i), sorted(fwd.items()))

    @classmethod
    def onto_positions(cls, position: Callable[[int], int], inverse: Callable[[int], int | None]):
        """tau sends position(n) to n; L1 is the image of ``position``, L2 is everything."""
        return cls(inverse, position, None)


class Gamow(_Composite):
    def __init__(self, base: Label, tau: Relabeling):
        spec = {"kind": "gamow", "base": _json_or_name(base)}
        if tau.description is not None:
            spec["map"] = [list(p) for p in tau.description]
        super().__init__(spec)
        self.base, self.tau = base, tau
        self.name = f"gamow({base.name})"
        self.tags = dict(getattr(base, "tags", {}))

    def _push(self, w: NVector) -> NVector | None:
        d = {}
        for e, c in w.entries:
            i = self.tau.forward(e)
            if i is None:
                return None
            d[i] = c
        return NVector._from_dict(d)

    def contains(self, w: NVector) -> bool:
        m = self._push(w)
        return m is not None and self.base.contains(m)

    def declared_roof(self, ell: int) -> int | None:
        i = self.tau.forward(ell)
        return 0 if i is None else self.base.declared_roof(i)


def _pull(m: NVector, tau: Relabeling) -> NVector:
    d = {}
    for i, c in m.entries:
        e = tau.backward(i)
        if e is None:
            raise SupportEscape(f"index {i} of {m!r} is outside the target set")
        d[e] = c
    return NVector._from_dict(d)


def gamow(M: Label, tau: Relabeling | Iterable[Sequence[int]]) -> Label:
    """tau* M = {m ∘ tau : m in M}."""
    if not isinstance(tau, Relabeling):
        tau = Relabeling.finite(tau)
    if isinstance(M, FiniteLabel):
        return FiniteLabel(_pull(g, tau) for g in M.maxima)
    return Gamow(M, tau)


# ---------------------------------------------------------------------------
# Operations with exact finite fast paths


def _json_or_name(M: Label):
    try:
        return M.to_json()
    except NotImplementedError:
        return {"kind": "opaque", "name": M.name}


def minus(M: Label, r: NVector) -> Label:
    """M - r = {m : m + r in M}."""
    if r.is_zero():
        return M
    if isinstance(M, FiniteLabel):
        return FiniteLabel(d for g in M.maxima if (d := g.sub(r)) is not None)
    if isinstance(M, Minus):
        return Minus(M.base, M.r + r)
    if M.tags.get("maximum"):
        return M
    return Minus(M, r)


def oplus(M: Label, N: Label) -> Label:
    """M ⊕ N = {m + n : m in M, n in N}."""
    if isinstance(M, FiniteLabel) and isinstance(N, FiniteLabel):
        return FiniteLabel(a + b for a in M.maxima for b in N.maxima)
    return Oplus(M, N)


def union(*labels: Label) -> Label:
    if all(isinstance(L, FiniteLabel) for L in labels):
        return FiniteLabel(g for L in labels for g in L.maxima)
    return Union(labels)


def intersect(*labels: Label) -> Label:
    if all(isinstance(L, FiniteLabel) for L in labels):
        gens = [ZERO] if labels else []
        first = True
        for L in labels:
            if first:
                gens = list(L.maxima)
                first = False
            else:
                gens = [a.meet(b) for a in gens for b in L.maxima]
        return FiniteLabel(gens)
    return Intersect(labels)


def meet_interval(M: Label, ell: int) -> Label:
    """M ∧ [1, ell]: members supported in [1, ell]; empty when ell = 0."""
    if ell <= 0:
        return EMPTY
    if isinstance(M, FiniteLabel):
        return FiniteLabel(g.restrict_upto(ell) for g in M.maxima)
    return Meet(M, ell)


def roof(M: Label, N: int | None = None) -> NVector:
    """ρ(M) on [1, N] (the roof of the window M ∩ B_N for non-finite M)."""
    if isinstance(M, FiniteLabel) and N is None:
        return M.roof()
    if N is None:
        raise ValueError("non-finite labels need a window for the roof")
    return M.window(N).roof()


def max_elements(M: Label, N: int | None = None) -> tuple[frozenset[NVector], bool]:
    """(max M, exact?).  For non-finite labels this is the window-max of M ∩ B_N."""
    if isinstance(M, FiniteLabel):
        return M.maxima, True
    if N is None:
        raise ValueError("non-finite labels need a window for max")
    return M.window(N).maxima, False


def Supp(M: Label, N: int | None = None) -> frozenset[frozenset[int]]:
    if isinstance(M, FiniteLabel) and N is None:
        return M.supports()
    return M.window(N).supports()


def windows_equal(M1: Label, M2: Label, N: int) -> bool:
    return M1.window(N) == M2.window(N)


# ---------------------------------------------------------------------------
# Metric


@dataclass(frozen=True)
class Distance:
    """2^-agree; ``exact`` is False when agreement lasted to the horizon."""

    value: Fraction
    agree: int
    exact: bool

    def __str__(self) -> str:
        v = f"2^-{self.agree}" if self.agree else "1"
        return v if self.exact else f"<= {v}"

    def to_json(self) -> dict:
        return {"value": f"{self.value.numerator}/{self.value.denominator}", "agree": self.agree, "exact": self.exact}


def metric(M1: Label, M2: Label, N_max: int = 12) -> Distance:
    """inf{2^-N : M1 ∩ B_N = M2 ∩ B_N}, resolved up to N_max."""
    w1, w2 = M1.window(N_max), M2.window(N_max)
    for N in range(1, N_max + 1):
        if w1.window(N) != w2.window(N):
            return Distance(Fraction(1, 2 ** (N - 1)), N - 1, True)
    return Distance(Fraction(1, 2**N_max), N_max, False)


# ---------------------------------------------------------------------------
# Limits of label sequences

CONVERGED = "converged-on-window"
OSCILLATING = "oscillating-on-window"


@dataclass
class LabelSequence:
    generator: Callable[[int], Label]
    horizon: int
    start: int = 1

    def __call__(self, i: int) -> Label:
        return self.generator(i)


@dataclass(frozen=True)
class LimitResult:
    limsup: FiniteLabel
    liminf: FiniteLabel
    verdict: str
    window: int
    horizon: int
    unsettled: tuple[NVector, ...] = ()

    @property
    def converged(self) -> bool:
        return self.verdict == CONVERGED

    @property
    def limit(self) -> FiniteLabel:
        if not self.converged:
            raise ValueError(f"sequence did not converge on B_{self.window}: {self.verdict}")
        return self.liminf

    def to_json(self) -> dict:
        return {
            "window": self.window,
            "horizon": self.horizon,
            "verdict": self.verdict,
            "limsup": self.limsup.to_json(),
            "liminf": self.liminf.to_json(),
            "unsettled": [m.to_json() for m in self.unsettled],
        }


def limit(seq: LabelSequence | Callable[[int], Label], N: int, horizon: int | None = None) -> LimitResult:
    """LIMSUP and LIMINF of a label sequence on B_N, judged on the second half of the horizon.

    A vector that flips membership at least twice in that tail is
    oscillating; one that flips once has not visibly settled and makes the
    verdict inconclusive.
    """
    if isinstance(seq, LabelSequence):
        horizon = seq.horizon if horizon is None else horizon
        start = seq.start
    else:
        start = 1
    if horizon is None or horizon < start + 1:
        raise ValueError("horizon must exceed the start index")
    tail_start = start + (horizon - start + 1) // 2
    wins = [seq(i).window(N) for i in range(tail_start, horizon + 1)]
    universe: set[NVector] = set()
    for w in wins:
        universe.update(w.members())
    limsup, liminf, unsettled = set(), set(), []
    oscillating = False
    for m in universe:
        row = [w.contains(m) for w in wins]
        flips = sum(a != b for a, b in zip(row, row[1:]))
        if flips == 0:
            limsup.add(m)
            liminf.add(m)
        else:
            unsettled.append(m)
            if flips >= 2:
                oscillating = True
                limsup.add(m)
            elif row[-1]:
                limsup.add(m)
    if not unsettled:
        verdict = CONVERGED
    elif oscillating:
        verdict = OSCILLATING
    else:
        verdict = INCONCLUSIVE
    return LimitResult(
        FiniteLabel(limsup),
        FiniteLabel(liminf),
        verdict,
        N,
        horizon,
        tuple(sorted(unsettled, key=NVector.norm_lex_key)),
    )


# ---------------------------------------------------------------------------
# Orbit closures of finite labels


def theta(M: Label) -> frozenset[Label]:
    """Θ(M) = {M - r : r in M} ∪ {∅} for finite M; {M} for the maximum label."""
    if M.tags.get("maximum"):
        return frozenset([M])
    if not isinstance(M, FiniteLabel):
        raise TypeError("theta is computed exactly only for finite labels")
    out = {minus(M, r) for r in M.members()}
    out.add(EMPTY)
    return frozenset(out)


def theta_prime(M: FiniteLabel) -> frozenset[FiniteLabel]:
    """Θ'(M) = {M - r : r > 0} ∪ {∅} for finite M."""
    out = {minus(M, r) for r in M.members() if not r.is_zero()}
    out.add(EMPTY)
    return frozenset(out)


# ---------------------------------------------------------------------------
# Property checks

PROPERTIES = (
    "finite-type",
    "finitary",
    "simple",
    "recurrent",
    "strongly-recurrent",
    "flat",
    "sublattice",
)


def _roof_vector(M: Label, N: int) -> NVector | None:
    """Declared roof on [1, N] (None if some entry is unbounded), else the window roof."""
    vals = {}
    for ell in range(1, N + 1):
        v = M.declared_roof(ell)
        if v is None:
            if isinstance(M, OracleLabel):
                return None
            return M.window(N).roof()
        if v:
            vals[ell] = v
    return NVector._from_dict(vals)


def _chain_in_window(chain: Callable[[int], NVector], N: int, cap: int = 10_000) -> list[NVector]:
    out = []
    for i in itertools.count(1):
        c = chain(i)
        if not c.in_box(N) or i > cap:
            break
        out.append(c)
    return out


def _check_finite_type(M: Label, N: int, horizon: int) -> Verdict:
    if isinstance(M, FiniteLabel):
        return Verdict(HOLDS, N, None, "exact")
    t = M.tags
    if t.get("finite_type") is False and "chain" in t:
        chain = _chain_in_window(t["chain"], N)
        ok = len(chain) >= 2 and all(a.lt(b) for a, b in zip(chain, chain[1:]))
        ok = ok and all(M.contains(c) for c in chain)
        if ok:
            return Verdict(FAILS, N, chain, "tag")
        return Verdict(INCONCLUSIVE, N, None, "tag", {"reason": "declared chain not confirmed on window"})
    size_bound = t.get("size_bound")
    w = M.window(N)
    if t.get("finite_type") or (size_bound is not None and t.get("bounded")):
        if size_bound is not None and any(m.size > size_bound for m in w.maxima):
            return Verdict(INCONCLUSIVE, N, None, "tag", {"reason": "declared size bound violated"})
        return Verdict(HOLDS, N, None, "tag")
    longest = max((m.norm for m in w.maxima), default=-1) + 1
    return Verdict(INCONCLUSIVE, N, None, "window", {"longest_chain": longest})


def _differs_from_every_translate(M: Label, F: FiniteLabel, N: int) -> bool:
    if F.is_empty():
        return False  # ∅ is M - r for any r outside M
    for r in M.window(N).members():
        if minus(M, r).window(N) == F:
            return False
    return True


def _check_simple(M: Label, N: int, horizon: int) -> Verdict:
    if isinstance(M, FiniteLabel):
        return Verdict(HOLDS, N, None, "exact")
    t = M.tags
    if t.get("simple") is True:
        return Verdict(HOLDS, N, None, "tag")
    if t.get("simple") is False and "limit_sequence" in t:
        seq = t["limit_sequence"]
        res = limit(lambda i: minus(M, seq(i)), N, horizon)
        if res.converged and _differs_from_every_translate(M, res.liminf, N):
            return Verdict(FAILS, N, {"sequence": [seq(i) for i in range(1, 4)], "limit": res.liminf}, "tag")
        return Verdict(INCONCLUSIVE, N, None, "tag", {"reason": "declared limit not separated on window"})
    return Verdict(INCONCLUSIVE, N, None, "window", {"reason": "no constructive tag"})


def _check_finitary(M: Label, N: int, horizon: int) -> Verdict:
    if isinstance(M, FiniteLabel):
        return Verdict(HOLDS, N, None, "exact")
    t = M.tags
    if t.get("finitary") is True:
        return Verdict(HOLDS, N, None, "tag")
    if t.get("finitary") is False and "limit_sequence" in t:
        seq = t["limit_sequence"]
        res = limit(lambda i: minus(M, seq(i)), N, horizon)
        half = res.liminf.window(max(N // 2, 1))
        if res.converged and len(res.liminf) > len(half):
            return Verdict(
                FAILS,
                N,
                {"sequence": [seq(i) for i in range(1, 4)], "liminf_size": len(res.liminf), "half_window_size": len(half)},
                "tag",
            )
        return Verdict(INCONCLUSIVE, N, None, "tag", {"reason": "liminf growth not seen on window"})
    return Verdict(INCONCLUSIVE, N, None, "window", {"reason": "no constructive tag"})


def recurrence_witness(M: Label, N: int, horizon: int) -> NVector | None:
    """Some r > 0 with (M - r) ∩ B_N = M ∩ B_N, searched among small candidates."""
    w = M.window(N)
    cands: list[NVector] = []
    for c in (1, 2):
        cands.extend(chi(ell, c) for ell in range(1, horizon + 1))
    cands.extend(m for m in sorted(w.members(), key=NVector.norm_lex_key) if not m.is_zero())
    seen = set()
    for r in cands:
        if r in seen:
            continue
        seen.add(r)
        if all(M.contains(m + r) for m in w.members()):
            return r
    return None


def _check_recurrent(M: Label, N: int, horizon: int) -> Verdict:
    if isinstance(M, FiniteLabel):
        if M.is_empty():
            return Verdict(HOLDS, N, chi(1), "exact")
        g = M.sorted_maxima()[0]
        return Verdict(FAILS, N, {"maximal": g}, "exact")
    if M.tags.get("maximum"):
        return Verdict(HOLDS, N, chi(1), "exact")
    r = recurrence_witness(M, N, horizon)
    if r is not None:
        return Verdict(HOLDS, N, r, "window")
    return Verdict(INCONCLUSIVE, N, None, "window", {"searched_up_to": horizon})


def _check_strongly_recurrent(M: Label, N: int, horizon: int) -> Verdict:
    if isinstance(M, FiniteLabel):
        return Verdict(FAILS, N, {"reason": "finite"}, "exact")
    N0 = max(N // 2, 1)
    w = M.window(N)
    outside = [v for v in w.members() if v.max_supp > N0 or v.is_zero()]
    outside = [v for v in outside if all(e > N0 for e in v.supp)]
    for m in sorted(M.window(N0).members(), key=NVector.norm_lex_key):
        bad = next((v for v in sorted(outside, key=NVector.norm_lex_key) if not M.contains(v + m)), None)
        if bad is not None:
            return Verdict(FAILS, N, {"m": m, "w": bad, "F_bound": N0}, "window")
    return Verdict(HOLDS, N, None, "window", {"F_bound": N0})


def _check_flat(M: Label, N: int, horizon: int) -> Verdict:
    rho = _roof_vector(M, N)
    if rho is None:
        return Verdict(FAILS, N, {"reason": "unbounded roof"}, "window")
    for m in sorted(M.window(N).members(), key=NVector.norm_lex_key):
        top = rho.restrict(m.supp)
        if not M.contains(top):
            return Verdict(FAILS, N, {"m": m, "roof_part": top}, "window")
    return Verdict(HOLDS, N, None, "exact" if isinstance(M, FiniteLabel) else "window")


def _check_sublattice(M: Label, N: int, horizon: int) -> Verdict:
    w = M.window(N)
    if w.is_empty():
        return Verdict(HOLDS, N, None, "window")
    rho = w.roof()
    if M.contains(rho):
        return Verdict(HOLDS, N, None, "exact" if isinstance(M, FiniteLabel) else "window")
    return Verdict(FAILS, N, {"roof": rho}, "window")


_CHECKS = {
    "finite-type": _check_finite_type,
    "finitary": _check_finitary,
    "simple": _check_simple,
    "recurrent": _check_recurrent,
    "strongly-recurrent": _check_strongly_recurrent,
    "flat": _check_flat,
    "sublattice": _check_sublattice,
}


def property_check(M: Label, which: str, N: int = 12, horizon: int = 40) -> Verdict:
    """Window-honest verdict for one structural property of M.

    ``basis`` in the verdict says where the answer comes from: "exact"
    (finite labels), "tag" (a constructive fact declared by the zoo and
    confirmed on the window) or "window" (evidence on B_N only).
    """
    try:
        check = _CHECKS[which]
    except KeyError:
        raise ValueError(f"unknown property {which!r}; choose from {PROPERTIES}") from None
    return check(M, N, horizon)


# ---------------------------------------------------------------------------
# JSON


def _builtin_shorthand(text: str) -> dict:
    """'units_L:L=odd' -> builtin object; digit values become ints."""
    name, _, rest = text.partition(":")
    obj = {"kind": "builtin", "name": name}
    if rest:
        params = dict(p.split("=", 1) for p in rest.split(","))
        obj["params"] = {k: int(v) if v.lstrip("-").isdigit() else v for k, v in params.items()}
    return obj


def label_from_json(obj) -> Label:
    """Decode a label object. Also accepts a bare generator list, a builtin shorthand
    string such as "N_n:n=4", or the JSON text of any of these."""
    if isinstance(obj, str):
        import json

        obj = json.loads(obj) if obj.lstrip().startswith(("{", "[", '"')) else _builtin_shorthand(obj)
        if isinstance(obj, str):
            obj = _builtin_shorthand(obj)
    if isinstance(obj, list):
        obj = {"kind": "generated", "generators": obj}
    kind = obj.get("kind")
    if kind == "generated":
        return generated(NVector(g) for g in obj["generators"])
    if kind == "builtin":
        from . import zoo

        return zoo.get(obj["name"], **obj.get("params", {})).label
    if kind == "minus":
        return minus(label_from_json(obj["base"]), NVector(obj["r"]))
    if kind == "oplus":
        return oplus(label_from_json(obj["left"]), label_from_json(obj["right"]))
    if kind == "union":
        return union(*(label_from_json(p) for p in obj["parts"]))
    if kind == "intersect":
        return intersect(*(label_from_json(p) for p in obj["parts"]))
    if kind == "meet":
        return meet_interval(label_from_json(obj["base"]), int(obj["ell"]))
    if kind == "gamow":
        return gamow(label_from_json(obj["base"]), Relabeling.finite(obj["map"]))
    raise ValueError(f"unknown label kind {kind!r}")


def encode(obj):
    """JSON-ready form of vectors, labels and containers of them."""
    if isinstance(obj, NVector):
        return obj.to_json()
    if isinstance(obj, Label):
        return obj.to_json()
    if isinstance(obj, dict):
        return {k: encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return [encode(v) for v in sorted(obj, key=lambda x: x.sort_key() if isinstance(x, NVector) else str(x))]
    return obj
