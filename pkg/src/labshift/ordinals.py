"""Heights of finite labels and small ordinal arithmetic.

Ordinals below ω^ω are kept in Cantor normal form.  The height of a
nonempty label is β + 1, where β counts the z_LAB steps (remove the
maximal elements) needed to reach the label 0.  height* runs the dual
iteration on the finite orbit closure Θ(M).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import total_ordering
from typing import Sequence

from .labels import EMPTY, FiniteLabel, chi, theta, theta_prime


@total_ordering
@dataclass(frozen=True)
class OrdinalCNF:
    """Σ ω^e · c with strictly decreasing exponents and positive coefficients."""

    terms: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        es = [e for e, _ in self.terms]
        if any(a <= b for a, b in zip(es, es[1:])) or any(e < 0 or c <= 0 for e, c in self.terms):
            raise ValueError(f"not in Cantor normal form: {self.terms}")

    @classmethod
    def nat(cls, n: int) -> "OrdinalCNF":
        if n < 0:
            raise ValueError("ordinals are nonnegative")
        return cls(((0, n),)) if n else cls()

    @classmethod
    def omega(cls, e: int = 1, c: int = 1) -> "OrdinalCNF":
        return cls(((e, c),))

    @property
    def is_finite(self) -> bool:
        return all(e == 0 for e, _ in self.terms)

    @property
    def finite_part(self) -> int:
        return self.terms[-1][1] if self.terms and self.terms[-1][0] == 0 else 0

    def __int__(self) -> int:
        if not self.is_finite:
            raise ValueError(f"{self} is infinite")
        return self.finite_part

    def __add__(self, other) -> "OrdinalCNF":
        if isinstance(other, int):
            other = OrdinalCNF.nat(other)
        if not other.terms:
            return self
        lead = other.terms[0][0]
        kept = [(e, c) for e, c in self.terms if e > lead]
        same = sum(c for e, c in self.terms if e == lead)
        head = (lead, other.terms[0][1] + same)
        return OrdinalCNF(tuple(kept) + (head,) + other.terms[1:])

    def __radd__(self, other) -> "OrdinalCNF":
        return OrdinalCNF.nat(other) + self

    def __lt__(self, other) -> bool:
        if isinstance(other, int):
            other = OrdinalCNF.nat(other)
        return self.terms < other.terms

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.is_finite and self.finite_part == other
        return isinstance(other, OrdinalCNF) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def to_json(self) -> dict:
        return {"cnf": [[e, c] for e, c in self.terms]}

    @classmethod
    def from_json(cls, obj) -> "OrdinalCNF":
        return cls(tuple((int(e), int(c)) for e, c in obj["cnf"]))

    @classmethod
    def parse(cls, s: str) -> "OrdinalCNF":
        """Parse forms like "w*2+3", "ω^2+ω+1" or "7"."""
        s = s.replace(" ", "").replace("ω", "w")
        out = cls()
        for part in filter(None, s.split("+")):
            coef = 1
            if "*" in part:
                part, c = part.split("*")
                coef = int(c)
            if part.startswith("w"):
                e = int(part[2:]) if part.startswith("w^") else 1
                out = out + cls.omega(e, coef)
            else:
                out = out + cls.nat(int(part) * coef)
        return out

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            if e == 0:
                parts.append(str(c))
                continue
            base = "ω" if e == 1 else f"ω^{e}"
            parts.append(base if c == 1 else f"{base}·{c}")
        return "+".join(parts)

    __repr__ = __str__


ONE = OrdinalCNF.nat(1)
OMEGA = OrdinalCNF.omega()


class EmptyLabelError(ValueError):
    pass


def z_lab(M: FiniteLabel) -> FiniteLabel:
    """M with its maximal elements removed."""
    return FiniteLabel(g.sub(chi(e)) for g in M.maxima for e in g.supp)


@dataclass(frozen=True)
class HeightReport:
    height: OrdinalCNF
    chain: tuple[FiniteLabel, ...] = ()

    def to_json(self) -> dict:
        return {"height": self.height.to_json(), "chain": [M.to_json() for M in self.chain]}


def height_report(M: FiniteLabel) -> HeightReport:
    if M.is_empty():
        raise EmptyLabelError("height is defined for nonempty labels")
    chain = [M]
    while not chain[-1].is_zero():
        chain.append(z_lab(chain[-1]))
    return HeightReport(OrdinalCNF.nat(len(chain)), tuple(chain))


def height(M: FiniteLabel) -> OrdinalCNF:
    """β + 1 where z_lab applied β times reaches 0."""
    return height_report(M).height


def height_star(M: FiniteLabel) -> OrdinalCNF:
    """α + 1 for the first α with Θ'(M) inside the α-th stage of the z* iteration."""
    if M.is_empty():
        raise EmptyLabelError("height* is defined for nonempty labels")
    universe = theta(M)
    primes = {N: theta_prime(N) for N in universe}
    target = theta_prime(M)
    phi = frozenset([EMPTY])
    alpha = 0
    while not target <= phi:
        nxt = frozenset(N for N in universe if primes[N] <= phi)
        if nxt == phi:
            raise RuntimeError("z* iteration stalled before covering Θ'(M)")
        phi = nxt
        alpha += 1
    return OrdinalCNF.nat(alpha + 1)


# ---------------------------------------------------------------------------
# composite heights


class NonDisjointSupports(ValueError):
    pass


@dataclass(frozen=True)
class Leaf:
    """A finite label, or a symbolic label with a declared height and support."""

    label: FiniteLabel | None = None
    declared: OrdinalCNF | None = None
    support: frozenset[int] | None = None
    name: str = ""

    def __post_init__(self):
        if self.label is None and self.declared is None:
            raise ValueError("a leaf needs a label or a declared height")

    def supp(self) -> frozenset[int]:
        if self.support is not None:
            return frozenset(self.support)
        return self.label.union_support() if self.label is not None else frozenset()


@dataclass(frozen=True)
class UnionNode:
    parts: tuple = ()


@dataclass(frozen=True)
class OplusNode:
    left: object = None
    right: object = None


def _supp(node) -> frozenset[int]:
    if isinstance(node, Leaf):
        return node.supp()
    if isinstance(node, UnionNode):
        return frozenset().union(*(_supp(p) for p in node.parts))
    return _supp(node.left) | _supp(node.right)


def _beta(node) -> OrdinalCNF:
    """Number of z_lab steps to reach 0 (height minus one)."""
    if isinstance(node, Leaf):
        h = node.declared if node.declared is not None else height(node.label)
        if not h.terms:
            raise EmptyLabelError("leaf heights are at least 1")
        # h = β + 1 with finite part at least 1
        t = list(h.terms)
        e, c = t[-1]
        if e != 0:
            raise ValueError(f"height {h} is not a successor")
        t[-1] = (0, c - 1)
        return OrdinalCNF(tuple(x for x in t if x[1]))
    if isinstance(node, UnionNode):
        _disjoint([_supp(p) for p in node.parts])
        return max(_beta(p) for p in node.parts)
    if isinstance(node, OplusNode):
        _disjoint([_supp(node.left), _supp(node.right)])
        a, b = _beta(node.left), _beta(node.right)
        if not a.is_finite and not b.is_finite:
            raise ValueError("⊕ needs at least one finite factor")
        return (b + a) if a.is_finite else (a + b)
    raise TypeError(f"not a height expression: {node!r}")


def _disjoint(supports: Sequence[frozenset[int]]) -> None:
    seen: set[int] = set()
    for s in supports:
        clash = seen & s
        if clash:
            raise NonDisjointSupports(f"supports overlap on {sorted(clash)}")
        seen |= s


def composite_height(node) -> OrdinalCNF:
    """Height of a disjoint union / ⊕ tree from its leaf heights.

    A union of disjoint nonempty labels has the largest leaf height.  Under
    ⊕ the step counts add, the infinite one first.
    """
    return _beta(node) + 1


def build(node) -> FiniteLabel:
    """The explicit label of a tree with finite leaves."""
    from .labels import oplus, union

    if isinstance(node, Leaf):
        if node.label is None:
            raise ValueError("symbolic leaves cannot be built")
        return node.label
    if isinstance(node, UnionNode):
        return union(*(build(p) for p in node.parts))
    return oplus(build(node.left), build(node.right))


def expr_from_json(obj):
    """{"leaf": label-json} | {"symbolic": "w+1", "support": [...]} | {"union": [...]} | {"oplus": [l, r]}."""
    from .labels import label_from_json

    if "leaf" in obj:
        return Leaf(label=label_from_json(obj["leaf"]))
    if "symbolic" in obj:
        return Leaf(declared=OrdinalCNF.parse(str(obj["symbolic"])), support=frozenset(obj.get("support", ())))
    if "union" in obj:
        return UnionNode(tuple(expr_from_json(p) for p in obj["union"]))
    if "oplus" in obj:
        left, right = obj["oplus"]
        return OplusNode(expr_from_json(left), expr_from_json(right))
    raise ValueError(f"bad height expression {obj!r}")
