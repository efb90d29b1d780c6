"""Dynamical criteria: translation finiteness, independence certificates, density.

All verdicts are window-honest.  A translation-finite verdict only covers
the candidate sets B that were tried; a refutation carries the set B and
the table of counts that reproduces it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .expanding import ExpandingSystem, density_profile
from .labels import Label, NVector, chi, minus
from .subshift import PartitionScheme, in_A

TF = "tf-on-window"
NOT_TF = "not-tf-with-witness"
INCONCLUSIVE = "inconclusive"
TF_EXIT = {TF: 0, NOT_TF: 1, INCONCLUSIVE: 2}

DEFAULT_THRESHOLD = 25


# ---------------------------------------------------------------------------
# translation finiteness


@dataclass(frozen=True)
class TFCandidate:
    """An infinite set B (as a predicate) and the pool of shifts n to count in."""

    name: str
    member: Callable[[int], bool]
    pool: tuple[int, ...] | None = None


@dataclass(frozen=True)
class TFReport:
    verdict: str
    witness_B: str | None
    B_sample: tuple[int, ...]
    N_used: tuple[int, ...]
    intersection_sizes: dict
    threshold: int
    radius: int
    pools: dict = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return TF_EXIT[self.verdict]

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "witness_B": self.witness_B,
            "B_sample": [str(b) for b in self.B_sample],
            "N_used": list(self.N_used),
            "intersection_sizes": {k: [[N, c] for N, c in v] for k, v in self.intersection_sizes.items()},
            "threshold": self.threshold,
            "radius": self.radius,
            "shift_pools": {k: [str(n) for n in v] for k, v in self.pools.items()},
        }


def _test_Ns(radius: int) -> tuple[int, ...]:
    Ns, N = [], 1
    while N < radius:
        Ns.append(N)
        N *= 2
    Ns.append(radius)
    return tuple(Ns)


def tf_counts(A: Callable[[int], bool], cand: TFCandidate, radius: int, Ns: Sequence[int], threshold: int) -> list[tuple[int, int]]:
    """#{n in pool : n + b in A for every b in B ∩ [-N, N]} for each N, capped at the threshold."""
    pool = cand.pool if cand.pool is not None else range(-radius, radius + 1)
    out = []
    for N in Ns:
        Bw = [b for b in range(-N, N + 1) if cand.member(b)]
        c = 0
        for n in pool:
            if all(A(n + b) for b in Bw):
                c += 1
                if c >= threshold:
                    break
        out.append((N, c))
    return out


def tf_check(
    A: Callable[[int], bool],
    radius: int = 200,
    candidates: Iterable[TFCandidate] = (),
    threshold: int = DEFAULT_THRESHOLD,
) -> TFReport:
    """Test the translation-finite condition against each candidate B.

    A candidate refutes when the count reaches the threshold at every tested
    N up to the radius.  Otherwise some N makes it small, which is the
    behaviour TF asks of every infinite B.
    """
    Ns = _test_Ns(radius)
    table = {}
    cands = list(candidates)
    if not cands:
        return TFReport(INCONCLUSIVE, None, (), Ns, {}, threshold, radius)
    for cand in cands:
        counts = tf_counts(A, cand, radius, Ns, threshold)
        table[cand.name] = counts
        if all(c >= threshold for _, c in counts):
            sample = tuple(b for b in range(-radius, radius + 1) if cand.member(b))[:50]
            pools = {cand.name: cand.pool} if cand.pool is not None else {}
            return TFReport(NOT_TF, cand.name, sample, Ns, table, threshold, radius, pools)
    return TFReport(TF, None, (), Ns, table, threshold, radius)


def generic_candidates(A: Callable[[int], bool], radius: int, translates: int = 4) -> list[TFCandidate]:
    """B = A and a few of its translates A - a for small a in A."""
    cands = [TFCandidate("A", A)]
    shifts = sorted((a for a in range(-radius, radius + 1) if a and A(a)), key=abs)[:translates]
    for a in shifts:
        cands.append(TFCandidate(f"A-({a})", lambda b, a=a: A(b + a)))
    return cands


def label_candidates(
    sys: ExpandingSystem, part: PartitionScheme, M: Label, N: int = 6, count: int = DEFAULT_THRESHOLD + 5
) -> list[TFCandidate]:
    """For r in M of norm >= 2 and l in supp r: B = A[M - χ(l)], shifts n = k(j) with j in D_l.

    Along those shifts the point x[M] converges to x[M - χ(l)], whose support
    is infinite because r - χ(l) is a positive member of M - χ(l).
    """
    for r in sorted(M.window(N).members(), key=NVector.norm_lex_key):
        if r.norm < 2:
            continue
        ell = r.supp[0]
        Ml = minus(M, chi(ell))
        pool = tuple(sys.kabs(part.Q(ell, i)) for i in range(4, 4 + count))
        return [TFCandidate(f"A[M-χ{ell}]", lambda b, Ml=Ml: in_A(sys, part, Ml, b), pool)]
    return []


def tf_check_label(
    sys: ExpandingSystem,
    part: PartitionScheme,
    M: Label,
    radius: int = 200,
    threshold: int = DEFAULT_THRESHOLD,
    N: int = 6,
) -> TFReport:
    A = lambda t: in_A(sys, part, M, t)
    cands = label_candidates(sys, part, M, N) + generic_candidates(A, radius)
    return tf_check(A, radius, cands, threshold)


def example_set(n: int) -> bool:
    """2N ∪ -(2N + 1): even naturals and negative odd numbers."""
    return (n >= 0 and n % 2 == 0) or (n < 0 and n % 2 != 0)


def even_naturals(n: int) -> bool:
    return n >= 0 and n % 2 == 0


# ---------------------------------------------------------------------------
# independence


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class IndependenceCertificate:
    F: tuple[NVector, ...]
    witnesses: tuple[tuple[frozenset[NVector], NVector], ...]

    def to_json(self) -> dict:
        return {
            "F": [f.to_json() for f in self.F],
            "witnesses": [
                {"A": [a.to_json() for a in sorted(A, key=NVector.sort_key)], "r": r.to_json()} for A, r in self.witnesses
            ],
        }


@dataclass(frozen=True)
class IndependenceFailure:
    F: tuple[NVector, ...]
    A: frozenset[NVector]
    searched: int

    def to_json(self) -> dict:
        return {"F": [f.to_json() for f in self.F], "failed_A": [a.to_json() for a in sorted(self.A, key=NVector.sort_key)], "searched": self.searched}


def cut(M: Label, F: Sequence[NVector], r: NVector) -> frozenset[NVector]:
    """F ∩ (M - r)."""
    return frozenset(f for f in F if M.contains(f + r))


def vectors_by_norm(bound: int, max_norm: int) -> Iterator[NVector]:
    """Vectors with support in [1, bound] in norm-then-lex order."""
    for n in range(max_norm + 1):
        batch = []
        for combo in itertools.combinations_with_replacement(range(1, bound + 1), n):
            d: dict[int, int] = {}
            for e in combo:
                d[e] = d.get(e, 0) + 1
            batch.append(NVector(d.items()))
        batch.sort(key=NVector.sort_key)
        yield from batch


def _subsets(F: Sequence[NVector]) -> list[frozenset[NVector]]:
    return [frozenset(f for i, f in enumerate(F) if mask >> i & 1) for mask in range(1 << len(F))]


def independence_certificate(
    M: Label,
    F: Iterable[NVector],
    search_bound: int = 20,
    max_norm: int = 2,
    hints: Mapping[frozenset[NVector], NVector] | Iterable[NVector] = (),
) -> IndependenceCertificate | IndependenceFailure:
    """For every A ⊆ F find r with F ∩ (M - r) = A.

    Hints are tried first; the search then walks vectors with support in
    [1, search_bound] by norm, then lexicographically.
    """
    F = tuple(sorted(set(F), key=NVector.sort_key))
    for a, b in itertools.combinations(F, 2):
        if a.leq(b) or b.leq(a):
            raise PreconditionError(f"F is not an antichain: {a!r} and {b!r} are comparable")
    missing = [f for f in F if not M.contains(f)]
    if missing:
        raise PreconditionError(f"F is not inside M: {missing[0]!r}")
    hint_list = list(hints.values()) if isinstance(hints, Mapping) else list(hints)
    found: dict[frozenset[NVector], NVector] = {}
    targets = set(_subsets(F))
    for r in hint_list:
        c = cut(M, F, r)
        if c in targets and c not in found:
            found[c] = r
    searched = 0
    if len(found) < len(targets):
        for r in vectors_by_norm(search_bound, max_norm):
            searched += 1
            c = cut(M, F, r)
            if c not in found:
                found[c] = r
                if len(found) == len(targets):
                    break
    for A in _subsets(F):
        if A not in found:
            return IndependenceFailure(F, A, searched)
    return IndependenceCertificate(F, tuple((A, found[A]) for A in _subsets(F)))


def validate_certificate(M: Label, cert: IndependenceCertificate) -> bool:
    """Re-check every witness: f + r in M exactly for f in A."""
    if len(cert.witnesses) != 1 << len(cert.F):
        return False
    seen = set()
    for A, r in cert.witnesses:
        seen.add(A)
        for f in cert.F:
            if M.contains(f + r) != (f in A):
                return False
    return len(seen) == 1 << len(cert.F)


@dataclass(frozen=True)
class FlatFailure:
    F: frozenset[int]
    roof_part: NVector

    def to_json(self) -> dict:
        return {"violating_F": sorted(self.F), "roof_part": self.roof_part.to_json()}


def _roof_on(M: Label, L: Sequence[int], N: int) -> NVector:
    vals = {}
    w = None
    for ell in L:
        v = M.declared_roof(ell)
        if v is None:
            w = w or M.window(max(N, max(L)))
            v = w.roof()[ell]
        if v:
            vals[ell] = v
    return NVector(vals.items())


def flat_independence(M: Label, L: Iterable[int], N: int = 12) -> IndependenceCertificate | FlatFailure:
    """If ρ|F ∈ M for every F ⊆ L, the units χ(l), l ∈ L, are independent with witnesses ρ|(L \\ A)."""
    L = tuple(sorted(set(L)))
    rho = _roof_on(M, L, N)
    for size in range(len(L) + 1):
        for F in itertools.combinations(L, size):
            part = rho.restrict(F)
            if not M.contains(part):
                return FlatFailure(frozenset(F), part)
    units = tuple(chi(ell) for ell in L)
    wit = []
    for A in _subsets(units):
        rest = [u.supp[0] for u in units if u not in A]
        wit.append((A, rho.restrict(rest)))
    return IndependenceCertificate(units, tuple(wit))


# ---------------------------------------------------------------------------
# density


@dataclass(frozen=True)
class DensityReport:
    rows: tuple
    decreasing: bool
    note: str = (
        "zero Banach density: the only invariant measure on the orbit closure of x[M] "
        "is the point mass at the fixed point e"
    )

    @property
    def all_within_bound(self) -> bool:
        return all(r.within_bound for r in self.rows)

    def to_json(self) -> dict:
        return {
            "rows": [r.to_json() for r in self.rows],
            "ratios_strictly_decreasing": self.decreasing,
            "all_within_bound": self.all_within_bound,
            "note": self.note,
        }


def density_report(sys: ExpandingSystem, windows: Iterable[int]) -> DensityReport:
    from .expanding import ratios_strictly_decreasing

    rows = tuple(density_profile(sys, windows))
    return DensityReport(rows, ratios_strictly_decreasing(rows))
