"""Property tests for the structural invariants, plus exhaustive sweeps where the universe is small."""

import itertools

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from labshift import zoo
from labshift.analysis import independence_certificate, validate_certificate, IndependenceCertificate
from labshift.expanding import build_system, expand, extends
from labshift.labels import (
    ZERO,
    NVector,
    chi,
    generated,
    label_from_json,
    metric,
    minus,
    oplus,
    roof,
    theta,
    windows_equal,
)
from labshift.ordinals import OMEGA, OrdinalCNF, z_lab
from labshift.subshift import default_partition, point_window, sym_zer_classify

from . import oracles

STRICT = build_system("strict")
PART = default_partition()
SETTINGS = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])

vectors = st.dictionaries(st.integers(1, 4), st.integers(1, 2), max_size=3).map(lambda d: NVector(sorted(d.items())))
finite_labels = st.lists(vectors, min_size=1, max_size=3).map(generated)
small_vectors = st.dictionaries(st.integers(1, 3), st.integers(1, 1), max_size=2).map(lambda d: NVector(sorted(d.items())))
zoo_names = st.sampled_from(["ex8a", "ex8b", "ex6a", "ex10a", "units_L", "chi_L", "exx", "proper_M"])
expanding_times = st.lists(st.tuples(st.integers(1, 30), st.booleans()), max_size=6).map(
    lambda ds: sorted({n: s for n, s in ds}.items(), reverse=True)
).map(lambda ds: sum(STRICT.k(n if s else -n) for n, s in ds))


# ---------------------------------------------------------------------------
# expanding systems


def _digit(e, i):
    return e.digits[i] if i < e.length else None


@SETTINGS
@given(expanding_times, expanding_times)
def test_separation(s, t):
    es, et = expand(STRICT, s), expand(STRICT, t)
    assert es is not None and et is not None
    if s == t:
        return
    r = next(i for i in itertools.count() if _digit(es, i) != _digit(et, i))
    ks = [STRICT.k(abs(d)) for d in (_digit(es, r), _digit(et, r)) if d is not None]
    b = STRICT.b
    assert b * abs(t - s) > (b - 2) * max(ks)


def test_extension_criterion_exhaustive():
    universe = [expand(STRICT, v) for v in oracles.ip_universe(oracles.powers(7, 5))]
    b = STRICT.b
    for t in universe:
        if t.length == 0:
            continue
        bound = (b - 2) * STRICT.k(t.last)
        for s in universe:
            assert extends(s, t) == (b * abs(s.value - t.value) <= bound)


def test_intervals_disjoint():
    b = STRICT.b
    centers = [n for n in range(-40, 41) if n]
    spans = sorted((2 * STRICT.k(n) - b * STRICT.sk(abs(n)), 2 * STRICT.k(n) + b * STRICT.sk(abs(n))) for n in centers)
    assert all(hi < lo for (_, hi), (lo, _) in zip(spans, spans[1:]))


@SETTINGS
@given(expanding_times)
def test_expand_round_trip(t):
    e = expand(STRICT, t)
    assert sum(STRICT.k(j) for j in e.digits) == t
    assert expand(STRICT, -t).digits == tuple(-j for j in e.digits)


# ---------------------------------------------------------------------------
# labels


@SETTINGS
@given(finite_labels, st.integers(1, 4), st.randoms(use_true_random=False))
def test_heredity(M, N, rnd):
    w = M.window(N)
    for m in w.members():
        lower = NVector((e, rnd.randint(0, c)) for e, c in m.entries)
        assert w.contains(lower)


@SETTINGS
@given(finite_labels, finite_labels, finite_labels)
def test_strong_triangle(A, B, C):
    dAC, dAB, dBC = metric(A, C, 6).value, metric(A, B, 6).value, metric(B, C, 6).value
    assert dAC <= max(dAB, dBC)


@SETTINGS
@given(finite_labels, finite_labels, st.integers(1, 5))
def test_zero_distance_iff_windows_agree(A, B, N):
    d = metric(A, B, N)
    assert (d.agree >= N) == windows_equal(A, B, N)


@SETTINGS
@given(finite_labels, small_vectors, small_vectors)
def test_action_laws(M, r, s):
    N = 5
    lhs = minus(minus(M, r), s).window(N)
    assert lhs == minus(M, r + s).window(N) == minus(minus(M, s), r).window(N)
    assert all(M.contains(m) for m in minus(M, r).window(N).members())
    assert minus(M, r).is_empty() == (not M.contains(r))


@SETTINGS
@given(zoo_names, small_vectors)
def test_action_on_zoo_labels(name, r):
    M = zoo.label(name)
    assert minus(M, r).window(4).is_empty() == (not M.contains(r))


@SETTINGS
@given(finite_labels, finite_labels, small_vectors)
def test_continuity_of_translation(A, B, r):
    N = 2
    Nr = max(r.norm, max(r.supp, default=0))
    if windows_equal(A, B, N + Nr):
        assert windows_equal(minus(A, r), minus(B, r), N)


@SETTINGS
@given(finite_labels, finite_labels)
def test_oplus_roof(A, B):
    A2 = label_from_json({"kind": "gamow", "base": B.to_json(), "map": [[i + 4, i] for i in range(1, 5)] + [[i, i + 4] for i in range(1, 5)]})
    S = oplus(A, A2)
    assert roof(S, 8) == roof(A, 8) + roof(A2, 8)


@SETTINGS
@given(finite_labels, small_vectors)
def test_theta_closed_under_translation(M, r):
    T = theta(M)
    assert all(minus(X, r) in T for X in T)


@SETTINGS
@given(finite_labels)
def test_json_round_trip(M):
    assert label_from_json(M.to_json()) == M


# ---------------------------------------------------------------------------
# subshift


@SETTINGS
@given(finite_labels, st.integers(1, 12))
def test_window_locality(M, N):
    for mode in ("full", "plus"):
        a = point_window(STRICT, PART, M, 12, mode).bits
        b = point_window(STRICT, PART, M.window(N), 12, mode).bits
        lo, hi = 12 - N, 12 + N + 1
        assert (a[lo:hi] == b[lo:hi]).all()


@SETTINGS
@given(finite_labels, st.integers(1, 300))
def test_symmetry_and_zer(M, N):
    assert sym_zer_classify(point_window(STRICT, PART, M, N)).symmetric
    w = point_window(STRICT, PART, M, N, "plus")
    assert not w.bits[:N].any()


@SETTINGS
@given(finite_labels, finite_labels, st.integers(1, 3))
def test_lipschitz_direction(A, B, N):
    if windows_equal(A, B, N):
        assert (point_window(STRICT, PART, A, N).bits == point_window(STRICT, PART, B, N).bits).all()


# ---------------------------------------------------------------------------
# ordinals and certificates


@SETTINGS
@given(finite_labels)
def test_z_lab_strictly_decreasing(M):
    chain = [M]
    while not chain[-1].is_empty():
        nxt = z_lab(chain[-1])
        assert nxt.subset_of(chain[-1]) and nxt != chain[-1]
        chain.append(nxt)


ordinals = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3)).map(
    lambda c: OrdinalCNF(tuple((2 - i, x) for i, x in enumerate(c) if x))
)


@SETTINGS
@given(ordinals, ordinals, ordinals)
def test_ordinal_addition_associative(a, b, c):
    assert (a + b) + c == a + (b + c)


def test_ordinal_addition_not_commutative():
    assert 1 + OMEGA == OMEGA != OMEGA + 1


@SETTINGS
@given(st.integers(1, 3))
def test_certificates_revalidate(n):
    M = zoo.label("ex11a")
    F, _ = zoo.ex11a_family(n)
    cert = independence_certificate(M, F, search_bound=3 + 2 * 2**n, max_norm=1)
    assert isinstance(cert, IndependenceCertificate) and validate_certificate(M, cert)
    assert len(cert.witnesses) == 2 ** len(F)


@SETTINGS
@given(st.sets(st.integers(1, 6), min_size=1, max_size=3))
def test_units_certified(L):
    M = zoo.label("chi_L")
    cert = independence_certificate(M, [chi(ell) for ell in sorted(L)], search_bound=8, max_norm=2)
    assert validate_certificate(M, cert)
    for A, r in cert.witnesses:
        for f in (chi(ell) for ell in L):
            assert M.contains(f + r) == (f in A)


def test_zero_vector_identity():
    assert minus(zoo.label("ex8a"), ZERO).window(5) == zoo.label("ex8a").window(5)
