import itertools

import pytest

from labshift import zoo
from labshift.labels import EMPTY, NVector, chi, generated, limit, minus, theta
from labshift.verdict import HOLDS

from . import oracles


def test_every_expected_tag_passes():
    rows = zoo.verify_all()
    bad = [r for r in rows if r.status != "pass"]
    assert not bad, bad
    assert zoo.report_exit_code(rows) == 0


def test_unknown_entry():
    with pytest.raises(zoo.UnknownEntry):
        zoo.get("ex99")


def test_N_n_entry():
    assert zoo.label("N_n", n=4) == generated([chi(1, 4)])


def test_ex8a_window():
    M = zoo.label("ex8a")
    gens = [chi(1) + chi(ell) for ell in range(2, 7)] + [chi(ell) + chi(ell + 1) for ell in range(2, 6)]
    assert M.window(6) == generated(gens).window(6)


@pytest.mark.parametrize("ell", range(2, 11))
def test_ex8a_translates(ell):
    M = zoo.label("ex8a")
    assert minus(M, chi(ell)).window(12) == zoo.ex8a_translate(ell).window(12)


def test_ex10a_translates():
    M = zoo.label("ex10a")
    N = 8
    assert minus(M, chi(1)).window(N) == zoo.ex10a_translates("1", 0, N)
    assert minus(M, chi(3)).window(N) == zoo.ex10a_translates("3", 0, N)
    for ell in range(2, 6):
        assert minus(M, chi(2 * ell + 1)).window(N) == zoo.ex10a_translates("odd", ell, N)
    for ell in range(1, 6):
        assert minus(M, chi(2 * ell)).window(N) == zoo.ex10a_translates("even", ell, N)


def test_ex10a_double_limits_do_not_commute():
    ba, ab = zoo.ex10a_double_limits(8, 40)
    assert ba.converged and ba.limit == generated([chi(3)])
    assert ab.converged and ab.limit.is_empty()


def _path_indices(x, K):
    """ℓ_w for the first K prefixes of the periodic extension of x (length-lex word numbering)."""
    out = []
    for k in range(1, K + 1):
        w = "".join(x[i % len(x)] for i in range(k))
        out.append(2**k + int(w, 2))
    return out


@pytest.mark.parametrize("x", ["0101", "1", "0", "110"])
def test_branch_label_window(x):
    N = 20
    path = [ell for ell in _path_indices(x, 6) if ell <= N]
    gens = [chi(a) + chi(b) for a, b in itertools.combinations_with_replacement(path, 2)] or [NVector()]
    dense = [oracles.to_dense(g.entries, N) for g in gens]
    expected = oracles.window_box(oracles.closure(dense, N), N)
    got = zoo.label("ex10cmoved", x=x).window(N)
    assert frozenset(oracles.to_dense(m.entries, N) for m in got.members()) == expected


def test_branch_limit_along_path():
    M = zoo.label("ex10cmoved")
    x = "0101"
    path = _path_indices(x, 45)
    res = limit(lambda i: minus(M, chi(path[i])), 12, 40)
    units = [chi(ell) for ell in path if ell <= 12]
    assert res.converged and res.limit == generated(units)


def test_exFIN_theta_is_singleton():
    F = zoo.label("exFIN")
    assert theta(F) == frozenset([F])
    assert minus(F, chi(3, 7)) is F


def test_proper_pair():
    M, N = zoo.label("proper_M"), zoo.label("proper_N")
    assert M == generated([chi(1) + chi(2), chi(2, 2) + chi(3)])
    assert N == generated([chi(1) + chi(2), chi(2) + chi(3)])
    assert N.subset_of(M) and N not in theta(M)


def test_units_and_sublattice_by_parity():
    odd = zoo.label("units_L", L="odd")
    assert odd.contains(chi(3)) and not odd.contains(chi(2)) and not odd.contains(chi(1) + chi(3))
    even = zoo.label("chi_L", L="even")
    assert even.contains(chi(2) + chi(4) + chi(6)) and not even.contains(chi(2, 2))


def test_exx_structure():
    M = zoo.label("exx")
    assert M.contains(chi(1) + chi(3) + chi(5) + chi(2))
    assert not M.contains(chi(2) + chi(4))


def test_ex11a_layout_bijection():
    L = zoo.LAYOUT
    for n in range(1, 5):
        block = list(L.A(n))
        for r in range(len(block) + 1):
            for A in itertools.combinations(block, r):
                ell = L.ell_of(n, A)
                assert ell in L.B(n) and L.subset_of(n, ell) == frozenset(A)


def test_word_index_bijection():
    words = [""] + ["".join(p) for k in range(1, 6) for p in itertools.product("01", repeat=k)]
    idx = [zoo.word_index(w) for w in words]
    assert sorted(idx) == list(range(1, len(words) + 1))
    assert all(zoo.index_word(zoo.word_index(w)) == w for w in words)


def test_permex_recurrent_witness():
    v = zoo.verify_entry(zoo.get("permex"))
    assert all(r.status == "pass" for r in v)


def test_entries_are_hereditary_on_window():
    for name in zoo.NAMES:
        if name in ("exFIN",):
            continue
        w = zoo.label(name).window(6)
        for m in w.members():
            for ell in m.supp:
                assert w.contains(m.sub(chi(ell)))


def test_empty_translate():
    assert minus(zoo.label("ex8a"), chi(1, 3)).window(6) == EMPTY


def test_holds_constant_is_shared():
    assert HOLDS == "holds-on-window"
