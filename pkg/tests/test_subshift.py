import random

import numpy as np
import pytest

from labshift import zoo
from labshift.expanding import Expansion, build_system, expand
from labshift.labels import EMPTY, ZERO, ZERO_LABEL, NVector, chi, generated, minus
from labshift.subshift import (
    PreconditionError,
    asymptotic_check,
    asymptotic_times,
    default_partition,
    in_A,
    injectivity_radius,
    length_vector,
    locality_check,
    locality_precondition,
    nonasymptotic_witness,
    partition_by_name,
    point_window,
    sym_zer_classify,
)

from . import oracles

STRICT = build_system("strict")
PAPER = build_system("paper")
PART = default_partition()


def test_support_map_examples():
    assert [PART.support(n) for n in (1, 2, 3, 4)] == [1, 2, 1, 3]
    assert PART.block(1, 4) == [1, 3, 5, 7]
    assert PART.min_block(2) == 2 < PART.min_block(3) == 4


def test_partition_covers_prefix_once():
    seen = {}
    for ell in range(1, 12):
        for q in PART.block(ell, 600):
            assert q not in seen
            seen[q] = ell
    assert all(n in seen and seen[n] == PART.support(n) for n in range(1, 500))


def test_unknown_partition():
    with pytest.raises(ValueError):
        partition_by_name("3-adic")


def test_length_vector_examples():
    assert length_vector(STRICT, PART, 0) == ZERO
    assert length_vector(STRICT, PART, 56) == chi(1) + chi(2)
    assert length_vector(STRICT, PART, 350) == chi(1, 2)
    assert length_vector(STRICT, PART, 50) is None


def test_support_map_bound():
    # |t| <= (b - 1) min D_l forces r(t)_l = 0
    universe = oracles.ip_universe(oracles.powers(7, 7))
    for t in universe:
        r = length_vector(STRICT, PART, t)
        for ell in r.supp:
            assert abs(t) > (STRICT.b - 1) * PART.min_block(ell)


def test_window_examples():
    assert point_window(STRICT, PART, EMPTY, 30).ones() == []
    assert point_window(STRICT, PART, ZERO_LABEL, 10).ones() == [0]
    assert point_window(STRICT, PART, generated([chi(1)]), 50).ones() == [-7, 0, 7]


def test_window_matches_enumeration_oracle():
    kvals = oracles.powers(7, 5)
    rng = random.Random(11)
    for _ in range(15):
        gens = [tuple(rng.randint(0, 2) for _ in range(3)) for _ in range(2)]
        M = generated(NVector((i + 1, c) for i, c in enumerate(g)) for g in gens)
        member = lambda r: M.contains(NVector(r.items()))
        for mode, positive in (("full", False), ("plus", True)):
            got = point_window(STRICT, PART, M, 400, mode).ones()
            assert got == oracles.A_window_direct(kvals, member, -400, 400, positive)


def test_window_json_and_renderings():
    w = point_window(STRICT, PART, generated([chi(1)]), 8)
    assert w.to_json() == {"N": 8, "shift": "0", "mode": "full", "ones": ["-7", "0", "7"]}
    row, caret = w.ascii().split("\n")
    assert row == "." + "#" + "......" + "#" + "......" + "#" + "."
    assert caret.index("^") == 8
    pgm = w.pgm()
    assert pgm.startswith(b"P5\n17 1\n1\n") and len(pgm) == len(b"P5\n17 1\n1\n") + 17


def test_symmetry_and_zer():
    for name in ("ex8a", "ex6a", "units_L"):
        M = zoo.label(name)
        assert sym_zer_classify(point_window(STRICT, PART, M, 60)).symmetric
        plus = sym_zer_classify(point_window(STRICT, PART, M, 60, "plus"))
        assert plus.zer
        assert not sym_zer_classify(point_window(STRICT, PART, M, 60, shift=1)).symmetric


def test_in_A_modes():
    M = generated([chi(1) + chi(2)])
    assert in_A(STRICT, PART, M, 42)
    assert not in_A(STRICT, PART, M, 42, "plus")
    assert in_A(STRICT, PART, M, 56, "plus")


# ---------------------------------------------------------------------------
# locality


def test_locality_trivial_at_zero():
    rep = locality_check(STRICT, PART, generated([chi(1) + chi(2)]), 0, 40)
    assert rep.verified


def test_locality_example():
    rep = locality_check(STRICT, PART, generated([chi(1, 2)]), 343, 50)
    assert rep.verified and rep.r == chi(1)


def test_locality_literal_rule_rejects():
    with pytest.raises(PreconditionError):
        locality_check(STRICT, PART, generated([chi(1, 2)]), 343, 50, rule="literal")


def test_locality_precondition_rules():
    e = Expansion.from_digits(STRICT, (8,))
    assert locality_precondition(STRICT, e, 4, "literal")
    assert not locality_precondition(STRICT, e, 5, "literal")
    # the literal rule implies the magnitude rule
    for j in range(1, 12):
        e = Expansion.from_digits(STRICT, (j,))
        for N in range(1, j // 2 + 1):
            assert locality_precondition(STRICT, e, N, "magnitude")


def test_locality_errors():
    with pytest.raises(PreconditionError):
        locality_check(STRICT, PART, generated([chi(1)]), 50, 1)
    with pytest.raises(PreconditionError):
        locality_check(STRICT, PART, generated([chi(2)]), 7, 1)


# ---------------------------------------------------------------------------
# asymptotics


def test_asymptotic_times_are_distinct_with_target_vector():
    r = chi(1) + chi(2, 2)
    times = asymptotic_times(PART, STRICT, r, 6)
    assert len({e.value for e in times}) == 6
    for e in times:
        assert length_vector(STRICT, PART, e.value) == r
    lasts = [abs(e.last) for e in times]
    assert lasts == sorted(lasts) and lasts[0] < lasts[-1]


def test_asymptotic_unit():
    rep = asymptotic_check(STRICT, PART, generated([chi(1)]), chi(1), count=6, N=3)
    assert rep.verified
    assert rep.rows[-1].precondition and rep.rows[-1].radius >= 3


def test_asymptotic_outside_label_goes_to_fixed_point():
    M = generated([chi(1)])
    rep = asymptotic_check(STRICT, PART, M, chi(2), count=5, N=3)
    assert rep.verified
    assert point_window(STRICT, PART, minus(M, chi(2)), 3).ones() == []


def test_asymptotic_ex10a_rows():
    M = zoo.label("ex10a")
    for r in (chi(1), chi(3)):
        assert asymptotic_check(STRICT, PART, M, r, count=5, N=4).verified


# ---------------------------------------------------------------------------
# non-asymptotic pairs and injectivity


def test_no_witness_for_empty_and_zero():
    assert nonasymptotic_witness(STRICT, PART, EMPTY, ZERO_LABEL, 3) is None


def test_witness_unit_against_zero():
    w = nonasymptotic_witness(STRICT, PART, generated([chi(1)]), ZERO_LABEL, 3)
    assert w.r == chi(1) and w.keeps == 1
    assert all(w.bits_keep) and not any(w.bits_drop)


def test_witness_ex8a_against_translate():
    M = zoo.label("ex8a")
    w = nonasymptotic_witness(STRICT, PART, M, minus(M, chi(1)), 4)
    assert w is not None and w.keeps == 1
    assert all(w.bits_keep) and not any(w.bits_drop)


def test_injectivity_unit_against_zero():
    rep = injectivity_radius(STRICT, PART, generated([chi(1)]), ZERO_LABEL, 1)
    assert rep.R == 7 and rep.t == 7 and rep.verified
    a = point_window(STRICT, PART, generated([chi(1)]), 7).ones()
    b = point_window(STRICT, PART, ZERO_LABEL, 7).ones()
    assert set(a) ^ set(b) == {-7, 7}


def test_injectivity_ex8a_ex8b():
    rep = injectivity_radius(STRICT, PART, zoo.label("ex8a"), zoo.label("ex8b"), 4)
    assert rep.verified and rep.bit1 != rep.bit2


def test_injectivity_requires_difference():
    M = generated([chi(1)])
    with pytest.raises(PreconditionError):
        injectivity_radius(STRICT, PART, M, M, 3)


def test_huge_shift_is_exact():
    t = STRICT.k(40) + STRICT.k(2)
    w = point_window(STRICT, PART, generated([chi(2) + chi(4)]), 10, shift=t)
    assert w.bit(0) == 1 and w.shift == t
    assert expand(STRICT, t).digits == (40, 2)
    assert isinstance(w.bits, np.ndarray)
