"""Span normalization, character validity, and classification."""

import pytest

from fcengine import coeffs as cf
from fcengine.fc import (FC, CharacterNotHomomorphism, DegenerateSample,
                         EmptyClass, FCError, NotABase, NotAGroup,
                         PartitionMismatch, build_orbit_fc, classify,
                         classify_ordered, jordan_oracle)
from fcengine.orbits import normalize_partition, partitions


def radical_fc(n, charge):
    pairs = [({(i, j): 1}, charge.get((i, j), 0))
             for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    return FC.make(n, pairs)


def test_make_normalizes_to_reduced_echelon():
    a = FC.make(3, [({(1, 2): 2, (1, 3): 4}, 2), ({(1, 3): 1}, 0)])
    b = FC.make(3, [({(1, 3): 1}, 0), ({(1, 2): 1, (1, 3): 5}, 1)])
    assert a.equal(b)
    pivots = a.pivots()
    assert len(set(pivots)) == len(pivots)
    for row, piv in zip(a.rows, pivots):
        assert row[piv] == 1
        for other in a.rows:
            if other is not row:
                assert piv not in other


def test_make_rejects_positions_outside_the_upper_triangle():
    with pytest.raises(FCError):
        FC.make(3, [({(2, 2): 1}, 0)])
    with pytest.raises(FCError):
        FC.make(3, [({(3, 1): 1}, 0)])


def test_ell_is_linear_and_guards_the_span():
    fc = FC.make(4, [({(1, 2): 1}, 3), ({(3, 4): 1}, 5)])
    assert fc.ell({(1, 2): 2}) == 6
    assert fc.ell({(1, 2): 1, (3, 4): 1}) == 8
    with pytest.raises(FCError):
        fc.ell({(1, 3): 1})
    assert fc.contains({(1, 2): 7})
    assert not fc.contains({(2, 3): 1})


def test_validate_requires_bracket_closure():
    with pytest.raises(NotAGroup):
        FC.make(3, [({(1, 2): 1}, 0), ({(2, 3): 1}, 0)]).validate()
    ok = FC.make(3, [({(1, 2): 1}, 1), ({(2, 3): 1}, 0), ({(1, 3): 1}, 0)])
    assert ok.validate() is ok


def test_validate_requires_character_vanishing_on_brackets():
    bad = FC.make(3, [({(1, 2): 1}, 1), ({(2, 3): 1}, 1), ({(1, 3): 1}, 1)])
    with pytest.raises(CharacterNotHomomorphism):
        bad.validate()


def test_support_and_nless():
    fc = radical_fc(4, {(1, 3): 1, (2, 4): 2})
    assert dict(fc.support_roots()) == {(1, 3): 1, (2, 4): 2}
    assert fc.in_R_nless()
    comparable = radical_fc(3, {(1, 2): 1, (1, 3): 1})
    assert not comparable.in_R_nless()
    with pytest.raises(FCError):
        classify(comparable)


def test_classify_counts_chains():
    # 1 -> 3 -> 5 and 2 -> 4 on GL_6: chains of length 2 and 1
    fc = radical_fc(6, {(1, 3): 1, (3, 5): 1, (2, 4): 1})
    assert classify(fc) == (3, 2, 1)
    assert classify(radical_fc(4, {})) == (1, 1, 1, 1)


def test_classify_ordered_places_parts_by_first_crossing():
    fc = build_orbit_fc((2, 2), "down")
    assert classify_ordered(fc, (2, 2)) == (2, 2)
    with pytest.raises(FCError):
        classify_ordered(fc, (3, 2))


@pytest.mark.parametrize("variant", ["down", "up"])
def test_build_orbit_fc_realizes_every_class(variant):
    for n in range(2, 7):
        for lam in partitions(n):
            fc = build_orbit_fc(lam, variant)
            assert fc.n == n
            assert classify(fc) == lam
            assert fc.in_R_nless()
            if any(x > 1 for x in lam):
                assert jordan_oracle(fc) == lam


def test_build_orbit_fc_explicit_blocks():
    fc = build_orbit_fc((2, 2, 1), "explicit", blocks=[2, 3])
    assert classify(fc) == (2, 2, 1)
    with pytest.raises(PartitionMismatch):
        build_orbit_fc((2, 2), "explicit", blocks=[3, 1])
    with pytest.raises(EmptyClass):
        build_orbit_fc((3, 2, 2, 2), "explicit", blocks=[4, 1, 4])
    with pytest.raises(FCError):
        build_orbit_fc((2, 1), variant="sideways")


def test_jordan_oracle_needs_nonzero_samples():
    fc = radical_fc(3, {(1, 3): 1})
    sym = FC.make(3, [({(1, 2): 1}, cf.promote("a1"))],
                  param_excl={"a1": ()})
    with pytest.raises(DegenerateSample):
        jordan_oracle(sym)
    assert jordan_oracle(sym, sample={"a1": 2}) == (2, 1)
    with pytest.raises(DegenerateSample):
        jordan_oracle(sym, sample={"a1": 0})
    assert jordan_oracle(fc) == (2, 1)


def test_jordan_oracle_agrees_with_classify_off_the_canonical_form():
    # same class, staircase placed differently than build_orbit_fc does
    fc = radical_fc(5, {(1, 4): 1, (2, 5): 3})
    assert classify(fc) == (2, 2, 1)
    assert jordan_oracle(fc) == (2, 2, 1)


def test_chain_sharing_rows_is_not_a_base():
    fc = radical_fc(6, {(1, 4): 1, (1, 5): 1})
    # shared row 1: not R_nless even though (1,4),(1,5) share no column
    assert not fc.in_R_nless()
    tied = FC.make(4, [({(1, 3): 1, (2, 4): 1}, 1)])
    with pytest.raises(FCError):
        tied.support_roots()


def test_live_params_and_substitution():
    fc = FC.make(3, [({(1, 2): 1}, cf.promote("a1"))], param_excl={"a1": ()})
    assert fc.live_params() == ("a1",)
    plain = radical_fc(3, {(1, 3): 2})
    assert plain.live_params() == ()
