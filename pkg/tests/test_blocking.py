import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mlsm.blocking import (
    Matching,
    blocking_pairs,
    blocks,
    is_happy,
    rank,
    stable_in_layer,
    stable_layers,
    strong_char_check,
    weak_char_check,
)
from mlsm.errors import NotSymmetric, PairIsMatched
from mlsm.model import build_instance
from mlsm.oracle import enumerate_matchings
from mlsm.reductions import gen_random


def test_matching_partner_lookup(m1):
    assert m1.partner(0) == 1 and m1.partner(3) == 2
    assert m1.partner(7) is None
    assert m1.has_pair(1, 0)


def test_matching_rejects_reuse():
    with pytest.raises(ValueError):
        Matching.from_pairs([(0, 1), (1, 2)])
    with pytest.raises(ValueError):
        Matching.from_pairs([(2, 2)])


def test_rank(ex1):
    assert rank(ex1, 0, 1, 0) == 1      # a approves b in layer one
    assert rank(ex1, 0, None, 2) == 0   # unmatched ranks with disapproved
    assert rank(ex1, 2, 0, 0) == 0      # no arc c->a


def test_is_happy(ex1, m1):
    assert is_happy(ex1, m1, 0, 1)      # a matched to b, approved everywhere
    assert not is_happy(ex1, Matching(()), 0, 0)
    assert not is_happy(ex1, m1, 2, 1)  # c approves only b in layer two


def test_blocks_fixture_claims(ex1, m1, m2):
    for layer in range(3):
        assert blocks(ex1, m2, (0, 1), layer, "super")
    assert blocks(ex1, m1, (0, 3), 1, "super")
    assert not blocks(ex1, m1, (0, 3), 0, "super")
    assert not blocks(ex1, m1, (0, 3), 2, "super")
    assert not blocks(ex1, m2, (0, 1), 1, "weak")  # a is happy with d in layer two


def test_blocks_rejects_matched_pair(ex1, m1):
    with pytest.raises(PairIsMatched):
        blocks(ex1, m1, (0, 1), 0, "weak")


def test_blocking_pairs_examples(ex1, m1):
    assert blocking_pairs(ex1, m1, 2, "super") == [(1, 2)]
    empty = build_instance(4, 1, [[set()] * 4])
    anym = Matching.from_pairs([(0, 2)])
    assert blocking_pairs(empty, anym, 0, "weak") == []
    perfect = Matching.from_pairs([(0, 1), (2, 3)])
    assert blocking_pairs(empty, perfect, 0, "super") == [
        (0, 2),
        (0, 3),
        (1, 2),
        (1, 3),
    ]


def test_stable_layers_fixture(ex1, m1, m2):
    assert stable_layers(ex1, m1, "strong") == frozenset({0, 2})
    assert stable_layers(ex1, m1, "super") == frozenset({0})
    assert stable_layers(ex1, m2, "weak") == frozenset({1, 2})


def test_characterizations_on_footnote_fixture(ex2, m1):
    for layer in range(2):
        assert weak_char_check(ex2, m1, layer)
        assert strong_char_check(ex2, m1, layer)
    assert not weak_char_check(ex2, Matching(()), 0)


def test_characterization_triangle(triangle):
    single = Matching.from_pairs([(0, 1)])
    assert not strong_char_check(triangle, single, 0)


def test_characterizations_require_symmetry(ex1, m1):
    with pytest.raises(NotSymmetric):
        weak_char_check(ex1, m1, 0)
    with pytest.raises(NotSymmetric):
        strong_char_check(ex1, m1, 0)


def test_characterizations_match_definition_exhaustively():
    rng = random.Random(5)
    for _ in range(25):
        n = rng.randint(2, 6)
        inst = gen_random(n, 2, 0.5, symmetric=True, seed=rng.getrandbits(30))
        for m in enumerate_matchings(n):
            for i in range(2):
                assert weak_char_check(inst, m, i) == stable_in_layer(inst, m, i, "weak")
                assert strong_char_check(inst, m, i) == stable_in_layer(
                    inst, m, i, "strong"
                )


@st.composite
def instance_matching_pair(draw):
    n = draw(st.integers(2, 6))
    ell = draw(st.integers(1, 3))
    seed = draw(st.integers(0, 10_000))
    symmetric = draw(st.booleans())
    inst = gen_random(n, ell, 0.5, symmetric=symmetric, seed=seed)
    k = draw(st.integers(0, n // 2))
    perm = draw(st.permutations(range(n)))
    m = Matching.from_pairs(
        (perm[2 * i], perm[2 * i + 1]) for i in range(k)
    )
    return inst, m


@given(instance_matching_pair())
@settings(max_examples=120, deadline=None)
def test_blocking_monotone_across_bases(data):
    inst, m = data
    for a in range(inst.n):
        for b in range(a + 1, inst.n):
            if m.partner(a) == b:
                continue
            for i in range(inst.ell):
                w = blocks(inst, m, (a, b), i, "weak")
                s = blocks(inst, m, (a, b), i, "strong")
                p = blocks(inst, m, (a, b), i, "super")
                assert (not w or s) and (not s or p)


@given(instance_matching_pair())
@settings(max_examples=80, deadline=None)
def test_adding_pairs_never_creates_blocking(data):
    inst, m = data
    free = sorted(a for a in range(inst.n) if not m.covers(a))
    if len(free) < 2:
        return
    bigger = Matching.from_pairs(list(m.pairs) + [(free[0], free[1])])
    for base in ("weak", "strong", "super"):
        for i in range(inst.ell):
            for pair in blocking_pairs(inst, bigger, i, base):
                assert blocks(inst, m, pair, i, base)
