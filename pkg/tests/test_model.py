import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mlsm.errors import IdOutOfRange, SelfApproval
from mlsm.model import (
    agent_types,
    bipartition,
    build_instance,
    changing_agents,
    is_symmetric,
    same_type,
)
from mlsm.reductions import gen_random


def test_build_valid_fixture(ex1):
    assert ex1.n == 4 and ex1.ell == 3
    assert ex1.approvals[1][0] == frozenset({1, 3})
    assert ex1.name_of(2) == "c"


def test_build_empty_instance():
    inst = build_instance(0, 1, [[]])
    assert inst.n == 0 and inst.ell == 1


def test_build_rejects_self_approval():
    with pytest.raises(SelfApproval):
        build_instance(2, 1, [[{0}, set()]])


def test_build_rejects_out_of_range():
    with pytest.raises(IdOutOfRange):
        build_instance(2, 1, [[{5}, set()]])
    with pytest.raises(IdOutOfRange):
        build_instance(2, 0, [])


def test_build_normalizes_duplicates():
    inst = build_instance(3, 1, [[[1, 1, 2], [], []]])
    assert inst.approvals[0][0] == frozenset({1, 2})


def test_symmetry(ex1, ex2):
    assert not is_symmetric(ex1)  # layer 2 has c->b without b->c
    assert is_symmetric(ex2)
    assert is_symmetric(build_instance(3, 2, [[set()] * 3, [set()] * 3]))


def test_bipartition_two_disjoint_edges(ex2):
    parts = bipartition(ex2)
    assert parts is not None
    side0, side1 = parts
    assert side0 | side1 == {0, 1, 2, 3} and not side0 & side1
    # union graph is {a1-a2, a3-a4}; neither edge may sit inside a part
    for a, b in ((0, 1), (2, 3)):
        assert (a in side0) != (b in side0)


def test_bipartition_odd_cycle(triangle):
    assert bipartition(triangle) is None


def test_bipartition_no_approvals():
    parts = bipartition(build_instance(3, 1, [[set()] * 3]))
    assert parts is not None
    assert parts[0] | parts[1] == {0, 1, 2}


def test_bipartition_never_cuts_inside_a_part():
    for seed in range(40):
        inst = gen_random(7, 2, 0.3, bipartite=seed % 2 == 0, seed=seed)
        parts = bipartition(inst)
        if parts is None:
            continue
        side0, _ = parts
        for lay in inst.approvals:
            for a in range(inst.n):
                for b in lay[a]:
                    assert (a in side0) != (b in side0)


def test_agent_types_fixture(ex2):
    partition = agent_types(ex2)
    assert partition.tau == 2
    assert partition.blocks == ((0, 1), (2, 3))


def test_agent_types_complete_mutual():
    inst = build_instance(
        4, 2, [[{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}]] * 2
    )
    assert agent_types(inst).tau == 1


def test_agent_types_all_distinct(ex1):
    assert agent_types(ex1).tau == 4


def test_agent_types_matches_pairwise_brute_force():
    for seed in range(30):
        inst = gen_random(6, 3, 0.4, symmetric=seed % 2 == 0, seed=seed)
        blocks = {a: i for i, block in enumerate(agent_types(inst).blocks) for a in block}
        for a in range(inst.n):
            for b in range(a + 1, inst.n):
                assert (blocks[a] == blocks[b]) == same_type(inst, a, b)


def _same_type_two_conditions(inst, a, b):
    # drop the received-approvals condition; must not matter when symmetric
    for lay in inst.approvals:
        if lay[a] - {b} != lay[b] - {a}:
            return False
        if (b in lay[a]) != (a in lay[b]):
            return False
    return True


@given(st.integers(0, 10_000), st.integers(2, 7), st.integers(1, 3))
@settings(max_examples=60, deadline=None)
def test_symmetric_makes_received_condition_redundant(seed, n, ell):
    inst = gen_random(n, ell, 0.5, symmetric=True, seed=seed)
    for a in range(n):
        for b in range(a + 1, n):
            assert same_type(inst, a, b) == _same_type_two_conditions(inst, a, b)


def test_changing_agents(ex2):
    changing = changing_agents(ex2)
    assert changing.agents == frozenset({0, 1, 2, 3})
    assert changing.beta == 4


def test_changing_agents_single_layer():
    inst = gen_random(5, 1, 0.5, seed=3)
    assert changing_agents(inst).beta == 0


def test_changing_agents_identical_layers():
    layer = [{1}, {0}, set()]
    inst = build_instance(3, 3, [layer, layer, layer])
    assert changing_agents(inst).beta == 0


def test_instances_hashable_and_immutable(ex1):
    assert hash(ex1) == hash(
        build_instance(
            4,
            3,
            [
                [{1}, {0}, {3}, {2}],
                [{1, 3}, {0}, {1}, {0}],
                [{1}, {0, 2}, {1, 3}, {0}],
            ],
            names=["a", "b", "c", "d"],
        )
    )
