import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adtcap.builder import GenParams, random_network
from adtcap.network import Cut, Edge, LayeredNetwork, Node, cut_value, layer_cut_bound
from adtcap.oracle import OracleSizeError, brute_force_capacity, li_path_capacity, verify_paths
from adtcap.solver import capacity


def chain():
    layers = [[Node("S", 1, 0)], [Node("R", 1, 1)], [Node("D", 0, 1)]]
    return LayeredNetwork.build(2, layers, [Edge("S", 0, "R", 0), Edge("R", 0, "D", 0)])


def all_ones_2x2():
    layers = [[Node("S", 2, 0)], [Node("D", 0, 2)]]
    edges = [Edge("S", x, "D", y) for x in range(2) for y in range(2)]
    return LayeredNetwork.build(2, layers, edges)


def test_edgeless():
    net = LayeredNetwork.build(2, [[Node("S", 1, 0)], [Node("R", 1, 1)], [Node("D", 0, 1)]])
    res = brute_force_capacity(net)
    assert res.capacity == 0
    # stops at the first zero cut, which is the empty mask
    assert res.argmin_cut == Cut.of(["S"]) and res.cuts_examined == 1


def test_chain():
    res = brute_force_capacity(chain())
    assert res.capacity == 1
    assert res.argmin_cut == Cut.of(["S"])
    assert res.cuts_examined == 2


def test_all_ones_f2_has_rank_one():
    assert brute_force_capacity(all_ones_2x2()).capacity == 1
    assert li_path_capacity(all_ones_2x2()) == 1


def test_size_limit_is_explicit():
    net = random_network(GenParams(layers=5, min_nodes_per_layer=3, max_nodes_per_layer=3, seed=1))
    with pytest.raises(OracleSizeError):
        brute_force_capacity(net, limit=8)
    assert brute_force_capacity(net, limit=9).cuts_examined <= 2**9
    with pytest.raises(OracleSizeError):
        li_path_capacity(net)


def test_argmin_is_first_in_mask_order():
    # S -> {A, B} -> D where only the A branch carries anything: {S} and {S, B} both have value 1
    layers = [[Node("S", 1, 0)], [Node("A", 1, 1), Node("B", 1, 1)], [Node("D", 0, 1)]]
    edges = [Edge("S", 0, "A", 0), Edge("A", 0, "D", 0)]
    res = brute_force_capacity(LayeredNetwork.build(2, layers, edges))
    assert res.capacity == 1 and res.argmin_cut == Cut.of(["S"])


def small_nets(max_nodes=2):
    return st.builds(
        lambda L, q, d, p, s: random_network(GenParams(L, max_nodes, q, d, p, s)),
        st.integers(2, 4),
        st.integers(1, 3),
        st.sampled_from([0.4, 0.7, 1.0]),
        st.sampled_from([2, 3, 5]),
        st.integers(0, 10**6),
    )


@given(small_nets())
def test_oracle_value_matches_its_cut_and_layer_bound(net):
    res = brute_force_capacity(net)
    assert res.capacity == cut_value(net, res.argmin_cut)
    assert 0 <= res.capacity <= layer_cut_bound(net)


@settings(max_examples=100)
@given(small_nets())
def test_two_oracles_agree(net):
    assert li_path_capacity(net) == brute_force_capacity(net).capacity


# -- verify_paths ------------------------------------------------------------------


def test_verify_empty_set_ok():
    assert verify_paths(chain(), []) == []


def test_verify_shared_input_is_not_a_matching():
    layers = [[Node("S", 1, 0)], [Node("D", 0, 2)]]
    net = LayeredNetwork.build(3, layers, [Edge("S", 0, "D", 0), Edge("S", 0, "D", 1)])
    errs = verify_paths(net, [[net.edges[0]], [net.edges[1]]])
    assert len(errs) == 1 and "not a matching" in errs[0]


def test_verify_tampered_path_is_disconnected():
    net = chain()
    errs = verify_paths(net, [[net.edges[1]]])
    assert "disconnected path" in errs[0]
    errs = verify_paths(net, [[net.edges[0]]])
    assert "disconnected path" in errs[0]


def test_verify_duplicate_path_is_rank_deficit():
    net = chain()
    path = list(net.edges)
    assert verify_paths(net, [path]) == []
    assert "rank deficit" in verify_paths(net, [path, path])[0]


def test_verify_dependent_pair_is_rank_deficit():
    net = all_ones_2x2()
    a, b = Edge("S", 0, "D", 0), Edge("S", 1, "D", 1)
    assert verify_paths(net, [[a], [b]]) == ["cut 0: rank deficit"]


def test_verify_unknown_edge():
    errs = verify_paths(chain(), [[Edge("S", 0, "R", 0), Edge("R", 0, "D", 1)]])
    assert "not in network" in errs[0]


@settings(max_examples=100)
@given(st.integers(0, 10**6), st.sampled_from([2, 3, 5]), st.integers(3, 5))
def test_solver_output_always_verifies(seed, p, L):
    net = random_network(GenParams(L, 4, 3, 0.5, p, seed))
    res = capacity(net)
    assert verify_paths(net, res.paths.paths) == []
    assert res.capacity == brute_force_capacity(net).capacity
