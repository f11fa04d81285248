import random

import pytest

from flipmc.generators import clique, grid, path
from flipmc.graph import Graph
from flipmc.interpret import (
    REGISTRY, Interpretation, InterpretationError, apply_interpretation, check_symmetric_irreflexive,
    get_interpretation, instance,
)
from flipmc.logic import evaluate, parse

from strategies import random_graph


def test_complement_of_clique():
    I = Interpretation.from_text("~E(x,y) & x != y")
    H = apply_interpretation(clique(3), I)
    assert H.n == 3 and H.num_edges == 0


def test_square_of_path():
    H = apply_interpretation(path(4), "square")
    assert sorted(H.edges()) == [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]


def test_delta_filters_and_back_map():
    G = Graph.from_edges(3, [(1, 2)])
    H = apply_interpretation(G, Interpretation.from_text("E(x,y)", "exists y. E(x,y)"))
    assert H.n == 2 and H.origin == (1, 2) and H.num_edges == 1


def test_check_symmetric_irreflexive():
    G = Graph.from_edges(3, [(0, 1), (1, 2)], colors={"a": [0]})
    assert check_symmetric_irreflexive(G, parse("E(x,y)"))
    assert not check_symmetric_irreflexive(G, parse("x = x"))
    assert not check_symmetric_irreflexive(G, parse("E(x,y) & U_a(x)"))


def test_bad_interpretations_are_hard_errors():
    G = Graph.from_edges(3, [(0, 1)], colors={"a": [0]})
    with pytest.raises(InterpretationError):
        apply_interpretation(G, Interpretation.from_text("E(x,y) & U_a(x)"))
    with pytest.raises(InterpretationError):
        apply_interpretation(G, Interpretation.from_text("x = y"))
    with pytest.raises(InterpretationError):
        Interpretation.from_text("E(x,z)")
    with pytest.raises(InterpretationError):
        Interpretation.from_text("E(x,y)", "U_a(y)")
    with pytest.raises(InterpretationError, match="unknown interpretation"):
        get_interpretation("cube")


def test_registry_names():
    assert set(REGISTRY) == {"identity", "complement", "square", "power-3"}


def test_power3_is_distance_band():
    G = path(8)
    H = apply_interpretation(G, "power-3")
    for u in range(8):
        for v in range(8):
            assert H.has_edge(u, v) == (1 <= abs(u - v) <= 3)


def test_identity_round_trip():
    rng = random.Random(1)
    for _ in range(30):
        G = random_graph(rng, 9, decorated=False)
        H = apply_interpretation(G, "identity")
        assert H.origin == tuple(range(G.n)) and H.same_edges(G)


@pytest.mark.parametrize("name", sorted(REGISTRY))
def test_edges_match_direct_evaluation(name):
    rng = random.Random(hash(name) % 1000)
    I = get_interpretation(name)
    for _ in range(10):
        G = random_graph(rng, 8, decorated=False)
        H = apply_interpretation(G, I)
        for i, u in enumerate(H.origin):
            for j, v in enumerate(H.origin):
                if i != j:
                    assert H.has_edge(i, j) == evaluate(G, I.phi, {"x": u, "y": v})


def test_instance_distances_come_from_G():
    G = grid(3)
    inst = instance(G, "complement")
    assert inst.dist(0, 8) == 4
    assert inst.E[0, 8]
