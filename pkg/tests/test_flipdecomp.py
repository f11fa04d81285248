import random

import pytest

from flipmc.flipdecomp import (
    DecompositionError, build_decomposition, decompose, flag_name, pad_guard, toggled,
    verify_decomposition, without_dist,
)
from flipmc.generators import clique, grid, half_graph, path
from flipmc.graph import Graph
from flipmc.interpret import Interpretation
from flipmc.logic import free_vars, range_of

from helpers import two_cliques
from strategies import random_graph


def oks(D, **kw):
    return {c.name: c.ok for c in verify_decomposition(D, **kw)}


@pytest.mark.parametrize("interp", ["identity", "complement", "square", "power-3"])
@pytest.mark.parametrize("r", [1, 2])
def test_decomposition_identity_on_grids(interp, r):
    D = decompose(grid(5), interp, r)
    assert all(oks(D).values())
    assert range_of(D.Ghat, D.psi, D.inst.U) <= r


def test_two_cliques_complement():
    # complement of K3+K3 is K_{3,3}; every far edge is flipped away
    G = two_cliques(3, 3)
    D = decompose(G, "complement", 1)
    assert all(oks(D).values())
    assert free_vars(D.psi) <= {"x", "y"}
    assert D.FH.num_edges <= D.H.num_edges


def test_oracle_agrees_with_kernel():
    D = decompose(path(8), "square", 1)
    assert oks(D, oracle=True) == oks(D)


def test_random_instances():
    rng = random.Random(4)
    for _ in range(15):
        G = random_graph(rng, 10, p=0.25, decorated=False)
        interp = rng.choice(["identity", "complement", "square", "power-3"])
        r = rng.randint(1, 2)
        assert all(oks(decompose(G, interp, r)).values()), (G.to_json(), interp, r)


def test_toggle_mutation_breaks_equality():
    D = toggled(decompose(grid(5), "complement", 1))
    res = oks(D)
    assert not res["interpretation-equals-flip"]


def test_drop_dist_breaks_range_for_poor_guard():
    D = without_dist(build_decomposition(path(12), "square", [3], 1))
    res = oks(D)
    assert not res["range-at-most-r"]
    # with a certified guard, psi without the distance conjunct is already local
    assert oks(without_dist(decompose(path(12), "square", 1)))["range-at-most-r"]


def test_guard_padding_and_errors():
    assert pad_guard([4], 3) == [4, 4, 4]
    assert pad_guard([1, 2], None) == [1, 2]
    with pytest.raises(DecompositionError):
        pad_guard([], 2)
    with pytest.raises(DecompositionError):
        build_decomposition(path(4), "identity", [], 1)
    G = path(4).expand(constants={"c1": 0})
    with pytest.raises(DecompositionError):
        build_decomposition(G, "identity", [0], 1)


def test_flags_cover_realized_pairs():
    D = decompose(half_graph(4), "complement", 1)
    realized = D.realized
    expected = {flag_name(a, b) for a in realized for b in realized}
    t = len(realized)
    assert set(D.Ghat.flags) == expected and len(expected) == t * (t + 1) // 2
    for a in realized:
        for b in realized:
            assert D.Ghat.flags[flag_name(a, b)] == ((a, b) in D.R)


def test_flip_relation_is_symmetric():
    D = decompose(clique(6), "complement", 2)
    assert all((b, a) in D.R for a, b in D.R)


def test_custom_interpretation_with_delta():
    G = path(10).expand(colors={"red": [0, 2, 4, 6, 8]})
    I = Interpretation.from_text("x != y & dist<=2(x,y)", "U_red(x)")
    D = decompose(G, I, 1)
    assert D.H.n == 5 and all(oks(D).values())


def test_json_round_trip_shape():
    js = decompose(path(6), "identity", 1).to_json()
    assert {"psi", "R", "S_enum", "FH", "Ghat"} <= set(js)
    assert Graph.from_json(js["FH"]).n == 6
