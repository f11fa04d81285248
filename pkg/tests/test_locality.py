import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flipmc.generators import grid, path
from flipmc.graph import Pseudometric
from flipmc.interpret import instance
from flipmc.locality import (
    GenericStatus, Partition, check_r_generic, first_conflict, generic_status, refine_partition,
    status_matrix,
)

from strategies import random_graph


def brute_violation(E, dist, P, r):
    cell = P.cell_of
    m = E.shape[0]
    for u, v, u2, v2 in itertools.product(range(m), repeat=4):
        if (cell[u] == cell[u2] and cell[v] == cell[v2] and dist.matrix[u, v] > r
                and dist.matrix[u2, v2] > r and E[u, v] and not E[u2, v2]):
            return True
    return False


def test_partition_validation():
    with pytest.raises(ValueError):
        Partition(((0, 1), (1,)), 2)
    with pytest.raises(ValueError):
        Partition(((0,),), 2)
    assert len(Partition.single(0)) == 0
    assert Partition.from_labels([5, 3, 5]).cells == ((0, 2), (1,))


def test_first_conflict_ordering():
    E = np.array([[0, 1], [0, 0]], dtype=bool)
    far = np.ones((2, 2), dtype=bool)
    assert first_conflict(E, far, np.zeros(2), np.zeros(2)) == (0, 1, 0, 0)
    assert first_conflict(E, far, np.arange(2), np.arange(2)) is None
    assert first_conflict(np.zeros((0, 0), dtype=bool), far[:0, :0], np.zeros(0), np.zeros(0)) is None


def test_identity_on_path():
    inst = instance(path(20), "identity")
    P = refine_partition(inst.E, inst.dist, 1)
    # edges are never far in the identity interpretation
    assert len(P) == 1
    assert status_matrix(inst.E, inst.dist, P, 1) == [["generically-not-E"]]


def test_generic_status_values():
    E = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=bool)
    dist = Pseudometric(np.array([[0, 5, 5], [5, 0, 5], [5, 5, 0]]))
    assert generic_status(E, dist, [0], [1], 1) is GenericStatus.GENERICALLY_E
    assert generic_status(E, dist, [0], [2], 1) is GenericStatus.GENERICALLY_NOT_E
    assert generic_status(E, dist, [0], [0], 1) is GenericStatus.NO_FAR_PAIRS
    assert generic_status(E, dist, [0], [1, 2], 1) is GenericStatus.CONTRADICTORY


@pytest.mark.parametrize("interp", ["identity", "complement", "square", "power-3"])
@pytest.mark.parametrize("r", [1, 2])
def test_refine_is_generic_on_grids(interp, r):
    inst = instance(grid(5), interp)
    P = refine_partition(inst.E, inst.dist, r)
    assert check_r_generic(inst.E, inst.dist, P, r) is None


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 3))
def test_refine_against_brute_force(seed, r):
    rng = random.Random(seed)
    G = random_graph(rng, 8, decorated=False)
    E = np.array([[u != v and rng.random() < 0.5 for v in range(G.n)] for u in range(G.n)])
    E = E | E.T
    dist = Pseudometric(G.distances)
    P = refine_partition(E, dist, r)
    assert not brute_violation(E, dist, P, r)
    assert (check_r_generic(E, dist, Partition.single(G.n), r) is None) == \
        (not brute_violation(E, dist, Partition.single(G.n), r))


def test_square_of_path_cell_count_is_constant():
    counts = set()
    for n in range(20, 61, 10):
        inst = instance(path(n), "square")
        counts.add(len(refine_partition(inst.E, inst.dist, 2)))
    assert len(counts) == 1


def test_to_json_with_universe():
    P = Partition(((0, 2), (1,)), 3)
    assert P.to_json([10, 11, 12]) == {"cells": [[10, 12], [11]], "sizes": [2, 1]}
