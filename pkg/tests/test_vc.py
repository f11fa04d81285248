import itertools
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from flipmc.generators import half_graph
from flipmc.vc import (
    BiRelation, NoDuality, find_duality, is_duality, min_hitting_set, sauer_shelah_bound,
    shatter_function, vc_dimension,
)

from helpers import powerset_graph


def half_relation(n):
    return BiRelation.from_pairs(n, n, [(i, j) for i in range(n) for j in range(i, n)])


def brute_vc(R):
    m = R.matrix
    best = 0
    for d in range(1, len(R.A) + 1):
        found = False
        for sub in itertools.combinations(range(len(R.A)), d):
            traces = {tuple(m[list(sub), b]) for b in range(len(R.B))}
            if len(traces) == 2 ** d:
                found = True
                break
        if not found:
            break
        best = d
    return best


def brute_min_order(R, side):
    m = R.matrix
    size = len(R.A) if side == "A" else len(R.B)
    for k in range(size + 1):
        for sub in itertools.combinations(range(size), k):
            if is_duality(R, side, sub):
                return k
    return None


def random_relation(rng, a_max=10, b_max=10):
    a, b = rng.randint(1, a_max), rng.randint(1, b_max)
    p = rng.random()
    return BiRelation.from_pairs(a, b, [(i, j) for i in range(a) for j in range(b) if rng.random() < p])


def test_powerset_graph_vc_dimension():
    R = BiRelation.from_graph(powerset_graph())
    assert vc_dimension(R) >= 3
    assert vc_dimension(BiRelation.from_graph(powerset_graph(), range(3), range(3, 11))) == 3


def test_half_graph_vc_is_one():
    R = half_relation(5)
    assert vc_dimension(R) == 1 == brute_vc(R)
    G = half_graph(5)
    assert vc_dimension(BiRelation.from_graph(G, range(5), range(5, 10))) == 1


def test_complete_relation():
    R = BiRelation.from_pairs(4, 3, [(i, j) for i in range(4) for j in range(3)])
    assert vc_dimension(R) == 0
    assert all(shatter_function(R, m) == 1 for m in range(5))


def test_shatter_half_graph():
    R = half_relation(6)
    for m in range(6):
        assert shatter_function(R, m) == m + 1
    # the full side always contains a_0, which every b sees
    assert shatter_function(R, 6) == 6
    assert shatter_function(R, 0) == 1


def test_duality_examples():
    empty = BiRelation.from_pairs(3, 4, [])
    w = find_duality(empty)
    assert (w.side, w.order) == ("A", 1)
    full = BiRelation.from_pairs(3, 4, [(i, j) for i in range(3) for j in range(4)])
    w = find_duality(full)
    assert (w.side, w.order) == ("B", 1)
    w = find_duality(half_relation(5))
    assert (w.side, w.positions) == ("B", (4,))


def test_no_duality():
    # identity on 6: B-side needs all 6 columns, A-side needs 2
    eye = BiRelation.from_pairs(6, 6, [(i, i) for i in range(6)])
    assert find_duality(eye).order == 2
    # complement of identity: A-side needs all, B-side needs 2
    co = BiRelation.from_pairs(6, 6, [(i, j) for i in range(6) for j in range(6) if i != j])
    assert find_duality(co).order == 2
    # a path-like relation needs 2 on each side
    band = BiRelation(tuple(range(4)), tuple(range(4)),
                      np.eye(4, dtype=bool) | np.eye(4, k=1, dtype=bool))
    with pytest.raises(NoDuality):
        find_duality(band, 1)
    assert find_duality(band, 2).order == 2


def test_duality_battery_minimal():
    rng = random.Random(123)
    for _ in range(200):
        R = random_relation(rng)
        w = find_duality(R, 10)
        assert is_duality(R, w.side, w.positions)
        a_min, b_min = brute_min_order(R, "A"), brute_min_order(R, "B")
        best = min(x for x in (a_min, b_min) if x is not None)
        assert w.order == best
        if b_min == best:
            assert w.side == "B"


def test_sauer_shelah_battery():
    rng = random.Random(77)
    for _ in range(200):
        R = random_relation(rng)
        d = vc_dimension(R)
        assert d == brute_vc(R)
        for m in range(len(R.A) + 1):
            assert shatter_function(R, m) <= sauer_shelah_bound(m, d)


@given(st.integers(0, 2**32 - 1))
def test_a_side_order_monotone_in_B(seed):
    rng = random.Random(seed)
    R = random_relation(rng, 7, 6)
    col = np.array([rng.random() < 0.5 for _ in R.A])[:, None]
    bigger = BiRelation(R.A, R.B + (len(R.B),), np.hstack([R.matrix, col]))
    small, big = brute_min_order(R, "A"), brute_min_order(bigger, "A")
    if small is None:
        assert big is None
    elif big is not None:
        assert big >= small


def test_min_hitting_set():
    fams = [0b011, 0b110, 0b100]
    assert min_hitting_set(fams, 3) == [2] or len(min_hitting_set(fams, 3)) == 2
    assert min_hitting_set([0b1, 0b10, 0b100], 2) is None
    assert min_hitting_set([0], 3) is None
    assert min_hitting_set([], 0) == []


def test_json_shape():
    R = BiRelation.from_pairs(2, 2, [(0, 1)])
    assert R.to_json() == {"a": 2, "b": 2, "pairs": [[0, 1]]}
