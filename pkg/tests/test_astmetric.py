import random

import pytest

from heuforge.astmetric import (
    NormalizedTree,
    island_similarity,
    normalize,
    similarity_matrix,
    tree_edit_distance,
    tsed,
)
from heuforge.errors import EmptyPopulation, ParseError

from .treedist_oracle import brute_force_ted, random_tree

NN_SOURCE = """
def select_next_node(current_node, destination_node, unvisited_nodes, distance_matrix):
    best = None
    best_d = float("inf")
    for node in unvisited_nodes:
        d = distance_matrix[current_node][node]
        if d < best_d:
            best_d = d
            best = node
    return best
"""

NN_SOURCE_NOISY = """
import math
import numpy as np


def pick_target(cur, goal, remaining, dists):
    # choose the nearest remaining node
    \"\"\"Pick the closest unvisited node.\"\"\"
    chosen = None
    chosen_dist = float("no-such-float")
    for candidate in remaining:
        dd = dists[cur][candidate]
        if dd < chosen_dist:
            chosen_dist = dd
            chosen = candidate
    return chosen
"""


def leaf(label):
    return NormalizedTree((label,), ((),))


def test_normalize_strips_comments_imports_docstrings():
    assert normalize(NN_SOURCE) == normalize(NN_SOURCE_NOISY)


def test_normalize_identifier_and_literal_invariance():
    a = normalize("def f(a): return a + 1")
    b = normalize("def g(x): return x + 2")
    assert a == b
    c = normalize('def f(a): return a + "hello"')
    d = normalize('def f(b): return b + "world"')
    assert c == d
    assert a != c  # NUM vs STR is a real difference


def test_normalize_signed_literal_fold():
    a = normalize("def f():\n    w = -0.5\n    return w")
    b = normalize("def f():\n    w = 123.0\n    return w")
    assert a == b


def test_normalize_is_deterministic_and_idempotent_per_source():
    # bypass the memo cache so the two trees are independently constructed
    rebuild = normalize.__wrapped__
    first, second = rebuild(NN_SOURCE), rebuild(NN_SOURCE)
    assert first is not second and first == second
    assert hash(first) == hash(second)
    assert normalize(NN_SOURCE) == first


def test_normalize_rejects_malformed_source():
    with pytest.raises(ParseError):
        normalize("def f(:")


def test_attribute_names_are_preserved():
    a = normalize("def f(x): return x.sort()")
    b = normalize("def f(x): return x.reverse()")
    assert a != b
    assert tree_edit_distance(a, b) == 1


def test_ted_identity_and_single_edits():
    t = normalize(NN_SOURCE)
    assert tree_edit_distance(t, t) == 0
    assert tree_edit_distance(leaf("A"), leaf("B")) == 1
    one_child = NormalizedTree(("A", "B"), ((1,), ()))
    assert tree_edit_distance(leaf("A"), one_child) == 1


def test_ted_matches_brute_force_on_random_pairs():
    rng = random.Random(2024)
    for _ in range(200):
        a = random_tree(rng)
        b = random_tree(rng)
        assert tree_edit_distance(a, b) == brute_force_ted(a, b)


def test_ted_metric_properties_on_random_triples():
    rng = random.Random(7)
    trees = [random_tree(rng, max_nodes=6) for _ in range(12)]
    for a in trees:
        assert tree_edit_distance(a, a) == 0
        for b in trees:
            assert tree_edit_distance(a, b) == tree_edit_distance(b, a)
            for c in trees:
                assert tree_edit_distance(a, c) <= (
                    tree_edit_distance(a, b) + tree_edit_distance(b, c)
                )


def test_tsed_examples():
    t = normalize(NN_SOURCE)
    assert tsed(t, t) == 1.0
    assert tsed(leaf("A"), leaf("B")) == 0.0
    four = NormalizedTree(("A", "B", "C", "D"), ((1, 2, 3), (), (), ()))
    renamed = NormalizedTree(("A", "B", "C", "E"), ((1, 2, 3), (), (), ()))
    assert tsed(four, renamed) == 0.75


def test_tsed_bounds_and_identity_on_random_pairs():
    rng = random.Random(99)
    for _ in range(300):
        a = random_tree(rng)
        b = random_tree(rng)
        score = tsed(a, b)
        assert 0.0 <= score <= 1.0
        if score == 1.0:
            assert tree_edit_distance(a, b) == 0


def test_literal_value_changes_never_move_tsed():
    other = normalize("def h(v, w): return v * w + 3")
    base = "def f(x):\n    alpha = 0.8\n    return x * alpha"
    for value in ("0.8", "1.25", "-3.5", "17"):
        variant = base.replace("0.8", value)
        assert tsed(normalize(variant), other) == tsed(normalize(base), other)
        assert tsed(normalize(variant), normalize(base)) == 1.0


def test_island_similarity_mean_and_errors():
    s1 = "def f(a): return a + 1"
    s2 = "def f(a): return a + 1"
    assert island_similarity([s1], [s2]) == 1.0

    pair_score = tsed(normalize(NN_SOURCE), normalize(s1))
    assert island_similarity([NN_SOURCE], [s1]) == pair_score

    # A = B = {s1, s2'} with tsed(s1, s2') = p -> mean of {1, p, p, 1}
    s3 = "def f(a):\n    b = a + 1\n    return b * 2"
    p = tsed(normalize(s1), normalize(s3))
    expected = (1.0 + p + p + 1.0) / 4.0
    assert island_similarity([s1, s3], [s1, s3]) == pytest.approx(expected, abs=1e-12)

    with pytest.raises(EmptyPopulation):
        island_similarity([], [s1])


def test_similarity_matrix_symmetric_with_self_diagonal():
    pops = [
        ["def f(a): return a + 1", "def f(a): return a * 2"],
        [NN_SOURCE],
        ["def f(a):\n    if a:\n        return 1\n    return 2"],
    ]
    m = similarity_matrix(pops)
    for i in range(3):
        assert m[i][i] == island_similarity(pops[i], pops[i])
        for j in range(3):
            assert m[i][j] == m[j][i]
            assert 0.0 <= m[i][j] <= 1.0
