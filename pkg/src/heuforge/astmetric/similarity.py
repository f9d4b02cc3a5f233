"""Normalized structural similarity scores over source populations."""

from __future__ import annotations

from ..errors import EmptyPopulation
from .distance import tree_edit_distance
from .tree import NormalizedTree, normalize


def tsed(a: NormalizedTree, b: NormalizedTree) -> float:
    """Scale-invariant similarity: max(0, 1 - distance / max tree size).

    1.0 exactly when the trees are identical; 0.0 when they share no
    exploitable structure.
    """
    if a == b:
        return 1.0
    delta = tree_edit_distance(a, b)
    return max(0.0, 1.0 - delta / max(a.size, b.size))


def source_tsed(source_a: str, source_b: str) -> float:
    """Convenience wrapper: normalize both sources, then score."""
    return tsed(normalize(source_a), normalize(source_b))


def island_similarity(pop_a: list[str], pop_b: list[str]) -> float:
    """Arithmetic mean of pairwise similarity over all cross pairs."""
    if not pop_a or not pop_b:
        raise EmptyPopulation("island similarity needs two non-empty populations")
    trees_a = [normalize(src) for src in pop_a]
    trees_b = [normalize(src) for src in pop_b]
    total = 0.0
    for ta in trees_a:
        for tb in trees_b:
            total += tsed(ta, tb)
    return total / (len(trees_a) * len(trees_b))


def similarity_matrix(populations: list[list[str]]) -> list[list[float]]:
    """K x K matrix of mean cross-population similarities.

    Diagonal entries are each population's mean self-similarity.  The matrix
    is exactly symmetric because each unordered pair is computed once.
    """
    k = len(populations)
    matrix = [[0.0] * k for _ in range(k)]
    for i in range(k):
        for j in range(i, k):
            score = island_similarity(populations[i], populations[j])
            matrix[i][j] = score
            matrix[j][i] = score
    return matrix
