"""Structural similarity of heuristic source code.

Source text is parsed and normalized into a label tree that keeps the
algorithmic backbone (control flow, calls, operators, attribute names) and
discards lexical noise (comments, imports, identifier spellings, literal
values).  An exact tree edit distance over these trees yields a scale-invariant
similarity score in [0, 1].
"""

from .tree import NormalizedTree, normalize
from .distance import tree_edit_distance
from .similarity import island_similarity, similarity_matrix, source_tsed, tsed

__all__ = [
    "NormalizedTree",
    "normalize",
    "tree_edit_distance",
    "tsed",
    "source_tsed",
    "island_similarity",
    "similarity_matrix",
]
