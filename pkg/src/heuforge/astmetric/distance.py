"""Exact tree edit distance between ordered label trees.

Zhang-Shasha dynamic program with unit costs: inserting a node, deleting a
node, and renaming a label each cost exactly 1.  The result is the minimum
total cost of an edit script transforming one tree into the other, and it is
what correctness is defined against (tests compare with an exhaustive
edit-mapping search on small trees).
"""

from __future__ import annotations

from functools import lru_cache

from .tree import NormalizedTree


class _PostOrder:
    """Postorder view of a tree: labels, leftmost-leaf indices, keyroots."""

    __slots__ = ("labels", "lmld", "keyroots", "n")

    def __init__(self, tree: NormalizedTree):
        order: list[int] = []

        def walk(i: int) -> None:
            for c in tree.children[i]:
                walk(c)
            order.append(i)

        walk(tree.root)
        pos = {node: k for k, node in enumerate(order)}
        self.n = len(order)
        self.labels = [tree.labels[i] for i in order]
        self.lmld = [0] * self.n
        for k, node in enumerate(order):
            j = node
            while tree.children[j]:
                j = tree.children[j][0]
            self.lmld[k] = pos[j]
        last_for_lmld: dict[int, int] = {}
        for k in range(self.n):
            last_for_lmld[self.lmld[k]] = k
        self.keyroots = sorted(last_for_lmld.values())


def _distance(a: _PostOrder, b: _PostOrder) -> int:
    treedist = [[0] * b.n for _ in range(a.n)]

    def solve(i: int, j: int) -> None:
        al, bl = a.lmld, b.lmld
        m = i - al[i] + 2
        n = j - bl[j] + 2
        fd = [[0] * n for _ in range(m)]
        ioff = al[i] - 1
        joff = bl[j] - 1
        for x in range(1, m):
            fd[x][0] = fd[x - 1][0] + 1
        for y in range(1, n):
            fd[0][y] = fd[0][y - 1] + 1
        for x in range(1, m):
            for y in range(1, n):
                if al[i] == al[x + ioff] and bl[j] == bl[y + joff]:
                    rename = 0 if a.labels[x + ioff] == b.labels[y + joff] else 1
                    fd[x][y] = min(
                        fd[x - 1][y] + 1,
                        fd[x][y - 1] + 1,
                        fd[x - 1][y - 1] + rename,
                    )
                    treedist[x + ioff][y + joff] = fd[x][y]
                else:
                    p = al[x + ioff] - 1 - ioff
                    q = bl[y + joff] - 1 - joff
                    fd[x][y] = min(
                        fd[x - 1][y] + 1,
                        fd[x][y - 1] + 1,
                        fd[p][q] + treedist[x + ioff][y + joff],
                    )

    for i in a.keyroots:
        for j in b.keyroots:
            solve(i, j)
    return treedist[-1][-1]


@lru_cache(maxsize=4096)
def _cached_distance(a: NormalizedTree, b: NormalizedTree) -> int:
    return _distance(_PostOrder(a), _PostOrder(b))


def tree_edit_distance(a: NormalizedTree, b: NormalizedTree) -> int:
    """Minimum unit-cost edit distance between two normalized trees.

    Symmetric, zero iff the trees are identical, and satisfies the triangle
    inequality.
    """
    if a == b:
        return 0
    if hash(b) < hash(a):  # cache one orientation of each unordered pair
        a, b = b, a
    return _cached_distance(a, b)
