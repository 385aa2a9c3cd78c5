"""Necessary-condition validators for global rigidity: vertex connectivity, Laman counts, rigidity-matrix rank."""

import itertools
import logging
from typing import Iterable, List, Sequence, Tuple, Union

import networkx as nx
import numpy as np
from networkx.algorithms.connectivity import (
    build_auxiliary_node_connectivity,
    local_node_connectivity,
)
from networkx.algorithms.flow import build_residual_network

from .anchor_graph import AnchorGraph

logger = logging.getLogger(__name__)

GraphLike = Union[AnchorGraph, nx.Graph]


def _as_networkx(graph: GraphLike) -> nx.Graph:
    if isinstance(graph, AnchorGraph):
        return graph.to_networkx()
    return nx.Graph(graph)


def _edge_list(graph: Union[GraphLike, Iterable[Tuple[int, int]]]) -> List[Tuple[int, int]]:
    if isinstance(graph, AnchorGraph):
        pairs = graph.edge_pairs()
    elif isinstance(graph, nx.Graph):
        pairs = [(min(u, v), max(u, v)) for u, v in graph.edges()]
    else:
        pairs = [(min(u, v), max(u, v)) for u, v in graph]
    return sorted({(u, v) for u, v in pairs if u != v})


def _vertex_count(graph: Union[GraphLike, Iterable[Tuple[int, int]]], edges) -> int:
    if isinstance(graph, AnchorGraph):
        return graph.n
    if isinstance(graph, nx.Graph):
        return graph.number_of_nodes()
    return 1 + max((v for _, v in edges), default=-1)


def vertex_connectivity_at_least(graph: GraphLike, t: int) -> bool:
    """
    True iff removing any t-1 vertices leaves the graph connected.

    Max-flow on the split-vertex auxiliary digraph from a minimum-degree vertex v to
    each of its non-neighbours, then between non-adjacent neighbour pairs of v. Each
    flow stops once it reaches t.
    """
    G = _as_networkx(graph)
    n = G.number_of_nodes()
    if t <= 0:
        return True
    if n == 0 or not nx.is_connected(G):
        return False
    if t == 1:
        return True
    if n - 1 < t:
        return False

    v = min(G, key=lambda node: (G.degree(node), node))
    if G.degree(v) < t:
        return False

    auxiliary = build_auxiliary_node_connectivity(G)
    residual = build_residual_network(auxiliary, "capacity")

    def separated(s, target) -> bool:
        kappa = local_node_connectivity(
            G, s, target, auxiliary=auxiliary, residual=residual, cutoff=t
        )
        return kappa < t

    neighbours = set(G[v])
    for w in G:
        if w != v and w not in neighbours and separated(v, w):
            return False
    for x, y in itertools.combinations(sorted(neighbours), 2):
        if not G.has_edge(x, y) and separated(x, y):
            return False
    return True


class _PebbleGame:
    """(2,3) pebble game: accepts an edge iff it is independent in the 2D generic rigidity matroid."""

    def __init__(self, n: int):
        self.pebbles = [2] * n
        self.out = [set() for _ in range(n)]
        self.accepted = 0

    def _fetch(self, root: int, blocked: Sequence[int]) -> bool:
        # search along out-edges for a free pebble and move it back to root
        parent = {root: None}
        for b in blocked:
            parent.setdefault(b, None)
        stack = [root]
        while stack:
            u = stack.pop()
            for w in self.out[u]:
                if w in parent:
                    continue
                parent[w] = u
                if self.pebbles[w] > 0:
                    self.pebbles[w] -= 1
                    node = w
                    while parent[node] is not None:
                        prev = parent[node]
                        self.out[prev].discard(node)
                        self.out[node].add(prev)
                        node = prev
                    self.pebbles[root] += 1
                    return True
                stack.append(w)
        return False

    def add_edge(self, u: int, v: int) -> bool:
        while self.pebbles[u] + self.pebbles[v] < 4:
            if self.pebbles[u] < 2 and self._fetch(u, [v]):
                continue
            if self.pebbles[v] < 2 and self._fetch(v, [u]):
                continue
            return False
        source = u if self.pebbles[u] > 0 else v
        self.pebbles[source] -= 1
        self.out[source].add(v if source == u else u)
        self.accepted += 1
        return True


def independent_edge_count_2d(n: int, edges: Iterable[Tuple[int, int]]) -> int:
    """Size of a maximal independent edge set in the 2D generic rigidity matroid."""
    game = _PebbleGame(n)
    for u, v in edges:
        game.add_edge(u, v)
    return game.accepted


def laman_check_2d(graph: Union[GraphLike, Iterable[Tuple[int, int]]]) -> bool:
    """Whether the graph contains a spanning Laman subgraph, i.e. is generically rigid in the plane."""
    edges = _edge_list(graph)
    n = _vertex_count(graph, edges)
    if n <= 1:
        return True
    return independent_edge_count_2d(n, edges) == 2 * n - 3


def redundantly_rigid_2d(graph: Union[GraphLike, Iterable[Tuple[int, int]]]) -> bool:
    """Rigid after deleting any single edge."""
    edges = _edge_list(graph)
    n = _vertex_count(graph, edges)
    if n <= 1:
        return True
    target = 2 * n - 3
    for index in range(len(edges)):
        rest = edges[:index] + edges[index + 1:]
        if independent_edge_count_2d(n, rest) != target:
            return False
    return True


def rigidity_matrix_rank(
    graph: Union[GraphLike, Iterable[Tuple[int, int]]], positions: np.ndarray
) -> int:
    """Rank of the |E| x kn rigidity matrix at the given positions."""
    positions = np.asarray(positions, dtype=float)
    n, k = positions.shape
    edges = _edge_list(graph)
    matrix = np.zeros((len(edges), k * n))
    for row, (i, j) in enumerate(edges):
        diff = positions[i] - positions[j]
        matrix[row, k * i:k * i + k] = diff
        matrix[row, k * j:k * j + k] = -diff
    if not edges:
        return 0
    return int(np.linalg.matrix_rank(matrix))


def min_globally_rigid_edges(n: int, k: int) -> int:
    """Fewest edges a globally rigid graph on n > k+1 vertices in R^k can have."""
    return k * n - k * (k + 1) // 2 + 1
