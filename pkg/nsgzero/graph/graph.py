from collections import deque
from dataclasses import dataclass
from typing import Iterable, List, Tuple
import numpy as np
from nsgzero.helpers import make_rng

UNREACHABLE = -1


@dataclass(frozen=True)
class Graph:
  """Undirected graph on nodes 0..node_count-1. adjacency[u] is the sorted tuple of u's neighbors."""
  node_count: int
  adjacency: Tuple[Tuple[int, ...], ...]

  def __post_init__(self):
    if self.node_count < 1:
      raise ValueError(f"node_count must be >= 1, got {self.node_count}")
    if len(self.adjacency) != self.node_count:
      raise ValueError(f"adjacency has {len(self.adjacency)} rows for {self.node_count} nodes")
    for u, neighbors in enumerate(self.adjacency):
      for v in neighbors:
        if v == u:
          raise ValueError(f"self-loop at node {u}")
        if not 0 <= v < self.node_count:
          raise ValueError(f"edge ({u}, {v}) references an unknown node")
        if u not in self.adjacency[v]:
          raise ValueError(f"edge ({u}, {v}) is not symmetric")

  @classmethod
  def from_edges(cls, node_count: int, edges: Iterable[Tuple[int, int]]) -> "Graph":
    neighbor_sets = [set() for _ in range(node_count)]
    for u, v in edges:
      if not (0 <= u < node_count and 0 <= v < node_count):
        raise ValueError(f"edge ({u}, {v}) references an unknown node")
      if u == v:
        raise ValueError(f"self-loop at node {u}")
      neighbor_sets[u].add(v)
      neighbor_sets[v].add(u)
    return cls(node_count, tuple(tuple(sorted(s)) for s in neighbor_sets))

  def neighbors(self, node: int) -> Tuple[int, ...]:
    return self.adjacency[node]

  def has_edge(self, u: int, v: int) -> bool:
    return v in self.adjacency[u]

  def edges(self) -> List[Tuple[int, int]]:
    return [(u, v) for u, neighbors in enumerate(self.adjacency) for v in neighbors if u < v]

  def edge_count(self) -> int:
    return sum(len(neighbors) for neighbors in self.adjacency)//2

  def __str__(self):
    return f"Graph(nodes={self.node_count}, edges={self.edge_count()})"


def grid_coords(node: int, width: int) -> Tuple[int, int]:
  return node//width, node % width


def grid_node(row: int, col: int, width: int) -> int:
  return row*width + col


def generate_grid(width: int, height: int, p_edge: float, p_diag: float, seed: int) -> Graph:
  """
  Random lattice graph with row-major node ids (id = row*width + col).

  Cells are visited row-major; for each cell four uniforms are always drawn in the order
  right, down, down-right diagonal, down-left diagonal, so the draw sequence (and the
  resulting fixture) depends only on (width, height, seed).
  """
  if width < 1 or height < 1:
    raise ValueError(f"grid dimensions must be >= 1, got {width}x{height}")
  if not (0.0 <= p_edge <= 1.0 and 0.0 <= p_diag <= 1.0):
    raise ValueError(f"edge probabilities must lie in [0, 1], got p_edge={p_edge} p_diag={p_diag}")

  rng = make_rng(seed)
  edges = []
  for row in range(height):
    for col in range(width):
      u = grid_node(row, col, width)
      right, down, down_right, down_left = rng.random(4)
      if col + 1 < width and right < p_edge:
        edges.append((u, grid_node(row, col + 1, width)))
      if row + 1 < height and down < p_edge:
        edges.append((u, grid_node(row + 1, col, width)))
      if row + 1 < height and col + 1 < width and down_right < p_diag:
        edges.append((u, grid_node(row + 1, col + 1, width)))
      if row + 1 < height and col >= 1 and down_left < p_diag:
        edges.append((u, grid_node(row + 1, col - 1, width)))
  return Graph.from_edges(width*height, edges)


def bfs_distances(graph: Graph, sources: Iterable[int], blocked: Iterable[int] = ()) -> np.ndarray:
  """Multi-source hop distances; nodes not reachable from any source hold UNREACHABLE. Blocked nodes are never entered."""
  walls = frozenset(blocked)
  distances = np.full(graph.node_count, UNREACHABLE, dtype=np.int64)
  queue = deque()
  for source in sources:
    if not 0 <= source < graph.node_count:
      raise ValueError(f"source {source} is not a node of {graph}")
    if distances[source] == UNREACHABLE:
      distances[source] = 0
      queue.append(source)
  while queue:
    u = queue.popleft()
    for v in graph.adjacency[u]:
      if distances[v] == UNREACHABLE and v not in walls:
        distances[v] = distances[u] + 1
        queue.append(v)
  return distances


def load_edge_list(path: str) -> Graph:
  """Plain-text import: one `u v` pair per line, `#` comments allowed, node count inferred from the largest id."""
  edges = []
  with open(path, "r") as f:
    for line_no, line in enumerate(f, start=1):
      line = line.split("#", 1)[0].strip()
      if not line:
        continue
      parts = line.split()
      if len(parts) != 2:
        raise ValueError(f"{path}:{line_no}: expected 'u v', got {line!r}")
      edges.append((int(parts[0]), int(parts[1])))
  if not edges:
    raise ValueError(f"{path}: no edges found")
  node_count = max(max(u, v) for u, v in edges) + 1
  return Graph.from_edges(node_count, edges)
