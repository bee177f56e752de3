import os
import tempfile
import unittest
from nsgzero.graph.graph import Graph, generate_grid, bfs_distances, grid_coords, load_edge_list, UNREACHABLE


class TestGenerateGrid(unittest.TestCase):
  def test_full_lattice_without_diagonals(self):
    graph = generate_grid(2, 2, 1.0, 0.0, seed=123)
    self.assertEqual(graph.node_count, 4)
    self.assertEqual(set(graph.edges()), {(0, 1), (2, 3), (0, 2), (1, 3)})

  def test_no_edges(self):
    graph = generate_grid(3, 3, 0.0, 0.0, seed=7)
    self.assertEqual(graph.node_count, 9)
    self.assertEqual(graph.edge_count(), 0)

  def test_single_cell(self):
    graph = generate_grid(1, 1, 1.0, 1.0, seed=0)
    self.assertEqual(graph.node_count, 1)
    self.assertEqual(graph.edges(), [])

  def test_seeded_7x7(self):
    graph = generate_grid(7, 7, 0.5, 0.1, seed=42)
    self.assertGreaterEqual(graph.edge_count(), 20)
    self.assertLessEqual(graph.edge_count(), 115)
    self.assertEqual(graph, generate_grid(7, 7, 0.5, 0.1, seed=42))

  def test_edges_respect_lattice(self):
    for seed in range(10):
      for p_diag in (0.0, 0.3):
        graph = generate_grid(5, 4, 0.6, p_diag, seed=seed)
        for u, v in graph.edges():
          (ru, cu), (rv, cv) = grid_coords(u, 5), grid_coords(v, 5)
          self.assertEqual(max(abs(ru - rv), abs(cu - cv)), 1)
          if p_diag == 0.0:
            self.assertEqual(abs(ru - rv) + abs(cu - cv), 1)
          self.assertIn(u, graph.neighbors(v))

  def test_rejects_bad_arguments(self):
    with self.assertRaises(ValueError):
      generate_grid(0, 3, 0.5, 0.1, seed=1)
    with self.assertRaises(ValueError):
      generate_grid(3, 3, 1.5, 0.1, seed=1)


class TestGraph(unittest.TestCase):
  def test_asymmetric_adjacency_rejected(self):
    with self.assertRaises(ValueError):
      Graph(2, ((1, ), ()))

  def test_self_loop_rejected(self):
    with self.assertRaises(ValueError):
      Graph.from_edges(2, [(1, 1)])

  def test_load_edge_list(self):
    with tempfile.TemporaryDirectory() as tmp:
      path = os.path.join(tmp, "edges.txt")
      with open(path, "w") as f:
        f.write("# a path\n0 1\n1 2\n\n")
      graph = load_edge_list(path)
    self.assertEqual(graph.node_count, 3)
    self.assertEqual(graph.edges(), [(0, 1), (1, 2)])


class TestBfsDistances(unittest.TestCase):
  def setUp(self):
    self.path_graph = Graph.from_edges(4, [(0, 1), (1, 2)])

  def test_single_source(self):
    self.assertEqual(bfs_distances(self.path_graph, [0]).tolist()[:3], [0, 1, 2])

  def test_multi_source(self):
    self.assertEqual(bfs_distances(self.path_graph, [0, 2]).tolist()[:3], [0, 1, 0])

  def test_unreachable(self):
    self.assertEqual(bfs_distances(self.path_graph, [0])[3], UNREACHABLE)

  def test_blocked_nodes_are_not_entered(self):
    d = bfs_distances(self.path_graph, [0], blocked=[1])
    self.assertEqual(d.tolist(), [0, UNREACHABLE, UNREACHABLE, UNREACHABLE])
    ring = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    self.assertEqual(bfs_distances(ring, [0], blocked=[1]).tolist(), [0, UNREACHABLE, 2, 1])

  def test_triangle_consistency(self):
    for seed in range(5):
      graph = generate_grid(6, 6, 0.5, 0.1, seed=seed)
      d = bfs_distances(graph, [0, 35])
      for u, v in graph.edges():
        if d[u] != UNREACHABLE and d[v] != UNREACHABLE:
          self.assertLessEqual(abs(int(d[u]) - int(d[v])), 1)
        else:
          self.assertEqual(d[u], d[v])


if __name__ == "__main__":
  unittest.main()
