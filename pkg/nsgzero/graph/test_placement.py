import unittest
from nsgzero.helpers import make_rng
from nsgzero.graph.graph import Graph, bfs_distances, generate_grid, UNREACHABLE
from nsgzero.graph.game_config import ConfigError
from nsgzero.graph.placement import boundary_nodes, grid_center, place_resources, sample_targets


def ring_key(d):
  return float("inf") if d == UNREACHABLE else d


class TestGridHelpers(unittest.TestCase):
  def test_center(self):
    self.assertEqual(grid_center(7, 7), 24)
    self.assertEqual(grid_center(4, 3), 6)

  def test_boundary(self):
    self.assertEqual(boundary_nodes(3, 3), [0, 1, 2, 3, 5, 6, 7, 8])
    self.assertEqual(len(boundary_nodes(7, 7)), 24)
    self.assertEqual(boundary_nodes(2, 2), [0, 1, 2, 3])


class TestSampleTargets(unittest.TestCase):
  def test_distinct_sorted(self):
    targets = sample_targets(list(range(10)), 4, make_rng(0))
    self.assertEqual(len(set(targets)), 4)
    self.assertEqual(list(targets), sorted(targets))

  def test_not_enough_candidates(self):
    with self.assertRaises(ConfigError) as ctx:
      sample_targets([1, 2], 3, make_rng(0))
    self.assertEqual(ctx.exception.field, "targets")


class TestPlaceResources(unittest.TestCase):
  def test_nearest_bfs_rings_on_random_grids(self):
    for seed in range(30):
      graph = generate_grid(7, 7, 0.5, 0.1, seed=seed)
      rng = make_rng(seed)
      targets = sample_targets([v for v in boundary_nodes(7, 7) if v != 24], 10, rng)
      resources = place_resources(graph, 24, targets, 4, rng)
      dist = bfs_distances(graph, [24])
      free = [v for v in range(49) if v != 24 and v not in targets]
      expected = sorted(ring_key(dist[v]) for v in free)[:4]
      self.assertEqual(sorted(ring_key(dist[v]) for v in resources), expected, f"seed {seed}")
      self.assertEqual(len(set(resources)), 4)
      self.assertFalse(set(resources) & set(targets))

  def test_unreachable_nodes_fill_last(self):
    # attacker component {0, 1, 2}; nodes 3 and 4 sit in another component
    graph = Graph.from_edges(5, [(0, 1), (1, 2), (3, 4)])
    self.assertEqual(set(place_resources(graph, 0, (), 2, make_rng(0))), {1, 2})
    resources = place_resources(graph, 0, (2, ), 3, make_rng(0))
    self.assertEqual(resources[0], 1)
    self.assertEqual(set(resources[1:]), {3, 4})

  def test_seeded_shuffle_within_ring(self):
    graph = generate_grid(5, 5, 1.0, 1.0, seed=0)
    seen = {place_resources(graph, 12, (), 1, make_rng(seed))[0] for seed in range(40)}
    self.assertGreater(len(seen), 1)
    self.assertTrue(all(bfs_distances(graph, [12])[v] == 1 for v in seen))
    self.assertEqual(place_resources(graph, 12, (), 3, make_rng(9)), place_resources(graph, 12, (), 3, make_rng(9)))

  def test_too_many_resources(self):
    graph = Graph.from_edges(3, [(0, 1), (1, 2)])
    with self.assertRaises(ConfigError) as ctx:
      place_resources(graph, 0, (2, ), 2, make_rng(0))
    self.assertEqual(ctx.exception.field, "resources")


if __name__ == "__main__":
  unittest.main()
