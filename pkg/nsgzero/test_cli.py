import contextlib
import csv
import io
import json
import os
import tempfile
import unittest
from nsgzero.cli import run, EXIT_OK, EXIT_USAGE, EXIT_RUNTIME
from unittest import mock
from nsgzero.graph.graph import bfs_distances, generate_grid, grid_coords
from nsgzero.graph.game_config import GameConfig, load_config, save_config

SMALL_TRAIN = [
  "--set", "batch_episodes=2", "--set", "n_simulations=2", "--set", "embed_dim=4", "--set", "state_dim=6", "--set", "hidden_dim=6",
  "--set", "log_every=2", "--set", "uniform_eval_episodes=2", "--set", "eval_every=0", "--set", "checkpoint_every=0",
]


def call(*argv):
  out, err = io.StringIO(), io.StringIO()
  with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
    code = run(list(argv))
  return code, out.getvalue(), err.getvalue()


class TestGenGrid(unittest.TestCase):
  def setUp(self):
    self.tmp = tempfile.TemporaryDirectory()

  def tearDown(self):
    self.tmp.cleanup()

  def path(self, name):
    return os.path.join(self.tmp.name, name)

  def test_seven_by_seven(self):
    code, out, _ = call("--seed", "5", "gen-grid", "--size", "7", "--out", self.path("g.json"))
    self.assertEqual(code, EXIT_OK)
    self.assertIn("attacker at 24", out)
    with open(self.path("g.json")) as f:
      data = json.load(f)
    self.assertEqual(data["node_count"], 49)
    self.assertEqual(data["attacker_starts"], [24])
    self.assertEqual(data["horizon"], 7)
    self.assertEqual(len(data["targets"]), 10)
    for t in data["targets"]:
      r, c = grid_coords(t, 7)
      self.assertTrue(r in (0, 6) or c in (0, 6))
    self.assertEqual(len(data["defender_starts"]), 4)

  def test_resources_sit_nearest_the_attacker_on_the_graph(self):
    for seed in range(10):
      out = self.path(f"g{seed}.json")
      self.assertEqual(call("--seed", str(seed), "gen-grid", "--size", "7", "--out", out)[0], EXIT_OK)
      game = load_config(out)
      dist = bfs_distances(game.graph, [24])
      free = [v for v in range(49) if v != 24 and v not in game.targets]
      nearest = sorted(d if d >= 0 else 99 for d in (int(dist[v]) for v in free))[:4]
      placed = sorted(d if d >= 0 else 99 for d in (int(dist[v]) for v in game.defender_starts))
      self.assertEqual(placed, nearest, f"seed {seed}")

  def test_identical_seeds_identical_files(self):
    call("--seed", "9", "gen-grid", "--size", "5", "--targets", "4", "--resources", "3", "--out", self.path("a.json"))
    call("--seed", "9", "gen-grid", "--size", "5", "--targets", "4", "--resources", "3", "--out", self.path("b.json"))
    with open(self.path("a.json"), "rb") as a, open(self.path("b.json"), "rb") as b:
      self.assertEqual(a.read(), b.read())

  def test_seed_after_subcommand(self):
    call("--seed", "4", "gen-grid", "--size", "4", "--targets", "3", "--resources", "2", "--out", self.path("a.json"))
    call("gen-grid", "--size", "4", "--targets", "3", "--resources", "2", "--seed", "4", "--out", self.path("b.json"))
    with open(self.path("a.json"), "rb") as a, open(self.path("b.json"), "rb") as b:
      self.assertEqual(a.read(), b.read())

  def test_too_many_targets(self):
    code, _, err = call("gen-grid", "--size", "2", "--targets", "5", "--out", self.path("g.json"))
    self.assertEqual(code, EXIT_USAGE)
    self.assertIn("targets", err)
    self.assertFalse(os.path.exists(self.path("g.json")))

  def test_too_many_resources(self):
    code, _, err = call("gen-grid", "--size", "3", "--targets", "2", "--resources", "9", "--out", self.path("g.json"))
    self.assertEqual(code, EXIT_USAGE)
    self.assertIn("resources", err)

  def test_usage_errors(self):
    self.assertEqual(call("gen-grid", "--out", self.path("g.json"))[0], EXIT_USAGE)
    self.assertEqual(call("no-such-command")[0], EXIT_USAGE)
    self.assertEqual(call()[0], EXIT_USAGE)


class TestImportEdges(unittest.TestCase):
  def setUp(self):
    self.tmp = tempfile.TemporaryDirectory()
    # path 0-1-2-3-4-5 plus a separate pair 6-7
    self.edges = self.path("edges.txt")
    with open(self.edges, "w") as f:
      f.write("# two components\n0 1\n1 2\n2 3\n3 4\n4 5\n6 7\n")

  def tearDown(self):
    self.tmp.cleanup()

  def path(self, name):
    return os.path.join(self.tmp.name, name)

  def test_explicit_targets(self):
    out = self.path("g.json")
    code, stdout, err = call("import-edges", self.edges, "--attacker", "0", "--target-ids", "5,3", "--resources", "3", "--horizon", "6", "--out", out)
    self.assertEqual(code, EXIT_OK, err)
    self.assertIn("attacker at 0", stdout)
    game = load_config(out)
    self.assertEqual(game.graph.node_count, 8)
    self.assertEqual(game.attacker_starts, (0, ))
    self.assertEqual(game.targets, frozenset({3, 5}))
    self.assertEqual(game.horizon, 6)
    # reachable free nodes 1, 2 and 4 come before the other component
    self.assertEqual(set(game.defender_starts), {1, 2, 4})

  def test_sampled_targets_are_reachable(self):
    for seed in range(5):
      out = self.path(f"g{seed}.json")
      code, _, err = call("--seed", str(seed), "import-edges", self.edges, "--attacker", "0", "--targets", "3", "--resources", "1", "--out", out)
      self.assertEqual(code, EXIT_OK, err)
      game = load_config(out)
      self.assertEqual(len(game.targets), 3)
      self.assertTrue(game.targets <= {1, 2, 3, 4, 5})
      dist = bfs_distances(game.graph, [0])
      self.assertEqual(int(dist[game.defender_starts[0]]), min(int(dist[v]) for v in range(1, 6) if v not in game.targets))

  def test_rejected_inputs(self):
    bad = self.path("bad.txt")
    with open(bad, "w") as f:
      f.write("0 1 2\n")
    code, _, err = call("import-edges", bad, "--attacker", "0", "--out", self.path("g.json"))
    self.assertEqual(code, EXIT_USAGE)
    self.assertIn("edges", err)
    code, _, err = call("import-edges", self.edges, "--attacker", "9", "--targets", "2", "--out", self.path("g.json"))
    self.assertEqual(code, EXIT_USAGE)
    self.assertIn("attacker", err)
    self.assertEqual(call("import-edges", self.edges, "--attacker", "0", "--target-ids", "0,5", "--out", self.path("g.json"))[0], EXIT_USAGE)
    self.assertEqual(call("import-edges", self.edges, "--attacker", "0", "--target-ids", "a,b", "--out", self.path("g.json"))[0], EXIT_USAGE)
    self.assertEqual(call("import-edges", self.edges, "--attacker", "0", "--targets", "9", "--out", self.path("g.json"))[0], EXIT_USAGE)
    self.assertFalse(os.path.exists(self.path("g.json")))


class TestTrainEvalPlot(unittest.TestCase):
  @classmethod
  def setUpClass(cls):
    cls.tmp = tempfile.TemporaryDirectory()
    cls.game_path = os.path.join(cls.tmp.name, "game.json")
    save_config(GameConfig(generate_grid(3, 3, 1.0, 0.0, seed=0), (4, ), frozenset({0, 2, 6, 8}), (1, 7), 3), cls.game_path)
    cls.run_dir = os.path.join(cls.tmp.name, "run")
    cls.train_code, cls.train_out, cls.train_err = call("--seed", "1", "--quiet", "train", cls.game_path, cls.run_dir, "--episodes", "4", *SMALL_TRAIN)

  @classmethod
  def tearDownClass(cls):
    cls.tmp.cleanup()

  def test_train_smoke(self):
    self.assertEqual(self.train_code, EXIT_OK, self.train_err)
    self.assertTrue(os.path.exists(os.path.join(self.run_dir, "latest.safetensors")))
    with open(os.path.join(self.run_dir, "metrics.csv")) as f:
      rows = list(csv.DictReader(f))
    self.assertEqual([r["episode"] for r in rows], ["2", "4"])
    self.assertIn("4 episodes", self.train_out)

  def test_invalid_train_settings(self):
    out_dir = os.path.join(self.tmp.name, "bad")
    code, _, err = call("--quiet", "train", self.game_path, out_dir, "--set", "no_such_field=1")
    self.assertEqual(code, EXIT_USAGE)
    self.assertIn("no_such_field", err)
    code, _, err = call("--quiet", "train", self.game_path, out_dir, "--set", "lr=-1")
    self.assertEqual(code, EXIT_USAGE)
    self.assertIn("lr", err)
    self.assertEqual(call("--quiet", "train", self.game_path, out_dir, "--set", "lr")[0], EXIT_USAGE)

  def test_invalid_game_config(self):
    bad = os.path.join(self.tmp.name, "bad_game.json")
    with open(bad, "w") as f:
      json.dump({"node_count": 3, "edges": [[0, 1]], "attacker_starts": [0], "targets": [7], "defender_starts": [1], "horizon": 2}, f)
    code, _, err = call("--quiet", "train", bad, os.path.join(self.tmp.name, "bad_run"))
    self.assertEqual(code, EXIT_USAGE)
    self.assertIn("targets", err)

  def test_sweep(self):
    sweep_dir = os.path.join(self.tmp.name, "sweep")
    code, _, err = call("--quiet", "train", self.game_path, sweep_dir, "--episodes", "2", *SMALL_TRAIN, "--sweep", "c_puct=0.1,0.5")
    self.assertEqual(code, EXIT_OK, err)
    for name in ("c_puct=0.1", "c_puct=0.5"):
      with open(os.path.join(sweep_dir, name, "train_config.json")) as f:
        self.assertEqual(json.load(f)["c_puct"], float(name.split("=")[1]))

  def test_sweep_with_metrics_port_starts_one_exporter(self):
    sweep_dir = os.path.join(self.tmp.name, "sweep_metrics")
    with mock.patch("nsgzero.stats.metrics.start_http_server") as server:
      code, _, err = call("--quiet", "train", self.game_path, sweep_dir, "--episodes", "2", *SMALL_TRAIN, "--sweep", "c_puct=0.1,0.5", "--prometheus-client-port", "9105")
    self.assertEqual(code, EXIT_OK, err)
    server.assert_called_once_with(9105)
    for name in ("c_puct=0.1", "c_puct=0.5"):
      self.assertTrue(os.path.exists(os.path.join(sweep_dir, name, "latest.safetensors")))

  def eval_run(self, mode, *extra):
    out = os.path.join(self.tmp.name, f"eval_{mode}.csv")
    code, stdout, err = call("--quiet", "eval", self.game_path, os.path.join(self.run_dir, "latest.safetensors"), "--mode", mode, "--out", out, *extra)
    self.assertEqual(code, EXIT_OK, err)
    with open(out) as f:
      rows = list(csv.reader(f))
    self.assertEqual(rows[0], ["path_id", "path_nodes", "mean_reward", "n_episodes"])
    self.assertEqual(rows[-1][0], "summary")
    self.assertTrue(stdout.startswith(f"{mode}: defender reward"))
    return rows

  def test_eval_uniform(self):
    rows = self.eval_run("uniform", "--episodes", "3")
    self.assertEqual(rows[-1][3], "3")

  def test_eval_enumerate(self):
    rows = self.eval_run("enumerate", "--episodes-per-path", "1")
    # every attack path from the centre of a full 3x3 grid reaches a corner within 3 steps
    self.assertGreater(len(rows), 2)
    value = float(rows[-1][2])
    self.assertEqual(value, min(float(r[2]) for r in rows[1:-1]))

  def test_eval_shortest(self):
    rows = self.eval_run("shortest", "--episodes-per-path", "1")
    # a diagonal-free 3x3 grid has two shortest paths from the centre to each corner
    self.assertEqual(len(rows), 8 + 2)

  def test_eval_baseline_without_checkpoint(self):
    out = os.path.join(self.tmp.name, "chase.csv")
    code, stdout, err = call("--quiet", "eval", self.game_path, "--defender", "chase", "--mode", "shortest", "--episodes-per-path", "1", "--out", out)
    self.assertEqual(code, EXIT_OK, err)
    self.assertIn("shortest", stdout)
    self.assertEqual(call("--quiet", "eval", self.game_path, "--mode", "uniform")[0], EXIT_USAGE)

  def test_eval_digest_mismatch(self):
    other = os.path.join(self.tmp.name, "other_game.json")
    save_config(GameConfig(generate_grid(3, 3, 1.0, 0.0, seed=0), (4, ), frozenset({0, 2, 6}), (1, 7), 3), other)
    ckpt = os.path.join(self.run_dir, "latest.safetensors")
    code, _, err = call("--quiet", "eval", other, ckpt, "--mode", "uniform", "--episodes", "1", "--out", os.path.join(self.tmp.name, "x.csv"))
    self.assertEqual(code, EXIT_RUNTIME)
    self.assertIn("digest", err)
    code, _, err = call("--quiet", "eval", other, ckpt, "--mode", "uniform", "--episodes", "1", "--force", "--out", os.path.join(self.tmp.name, "x.csv"))
    self.assertEqual(code, EXIT_OK, err)

  def test_plot(self):
    metrics = os.path.join(self.run_dir, "metrics.csv")
    svg = os.path.join(self.tmp.name, "curves.svg")
    code, _, err = call("--quiet", "plot", metrics, svg, "--columns", "value_loss,win_rate_uniform")
    self.assertEqual(code, EXIT_OK, err)
    self.assertTrue(os.path.getsize(svg) > 0)
    code, _, err = call("--quiet", "plot", metrics, svg, "--columns", "nope")
    self.assertEqual(code, EXIT_USAGE)
    self.assertIn("nope", err)
    self.assertEqual(call("--quiet", "plot", os.path.join(self.tmp.name, "missing.csv"), svg)[0], EXIT_USAGE)


if __name__ == "__main__":
  unittest.main()
