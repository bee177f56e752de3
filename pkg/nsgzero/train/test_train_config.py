import json
import os
import tempfile
import unittest
from nsgzero.graph.game_config import ConfigError
from nsgzero.train.train_config import TrainConfig, load_train_config


class TestTrainConfig(unittest.TestCase):
  def test_defaults(self):
    config = TrainConfig()
    self.assertEqual((config.batch_episodes, config.buffer_capacity, config.gamma, config.value_loss_kind), (32, 10_000, 1.0, "CE"))
    self.assertEqual(config.search_config.n_simulations, 15)
    self.assertEqual(config.eval_search_config.temperature, 0.0)
    self.assertEqual((config.mab_window, config.eta), (100, 0.1))

  def test_round_trip(self):
    config = TrainConfig(episodes_total=7, value_loss_kind="MSE", gamma=0.95)
    self.assertEqual(TrainConfig.from_dict(config.to_dict()), config)

  def test_field_errors(self):
    cases = [
      ({"batch_episodes": 0}, "batch_episodes"),
      ({"batch_episodes": 8, "buffer_capacity": 4}, "buffer_capacity"),
      ({"value_loss_kind": "L1"}, "value_loss_kind"),
      ({"n_simulations": 1}, "search"),
      ({"eta": 2.0}, "eta"),
      ({"bogus": 1}, "bogus"),
      ({"lr": "fast"}, "lr"),
      ({"episodes_total": 1.5}, "episodes_total"),
    ]
    for data, field in cases:
      with self.assertRaises(ConfigError) as ctx:
        TrainConfig.from_dict(data)
      self.assertEqual(ctx.exception.field, field, data)

  def test_overrides_parse_strings(self):
    config = TrainConfig().with_overrides({"n_simulations": "5", "c_puct": "0.5", "record_wall_time": "true", "value_loss_kind": "MSE"})
    self.assertEqual((config.n_simulations, config.c_puct, config.record_wall_time, config.value_loss_kind), (5, 0.5, True, "MSE"))

  def test_load_file(self):
    with tempfile.TemporaryDirectory() as tmp:
      path = os.path.join(tmp, "train.json")
      with open(path, "w") as f:
        json.dump({"episodes_total": 3, "seed": 9}, f)
      self.assertEqual(load_train_config(path), TrainConfig(episodes_total=3, seed=9))
      with open(path, "w") as f:
        f.write("{")
      with self.assertRaises(ConfigError):
        load_train_config(path)
