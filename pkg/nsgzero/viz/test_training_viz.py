import io
import unittest
from rich.console import Console
from nsgzero.viz.training_viz import TrainingViz, RECENT_ROWS


def row(episode, loss="0.5"):
  return {"episode": str(episode), "prior_loss": loss, "value_loss": loss, "dynamics_loss": loss, "win_rate_uniform": "0.25", "worst_case_reward": "", "wall_seconds": "12.5"}


class TestTrainingViz(unittest.TestCase):
  def setUp(self):
    self.console = Console(file=io.StringIO(), width=160, height=40, force_terminal=False)
    self.viz = TrainingViz(100, "test", console=self.console, start=False)

  def render(self):
    self.console.print(self.viz.layout)
    return self.console.file.getvalue()

  def test_tracks_recent_rows(self):
    for k in range(1, RECENT_ROWS + 3):
      self.viz.update(row(k*10))
    self.assertEqual(len(self.viz.rows), RECENT_ROWS)
    self.assertEqual(self.viz.episode, (RECENT_ROWS + 2)*10)

  def test_renders_metrics(self):
    self.viz.update(row(40, "1.23456789"))
    output = self.render()
    self.assertIn("40/100 episodes", output)
    self.assertIn("1.2346", output)
    self.assertIn("win_rate_uniform", output)
