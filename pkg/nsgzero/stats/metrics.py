from typing import Dict
from prometheus_client import start_http_server, Counter, Gauge
from nsgzero.train.trainer import Trainer

EPISODES_COUNTER = Counter("nsgzero_logged_episodes_total", "Episodes collected up to the latest metrics row")
LOSS_GAUGE = Gauge("nsgzero_loss", "Mean training loss since the previous metrics row", ["net"])
WIN_RATE_GAUGE = Gauge("nsgzero_win_rate_uniform", "Defender reward against the uniform attacker")
WORST_CASE_GAUGE = Gauge("nsgzero_worst_case_reward", "Latest worst-case defender reward")


def record_metrics_row(row: Dict[str, str], last_episode: int = 0) -> int:
  episode = int(row["episode"])
  if episode > last_episode:
    EPISODES_COUNTER.inc(episode - last_episode)
  for net in ("prior", "value", "dynamics"):
    if row[f"{net}_loss"]:
      LOSS_GAUGE.labels(net=net).set(float(row[f"{net}_loss"]))
  if row["win_rate_uniform"]:
    WIN_RATE_GAUGE.set(float(row["win_rate_uniform"]))
  if row["worst_case_reward"]:
    WORST_CASE_GAUGE.set(float(row["worst_case_reward"]))
  return episode


def start_metrics_server(port: int) -> None:
  start_http_server(port)


def attach_trainer(trainer: Trainer) -> None:
  """Feeds every metrics row the trainer logs into the exported counters and gauges."""
  last_episode = trainer.episode

  def _on_metrics(row: Dict[str, str]):
    nonlocal last_episode
    last_episode = record_metrics_row(row, last_episode)

  trainer.on_metrics.register("stats").on_next(_on_metrics)
