import csv
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, List, Optional
import numpy as np
from nsgzero.helpers import DEBUG, CallbackSystem, make_rng, derive_rng, spawn_rngs
from nsgzero.graph.game_config import GameConfig, config_digest, save_config
from nsgzero.nets.params import NetParams, NonFiniteError
from nsgzero.nets.backward import LossBreakdown, backward
from nsgzero.nets.optimizer import AdamMoments, optimizer_step
from nsgzero.nets.checkpoint import save_checkpoint, load_checkpoint
from nsgzero.defender.defender import MCTSDefender
from nsgzero.attacker.attacker import AttackerPlan, MixtureAttacker, UniformAttacker, get_attacker
from nsgzero.eval.evaluate import play_matches, worst_case_reward
from nsgzero.train.episode import Episode, EpisodeBuffer, collect_episode
from nsgzero.train.batch import pad_and_mask, loss_inputs
from nsgzero.train.train_config import TrainConfig

METRICS_COLUMNS = ["episode", "prior_loss", "value_loss", "dynamics_loss", "win_rate_uniform", "worst_case_reward", "wall_seconds"]
METRICS_FILE = "metrics.csv"
LATEST_CHECKPOINT = "latest.safetensors"
BUFFER_FILE = "latest_buffer.json"


class TrainingAborted(RuntimeError):
  def __init__(self, episode: int, reason: str, diagnostic_path: str):
    self.episode = episode
    self.diagnostic_path = diagnostic_path
    super().__init__(f"training aborted at episode {episode}: {reason} (diagnostics in {diagnostic_path})")


@dataclass
class TrainResult:
  params: NetParams
  moments: AdamMoments
  episode: int
  rows: List[Dict[str, str]]


def _fmt(value: Optional[float]) -> str:
  return "" if value is None else repr(float(value))


class Trainer:
  """
  Alternates episode collection against the training attacker with gradient steps on
  batches drawn from a FIFO episode buffer. Only this driver mutates parameters; collection
  waves read a fixed snapshot.
  """
  def __init__(self, game: GameConfig, config: TrainConfig, out_dir: str, resume: bool = False, force: bool = False):
    self.game = game
    self.config = config
    self.out_dir = out_dir
    self.digest = config_digest(game)
    self.rng = make_rng(config.seed)
    self.params = NetParams.init(config.net_shape(game.graph.node_count, game.horizon), self.rng)
    self.moments = AdamMoments.zeros(self.params)
    self.attacker = get_attacker(config.attacker_kind, game, config.mab_window, config.eta)
    self.buffer = EpisodeBuffer(config.buffer_capacity)
    self.episode = 0
    self.pending = LossBreakdown()
    self.pending_updates = 0
    self.rows: List[Dict[str, str]] = []
    self.on_metrics = CallbackSystem[str, Dict[str, str]]()
    self.started_at = time.perf_counter()
    os.makedirs(out_dir, exist_ok=True)
    if resume:
      self._resume(force)
    else:
      save_config(game, os.path.join(out_dir, "game_config.json"))
      with open(os.path.join(out_dir, "train_config.json"), "w") as f:
        json.dump(config.to_dict(), f, indent=2)
      self._rewrite_metrics([])

  @property
  def metrics_path(self) -> str:
    return os.path.join(self.out_dir, METRICS_FILE)

  def run(self) -> TrainResult:
    total = self.config.episodes_total
    if DEBUG >= 1: print(f"training {total - self.episode} episodes ({self.params.num_parameters()} parameters, digest {self.digest[:12]})")
    while self.episode < total:
      wave = min(self.config.threads, total - self.episode)
      for plan, episode in self._collect(wave):
        self.episode += 1
        self.buffer.append(episode)
        if isinstance(self.attacker, MixtureAttacker):
          self.attacker.record(plan.target, episode.reward)
        for _ in range(self.config.updates_per_episode):
          self._update()
        if self.episode % self.config.log_every == 0 or self.episode == total:
          self._log_row()
        if (self.config.checkpoint_every and self.episode % self.config.checkpoint_every == 0) or self.episode == total:
          self.checkpoint()
    return TrainResult(self.params, self.moments, self.episode, self.rows)

  def _collect(self, wave: int) -> List[tuple]:
    plans: List[AttackerPlan] = []
    for _ in range(wave):
      start = self.game.attacker_starts[int(self.rng.integers(len(self.game.attacker_starts)))]
      plans.append(self.attacker.draw_plan(self.game, start, self.rng))
    rngs = spawn_rngs(self.rng, wave)

    def play(k: int) -> Episode:
      return collect_episode(self.game, self.params, self.attacker, self.config.search_config, rngs[k], plan=plans[k])

    if wave == 1:
      episodes = [play(0)]
    else:
      with ThreadPoolExecutor(max_workers=wave) as executor:
        episodes = list(executor.map(play, range(wave)))
    return list(zip(plans, episodes))

  def _update(self) -> None:
    batch = self.buffer.sample(self.config.batch_episodes, self.rng)
    padded = pad_and_mask(batch, self.game.horizon, self.config.prior_target)
    inputs = loss_inputs(padded, self.config.gamma, self.config.value_loss_kind)
    breakdown = None
    try:
      breakdown, grads = backward(self.params, inputs)
      if not np.isfinite(breakdown.total):
        raise NonFiniteError(f"loss is {breakdown.total}")
      optimizer_step(self.params, grads, self.moments, self.config.lr)
    except (FloatingPointError, NonFiniteError) as e:
      path = self._dump_diagnostic(str(e), batch, breakdown)
      raise TrainingAborted(self.episode, str(e), path) from e
    self.pending.prior += breakdown.prior
    self.pending.value += breakdown.value
    self.pending.dynamics += breakdown.dynamics
    self.pending_updates += 1

  def _log_row(self) -> None:
    n = self.pending_updates
    eval_defender = MCTSDefender(self.params, self.config.eval_search_config)
    win_rate = play_matches(self.game, eval_defender, UniformAttacker(), self.config.uniform_eval_episodes, derive_rng(self.config.seed, self.episode, 1)).mean
    worst_case = None
    if self.config.eval_every and self.episode % self.config.eval_every == 0:
      report = worst_case_reward(self.game, eval_defender, self.config.episodes_per_path, derive_rng(self.config.seed, self.episode, 2), self.config.path_cap, self.config.threads)
      worst_case = report.value
    row = {
      "episode": str(self.episode),
      "prior_loss": _fmt(self.pending.prior/n if n else None),
      "value_loss": _fmt(self.pending.value/n if n else None),
      "dynamics_loss": _fmt(self.pending.dynamics/n if n else None),
      "win_rate_uniform": _fmt(win_rate),
      "worst_case_reward": _fmt(worst_case),
      "wall_seconds": f"{time.perf_counter() - self.started_at:.3f}" if self.config.record_wall_time else "",
    }
    self.pending, self.pending_updates = LossBreakdown(), 0
    self.rows.append(row)
    with open(self.metrics_path, "a", newline="") as f:
      csv.DictWriter(f, METRICS_COLUMNS, lineterminator="\n").writerow(row)
    if DEBUG >= 1: print(f"metrics {row}")
    self.on_metrics.trigger_all(row)

  def checkpoint(self) -> None:
    extra: Dict[str, Any] = {
      "episode": self.episode,
      "rng_state": self.rng.bit_generator.state,
      "pending": [self.pending.prior, self.pending.value, self.pending.dynamics, self.pending_updates],
    }
    if isinstance(self.attacker, MixtureAttacker):
      extra["attacker"] = self.attacker.state_dict()
    with open(os.path.join(self.out_dir, BUFFER_FILE), "w") as f:
      json.dump(self.buffer.to_list(), f)
    save_checkpoint(self.params, self.moments, self.digest, os.path.join(self.out_dir, LATEST_CHECKPOINT), extra)
    if self.config.checkpoint_every and self.episode % self.config.checkpoint_every == 0:
      save_checkpoint(self.params, self.moments, self.digest, os.path.join(self.out_dir, f"ckpt_{self.episode:08d}.safetensors"), extra)

  def _resume(self, force: bool) -> None:
    ckpt = load_checkpoint(os.path.join(self.out_dir, LATEST_CHECKPOINT), expected_digest=self.digest, force=force)
    if ckpt.params.shape != self.params.shape:
      raise ValueError(f"checkpoint network shape {ckpt.params.shape} does not match config {self.params.shape}")
    self.params, self.moments = ckpt.params, ckpt.moments
    self.episode = int(ckpt.extra["episode"])
    self.rng.bit_generator.state = ckpt.extra["rng_state"]
    prior, value, dynamics, updates = ckpt.extra["pending"]
    self.pending, self.pending_updates = LossBreakdown(prior, value, dynamics), int(updates)
    if "attacker" in ckpt.extra and isinstance(self.attacker, MixtureAttacker):
      self.attacker.load_state_dict(ckpt.extra["attacker"])
    buffer_path = os.path.join(self.out_dir, BUFFER_FILE)
    if os.path.exists(buffer_path):
      with open(buffer_path) as f:
        self.buffer.load_list(json.load(f))
    rows = []
    if os.path.exists(self.metrics_path):
      with open(self.metrics_path, newline="") as f:
        rows = [r for r in csv.DictReader(f) if int(r["episode"]) <= self.episode]
    self._rewrite_metrics(rows)
    self.rows = rows
    if DEBUG >= 1: print(f"resumed from episode {self.episode} (optimizer step {self.moments.step_count}, buffer {len(self.buffer)})")

  def _rewrite_metrics(self, rows: List[Dict[str, str]]) -> None:
    with open(self.metrics_path, "w", newline="") as f:
      writer = csv.DictWriter(f, METRICS_COLUMNS, lineterminator="\n")
      writer.writeheader()
      writer.writerows(rows)

  def _dump_diagnostic(self, reason: str, batch: List[Episode], breakdown: Optional[LossBreakdown]) -> str:
    path = os.path.join(self.out_dir, f"diagnostic_{self.episode}.json")
    with open(path, "w") as f:
      json.dump({
        "episode": self.episode,
        "optimizer_step": self.moments.step_count,
        "reason": reason,
        "loss": None if breakdown is None else {"prior": breakdown.prior, "value": breakdown.value, "dynamics": breakdown.dynamics},
        "config_digest": self.digest,
        "train_config": self.config.to_dict(),
        "batch": [e.to_dict() for e in batch],
      }, f, indent=2)
    if DEBUG >= 1: print(f"wrote diagnostic dump {path}")
    return path


def train_loop(game: GameConfig, config: TrainConfig, out_dir: str, resume: bool = False, force: bool = False, observers: Optional[list] = None) -> TrainResult:
  trainer = Trainer(game, config, out_dir, resume, force)
  for k, observer in enumerate(observers or []):
    trainer.on_metrics.register(f"observer_{k}").on_next(observer)
  return trainer.run()
