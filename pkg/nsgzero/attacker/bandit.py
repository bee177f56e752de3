from collections import deque
from dataclasses import dataclass, field
from typing import Deque, Dict, Iterable, Optional, Sequence, Tuple
import numpy as np

DEFAULT_WINDOW = 100
DEFAULT_ETA = 0.1


@dataclass
class MabState:
  """Sliding window over the latest J (target, attacker reward) plays."""
  J: int = DEFAULT_WINDOW
  window: Deque[Tuple[int, float]] = field(default_factory=deque)

  def __post_init__(self):
    if self.J < 1:
      raise ValueError(f"MAB window must be >= 1, got {self.J}")
    self.window = deque(self.window, maxlen=self.J)

  def record(self, target: int, attacker_reward: float) -> None:
    self.window.append((target, float(attacker_reward)))

  def to_dict(self) -> dict:
    return {"J": self.J, "window": [[t, r] for t, r in self.window]}

  @classmethod
  def from_dict(cls, data: dict) -> "MabState":
    return cls(data["J"], deque((int(t), float(r)) for t, r in data["window"]))


@dataclass
class AvgerState:
  """How often each target was picked by the bandit branch."""
  targets: Tuple[int, ...]
  counts: Dict[int, int] = field(default_factory=dict)

  def __post_init__(self):
    self.targets = tuple(sorted(self.targets))
    self.counts = {t: int(self.counts.get(t, 0)) for t in self.targets}

  @property
  def total(self) -> int:
    return sum(self.counts.values())

  def record(self, target: int) -> None:
    self.counts[target] += 1

  def to_dict(self) -> dict:
    return {"targets": list(self.targets), "counts": {str(t): c for t, c in self.counts.items()}}

  @classmethod
  def from_dict(cls, data: dict) -> "AvgerState":
    return cls(tuple(data["targets"]), {int(t): c for t, c in data["counts"].items()})


def mab_value(mab: MabState, target: int) -> Optional[float]:
  rewards = [r for t, r in mab.window if t == target]
  if not rewards:
    return None
  return sum(rewards)/len(rewards)


def mab_select(mab: MabState, targets: Iterable[int], rng: np.random.Generator) -> int:
  targets = sorted(targets)
  if not targets:
    raise ValueError("mab_select needs at least one target")
  values = {t: mab_value(mab, t) for t in targets}
  # unplayed targets are tried before any played one
  unplayed = [t for t in targets if values[t] is None]
  if unplayed:
    candidates = unplayed
  else:
    best = max(values.values())
    candidates = [t for t in targets if values[t] == best]
  return candidates[int(rng.integers(len(candidates)))]


def avger_select(avger: AvgerState, rng: np.random.Generator, targets: Optional[Sequence[int]] = None) -> int:
  targets = sorted(targets) if targets is not None else list(avger.targets)
  if not targets:
    raise ValueError("avger_select needs at least one target")
  counts = np.array([avger.counts.get(t, 0) for t in targets], dtype=np.float64)
  if counts.sum() == 0:
    return targets[int(rng.integers(len(targets)))]
  return targets[int(rng.choice(len(targets), p=counts/counts.sum()))]


def mixture_select(mab: MabState, avger: AvgerState, eta: float, targets: Iterable[int], rng: np.random.Generator) -> Tuple[int, bool]:
  """With probability eta play the bandit's choice and count it; otherwise sample the averaged choice."""
  if not 0.0 <= eta <= 1.0:
    raise ValueError(f"eta must be in [0, 1], got {eta}")
  targets = sorted(targets)
  if rng.random() < eta:
    target = mab_select(mab, targets, rng)
    avger.record(target)
    return target, True
  return avger_select(avger, rng, targets), False
