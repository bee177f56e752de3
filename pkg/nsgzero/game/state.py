from dataclasses import dataclass
from typing import Tuple


@dataclass(frozen=True)
class GlobalState:
  """Joint state: the attacker's visited-node sequence, every resource's location, and the timestep."""
  attacker_seq: Tuple[int, ...]
  resource_locs: Tuple[int, ...]
  t: int

  def __post_init__(self):
    if len(self.attacker_seq) != self.t + 1:
      raise ValueError(f"attacker_seq has {len(self.attacker_seq)} entries at t={self.t}")

  @property
  def attacker_node(self) -> int:
    return self.attacker_seq[-1]

  @property
  def m(self) -> int:
    return len(self.resource_locs)

  def to_dict(self) -> dict:
    return {"attacker_seq": list(self.attacker_seq), "resource_locs": list(self.resource_locs), "t": self.t}

  @classmethod
  def from_dict(cls, data: dict) -> "GlobalState":
    return cls(tuple(data["attacker_seq"]), tuple(data["resource_locs"]), data["t"])


@dataclass(frozen=True)
class Outcome:
  terminal: bool
  defender_reward: float = 0.0


NON_TERMINAL = Outcome(False, 0.0)
CAUGHT = Outcome(True, 1.0)
ESCAPED = Outcome(True, 0.0)


def attacker_reward(outcome: Outcome) -> float:
  return -outcome.defender_reward
