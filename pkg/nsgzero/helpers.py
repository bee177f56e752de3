import os
import hashlib
import json
from typing import Callable, TypeVar, Optional, Dict, Generic, Tuple, List, Any
import numpy as np

DEBUG = int(os.getenv("DEBUG", default="0"))
VERSION = "0.0.1"

nsgzero_text = r"""
                                        
 _ __  ___  __ _ _______ _ __ ___  
| '_ \/ __|/ _` |_  / _ \ '__/ _ \ 
| | | \__ \ (_| |/ /  __/ | | (_) |
|_| |_|___/\__, /___\___|_|  \___/ 
           |___/                    
    """


def print_yellow_nsgzero():
  yellow = "\033[93m"  # ANSI escape code for yellow
  reset = "\033[0m"  # ANSI escape code to reset color
  print(f"{yellow}{nsgzero_text}{reset}")


def make_rng(seed: int) -> np.random.Generator:
  """PCG64 is the one PRNG used everywhere, so seeded fixtures reproduce bit-exactly."""
  return np.random.Generator(np.random.PCG64(seed))


def derive_rng(seed: int, *keys: int) -> np.random.Generator:
  return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, *keys])))


def spawn_rngs(rng: np.random.Generator, n: int) -> List[np.random.Generator]:
  seeds = rng.integers(0, 2**63 - 1, size=n, dtype=np.int64)
  return [make_rng(int(s)) for s in seeds]


def canonical_json(data: Any) -> str:
  return json.dumps(data, sort_keys=True, separators=(",", ":"))


def sha256_digest(data: Any) -> str:
  return hashlib.sha256(canonical_json(data).encode("utf-8")).hexdigest()


def pretty_print_duration(seconds: float) -> str:
  if seconds < 60:
    return f"{seconds:.1f}s"
  elif seconds < 3600:
    return f"{int(seconds // 60)}m {int(seconds % 60)}s"
  else:
    return f"{int(seconds // 3600)}h {int(seconds % 3600 // 60)}m"


T = TypeVar("T")
K = TypeVar("K")


class Callback(Generic[T]):
  def __init__(self) -> None:
    self.result: Optional[Tuple[T, ...]] = None
    self.observers: list[Callable[..., None]] = []

  def on_next(self, callback: Callable[..., None]) -> None:
    self.observers.append(callback)

  def set(self, *args: T) -> None:
    self.result = args
    for observer in self.observers:
      observer(*args)


class CallbackSystem(Generic[K, T]):
  def __init__(self) -> None:
    self.callbacks: Dict[K, Callback[T]] = {}

  def register(self, name: K) -> Callback[T]:
    if name not in self.callbacks:
      self.callbacks[name] = Callback[T]()
    return self.callbacks[name]

  def deregister(self, name: K) -> None:
    if name in self.callbacks:
      del self.callbacks[name]

  def trigger(self, name: K, *args: T) -> None:
    if name in self.callbacks:
      self.callbacks[name].set(*args)

  def trigger_all(self, *args: T) -> None:
    for callback in self.callbacks.values():
      callback.set(*args)
