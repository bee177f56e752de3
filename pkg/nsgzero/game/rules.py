from typing import List, Sequence, Tuple
from nsgzero.graph.game_config import GameConfig
from nsgzero.game.state import GlobalState, Outcome, NON_TERMINAL, CAUGHT, ESCAPED


class IllegalMoveError(ValueError):
  def __init__(self, agent: str, source: int, dest: int):
    self.agent = agent
    self.source = source
    self.dest = dest
    super().__init__(f"illegal move by {agent}: {source} -> {dest} is not an edge")


def initial_state(config: GameConfig, attacker_start: int) -> GlobalState:
  if attacker_start not in config.attacker_starts:
    raise ValueError(f"attacker start {attacker_start} not in {config.attacker_starts}")
  return GlobalState((attacker_start, ), tuple(config.defender_starts), 0)


def legal_defender_actions(config: GameConfig, state: GlobalState) -> List[Tuple[int, ...]]:
  """Per resource: its neighbors plus its own node (resources may hold position)."""
  return [tuple(sorted(config.graph.neighbors(loc) + (loc, ))) for loc in state.resource_locs]


def legal_attacker_actions(config: GameConfig, state: GlobalState) -> Tuple[int, ...]:
  """Graph neighbors of the attacker; an isolated attacker is stuck and can only stay."""
  neighbors = config.graph.neighbors(state.attacker_node)
  return neighbors if neighbors else (state.attacker_node, )


def evaluate_state(config: GameConfig, state: GlobalState) -> Outcome:
  """
  Terminal check for a state reached by a transition (t >= 1). Order: capture, then
  target arrival, then timeout (which counts as caught). The initial state is never terminal.
  """
  if state.t == 0:
    return NON_TERMINAL
  if state.attacker_node in state.resource_locs:
    return CAUGHT
  if state.attacker_node in config.targets:
    return ESCAPED
  if state.t >= config.horizon:
    return CAUGHT
  return NON_TERMINAL


def step(config: GameConfig, state: GlobalState, defender_action: Sequence[int], attacker_action: int) -> Tuple[GlobalState, Outcome]:
  if is_terminal(config, state):
    raise ValueError(f"step called on terminal state {state}")
  if len(defender_action) != state.m:
    raise ValueError(f"defender action has {len(defender_action)} moves for {state.m} resources")
  for i, (loc, dest) in enumerate(zip(state.resource_locs, defender_action)):
    if dest != loc and not config.graph.has_edge(loc, dest):
      raise IllegalMoveError(f"resource {i}", loc, dest)
  if attacker_action not in legal_attacker_actions(config, state):
    raise IllegalMoveError("attacker", state.attacker_node, attacker_action)

  next_state = GlobalState(state.attacker_seq + (attacker_action, ), tuple(defender_action), state.t + 1)
  return next_state, evaluate_state(config, next_state)


def is_terminal(config: GameConfig, state: GlobalState) -> bool:
  return evaluate_state(config, state).terminal
