import argparse
import os
import sys
import traceback
from typing import Any, Dict, Optional, Sequence
from rich.console import Console
from nsgzero.helpers import DEBUG, VERSION, derive_rng, make_rng, print_yellow_nsgzero
from nsgzero.graph.graph import bfs_distances, generate_grid, load_edge_list
from nsgzero.graph.placement import boundary_nodes, grid_center, place_resources, sample_targets
from nsgzero.graph.game_config import ConfigError, GameConfig, GridShape, load_config, save_config, config_digest
from nsgzero.nets.checkpoint import load_checkpoint
from nsgzero.defender.defender import get_defender
from nsgzero.attacker.attacker import UniformAttacker
from nsgzero.eval.evaluate import best_response_value, shortest_path_panel, uniform_report
from nsgzero.eval.report import print_report, summary_line, write_report_csv
from nsgzero.train.train_config import TrainConfig, load_train_config
from nsgzero.train.trainer import Trainer, METRICS_FILE
from nsgzero.viz.plot import PlotError, plot_metrics

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2
EVAL_MODES = ("uniform", "enumerate", "shortest")


class UsageError(Exception):
  pass


class ArgumentParser(argparse.ArgumentParser):
  def error(self, message):
    raise UsageError(f"{self.prog}: {message}")


def _parse_assignments(items: Optional[Sequence[str]]) -> Dict[str, str]:
  overrides = {}
  for item in items or []:
    key, sep, value = item.partition("=")
    if not sep or not key:
      raise UsageError(f"expected key=value, got {item!r}")
    overrides[key.strip()] = value.strip()
  return overrides


def _console(args) -> Console:
  return Console(quiet=args.quiet)


def _write_game(config: GameConfig, out: str) -> None:
  os.makedirs(os.path.dirname(os.path.abspath(out)), exist_ok=True)
  save_config(config, out)
  attacker = config.attacker_starts[0]
  from_attacker = bfs_distances(config.graph, [attacker])
  reachable = sum(1 for t in config.targets if from_attacker[t] >= 0)
  print(f"wrote {out}: {config.graph}, attacker at {attacker}, targets {sorted(config.targets)} ({reachable} reachable), resources {list(config.defender_starts)}, digest {config_digest(config)[:12]}")


def cmd_gen_grid(args) -> int:
  width = args.width or args.size
  height = args.height or args.size
  if width is None or height is None:
    raise UsageError("gen-grid needs --size or both --width and --height")
  if args.horizon < 1:
    raise ConfigError("horizon", f"must be >= 1, got {args.horizon}")
  try:
    graph = generate_grid(width, height, args.p_edge, args.p_diag, args.seed)
  except ValueError as e:
    raise UsageError(str(e)) from e
  center = grid_center(width, height)

  boundary = boundary_nodes(width, height)
  if len(boundary) < args.targets:
    raise ConfigError("targets", f"{args.targets} targets requested but a {width}x{height} grid has only {len(boundary)} boundary nodes")
  rng = derive_rng(args.seed, 1)
  targets = sample_targets([v for v in boundary if v != center], args.targets, rng, "boundary nodes free of the attacker")
  resources = place_resources(graph, center, targets, args.resources, rng)
  _write_game(GameConfig(graph, (center, ), frozenset(targets), resources, args.horizon, GridShape(width, height)), args.out)
  return EXIT_OK


def cmd_import_edges(args) -> int:
  try:
    graph = load_edge_list(args.edge_list)
  except ValueError as e:
    raise ConfigError("edges", str(e)) from e
  if not 0 <= args.attacker < graph.node_count:
    raise ConfigError("attacker_starts", f"node id {args.attacker} outside 0..{graph.node_count - 1}")
  if args.horizon < 1:
    raise ConfigError("horizon", f"must be >= 1, got {args.horizon}")

  rng = derive_rng(args.seed, 1)
  if args.target_ids:
    try:
      targets = tuple(sorted({int(v) for v in args.target_ids.split(",")}))
    except ValueError as e:
      raise UsageError(f"--target-ids expects comma-separated node ids, got {args.target_ids!r}") from e
    if args.attacker in targets:
      raise ConfigError("targets", f"attacker node {args.attacker} cannot be a target")
  else:
    dist = bfs_distances(graph, [args.attacker])
    reachable = [v for v in range(graph.node_count) if dist[v] >= 1]
    targets = sample_targets(reachable, args.targets, rng, "nodes reachable from the attacker")
  resources = place_resources(graph, args.attacker, targets, args.resources, rng)
  _write_game(GameConfig(graph, (args.attacker, ), frozenset(targets), resources, args.horizon), args.out)
  return EXIT_OK


def _train_config(args) -> TrainConfig:
  config = load_train_config(args.train_config) if args.train_config else TrainConfig()
  overrides: Dict[str, Any] = _parse_assignments(getattr(args, "set", None))
  if args.seed is not None:
    overrides["seed"] = args.seed
  if args.threads is not None:
    overrides["threads"] = args.threads
  if getattr(args, "episodes", None) is not None:
    overrides["episodes_total"] = args.episodes
  return config.with_overrides(overrides) if overrides else config


def _run_training(game: GameConfig, config: TrainConfig, out_dir: str, args, console: Console) -> None:
  trainer = Trainer(game, config, out_dir, resume=args.resume, force=args.force)
  viz = None
  if not args.quiet:
    from nsgzero.viz.training_viz import TrainingViz
    viz = TrainingViz(config.episodes_total, out_dir, console=console)
    trainer.on_metrics.register("viz").on_next(viz.update)
  if args.prometheus_client_port:
    from nsgzero.stats.metrics import attach_trainer
    attach_trainer(trainer)
  try:
    result = trainer.run()
  finally:
    if viz is not None:
      viz.stop()
  last = result.rows[-1] if result.rows else {}
  print(f"{out_dir}: {result.episode} episodes, win_rate_uniform {last.get('win_rate_uniform', '')}, metrics in {os.path.join(out_dir, METRICS_FILE)}")


def cmd_train(args) -> int:
  game = load_config(args.config)
  config = _train_config(args)
  console = _console(args)
  runs = [(args.out_dir, config)]
  if args.sweep:
    key, sep, values = args.sweep.partition("=")
    if not sep or not values:
      raise UsageError(f"--sweep expects key=v1,v2,..., got {args.sweep!r}")
    runs = [(os.path.join(args.out_dir, f"{key}={value}"), config.with_overrides({key: value})) for value in values.split(",")]

  if args.prometheus_client_port:
    # one exporter for the whole process; every run of a sweep feeds the same gauges
    from nsgzero.stats.metrics import start_metrics_server
    start_metrics_server(args.prometheus_client_port)
  for out_dir, run_config in runs:
    _run_training(game, run_config, out_dir, args, console)
  return EXIT_OK


def cmd_eval(args) -> int:
  game = load_config(args.config)
  console = _console(args)
  train_config_path = args.train_config
  if train_config_path is None and args.checkpoint:
    sibling = os.path.join(os.path.dirname(os.path.abspath(args.checkpoint)), "train_config.json")
    train_config_path = sibling if os.path.exists(sibling) else None
  config = load_train_config(train_config_path) if train_config_path else TrainConfig()
  overrides = _parse_assignments(args.set)
  if args.threads is not None:
    overrides["threads"] = args.threads
  config = config.with_overrides(overrides) if overrides else config

  params = None
  if args.defender == "mcts":
    if not args.checkpoint:
      raise UsageError("eval with the mcts defender needs a checkpoint")
    params = load_checkpoint(args.checkpoint, expected_digest=config_digest(game), force=args.force).params
  defender = get_defender(args.defender, params, config.eval_search_config)

  rng = make_rng(args.seed if args.seed is not None else config.seed)
  if args.mode == "uniform":
    report = uniform_report(game, defender, UniformAttacker(), args.episodes, rng)
  elif args.mode == "enumerate":
    report = best_response_value(game, defender, args.episodes_per_path, rng, args.path_cap, config.threads, progress=not args.quiet)
  else:
    report = shortest_path_panel(game, defender, args.episodes_per_path, rng, args.path_cap, config.threads, progress=not args.quiet)

  out = args.out or os.path.join(os.path.dirname(os.path.abspath(args.checkpoint or args.config)), f"eval_{args.mode}.csv")
  write_report_csv(report, out)
  if args.quiet:
    print(summary_line(report))
  else:
    print_report(report, console)
  return EXIT_OK


def cmd_plot(args) -> int:
  columns = [c.strip() for c in args.columns.split(",")] if args.columns else None
  plotted = plot_metrics(args.metrics_csv, args.out_svg, columns, args.smooth, args.title)
  print(f"wrote {args.out_svg} ({', '.join(plotted)})")
  return EXIT_OK


def _add_global_flags(parser: argparse.ArgumentParser) -> None:
  # also accepted after the subcommand; SUPPRESS keeps the value given before it
  parser.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="Seed for every random choice of the command")
  parser.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="Worker threads for episode collection and per-path evaluation")
  parser.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS, help="Only print the final summary line")


def build_parser() -> ArgumentParser:
  parser = ArgumentParser(prog="nsgzero", description="Network security game defender trained with decentralized neural tree search")
  parser.add_argument("--version", action="version", version=f"nsgzero {VERSION}")
  parser.add_argument("--seed", type=int, default=None, help="Seed for every random choice of the command")
  parser.add_argument("--threads", type=int, default=None, help="Worker threads for episode collection and per-path evaluation")
  parser.add_argument("--quiet", action="store_true", help="Only print the final summary line")
  subparsers = parser.add_subparsers(dest="command", required=True)
  parents = [argparse.ArgumentParser(add_help=False)]
  _add_global_flags(parents[0])

  gen = subparsers.add_parser("gen-grid", parents=parents, help="Generate a grid game config")
  gen.add_argument("--size", type=int, default=None, help="Grid width and height")
  gen.add_argument("--width", type=int, default=None)
  gen.add_argument("--height", type=int, default=None)
  gen.add_argument("--p-edge", type=float, default=0.5, help="Probability of each horizontal/vertical edge")
  gen.add_argument("--p-diag", type=float, default=0.1, help="Probability of each diagonal edge")
  gen.add_argument("--targets", type=int, default=10, help="Number of boundary targets")
  gen.add_argument("--resources", type=int, default=4, help="Number of defender resources")
  gen.add_argument("--horizon", type=int, default=7, help="Time horizon T")
  gen.add_argument("--out", type=str, default="game_config.json", help="Output config path")
  gen.set_defaults(func=cmd_gen_grid)

  edges = subparsers.add_parser("import-edges", parents=parents, help="Build a game config from a 'u v' edge-list file")
  edges.add_argument("edge_list", help="Text file with one 'u v' edge per line")
  edges.add_argument("--attacker", type=int, required=True, help="Attacker start node")
  edges.add_argument("--targets", type=int, default=10, help="Number of targets sampled from nodes reachable from the attacker")
  edges.add_argument("--target-ids", type=str, default=None, help="Comma-separated target nodes (instead of sampling)")
  edges.add_argument("--resources", type=int, default=4, help="Number of defender resources")
  edges.add_argument("--horizon", type=int, default=7, help="Time horizon T")
  edges.add_argument("--out", type=str, default="game_config.json", help="Output config path")
  edges.set_defaults(func=cmd_import_edges)

  train = subparsers.add_parser("train", parents=parents, help="Train the defender networks")
  train.add_argument("config", help="Game config JSON")
  train.add_argument("out_dir", help="Directory for checkpoints and metrics.csv")
  train.add_argument("--train-config", type=str, default=None, help="Train config JSON")
  train.add_argument("--set", action="append", metavar="KEY=VALUE", help="Override one train config field (repeatable)")
  train.add_argument("--episodes", type=int, default=None, help="Override episodes_total")
  train.add_argument("--sweep", type=str, default=None, metavar="KEY=V1,V2", help="One training run per value, each in out_dir/KEY=VALUE")
  train.add_argument("--resume", action="store_true", help="Continue from out_dir/latest.safetensors")
  train.add_argument("--force", action="store_true", help="Resume even if the game config digest differs")
  train.add_argument("--prometheus-client-port", type=int, default=None, help="Prometheus client port")
  train.set_defaults(func=cmd_train)

  evaluate = subparsers.add_parser("eval", parents=parents, help="Evaluate a defender")
  evaluate.add_argument("config", help="Game config JSON")
  evaluate.add_argument("checkpoint", nargs="?", default=None, help="Checkpoint (required for the mcts defender)")
  evaluate.add_argument("--mode", choices=EVAL_MODES, default="enumerate")
  evaluate.add_argument("--defender", choices=("mcts", "chase", "stationary"), default="mcts")
  evaluate.add_argument("--train-config", type=str, default=None, help="Train config for search settings (default: next to the checkpoint)")
  evaluate.add_argument("--set", action="append", metavar="KEY=VALUE", help="Override one train config field (repeatable)")
  evaluate.add_argument("--episodes", type=int, default=1000, help="Episodes for --mode uniform")
  evaluate.add_argument("--episodes-per-path", type=int, default=20)
  evaluate.add_argument("--path-cap", type=int, default=200_000)
  evaluate.add_argument("--out", type=str, default=None, help="Report CSV path")
  evaluate.add_argument("--force", action="store_true", help="Load the checkpoint even if the game config digest differs")
  evaluate.set_defaults(func=cmd_eval)

  plot = subparsers.add_parser("plot", parents=parents, help="Plot learning curves from metrics.csv")
  plot.add_argument("metrics_csv")
  plot.add_argument("out_svg")
  plot.add_argument("--columns", type=str, default=None, help="Comma-separated columns (default: losses and win rate)")
  plot.add_argument("--smooth", type=int, default=1, help="Moving-average window")
  plot.add_argument("--title", type=str, default=None)
  plot.set_defaults(func=cmd_plot)
  return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
  try:
    args = build_parser().parse_args(argv)
    if not args.quiet and DEBUG >= 1: print_yellow_nsgzero()
    if args.command in ("gen-grid", "import-edges") and args.seed is None:
      args.seed = 0
    return args.func(args)
  except (UsageError, ConfigError, PlotError) as e:
    print(f"error: {e}", file=sys.stderr)
    return EXIT_USAGE
  except FileNotFoundError as e:
    print(f"error: {e}", file=sys.stderr)
    return EXIT_USAGE
  except Exception as e:
    print(f"error: {e.__class__.__name__}: {e}", file=sys.stderr)
    if DEBUG >= 1: traceback.print_exc()
    return EXIT_RUNTIME


def main() -> None:
  sys.exit(run())
