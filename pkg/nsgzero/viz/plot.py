import csv
import math
from typing import Dict, List, Optional, Sequence
import matplotlib as mpl
mpl.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

DEFAULT_COLUMNS = ("prior_loss", "value_loss", "dynamics_loss", "win_rate_uniform")

plt.rcParams.update({
  "svg.hashsalt": "nsgzero",
  "svg.fonttype": "none",
  "axes.spines.top": False,
  "axes.spines.right": False,
  "axes.grid": True,
  "grid.alpha": 0.3,
  "font.size": 9,
})


class PlotError(ValueError):
  pass


def read_metrics(path: str) -> Dict[str, List[str]]:
  with open(path, newline="") as f:
    reader = csv.DictReader(f)
    if reader.fieldnames is None:
      raise PlotError(f"{path} is empty")
    columns: Dict[str, List[str]] = {name: [] for name in reader.fieldnames}
    for row in reader:
      for name in reader.fieldnames:
        columns[name].append(row[name] or "")
  if not columns.get("episode"):
    raise PlotError(f"{path} has no metric rows")
  return columns


def _floats(values: Sequence[str]) -> List[float]:
  return [float(v) if v != "" else math.nan for v in values]


def smooth(values: List[float], window: int) -> List[float]:
  if window <= 1:
    return values
  out = []
  for k in range(len(values)):
    recent = [v for v in values[max(0, k - window + 1):k + 1] if not math.isnan(v)]
    out.append(sum(recent)/len(recent) if recent else math.nan)
  return out


def plot_metrics(metrics_csv: str, out_svg: str, columns: Optional[Sequence[str]] = None, smooth_window: int = 1, title: Optional[str] = None) -> List[str]:
  """Learning curves of the chosen columns against episode, written as a standalone SVG. Returns the plotted columns."""
  data = read_metrics(metrics_csv)
  if columns is None:
    columns = [c for c in DEFAULT_COLUMNS if c in data and any(v != "" for v in data[c])]
  for column in columns:
    if column not in data:
      raise PlotError(f"column {column!r} not in {metrics_csv} (have {', '.join(data)})")
  episodes = _floats(data["episode"])

  fig, ax = plt.subplots(figsize=(6.4, 4.0))
  for column in columns:
    (line, ) = ax.plot(episodes, smooth(_floats(data[column]), smooth_window), label=column, linewidth=1.2)
    line.set_gid(f"series-{column}")
  ax.set_xlabel("episode")
  ax.set_title(title or metrics_csv)
  if columns:
    ax.legend(frameon=False)
  fig.savefig(out_svg, format="svg", bbox_inches="tight", metadata={"Date": None})
  plt.close(fig)
  return list(columns)
