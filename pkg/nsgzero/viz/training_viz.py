from collections import deque
from typing import Deque, Dict, Optional
from rich.console import Console, Group
from rich.text import Text
from rich.live import Live
from rich.table import Table
from rich.layout import Layout
from rich.panel import Panel
from nsgzero.helpers import nsgzero_text, pretty_print_duration
from nsgzero.train.trainer import METRICS_COLUMNS

RECENT_ROWS = 8


class TrainingViz:
  def __init__(self, total_episodes: int, run_name: str = "", console: Optional[Console] = None, start: bool = True):
    self.total_episodes = total_episodes
    self.run_name = run_name
    self.rows: Deque[Dict[str, str]] = deque(maxlen=RECENT_ROWS)
    self.console = console or Console()
    self.layout = Layout()
    self.layout.split(Layout(name="header", size=12), Layout(name="metrics"))
    self.header_panel = Panel(self._generate_header(), border_style="bright_yellow")
    self.metrics_panel = Panel(self._generate_metrics_table(), title="Metrics", border_style="cyan")
    self.layout["header"].update(self.header_panel)
    self.layout["metrics"].update(self.metrics_panel)
    self.live_panel = Live(self.layout, auto_refresh=False, console=self.console)
    if start:
      self.live_panel.start()

  def update(self, row: Dict[str, str]) -> None:
    self.rows.append(row)
    self.refresh()

  def refresh(self) -> None:
    self.header_panel.renderable = self._generate_header()
    self.metrics_panel.renderable = self._generate_metrics_table()
    self.live_panel.update(self.layout, refresh=True)

  def stop(self) -> None:
    self.live_panel.stop()

  @property
  def episode(self) -> int:
    return int(self.rows[-1]["episode"]) if self.rows else 0

  def _generate_header(self) -> Group:
    done = self.episode/self.total_episodes if self.total_episodes else 1.0
    width = 40
    bar = "█"*int(done*width) + "░"*(width - int(done*width))
    progress = Text(f"{bar} {self.episode}/{self.total_episodes} episodes", style="bright_green")
    lines = [Text("\n".join(line for line in nsgzero_text.splitlines() if line.strip()), style="bright_yellow"), progress]
    if self.run_name:
      lines.append(Text(f"run: {self.run_name}", style="white"))
    if self.rows and self.rows[-1].get("wall_seconds"):
      lines.append(Text(f"elapsed: {pretty_print_duration(float(self.rows[-1]['wall_seconds']))}", style="white"))
    return Group(*lines)

  def _generate_metrics_table(self) -> Table:
    table = Table(expand=True, box=None, padding=(0, 1))
    for column in METRICS_COLUMNS:
      table.add_column(column, justify="right")
    for row in self.rows:
      table.add_row(*(_short(row.get(column, "")) for column in METRICS_COLUMNS))
    return table


def _short(value: str) -> str:
  try:
    return f"{float(value):.4f}" if "." in value or "e" in value else value
  except ValueError:
    return value
