import csv
import os
from typing import Optional
from rich.console import Console
from rich.table import Table
from nsgzero.eval.evaluate import EvalReport

REPORT_COLUMNS = ["path_id", "path_nodes", "mean_reward", "n_episodes"]
SUMMARY_ROW_ID = "summary"


def format_path(path) -> str:
  return " ".join(str(v) for v in path) if path else ""


def write_report_csv(report: EvalReport, path: str) -> None:
  os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
  with open(path, "w", newline="") as f:
    writer = csv.writer(f, lineterminator="\n")
    writer.writerow(REPORT_COLUMNS)
    for row in report.rows:
      writer.writerow([row.path_id, format_path(row.path), repr(row.mean_reward), row.n_episodes])
    writer.writerow([SUMMARY_ROW_ID, format_path(report.path), repr(report.value), report.n_episodes])


def summary_line(report: EvalReport) -> str:
  line = f"{report.mode}: defender reward {report.value:.4f} ± {report.half_width:.4f}"
  if report.path is not None:
    line += f" (worst path {format_path(report.path)})"
  if report.note:
    line += f" [{report.note}]"
  return line


def print_report(report: EvalReport, console: Optional[Console] = None, max_rows: int = 10) -> None:
  console = console or Console()
  table = Table(title=f"Evaluation ({report.mode}, {len(report.rows)} rows)", border_style="cyan")
  table.add_column("path_id", justify="right")
  table.add_column("path_nodes")
  table.add_column("mean_reward", justify="right")
  table.add_column("n_episodes", justify="right")
  for row in sorted(report.rows, key=lambda r: (r.mean_reward, r.path_id))[:max_rows]:
    table.add_row(str(row.path_id), format_path(row.path), f"{row.mean_reward:.4f}", str(row.n_episodes))
  console.print(table)
  console.print(summary_line(report))
