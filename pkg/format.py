#!/usr/bin/env python
import os
import subprocess
import sys

SKIP_DIRS = {"examples", ".venv", "build", ".git"}


def python_files(target):
  if os.path.isfile(target):
    return [target]
  found = []
  for root, dirs, files in os.walk(target):
    dirs[:] = [d for d in dirs if d not in SKIP_DIRS]
    found.extend(os.path.join(root, f) for f in files if f.endswith(".py"))
  return sorted(found)


def main():
  targets = sys.argv[1:] or ["nsgzero", "setup.py", "main.py"]
  failed = 0
  for path in (f for t in targets for f in python_files(t)):
    result = subprocess.run(["yapf", "-i", "--style", "pyproject.toml", path], capture_output=True, text=True)
    if result.returncode != 0:
      failed += 1
      print(f"Error formatting {path}: {result.stderr.strip()}")
  print("Formatting completed." if not failed else f"Formatting completed with {failed} errors.")
  sys.exit(1 if failed else 0)


if __name__ == "__main__":
  main()
