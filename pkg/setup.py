from setuptools import find_packages, setup

# Base requirements for all platforms
install_requires = [
  "matplotlib==3.9.1",
  "numpy==2.0.0",
  "prometheus-client==0.20.0",
  "rich==13.7.1",
  "safetensors==0.4.3",
  "tqdm==4.66.4",
]

extras_require = {
  "linting": [
    "pylint==3.2.6",
    "ruff==0.5.5",
    "mypy==1.11.0",
    "yapf==0.40.2",
  ],
}

setup(
  name="nsgzero",
  version="0.0.1",
  packages=find_packages(exclude=["examples", "examples.*"]),
  install_requires=install_requires,
  extras_require=extras_require,
  entry_points={"console_scripts": ["nsgzero=nsgzero.cli:main"]},
)
