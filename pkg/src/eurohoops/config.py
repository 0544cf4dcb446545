"""Shipped defaults table and grids."""
from __future__ import annotations

import copy
from functools import lru_cache
from importlib import resources

import yaml


@lru_cache(maxsize=1)
def _load():
    text = resources.files("eurohoops").joinpath("defaults.yaml").read_text(encoding="utf-8")
    return yaml.safe_load(text)


def default_params(algorithm: str) -> dict:
    return copy.deepcopy(_load()["defaults"][algorithm])


def default_grid(algorithm: str) -> dict:
    return copy.deepcopy(_load()["grids"].get(algorithm, {}))


def refine_rule(algorithm: str) -> dict | None:
    rule = _load().get("refine", {}).get(algorithm)
    return copy.deepcopy(rule) if rule else None
