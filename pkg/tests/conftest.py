"""Shared fixtures: the two bundled systems and a deterministic state sweep."""

from __future__ import annotations

import json
import pathlib

import pytest

from flowcurv import State, make_system

REPO = pathlib.Path(__file__).resolve().parents[1]
CONFIGS = REPO / "configs"


def halton(i: int, base: int) -> float:
    f, r = 1.0, 0.0
    while i > 0:
        f /= base
        r += f * (i % base)
        i //= base
    return r


def sweep_states(n: int, lo: float = -3.0, hi: float = 3.0) -> list[State]:
    """Deterministic low-discrepancy states in [lo, hi]^2 (no RNG anywhere)."""
    span = hi - lo
    return [
        State(0.0, lo + span * halton(i, 2), lo + span * halton(i, 3))
        for i in range(1, n + 1)
    ]


def load_config(name: str) -> dict:
    with open(CONFIGS / f"{name}.json") as fh:
        return json.load(fh)


def system_from_config(name: str, eps: float | None = None):
    cfg = load_config(name)
    return make_system(cfg["F"], cfg["g"], eps if eps is not None else cfg["eps"])


@pytest.fixture(scope="session")
def vdp():
    """Van der Pol: F = x^3/3 - x, g = x, eps = 0.05."""
    return system_from_config("vdp")


@pytest.fixture(scope="session")
def llibre_mereu():
    """Quintic example: F = x^5/5 + x^3/3 - x, g = x^3/3 + x, eps = 0.05."""
    return system_from_config("llibre_mereu")


@pytest.fixture(scope="session")
def both_systems(vdp, llibre_mereu):
    return [vdp, llibre_mereu]
