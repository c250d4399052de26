"""Deterministic human-robot teaming engine.

Layouts are passed as text or as a path to a ``.layout`` file; ``None`` means
the built-in five-by-five sample kitchen.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from . import _core
from ._core import ParseError, ValidationError

__all__ = [
    "ParseError",
    "Session",
    "Trial",
    "ValidationError",
    "fluency",
    "plan",
    "recommend_mode",
    "render_critical",
    "replay",
    "run_trial",
    "sample_layout",
    "sweep",
]


def _layout_text(layout: Optional[str]) -> str:
    if layout is None:
        return ""
    if "\n" not in layout and os.path.isfile(layout):
        with open(layout, encoding="utf-8") as f:
            return f.read()
    return layout


def sample_layout() -> str:
    return _core.sample_layout_text()


@dataclass
class Trial:
    jsonl: str
    header: dict = field(init=False)
    events: list = field(init=False)
    stats: dict = field(init=False)

    def __post_init__(self) -> None:
        self.events = []
        for line in self.jsonl.splitlines():
            rec = json.loads(line)
            kind = rec.get("type")
            if kind == "header" and "kind" not in rec:
                self.header = rec["config"]
            elif kind == "summary" and "kind" not in rec:
                self.stats = rec["stats"]
            else:
                self.events.append(rec)

    @property
    def score(self) -> int:
        return self.stats["score"]

    def of_kind(self, kind: str) -> list:
        return [e for e in self.events if e["kind"] == kind]

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(self.jsonl)


def run_trial(
    layout: Optional[str] = None,
    mode: str = "IFA",
    policy: str = "compliant",
    seed: int = 0,
    script: Iterable[tuple[int, str]] = (),
    think_noise: float = 0.0,
    backend: str = "rule",
    fixture: str = "",
) -> Trial:
    """Simulate one trial. ``script`` holds (tick, message) chats for the requester."""
    return Trial(
        _core.run_trial(_layout_text(layout), mode, policy, seed, list(script), think_noise, backend, fixture)
    )


def replay(trial: Trial | str) -> dict:
    jsonl = trial.jsonl if isinstance(trial, Trial) else trial
    return json.loads(_core.replay(jsonl))


def fluency(layout: Optional[str] = None) -> dict:
    return json.loads(_core.fluency(_layout_text(layout)))


def render_critical(layout: Optional[str] = None) -> str:
    return _core.render_critical(_layout_text(layout))


def recommend_mode(task_complexity: int, human_capability: int, llm_capability: int) -> str:
    return _core.recommend_mode(task_complexity, human_capability, llm_capability)


def plan(
    layout: Optional[str], start: tuple[int, int], facing: str, goals: Sequence[tuple[int, int]]
) -> Optional[list[str]]:
    """Cheapest action sequence to face one of ``goals`` and interact, or None."""
    return _core.plan(_layout_text(layout), tuple(start), facing, [tuple(g) for g in goals])


def sweep(config_path: str) -> tuple[str, str, str]:
    """Run a sweep TOML; returns (rows_csv, cells_csv, table)."""
    with open(config_path, encoding="utf-8") as f:
        text = f.read()
    return _core.sweep(text, os.path.dirname(os.path.abspath(config_path)))


class Session:
    """One interactive session driven by wire-protocol frames, without a socket."""

    def __init__(self, session_id: str, layout: Optional[str] = None) -> None:
        self._s = _core.Session(session_id, _layout_text(layout))

    def send(self, message: dict) -> list[dict]:
        self._s.send(json.dumps(message))
        return self.drain()

    def tick(self, n: int = 1) -> list[dict]:
        out: list[dict] = []
        for _ in range(n):
            self._s.tick()
            out.extend(self.drain())
        return out

    def drain(self) -> list[dict]:
        return [json.loads(f) for f in self._s.drain()]

    def disconnect(self) -> None:
        self._s.disconnect()

    @property
    def finished(self) -> bool:
        return self._s.finished

    @property
    def phase(self) -> str:
        return self._s.phase

    def snapshot(self) -> dict:
        return json.loads(self._s.snapshot())

    def record(self) -> Trial:
        return Trial(self._s.record())
