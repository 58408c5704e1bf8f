"""Bundled example programs and fact scenarios."""

from __future__ import annotations

from importlib import resources
from typing import Optional

from ..interview import InstanceName, InterviewConfig

RPS_CONFIG = {"instances": {"Game": {"name": "rps", "display": "RPS"}}}

_FIXTURES = {
    "rps": ("rps.l4", RPS_CONFIG),
    "rps-standalone": ("rps_standalone.l4", None),
}


def _read(name: str) -> str:
    return resources.files(__package__).joinpath(name).read_text(encoding="utf-8")


def load(ref: str) -> tuple[str, str, Optional[dict]]:
    """Resolve a program ref to (source text, source name, default config)."""
    filename, config = _FIXTURES[ref]
    return _read(filename), filename, config


def rps_source() -> str:
    return _read("rps.l4")


def rps_standalone_source() -> str:
    return _read("rps_standalone.l4")


def rps_config() -> InterviewConfig:
    return InterviewConfig(instances={"Game": InstanceName("rps", "RPS")})


def scenario_paper_rock() -> str:
    return _read("scenario_paper_rock.json")


def base_facts() -> str:
    return _read("base_facts.json")
