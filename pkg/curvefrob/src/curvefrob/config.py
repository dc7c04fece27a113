"""
Runtime configuration. A ``.env`` file in the working directory or at the repo root
is loaded first (python-dotenv); values then come from the environment.

Precedence used by the CLI: command-line flag > problem file field > environment > default.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

_repo_root = Path(__file__).resolve().parent.parent.parent.parent
for _env_file in (Path.cwd() / ".env", _repo_root / ".env"):
    if _env_file.exists():
        try:
            from dotenv import load_dotenv
            load_dotenv(_env_file)
        except ImportError:
            pass

DEFAULT_SEED = 0
DEFAULT_T_SAMPLES = "1,2,-1"
DEFAULT_EXTRA_T_SAMPLES = 2
DEFAULT_PROBE_RETRIES = 5


def parse_rational_csv(text: str) -> list[Fraction]:
    """'1, 2, -1/3' -> [1, 2, -1/3]; empty items are ignored."""
    from curvefrob.polycore import to_rational

    return [to_rational(item) for item in text.split(",") if item.strip()]


@dataclass(frozen=True)
class Settings:
    seed: int
    t_samples: tuple[Fraction, ...]
    extra_t_samples: int
    probe_retries: int


def _int_env(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or not raw.strip():
        return default
    return int(raw)


def get_settings() -> Settings:
    """Read the CURVEFROB_* variables now (not at import), so tests can monkeypatch them."""
    return Settings(
        seed=_int_env("CURVEFROB_SEED", DEFAULT_SEED),
        t_samples=tuple(parse_rational_csv(os.environ.get("CURVEFROB_T_SAMPLES", DEFAULT_T_SAMPLES))),
        extra_t_samples=_int_env("CURVEFROB_EXTRA_T_SAMPLES", DEFAULT_EXTRA_T_SAMPLES),
        probe_retries=_int_env("CURVEFROB_PROBE_RETRIES", DEFAULT_PROBE_RETRIES),
    )
