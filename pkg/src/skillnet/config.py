"""Pipeline configuration in a flat ``key = value`` text format."""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path

from .centrality import DEFAULT_MAX_ITERATIONS, DEFAULT_TOLERANCE, MEASURES
from .community import DEFAULT_SEED
from .errors import ConfigError

_PATH_KEYS = ("lexicon", "corpus", "workdir", "labels")
_BOOL = {"true": True, "yes": True, "1": True, "false": False, "no": False, "0": False}


@dataclass(frozen=True)
class PipelineConfig:
    workdir: Path
    lexicon: Path | None = None
    corpus: Path | None = None
    labels: Path | None = None
    seed: int = DEFAULT_SEED
    measures: tuple[str, ...] = MEASURES
    top: int = 15
    weighted_paths: bool = False
    normalized: bool = False
    tolerance: float = DEFAULT_TOLERANCE
    max_iterations: int = DEFAULT_MAX_ITERATIONS

    def __post_init__(self):
        if self.top < 1:
            raise ConfigError("top must be at least 1")
        unknown = [m for m in self.measures if m not in MEASURES]
        if unknown or not self.measures:
            raise ConfigError(
                f"measures must be a non-empty subset of {','.join(MEASURES)}, got {','.join(self.measures)}"
            )
        if self.tolerance <= 0 or self.max_iterations < 1:
            raise ConfigError("tolerance must be positive and max_iterations at least 1")

    def dumps(self) -> str:
        lines = []
        for f in fields(self):
            value = getattr(self, f.name)
            if value is None:
                value = ""
            elif isinstance(value, tuple):
                value = ",".join(value)
            elif isinstance(value, bool):
                value = "true" if value else "false"
            elif isinstance(value, float):
                value = repr(value)
            lines.append(f"{f.name} = {value}")
        return "\n".join(lines) + "\n"

    def updated(self, **overrides) -> "PipelineConfig":
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


def _coerce(key: str, raw: str, base: Path):
    types = {f.name: f.type for f in fields(PipelineConfig)}
    if key not in types:
        raise ConfigError(f"unknown config key {key!r}")
    raw = raw.strip()
    if key in _PATH_KEYS:
        if not raw:
            return None
        p = Path(raw).expanduser()
        return p if p.is_absolute() else (base / p)
    try:
        if key in ("seed", "top", "max_iterations"):
            return int(raw)
        if key == "tolerance":
            return float(raw)
        if key in ("weighted_paths", "normalized"):
            return _BOOL[raw.lower()]
        if key == "measures":
            return tuple(m.strip() for m in raw.split(",") if m.strip())
    except (ValueError, KeyError) as exc:
        raise ConfigError(f"bad value for {key}: {raw!r}") from exc
    raise ConfigError(f"unhandled config key {key!r}")


def parse_config(text: str, base: Path) -> dict:
    """Parse config text into a dict of typed values; relative paths join ``base``."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected key = value")
        key, raw = line.split("=", 1)
        values[key.strip()] = _coerce(key.strip(), raw, base)
    return values


def read_config(path: str | Path) -> dict:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text, path.parent.resolve())


def make_config(*layers: dict) -> PipelineConfig:
    """Merge dict layers left to right; ``None`` values never override."""
    merged: dict = {}
    for layer in layers:
        merged.update({k: v for k, v in layer.items() if v is not None})
    if "workdir" not in merged:
        raise ConfigError("no workdir given")
    for key in _PATH_KEYS:
        if merged.get(key) is not None:
            merged[key] = Path(merged[key]).resolve()
    return PipelineConfig(**merged)
