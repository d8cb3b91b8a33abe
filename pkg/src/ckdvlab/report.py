"""Slope fitting, CSV emission and run manifests.

Output files are deterministic: full-precision repr for floats, no
timestamps, manifest keys sorted.  CSV files carry a '#'-prefixed manifest
preamble (config hash, tolerances, package version) above the RFC-4180
header row.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError

PACKAGE_VERSION = "0.1.0"


def fit_loglog(x, y) -> tuple[float, float]:
    """Least-squares slope and intercept of log y against log x.

    Refuses degenerate fits: a meaningful scaling estimate needs at least
    three points.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 3:
        raise ConfigError(f"log-log fit needs >= 3 points, got {x.size}")
    if np.any(x <= 0) or np.any(y <= 0):
        raise ValueError("log-log fit needs positive data")
    slope, intercept = np.polyfit(np.log(x), np.log(y), 1)
    return float(slope), float(intercept)


@dataclass
class ScalingRow:
    eps: float
    norm_kind: str
    value: float


@dataclass
class ScalingReport:
    """Per-eps norms plus fitted slopes for each norm kind."""

    rows: list[ScalingRow] = field(default_factory=list)
    slopes: dict[str, float] = field(default_factory=dict)

    def add(self, eps: float, norm_kind: str, value: float):
        self.rows.append(ScalingRow(eps=eps, norm_kind=norm_kind, value=value))

    def fit(self):
        kinds = sorted({r.norm_kind for r in self.rows})
        for kind in kinds:
            sel = sorted((r.eps, r.value) for r in self.rows if r.norm_kind == kind)
            eps = [e for e, _ in sel]
            val = [v for _, v in sel]
            slope, _ = fit_loglog(eps, val)
            self.slopes[kind] = slope
        return self.slopes


def _fmt(value) -> str:
    # np.float64 subclasses float: always strip to the builtin before repr
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (np.integer,)):
        return str(int(value))
    return str(value)


def config_hash(config: dict) -> str:
    """Stable hash over a flat {section.key: value} view of the config."""
    lines = [f"{k}={_fmt(v)}" for k, v in sorted(config.items())]
    return hashlib.sha256("\n".join(lines).encode()).hexdigest()[:16]


def manifest_lines(manifest: dict) -> list[str]:
    return [f"# {k}: {_fmt(v)}" for k, v in sorted(manifest.items())]


def write_csv(path, header: list[str], rows, manifest: dict):
    """Write a CSV with a manifest preamble; values in full precision."""
    path = Path(path)
    out = manifest_lines(manifest)
    out.append(",".join(header))
    for row in rows:
        out.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(out) + "\n")
    return path


def write_manifest(path, manifest: dict, files: list[str]):
    path = Path(path)
    lines = [f"{k}: {_fmt(v)}" for k, v in sorted(manifest.items())]
    lines.append("files:")
    lines.extend(f"  - {f}" for f in files)
    path.write_text("\n".join(lines) + "\n")
    return path
