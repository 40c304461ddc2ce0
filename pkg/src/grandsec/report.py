"""Config files, CSV tables and run manifests.

Config files are flat ``key = value`` text with ``#`` comments. A run
manifest uses the same format (resolved config plus metadata keys that the
parser skips), so ``simulate --config run.manifest`` reproduces a run.
"""

from __future__ import annotations

import csv
import io
import math
import os
import tempfile
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path

from . import __version__
from .sim import ABANDONMENT_NOTE, SweepConfig

__all__ = [
    "ConfigError",
    "parse_config_text",
    "load_config",
    "sweep_config_from_mapping",
    "format_value",
    "write_csv",
    "write_manifest",
    "sweep_rows",
    "SWEEP_COLUMNS",
    "bundled_configs",
]

METADATA_KEYS = {"tool_version", "timestamp", "abandonment_semantics", "source"}

SWEEP_COLUMNS = [
    "p", "neglog10_p", "a", "max_queries", "trials", "successes", "wrong", "abandoned",
    "bler", "bler_se", "success_prob", "success_prob_se", "cond_success_prob",
    "cond_success_prob_se", "frac_decoded", "frac_decoded_se", "mean_queries",
    "mean_queries_per_success", "failure",
]


class ConfigError(ValueError):
    pass


def parse_config_text(text: str, source: str = "<config>") -> dict:
    """Parse ``key = value`` lines; returns ``{key: (value, line_number)}``."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError(f"{source}:{lineno}: missing key")
        out[key] = (value, lineno)
    return out


def bundled_configs() -> dict:
    root = resources.files("grandsec") / "configs"
    return {p.name.rsplit(".", 1)[0]: p for p in root.iterdir() if p.name.endswith(".cfg")}


def load_config(path_or_name: str) -> tuple:
    """Read a config file, or a bundled config by name. Returns ``(entries, source)``."""
    path = Path(path_or_name)
    if path.is_file():
        return parse_config_text(path.read_text(), str(path)), str(path)
    bundled = bundled_configs()
    if path_or_name in bundled:
        return parse_config_text(bundled[path_or_name].read_text(), path_or_name), path_or_name
    raise ConfigError(f"config {path_or_name!r} is neither a readable file nor a bundled config "
                      f"({', '.join(sorted(bundled))})")


def _field(entries, key, convert, source, default=None, required=False):
    if key not in entries:
        if required:
            raise ConfigError(f"{source}: missing required field '{key}'")
        return default
    value, lineno = entries[key]
    try:
        return convert(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{source}:{lineno}: bad value for '{key}': {value!r} ({exc})") from None


def _floats(value):
    return tuple(float(v) for v in value.replace(",", " ").split())


def _exponents(value):
    out = []
    for tok in value.replace(",", " ").split():
        out.append(None if tok.lower() in ("unbounded", "inf", "none") else int(tok))
    if not out:
        raise ValueError("empty list")
    return tuple(out)


def _matrix(value):
    rows = tuple(_floats(r) for r in value.split(";") if r.strip())
    if len(rows) != 2 or any(len(r) != 2 for r in rows):
        raise ValueError("expected '<t00> <t01>; <t10> <t11>'")
    return rows


KNOWN_KEYS = {
    "name", "n", "k", "p_grid", "neglog10_p_grid", "abandonment_exponents", "trials_per_point",
    "master_seed", "code_seed", "noise_kind", "markov_t", "markov_pi0", "target",
} | METADATA_KEYS


def sweep_config_from_mapping(entries: dict, source: str, overrides: dict | None = None) -> SweepConfig:
    unknown = sorted(set(entries) - KNOWN_KEYS)
    if unknown:
        key = unknown[0]
        raise ConfigError(f"{source}:{entries[key][1]}: unknown field '{key}'")
    n = _field(entries, "n", int, source, required=True)
    k = _field(entries, "k", int, source, required=True)
    p_grid = _field(entries, "p_grid", _floats, source)
    if p_grid is None:
        neg = _field(entries, "neglog10_p_grid", _floats, source)
        p_grid = tuple(10.0 ** -v for v in neg) if neg else ()
    kwargs = dict(
        n=n,
        k=k,
        p_grid=p_grid,
        abandonment_exponents=_field(entries, "abandonment_exponents", _exponents, source, (None,)),
        trials_per_point=_field(entries, "trials_per_point", int, source, 1000),
        master_seed=_field(entries, "master_seed", int, source, 1),
        code_seed=_field(entries, "code_seed", int, source, 1),
        noise_kind=_field(entries, "noise_kind", str.lower, source, "bsc"),
        markov_t=_field(entries, "markov_t", _matrix, source),
        markov_pi0=_field(entries, "markov_pi0", _floats, source, (1.0, 0.0)),
        name=_field(entries, "name", str, source, "sweep"),
    )
    for key, value in (overrides or {}).items():
        if value is not None:
            kwargs[key] = value
    try:
        return SweepConfig(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"{source}: {exc}") from None


def format_value(value) -> str:
    """Render a CSV field: 9 significant digits, empty for missing."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return ""
        return f"{value:.9g}"
    return str(value)


def _atomic_write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path, columns, rows) -> Path:
    """Write ``rows`` (dicts) with a single header row, atomically."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row.get(c)) for c in columns])
    path = Path(path)
    _atomic_write(path, buf.getvalue())
    return path


def _config_lines(config: SweepConfig) -> list:
    exps = ", ".join("unbounded" if a is None else str(a) for a in config.abandonment_exponents)
    lines = [
        f"name = {config.name}",
        f"n = {config.n}",
        f"k = {config.k}",
        f"noise_kind = {config.noise_kind}",
    ]
    if config.noise_kind == "bsc":
        lines.append("p_grid = " + ", ".join(repr(float(p)) for p in config.p_grid))
    else:
        lines.append("markov_t = " + "; ".join(" ".join(repr(v) for v in row) for row in config.markov_t))
        lines.append("markov_pi0 = " + " ".join(repr(v) for v in config.markov_pi0))
    lines += [
        f"abandonment_exponents = {exps}",
        f"trials_per_point = {config.trials_per_point}",
        f"master_seed = {config.master_seed}",
        f"code_seed = {config.code_seed}",
    ]
    return lines


def write_manifest(path, config_lines, source: str = "") -> Path:
    """Write a manifest; ``config_lines`` is a SweepConfig or a list of ``key = value`` lines."""
    if isinstance(config_lines, SweepConfig):
        config_lines = _config_lines(config_lines)
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    head = [
        "# run manifest: rerun with --config <this file>",
        f"tool_version = {__version__}",
        f"timestamp = {stamp}",
        f"abandonment_semantics = {ABANDONMENT_NOTE}",
        f"source = {source}",
    ]
    path = Path(path)
    _atomic_write(path, "\n".join(head + list(config_lines)) + "\n")
    return path


def sweep_rows(rows) -> list:
    out = []
    for r in rows:
        out.append({
            "p": r.p,
            "neglog10_p": -math.log10(r.p),
            "a": "unbounded" if r.a is None else r.a,
            "max_queries": r.max_queries,
            "trials": r.trials,
            "successes": r.successes,
            "wrong": r.wrong,
            "abandoned": r.abandoned,
            "bler": r.bler,
            "bler_se": r.bler_se,
            "success_prob": r.success_prob,
            "success_prob_se": r.success_prob_se,
            "cond_success_prob": r.cond_success_prob,
            "cond_success_prob_se": r.cond_success_prob_se,
            "frac_decoded": r.frac_decoded,
            "frac_decoded_se": r.frac_decoded_se,
            "mean_queries": r.mean_queries,
            "mean_queries_per_success": r.mean_queries_per_success,
            "failure": r.failure,
        })
    return out
