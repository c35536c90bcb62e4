"""``key = value`` run configuration.

Lines starting with ``#`` are comments, except ``#=`` lines, which carry
configuration. Output files embed their resolved configuration that way,
so an output file can be fed back through ``--config``: when any ``#=``
line is present, only those lines are read.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

from .errors import ConfigError, DomainError
from .params import V1, CenterParams, get_preset

MAX_N_MAX = 14

PARAM_KEYS = tuple(f.name for f in fields(CenterParams) if f.name != "label")
RUN_KEYS = (
    "center",
    "label",
    "n_max",
    "degeneracy_tol",
    "energy_cutoff",
    "temperatures",
    "offset_mhz",
    "strain",
    "data",
    "output",
)
KNOWN_KEYS = RUN_KEYS + PARAM_KEYS


@dataclass(frozen=True)
class RunConfig:
    params: CenterParams = V1
    center: str | None = "V1"
    n_max: int = 8
    degeneracy_tol: float = 1e-6
    energy_cutoff: float | None = None
    temperatures: tuple[float, float, float] = (1.0, 300.0, 1.0)
    offset_mhz: float = 0.0
    strain: tuple[float, float, float] = (0.0, 0.0, 0.0)
    data: str | None = None
    output: str | None = None

    def resolved_items(self) -> list[tuple[str, str]]:
        """Key/value pairs that reproduce this configuration (output path excluded)."""
        items = [("center", self.center or "none"), ("label", self.params.label)]
        for key in PARAM_KEYS:
            items.append((key, _fmt(getattr(self.params, key))))
        items += [
            ("n_max", str(self.n_max)),
            ("degeneracy_tol", _fmt(self.degeneracy_tol)),
            ("energy_cutoff", _fmt(self.energy_cutoff)),
            ("temperatures", ":".join(_fmt(v) for v in self.temperatures)),
            ("offset_mhz", _fmt(self.offset_mhz)),
            ("strain", _fmt(self.strain)),
            ("data", self.data or "none"),
        ]
        return items


def _fmt(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, tuple):
        return ",".join(_fmt(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def split_lines(text: str) -> list[tuple[int, str, str]]:
    """Extract ``(line_number, key, raw_value)`` triples from config text."""
    out = []
    lines = text.splitlines()
    embedded = any(line.lstrip().startswith("#=") for line in lines)
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if embedded and not line.startswith("#="):
            continue
        if line.startswith("#="):
            line = line[2:].strip()
        elif line.startswith("#") or not line:
            continue
        else:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        out.append((lineno, key.lower(), value))
    return out


def _float(value, key, lineno):
    try:
        x = float(value)
    except ValueError:
        raise ConfigError(f"line {lineno}: {key} expects a number, got {value!r}") from None
    if not math.isfinite(x):
        raise ConfigError(f"line {lineno}: {key} must be finite")
    return x


def _floats(value, key, lineno, n):
    parts = [p for p in value.replace(",", " ").split() if p]
    if len(parts) != n:
        raise ConfigError(f"line {lineno}: {key} expects {n} comma-separated numbers")
    return tuple(_float(p, key, lineno) for p in parts)


def build_config(entries) -> RunConfig:
    """Validate ``(line_number, key, value)`` entries; later entries win."""
    where = lambda n: n if n is not None else "<cli>"  # noqa: E731
    unknown = sorted({k for _, k, _ in entries if k not in KNOWN_KEYS})
    if unknown:
        raise ConfigError(f"unknown configuration keys: {', '.join(unknown)}")
    values = {}
    for lineno, key, raw in entries:
        values[key] = (where(lineno), raw)

    center = None
    base = V1
    if "center" in values:
        lineno, raw = values["center"]
        if raw.lower() not in ("none", ""):
            try:
                base = get_preset(raw)
            except DomainError as exc:
                raise ConfigError(f"line {lineno}: {exc}") from None
            center = base.label
        else:
            center = None
    else:
        center = "V1"

    changes = {}
    for key in PARAM_KEYS:
        if key not in values:
            continue
        lineno, raw = values[key]
        if raw.lower() == "none":
            changes[key] = None
        elif key == "strain_coeffs":
            changes[key] = _floats(raw, key, lineno, 3)
        else:
            changes[key] = _float(raw, key, lineno)
    if "label" in values:
        changes["label"] = values["label"][1]
    elif center is None:
        changes["label"] = "custom"
    try:
        params = replace(base, **changes)
    except DomainError as exc:
        raise ConfigError(f"invalid center parameters: {exc}") from None
    except TypeError as exc:
        raise ConfigError(str(exc)) from None

    kwargs = {}
    if "n_max" in values:
        lineno, raw = values["n_max"]
        try:
            n_max = int(raw)
        except ValueError:
            raise ConfigError(f"line {lineno}: n_max expects an integer, got {raw!r}") from None
        if not 0 <= n_max <= MAX_N_MAX:
            raise ConfigError(f"line {lineno}: n_max must lie in 0..{MAX_N_MAX}")
        kwargs["n_max"] = n_max
    if "degeneracy_tol" in values:
        lineno, raw = values["degeneracy_tol"]
        tol = _float(raw, "degeneracy_tol", lineno)
        if tol <= 0:
            raise ConfigError(f"line {lineno}: degeneracy_tol must be > 0")
        kwargs["degeneracy_tol"] = tol
    if "energy_cutoff" in values:
        lineno, raw = values["energy_cutoff"]
        kwargs["energy_cutoff"] = None if raw.lower() == "none" else _float(raw, "energy_cutoff", lineno)
    if "temperatures" in values:
        lineno, raw = values["temperatures"]
        kwargs["temperatures"] = parse_grid(raw, lineno)
    if "offset_mhz" in values:
        lineno, raw = values["offset_mhz"]
        kwargs["offset_mhz"] = _float(raw, "offset_mhz", lineno)
    if "strain" in values:
        lineno, raw = values["strain"]
        strain = _floats(raw, "strain", lineno, 3)
        if any(abs(e) > 0.01 for e in strain):
            raise ConfigError(f"line {lineno}: strain components must satisfy |eps| <= 0.01")
        kwargs["strain"] = strain
    for key in ("data", "output"):
        if key in values:
            raw = values[key][1]
            kwargs[key] = None if raw.lower() == "none" else raw
    return RunConfig(params=params, center=center, **kwargs)


def parse_grid(raw: str, lineno="<cli>") -> tuple[float, float, float]:
    parts = raw.split(":")
    if len(parts) != 3:
        raise ConfigError(f"line {lineno}: temperature grid must be START:STOP:STEP, got {raw!r}")
    start, stop, step = (_float(p, "temperatures", lineno) for p in parts)
    if start <= 0 or step <= 0 or stop < start:
        raise ConfigError(f"line {lineno}: temperature grid needs 0 < START <= STOP and STEP > 0")
    return start, stop, step


def parse_config(text: str) -> RunConfig:
    """Parse ``key = value`` text into a validated :class:`RunConfig`."""
    return build_config(split_lines(text))
