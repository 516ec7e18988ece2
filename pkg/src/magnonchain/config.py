"""Key=value run configuration shared by the CLI and scripted runs.

A config document is plain text, one ``key = value`` per line, ``#`` starts
a comment.  Unknown keys are rejected rather than ignored so typos cannot
silently fall back to defaults.  Angles accept simple pi expressions like
``pi/6`` or ``2pi/3``.
"""

import re
from dataclasses import dataclass

from .errors import ValidationError
from .model import ModelParams

__all__ = [
    "COMMANDS",
    "RunConfig",
    "parse_angle",
    "parse_config",
    "build_run",
]

COMMANDS = ("spectrum", "chern", "table1", "butterfly", "edges", "effective",
            "deform", "dsweep")

# key -> (type tag, default); required model keys carry default None
_KEYS = {
    "Delta": ("float", None),
    "lambda": ("float", None),
    "beta_p": ("int", None),
    "beta_q": ("int", None),
    "L": ("int", None),
    "J": ("float", 1.0),
    "delta": ("angle", 0.0),
    "B0": ("float", 0.0),
    "N": ("int", 2),
    "bc": ("str", None),          # resolved per command, see build_run
    "command": ("str", None),
    "output_dir": ("str", "."),
    "N_delta": ("int", 30),
    "n_eta": ("int", 21),
    "max_q": ("int", 12),
    "edge_window": ("int", 5),
    "threshold": ("float", 0.9),
    "gap_floor": ("float", 1.0),
    "long_run": ("bool", False),
}

_REQUIRED = ("Delta", "lambda", "beta_p", "beta_q", "L")

_PI_RE = re.compile(r"^\s*(-?)\s*(\d+\.?\d*)?\s*\*?\s*pi\s*(?:/\s*(\d+\.?\d*))?\s*$")


def parse_angle(text):
    """Parse '0.5', 'pi', '-pi/4' or '2pi/3' into a float (radians)."""
    import math
    m = _PI_RE.match(text)
    if m:
        sign = -1.0 if m.group(1) == "-" else 1.0
        num = float(m.group(2)) if m.group(2) else 1.0
        den = float(m.group(3)) if m.group(3) else 1.0
        if den == 0:
            raise ValidationError(f"zero denominator in angle {text!r}")
        return sign * num * math.pi / den
    try:
        return float(text)
    except ValueError:
        raise ValidationError(f"cannot parse angle {text!r}")


def _parse_value(key, raw, where):
    kind = _KEYS[key][0]
    raw = raw.strip()
    try:
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
        if kind == "angle":
            return parse_angle(raw)
        if kind == "bool":
            low = raw.lower()
            if low in ("true", "yes", "1", "on"):
                return True
            if low in ("false", "no", "0", "off"):
                return False
            raise ValueError(raw)
        return raw
    except ValueError:
        raise ValidationError(f"{where}: cannot parse {key} = {raw!r} as {kind}")


def parse_config(text, source="<config>"):
    """Parse a config document into a {key: value} mapping (provided keys only)."""
    mapping = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"{source}:{lineno}: expected key = value, got {line!r}")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in _KEYS:
            raise ValidationError(f"{source}:{lineno}: unknown key {key!r}")
        if key in mapping:
            raise ValidationError(f"{source}:{lineno}: duplicate key {key!r}")
        mapping[key] = _parse_value(key, raw, f"{source}:{lineno}")
    return mapping


@dataclass
class RunConfig:
    params: ModelParams
    command: str
    n_delta: int
    n_eta: int
    max_q: int
    edge_window: int
    threshold: float
    gap_floor: float
    long_run: bool
    output_dir: str


def build_run(mapping, command=None):
    """Merge a parsed mapping (file plus overrides) into a RunConfig.

    ``command`` (from the command line) wins over a ``command`` config key.
    Boundary conditions default to periodic except for the butterfly, whose
    reference output is the open-chain one.
    """
    unknown = set(mapping) - set(_KEYS)
    if unknown:
        raise ValidationError(f"unknown keys: {sorted(unknown)}")
    command = command or mapping.get("command")
    if command is None:
        raise ValidationError(f"no command given; choose one of {', '.join(COMMANDS)}")
    if command not in COMMANDS:
        raise ValidationError(f"unknown command {command!r}; choose one of {', '.join(COMMANDS)}")
    missing = [k for k in _REQUIRED if k not in mapping]
    if missing:
        raise ValidationError(f"missing required keys: {', '.join(missing)}")

    def get(key):
        return mapping.get(key, _KEYS[key][1])

    bc = get("bc")
    if bc is None:
        bc = "open" if command == "butterfly" else "periodic"
    params = ModelParams(Delta=float(get("Delta")), lam=float(get("lambda")),
                         beta_p=get("beta_p"), beta_q=get("beta_q"),
                         L=get("L"), J=float(get("J")), delta=float(get("delta")),
                         B0=float(get("B0")), N=get("N"), bc=bc)
    return RunConfig(params=params, command=command,
                     n_delta=get("N_delta"), n_eta=get("n_eta"),
                     max_q=get("max_q"), edge_window=get("edge_window"),
                     threshold=float(get("threshold")),
                     gap_floor=float(get("gap_floor")),
                     long_run=bool(get("long_run")),
                     output_dir=str(get("output_dir")))
