"""
Text formats read and written by the command line.

* Data files: one real sample per line, blank lines and lines starting
  with ``#`` ignored.
* Monte Carlo configs: ``key = value`` lines, ``#`` comments.
"""
import cmath
import hashlib
import logging
from pathlib import Path
from typing import Dict, Iterable, List, Optional, TextIO, Tuple, Union

from pydantic import ValidationError

from src.datagen import MonteCarloConfig
from src.errors import InvalidInputError
from src.signalmodel import Signal

# Configure module logger
logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

_CONFIG_KEYS = {
    "N": "N",
    "sigmas": "sigma_levels",
    "trials": "trials",
    "seed": "base_seed",
    "poles": "poles",
    "fixed": "fixed_poles",
    "order": "order",
    "sgor": "include_sgor",
    "C": "C",
    "x0": "x0",
    "transform": "transform",
    "max_degree": "max_degree",
    "timing": "record_timing",
}


def parse_samples(text: str, source: str = "<data>") -> Signal:
    values = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            values.append(float(line))
        except ValueError:
            raise InvalidInputError(f"{source}:{lineno}: not a real number: {line!r}")
    if not values:
        raise InvalidInputError(f"{source}: no samples found")
    return Signal(values)


def read_data(path: PathLike) -> Tuple[Signal, str]:
    """
    Read a data file.

    Returns:
        The samples and the sha256 digest of the raw file bytes
    """
    try:
        raw = Path(path).read_bytes()
    except OSError as e:
        raise InvalidInputError(f"Cannot read data file {path}: {e}")
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError:
        raise InvalidInputError(f"Data file {path} is not UTF-8 text")
    return parse_samples(text, str(path)), hashlib.sha256(raw).hexdigest()


def format_samples(signal: Signal, header: Optional[Iterable[str]] = None) -> str:
    """One sample per line in shortest round-trip form, optional ``#`` header."""
    lines = [f"# {line}" for line in header or []]
    lines.extend(repr(float(v)) for v in signal.values)
    return "\n".join(lines) + "\n"


def write_text(text: str, out: Optional[PathLike], stream: TextIO) -> None:
    if out is None:
        stream.write(text)
        return
    try:
        Path(out).write_text(text, encoding="utf-8")
    except OSError as e:
        raise InvalidInputError(f"Cannot write {out}: {e}")


def parse_pole(text: str) -> complex:
    """
    Parse ``re[,im]``, a Python complex literal (``0.5+0.2j``) or polar
    ``r@theta``.
    """
    text = text.strip().replace(" ", "")
    try:
        if "@" in text:
            radius, angle = text.split("@", 1)
            return cmath.rect(float(radius), float(angle))
        if "," in text:
            re, im = text.split(",", 1)
            return complex(float(re), float(im))
        return complex(text)
    except ValueError:
        raise InvalidInputError(f"Malformed pole {text!r}")


def _floats(value: str, key: str) -> List[float]:
    try:
        return [float(item) for item in value.split(",") if item.strip()]
    except ValueError:
        raise InvalidInputError(f"Config key {key!r}: expected comma separated reals, got {value!r}")


def _poles(value: str) -> List[Tuple[float, float]]:
    poles = [parse_pole(item) for item in value.split(";") if item.strip()]
    return [(p.real, p.imag) for p in poles]


def _bool(value: str, key: str) -> bool:
    lowered = value.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise InvalidInputError(f"Config key {key!r}: expected a boolean, got {value!r}")


def parse_config(text: str, source: str = "<config>") -> MonteCarloConfig:
    """
    Parse a Monte Carlo config.

    Keys: ``N``, ``sigmas``, ``trials``, ``seed``, ``poles``, ``fixed``,
    ``order``, ``sgor``, ``C``, ``x0``, ``transform``, ``max_degree``,
    ``timing``. Pole lists are separated by ``;`` and every pole uses the
    ``parse_pole`` syntax; transform rows are separated by ``;``.
    """
    fields: Dict[str, object] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise InvalidInputError(f"{source}:{lineno}: expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _CONFIG_KEYS:
            raise InvalidInputError(f"{source}:{lineno}: unknown key {key!r}")

        if key in ("sigmas", "C", "x0"):
            parsed: object = _floats(value, key)
        elif key in ("poles", "fixed"):
            parsed = _poles(value)
        elif key == "transform":
            parsed = [_floats(row, key) for row in value.split(";") if row.strip()]
        elif key in ("sgor", "timing"):
            parsed = _bool(value, key)
        else:
            try:
                parsed = int(value)
            except ValueError:
                raise InvalidInputError(f"{source}:{lineno}: {key!r} must be an integer, got {value!r}")
        fields[_CONFIG_KEYS[key]] = parsed

    try:
        return MonteCarloConfig(**fields)
    except (ValidationError, InvalidInputError) as e:
        raise InvalidInputError(f"{source}: invalid Monte Carlo config: {e}")


def read_config(path: PathLike) -> MonteCarloConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise InvalidInputError(f"Cannot read config file {path}: {e}")
    return parse_config(text, str(path))
