"""
Configuration files - parse, override and write simulation settings
"""
import configparser
import re
from pathlib import Path
from typing import Dict, Iterable, Optional, Tuple, Union

from pydantic import ValidationError

from core.exceptions import ConfigError
from models.schemas import SimulationSettings


# File section -> keys, in write order
SECTION_KEYS: Dict[str, Tuple[str, ...]] = {
    "beam": ("L", "L1", "B", "h1", "E_b", "rho_b"),
    "abh": ("h2", "m"),
    "vem": ("L2", "h3", "E_vs", "eta", "rho_v"),
    "force": ("L3", "F0"),
    "solver": ("n", "quad_order"),
    "analysis": ("x_lo", "x_hi", "nx", "periods", "nt_per_period", "zero_pad", "freq_hz", "near_field_decay"),
    "sweep": ("axis1", "axis2", "bands"),
}

# Sections whose keys must all be present
REQUIRED_SECTIONS = ("beam", "abh", "vem", "force")
BEAM_SECTIONS = REQUIRED_SECTIONS
TEXT_KEYS = {("sweep", "axis1"), ("sweep", "axis2"), ("sweep", "bands")}

_UNIT_SUFFIX = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?\s*[A-Za-z%]+$")

Sections = Dict[str, Dict[str, str]]


def _beam_key_section(key: str) -> str:
    for section in BEAM_SECTIONS:
        if key in SECTION_KEYS[section]:
            return section
    return "beam"


def _layout_key(beam: Dict[str, str]) -> str:
    """Key responsible for a violated station or thickness ordering"""
    v = {key: float(value) for key, value in beam.items()}
    if not v["L1"] < v["L2"] < v["L"]:
        return "vem.L2" if v["L1"] < v["L"] else "beam.L1"
    if not v["L3"] < v["L1"]:
        return "force.L3"
    return "abh.h2"


def parse_override(text: str) -> Tuple[str, str, str]:
    """Split ``section.key=value`` and check the key exists"""
    target, sep, value = text.partition("=")
    section, dot, key = target.strip().partition(".")
    if not sep or not dot:
        raise ConfigError(f"override '{text}' must look like section.key=value")
    if section not in SECTION_KEYS or key not in SECTION_KEYS[section]:
        raise ConfigError("override references an unknown key", key=f"{section}.{key}")
    return section, key, value.strip()


def _apply(sections: Sections, overrides: Iterable[str]) -> Sections:
    merged = {name: dict(values) for name, values in sections.items()}
    for text in overrides:
        section, key, value = parse_override(text)
        merged.setdefault(section, {})[key] = value
    return merged


def _check_value(section: str, key: str, value: str) -> str:
    value = value.strip()
    if (section, key) in TEXT_KEYS:
        return value
    if _UNIT_SUFFIX.match(value):
        raise ConfigError(f"value '{value}' carries a unit suffix; give plain SI numbers", key=f"{section}.{key}")
    return value


def settings_from_sections(sections: Sections) -> SimulationSettings:
    """
    Validate raw section/key strings into SimulationSettings

    Args:
        sections: section -> key -> raw string value

    Returns:
        Validated SimulationSettings
    """
    for section, values in sections.items():
        if section not in SECTION_KEYS:
            raise ConfigError("unknown section", key=section)
        for key in values:
            if key not in SECTION_KEYS[section]:
                raise ConfigError("unknown key", key=f"{section}.{key}")

    for section in REQUIRED_SECTIONS:
        present = sections.get(section, {})
        for key in SECTION_KEYS[section]:
            if key not in present:
                raise ConfigError("missing key", key=f"{section}.{key}")

    data: Dict[str, Dict[str, str]] = {"beam": {}, "solver": {}, "analysis": {}, "sweep": {}}
    for section, values in sections.items():
        target = "beam" if section in BEAM_SECTIONS else section
        for key, value in values.items():
            data[target][key] = _check_value(section, key, value)

    try:
        return SimulationSettings(**data)
    except ValidationError as e:
        error = e.errors()[0]
        loc = [str(part) for part in error["loc"]]
        if loc and loc[0] == "beam" and len(loc) > 1:
            key = f"{_beam_key_section(loc[1])}.{loc[1]}"
        elif loc == ["beam"]:
            key = _layout_key(data["beam"])
        else:
            key = ".".join(loc) or None
        raise ConfigError(error["msg"], key=key) from e


def settings_to_sections(settings: SimulationSettings) -> Sections:
    """Render settings as section -> key -> string, repr-exact for floats"""
    groups = {
        "beam": settings.beam,
        "solver": settings.solver,
        "analysis": settings.analysis,
        "sweep": settings.sweep,
    }
    sections: Sections = {}
    for section, keys in SECTION_KEYS.items():
        source = groups["beam" if section in BEAM_SECTIONS else section]
        sections[section] = {key: _render(getattr(source, key)) for key in keys}
    return sections


def _render(value: Union[float, int, str]) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def read_sections(path: Union[str, Path]) -> Sections:
    """Read an INI-style file into raw sections, preserving key case"""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"configuration file not found: {path}")
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
        parser.read_string(path.read_text(), source=str(path))
    except configparser.Error as e:
        raise ConfigError(f"cannot parse {path}: {e}") from e
    return {section: dict(parser.items(section)) for section in parser.sections()}


def parse_config(
    path: Union[str, Path],
    overrides: Optional[Iterable[str]] = None
) -> SimulationSettings:
    """
    Parse and validate a configuration file

    Args:
        path: Configuration file
        overrides: ``section.key=value`` strings applied before validation

    Returns:
        SimulationSettings
    """
    sections = read_sections(path)
    return settings_from_sections(_apply(sections, overrides or ()))


def apply_overrides(settings: SimulationSettings, overrides: Iterable[str]) -> SimulationSettings:
    """Settings with ``section.key=value`` overrides applied and re-validated"""
    return settings_from_sections(_apply(settings_to_sections(settings), overrides))


def write_config(settings: SimulationSettings, path: Optional[Union[str, Path]] = None) -> str:
    """
    Render settings in configuration-file syntax

    Args:
        settings: Settings to write
        path: Optional destination file

    Returns:
        The rendered text
    """
    lines = []
    for section, values in settings_to_sections(settings).items():
        lines.append(f"[{section}]")
        for key, value in values.items():
            lines.append(f"{key} = {value}")
        lines.append("")
    text = "\n".join(lines)
    if path is not None:
        Path(path).write_text(text)
    return text
