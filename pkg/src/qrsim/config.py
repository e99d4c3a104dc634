"""TOML run configuration: parsing, defaults, and command-line overrides.

One config file describes one figure-class run.  Sections: ``[system]``
(device parameters; missing keys fall back to the standard simulation values
with a logged notice), ``[calibration]``, ``[sweep]`` with nested ``axis1`` /
``axis2`` tables, ``[coupling]`` (multiplier list for coupling studies), and
``[output]``.  Unknown keys anywhere are rejected.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, fields

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import model
from .errors import ConfigError
from .observables import ObservableKind
from .sweep import AxisSpec, SweepSpec

log = logging.getLogger(__name__)

_SYSTEM_KEYS = {f.name for f in fields(model.SystemParams)}
_CALIBRATION_KEYS = {f.name for f in fields(model.FluxCalibration)}
_SWEEP_KEYS = {
    "mode", "observables", "axis1", "axis2",
    "n_transient_periods", "n_average_periods", "dt_max", "transmission_scale",
}
_AXIS_KEYS = {"parameter", "start", "stop", "count", "scale"}
_OUTPUT_KEYS = {"directory", "stem", "formats"}
_COUPLING_KEYS = {"multipliers"}
_SECTIONS = {"system", "calibration", "sweep", "output", "coupling"}


@dataclass
class RunConfig:
    system: model.SystemParams
    calibration: model.FluxCalibration
    sweep: dict | None = None
    coupling_multipliers: list[float] | None = None
    output_dir: str = "out"
    output_stem: str = "run"
    formats: list[str] = field(default_factory=lambda: ["csv"])

    def sweep_spec(self) -> SweepSpec:
        if self.sweep is None:
            raise ConfigError("config has no [sweep] section")
        sw = dict(self.sweep)
        axis1 = _axis_from(sw.pop("axis1", None), "axis1", required=True)
        axis2 = _axis_from(sw.pop("axis2", None), "axis2", required=False)
        obs_names = sw.pop("observables", ["transmission"])
        try:
            obs = tuple(ObservableKind(name) for name in obs_names)
        except ValueError as exc:
            raise ConfigError(f"unknown observable in [sweep]: {exc}") from None
        return SweepSpec(
            base=self.system,
            axis1=axis1,
            axis2=axis2,
            observables=obs,
            calibration=self.calibration,
            **sw,
        )


def _reject_unknown(table: dict, allowed: set[str], where: str):
    unknown = set(table) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) in [{where}]: {', '.join(sorted(unknown))}")


def _axis_from(table, name: str, required: bool) -> AxisSpec | None:
    if table is None:
        if required:
            raise ConfigError(f"[sweep] is missing the {name} table")
        return None
    if not isinstance(table, dict):
        raise ConfigError(f"[sweep.{name}] must be a table")
    _reject_unknown(table, _AXIS_KEYS, f"sweep.{name}")
    try:
        return AxisSpec(**table)
    except TypeError as exc:
        raise ConfigError(f"[sweep.{name}]: {exc}") from None


def load_config(path: str, overrides: list[str] | None = None) -> RunConfig:
    """Parse a TOML config file, then apply ``key.path=value`` overrides."""
    try:
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return config_from_dict(doc, overrides)


def config_from_dict(doc: dict, overrides: list[str] | None = None) -> RunConfig:
    doc = _deep_copy(doc)
    for item in overrides or []:
        _apply_override(doc, item)

    _reject_unknown(doc, _SECTIONS, "config")
    system_tbl = doc.get("system", {})
    _reject_unknown(system_tbl, _SYSTEM_KEYS, "system")
    missing = sorted(_SYSTEM_KEYS - set(system_tbl))
    if missing:
        log.info("using default values for system keys: %s", ", ".join(missing))
    system = model.SystemParams(**system_tbl)

    cal_tbl = doc.get("calibration", {})
    _reject_unknown(cal_tbl, _CALIBRATION_KEYS, "calibration")
    calibration = model.FluxCalibration(**cal_tbl)

    sweep_tbl = doc.get("sweep")
    if sweep_tbl is not None:
        _reject_unknown(sweep_tbl, _SWEEP_KEYS, "sweep")
        for axis_name in ("axis1", "axis2"):
            axis_tbl = sweep_tbl.get(axis_name)
            if isinstance(axis_tbl, dict):
                _reject_unknown(axis_tbl, _AXIS_KEYS, f"sweep.{axis_name}")

    coupling_tbl = doc.get("coupling", {})
    _reject_unknown(coupling_tbl, _COUPLING_KEYS, "coupling")
    multipliers = coupling_tbl.get("multipliers")
    if multipliers is not None:
        if not isinstance(multipliers, list) or not all(
            isinstance(m, (int, float)) and not isinstance(m, bool) for m in multipliers
        ):
            raise ConfigError("[coupling] multipliers must be a list of numbers")

    out_tbl = doc.get("output", {})
    _reject_unknown(out_tbl, _OUTPUT_KEYS, "output")
    formats = out_tbl.get("formats", ["csv"])
    unknown_formats = set(formats) - {"csv"}
    if unknown_formats:
        raise ConfigError(f"unsupported output format(s): {', '.join(sorted(unknown_formats))}")

    return RunConfig(
        system=system,
        calibration=calibration,
        sweep=sweep_tbl,
        coupling_multipliers=multipliers,
        output_dir=out_tbl.get("directory", "out"),
        output_stem=out_tbl.get("stem", "run"),
        formats=formats,
    )


def _deep_copy(doc):
    if isinstance(doc, dict):
        return {k: _deep_copy(v) for k, v in doc.items()}
    if isinstance(doc, list):
        return [_deep_copy(v) for v in doc]
    return doc


def _parse_scalar(text: str):
    if text.startswith("[") and text.endswith("]"):
        inner = text[1:-1].strip()
        return [_parse_scalar(v.strip()) for v in inner.split(",")] if inner else []
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    if text.lower() in ("true", "false"):
        return text.lower() == "true"
    return text


def _apply_override(doc: dict, item: str):
    """Apply one ``--set section.key=value`` override; the flag wins and is logged."""
    key, sep, value = item.partition("=")
    if not sep or not key:
        raise ConfigError(f"override must look like section.key=value, got {item!r}")
    parts = key.strip().split(".")
    node = doc
    for part in parts[:-1]:
        node = node.setdefault(part, {})
        if not isinstance(node, dict):
            raise ConfigError(f"override path {key!r} crosses a non-table value")
    node[parts[-1]] = _parse_scalar(value.strip())
    log.info("override applied: %s = %s", key.strip(), value.strip())
