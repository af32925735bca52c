"""Scenario files: JSON description of one simulation setup.

Units are fixed by key name (``_hz``, ``_w``, ``_deg``, metres for lengths,
ohm metres for resistivity).  Unknown keys are rejected.
"""
from importlib import resources
import hashlib
import json
import math
from pathlib import Path
from typing import Dict, List, Literal, Optional, Tuple

import pydantic
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .channel import LinkGeometry, Medium
from .circuit import COPPER_RESISTIVITY, CoilSpec, coil_inductance_air, coil_resistance, synthesize_hz
from .errors import InputError, ParseError, ValidationError
from .link import LinkConfig, receiver_network

SCHEMA_VERSION = 1
BUNDLED = ("paper_position1", "paper_position2")


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class CoilModel(_Strict):
    radius: float = Field(gt=0)
    turns: int = Field(ge=1)
    wire_radius: float = Field(gt=0)
    resistivity: float = Field(default=COPPER_RESISTIVITY, gt=0)
    drive_current: float = Field(default=1.0, gt=0)
    resistance_factor: float = Field(default=1.0, gt=0)

    @model_validator(mode="after")
    def _thin_wire(self):
        if not self.wire_radius < self.radius:
            raise ValueError("wire_radius must be smaller than radius")
        if not math.log(8 * self.radius / self.wire_radius) > 2:
            raise ValueError("wire_radius too large for the thin-wire inductance formula")
        return self


class Coils(_Strict):
    tx: CoilModel
    rx: CoilModel


class MediumModel(_Strict):
    relative_permittivity: float = Field(gt=0)
    relative_permeability: float = Field(default=1.0, gt=0)
    conductivity: float = Field(default=0.0, ge=0)


class Media(_Strict):
    air: MediumModel
    soil: MediumModel


class PositionModel(_Strict):
    height_air: float = Field(gt=0)
    depth_soil: float = Field(gt=0)
    theta_deg: float = Field(default=0.0, ge=0, lt=90)
    phi_deg: float = 0.0
    rx_axis: Tuple[float, float, float] = (0.0, 0.0, 1.0)

    @model_validator(mode="after")
    def _unit_axis(self):
        if abs(math.sqrt(sum(c * c for c in self.rx_axis)) - 1) > 1e-12:
            raise ValueError("rx_axis must have unit norm")
        return self


class Geometry(_Strict):
    selected: str
    positions: Dict[str, PositionModel]

    @model_validator(mode="after")
    def _selected_exists(self):
        if self.selected not in self.positions:
            raise ValueError(f"selected position {self.selected!r} is not defined")
        return self


class SweepModel(_Strict):
    f_lo_hz: float = Field(gt=0)
    f_hi_hz: float = Field(gt=0)
    points: int = Field(ge=2)
    spacing: Literal["log", "linear"] = "log"

    @model_validator(mode="after")
    def _range(self):
        if not self.f_lo_hz < self.f_hi_hz:
            raise ValueError("f_lo_hz must be below f_hi_hz")
        return self


class PowerModel(_Strict):
    tx_power_w: float = Field(ge=0)
    noise_psd_w_per_hz: float = Field(gt=0)


class CapacityModel(_Strict):
    snr_db: List[float] = Field(min_length=1)
    reference_bandwidth_hz: float = Field(gt=0)


class BerModel(_Strict):
    n_users: int = Field(ge=1)
    snr_db: List[float] = Field(min_length=2)
    targets: List[float] = Field(min_length=1)
    n_symbols: int = Field(ge=1000)
    seed: int = Field(ge=0)

    @model_validator(mode="after")
    def _targets(self):
        if not all(0 < t < 0.5 for t in self.targets):
            raise ValueError("BER targets must lie strictly between 0 and 0.5")
        if list(self.snr_db) != sorted(self.snr_db):
            raise ValueError("snr_db must be increasing")
        return self


class Scenario(_Strict):
    """Validated scenario."""

    schema_version: Literal[1]
    name: str = ""
    coils: Coils
    media: Media
    geometry: Geometry
    resonances_hz: List[float] = Field(min_length=1)
    receiver_mode: Literal["single", "multi"]
    receiver_resonance_hz: Optional[float] = None
    sweep: SweepModel
    power: PowerModel
    capacity: CapacityModel
    ber: BerModel

    @model_validator(mode="after")
    def _resonances(self):
        res = self.resonances_hz
        if not all(f > 0 for f in res):
            raise ValueError("resonances must be positive")
        if any(b <= a for a, b in zip(res, res[1:])):
            raise ValueError("resonances must be strictly increasing")
        if self.receiver_resonance_hz is not None and self.receiver_resonance_hz not in res:
            raise ValueError("receiver_resonance_hz must be one of resonances_hz")
        return self

    @property
    def single_resonance_hz(self):
        """Resonance used by a single-resonant receiver (default: the highest)."""
        if self.receiver_resonance_hz is not None:
            return self.receiver_resonance_hz
        return self.resonances_hz[-1]


def _key_path(loc):
    return ".".join(str(p) for p in loc)


def parse_scenario(text, source="<string>"):
    """Parse and validate scenario JSON text."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}", exc.lineno, exc.colno
        ) from None
    if isinstance(data, dict) and data.get("schema_version", SCHEMA_VERSION) != SCHEMA_VERSION:
        raise ValidationError(
            f"schema_version: unsupported version {data['schema_version']!r}", "schema_version"
        )
    try:
        return Scenario.model_validate(data)
    except pydantic.ValidationError as exc:
        err = exc.errors()[0]
        path = _key_path(err["loc"])
        msg = err["msg"]
        if err["type"] == "extra_forbidden":
            msg = "unknown key"
        raise ValidationError(f"{path or '<root>'}: {msg}", path) from None


def load_scenario(path):
    """Load a scenario from a file path or a bundled scenario name."""
    p = Path(path)
    if not p.exists() and str(path) in BUNDLED:
        text = resources.files("micg.scenarios").joinpath(f"{path}.json").read_text()
        return parse_scenario(text, str(path))
    return parse_scenario(p.read_text(), str(path))


def emit_scenario(scenario):
    """Canonical JSON text of a scenario."""
    return json.dumps(scenario.model_dump(mode="json"), indent=2, sort_keys=True) + "\n"


def scenario_digest(scenario):
    return hashlib.sha256(emit_scenario(scenario).encode()).hexdigest()


def _coil(model):
    return CoilSpec(
        radius=model.radius,
        turns=model.turns,
        wire_radius=model.wire_radius,
        resistivity=model.resistivity,
        drive_current=model.drive_current,
        resistance_factor=model.resistance_factor,
    )


def _medium(model):
    return Medium.from_relative(
        model.relative_permittivity, model.relative_permeability, model.conductivity
    )


def coils(scenario):
    return _coil(scenario.coils.tx), _coil(scenario.coils.rx)


def media(scenario):
    return _medium(scenario.media.air), _medium(scenario.media.soil)


def geometry(scenario, position=None):
    name = scenario.geometry.selected if position is None else position
    try:
        pos = scenario.geometry.positions[name]
    except KeyError:
        raise InputError(f"unknown position {name!r}") from None
    return LinkGeometry.from_heights(
        pos.height_air, pos.depth_soil, math.radians(pos.theta_deg),
        math.radians(pos.phi_deg), pos.rx_axis,
    )


def transmit_network(scenario):
    tx, _ = coils(scenario)
    return synthesize_hz(coil_inductance_air(tx), coil_resistance(tx), scenario.resonances_hz)


def receive_network(scenario, receiver_mode=None):
    mode = scenario.receiver_mode if receiver_mode is None else receiver_mode
    _, rx = coils(scenario)
    _, soil = media(scenario)
    res = scenario.resonances_hz if mode == "multi" else [scenario.single_resonance_hz]
    return receiver_network(rx, soil, res)


def build_link(scenario, position=None, receiver_mode=None, lossy=False, d_variant="composed"):
    """LinkConfig for one named position and receiver mode."""
    tx, rx = coils(scenario)
    return LinkConfig(
        tx_network=transmit_network(scenario),
        rx_network=receive_network(scenario, receiver_mode),
        tx_coil=tx,
        rx_coil=rx,
        geometry=geometry(scenario, position),
        media=media(scenario),
        lossy=lossy,
        d_variant=d_variant,
    )
