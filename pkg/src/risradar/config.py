"""YAML scenario documents.

Field names follow the scenario vocabulary; quantities that are quoted in dB
(``pt_dbw``, ``gt_db``, ``gain_db``, ``l_db``) are converted to linear values
exactly once, in :func:`to_scenario`. Schema errors carry the line of the
offending node.

Example::

    wavelength_m: 0.2142
    radar:
      position: [0, 0, 250]
      pt_dbw: 30
      gt_db: 30
      pattern: {kind: cosine_exponent, hpbw_deg: 10}
    panels:
      - frame: {center: [0, 0, 0], normal: [0, 0, 1]}
        rows: 46
        cols: 46
        spacing_fraction_of_lambda: 0.5
        gain_db: 4
        eta: 0.8
        pattern: {kind: cosine_exponent, hpbw_deg: 45}
        phasing_mode: round_trip_conjugate
    target: {position: [0, 0, 100], rcs_m2: 0.02}
    noise: {t0_k: 290, b_hz: 1.0e6, l_db: 0, pulses: 1}
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Literal, Optional

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .geometry import PanelFrame
from .linkbudget import DEFAULT_WAVELENGTH, NoiseModel, RadarNode, Scenario, Target, conjugate_phased
from .patterns import PatternModel, db_to_linear
from .ris import PhasingMode, RisPanel

Vec3 = tuple[float, float, float]


class ConfigError(ValueError):
    pass


class _Model(BaseModel):
    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)


class PatternConfig(_Model):
    kind: Literal["isotropic", "cosine_exponent"] = "cosine_exponent"
    hpbw_deg: Optional[float] = Field(default=None, gt=0, lt=180)
    exponent_q: Optional[float] = Field(default=None, ge=0)

    @model_validator(mode="after")
    def _one_shape(self):
        if self.kind == "cosine_exponent" and self.hpbw_deg is None and self.exponent_q is None:
            raise ValueError("cosine_exponent pattern needs hpbw_deg or exponent_q")
        if self.hpbw_deg is not None and self.exponent_q is not None:
            raise ValueError("give hpbw_deg or exponent_q, not both")
        return self

    def build(self, gain: float) -> PatternModel:
        if self.kind == "isotropic":
            return PatternModel("isotropic", 0.0, gain)
        if self.exponent_q is not None:
            return PatternModel("cosine_exponent", self.exponent_q, gain)
        return PatternModel.cosine(math.radians(self.hpbw_deg), gain)


class FrameConfig(_Model):
    origin: Optional[Vec3] = None
    u_axis: Optional[Vec3] = None
    v_axis: Optional[Vec3] = None
    center: Optional[Vec3] = None
    normal: Optional[Vec3] = None
    up: Vec3 = (0.0, 1.0, 0.0)

    @model_validator(mode="after")
    def _complete(self):
        corner = self.origin is not None
        centred = self.center is not None
        if corner == centred:
            raise ValueError("frame needs exactly one of origin (with u_axis, v_axis) or center (with normal)")
        if corner and (self.u_axis is None or self.v_axis is None):
            raise ValueError("origin-based frame needs u_axis and v_axis")
        if centred and self.normal is None:
            raise ValueError("center-based frame needs normal")
        return self


class RadarConfig(_Model):
    position: Vec3
    pt_dbw: float = 30.0
    gt_db: float = Field(default=30.0, ge=0)
    pattern: PatternConfig = PatternConfig(hpbw_deg=10.0)
    boresight: Optional[Vec3] = None


class PanelConfig(_Model):
    frame: FrameConfig
    rows: int = Field(ge=1)
    cols: int = Field(ge=1)
    spacing_fraction_of_lambda: float = Field(default=0.5, gt=0)
    gain_db: float = Field(default=4.0, ge=0)
    eta: float = Field(default=0.8, ge=0, le=1)
    pattern: PatternConfig = PatternConfig(hpbw_deg=45.0)
    phasing_mode: PhasingMode = PhasingMode.ROUND_TRIP_CONJUGATE
    phase_tx: Optional[list[list[float]]] = None
    phase_rx: Optional[list[list[float]]] = None

    @model_validator(mode="after")
    def _explicit_grids(self):
        if self.phasing_mode is PhasingMode.EXPLICIT:
            if self.phase_tx is None:
                raise ValueError("explicit phasing needs phase_tx")
            for grid in (self.phase_tx, self.phase_rx):
                if grid is not None and (len(grid) != self.rows or any(len(r) != self.cols for r in grid)):
                    raise ValueError(f"phase grid must be {self.rows}x{self.cols}")
        elif self.phase_tx is not None or self.phase_rx is not None:
            raise ValueError("phase_tx/phase_rx are only allowed with phasing_mode: explicit")
        return self


class TargetConfig(_Model):
    position: Vec3
    rcs_m2: float = Field(default=0.02, gt=0)


class NoiseConfig(_Model):
    t0_k: float = Field(default=290.0, gt=0)
    b_hz: float = Field(default=1e6, gt=0)
    l_db: float = Field(default=0.0, ge=0)
    pulses: int = Field(default=1, ge=1)


class ConfigDocument(_Model):
    wavelength_m: float = Field(default=DEFAULT_WAVELENGTH, gt=0)
    radar: RadarConfig
    panels: list[PanelConfig] = Field(min_length=1, max_length=2)
    target: TargetConfig
    noise: NoiseConfig = NoiseConfig()


def _line_of(root, loc) -> int | None:
    """1-based line of the deepest YAML node along a pydantic error location."""
    node, line = root, None
    if node is not None:
        line = node.start_mark.line + 1
    for key in loc:
        if isinstance(node, yaml.MappingNode):
            nxt = next((v for k, v in node.value if k.value == key), None)
            if nxt is None:
                key_node = next((k for k, _ in node.value if k.value == key), None)
                if key_node is not None:
                    line = key_node.start_mark.line + 1
                break
            node = nxt
        elif isinstance(node, yaml.SequenceNode) and isinstance(key, int) and key < len(node.value):
            node = node.value[key]
        else:
            break
        line = node.start_mark.line + 1
    return line


def parse_config(text: str, source: str = "<config>") -> ConfigDocument:
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"{source}:{mark.line + 1}" if mark is not None else source
        raise ConfigError(f"{where}: YAML syntax error: {getattr(exc, 'problem', exc)}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{source}:1: top level must be a mapping")
    try:
        return ConfigDocument.model_validate(data)
    except ValidationError as exc:
        msgs = []
        for err in exc.errors():
            loc = err["loc"]
            field_path = ".".join(str(p) for p in loc) or "<root>"
            line = _line_of(root, loc)
            where = f"{source}:{line}" if line is not None else source
            msgs.append(f"{where}: {field_path}: {err['msg']}")
        raise ConfigError("\n".join(msgs)) from None


def load_config(path) -> ConfigDocument:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config: {exc.strerror}") from None
    return parse_config(text, str(path))


def _frame(cfg: FrameConfig, rows, cols, spacing) -> PanelFrame:
    if cfg.origin is not None:
        return PanelFrame(cfg.origin, cfg.u_axis, cfg.v_axis)
    return PanelFrame.facing(cfg.center, cfg.normal, rows * spacing, cols * spacing, up=cfg.up)


def to_scenario(doc: ConfigDocument) -> Scenario:
    """Build the (phased) scenario described by ``doc``."""
    lam = doc.wavelength_m
    panels = []
    for p in doc.panels:
        spacing = p.spacing_fraction_of_lambda * lam
        phase_tx = 0.0 if p.phase_tx is None else np.asarray(p.phase_tx)
        phase_rx = phase_tx if p.phase_rx is None else np.asarray(p.phase_rx)
        panels.append(RisPanel(
            _frame(p.frame, p.rows, p.cols, spacing), p.rows, p.cols, spacing, spacing,
            p.pattern.build(db_to_linear(p.gain_db)), p.eta, phase_tx, phase_rx,
        ))
    radar = RadarNode(doc.radar.position, db_to_linear(doc.radar.pt_dbw),
                      doc.radar.pattern.build(db_to_linear(doc.radar.gt_db)),
                      doc.radar.boresight)
    noise = NoiseModel(doc.noise.t0_k, doc.noise.b_hz, db_to_linear(doc.noise.l_db), doc.noise.pulses)
    scenario = Scenario(radar, tuple(panels), Target(doc.target.position, doc.target.rcs_m2),
                        noise, lam)
    modes = [p.phasing_mode for p in doc.panels]
    if PhasingMode.ROUND_TRIP_CONJUGATE in modes:
        phased = conjugate_phased(scenario)
        scenario = scenario.replace(panels=tuple(
            new if mode is PhasingMode.ROUND_TRIP_CONJUGATE else old
            for old, new, mode in zip(scenario.panels, phased.panels, modes)
        ))
    return scenario
