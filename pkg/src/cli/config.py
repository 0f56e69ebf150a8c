"""
Run configuration

One YAML/JSON file describes a whole experiment. Every section is optional
and falls back to the Tm:YAG defaults; ``ion`` may name a file under
``config/ions/`` instead of listing the constants inline.
"""
import copy
from pathlib import Path
from typing import Any, List, Optional, Tuple, Union

from pydantic import (
    BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator,
)

from ..afc.comb import AFCSpec
from ..afc.propagation import InputPulse
from ..afc.store import CombSource
from ..core.errors import ConfigError
from ..core.logging_config import get_logger
from ..core.settings import ConfigDocument, load_document, resolve_named, validate_model
from ..material.holes import HolePattern, Lineshape, hole_pattern
from ..material.ion import FieldConfig, IonClass, zeeman_splittings
from ..material.spectrum import GridConfig, Spectrum, baseline_spectrum
from ..pumping.decay import NoiseModel
from ..pumping.pulses import PulseTrain, PumpTarget
from ..seqcompile.hardware import HardwareLimits

logger = get_logger(__name__)


class SpectrumConfig(BaseModel):
    """Unpumped absorption"""
    model_config = ConfigDict(extra='forbid')

    peak_od: float = Field(default=6.0, gt=0, description="Single-pass peak OD")
    passes: int = Field(default=2, ge=1)
    profile_fwhm: Optional[float] = Field(default=None, gt=0,
                                          description="Inhomogeneous FWHM (MHz), flat when unset")
    profile_center: float = 0.0

    @property
    def total_od(self) -> float:
        return self.peak_od * self.passes


class CombConfig(BaseModel):
    """Where the stored-light comb comes from and how the pump rate is set"""
    model_config = ConfigDict(extra='forbid')

    source: CombSource = CombSource.PUMPED
    afc: AFCSpec = Field(default_factory=AFCSpec)
    calibrate_d0: Optional[float] = Field(default=None, ge=0,
                                          description="Fit peak_rate to this background OD")
    optimize_rate: bool = Field(default=False,
                                description="Pick the peak_rate that maximizes comb efficiency")
    from_schedule: bool = Field(default=False,
                                description="pump command runs the compiled RF schedule")

    @model_validator(mode='after')
    def _one_rate_rule(self) -> 'CombConfig':
        if self.calibrate_d0 is not None and self.optimize_rate:
            raise ValueError("calibrate_d0 and optimize_rate are mutually exclusive")
        return self


class CountingConfig(BaseModel):
    model_config = ConfigDict(extra='forbid')

    mean_photon: float = Field(default=1.0, ge=0)
    events: int = Field(default=10_000, ge=1)
    window: float = Field(default=100.0, gt=0, description="Detection window (ns)")
    bin_ns: float = Field(default=5.0, gt=0, description="Histogram bin (ns)")


class HoleburnConfig(BaseModel):
    model_config = ConfigDict(extra='forbid')

    depth: float = Field(default=0.5, ge=0, le=1, description="Central hole depth")
    fwhm: Optional[float] = Field(default=None, gt=0, description="Feature width (MHz)")
    lineshape: Lineshape = Lineshape.GAUSSIAN


Range3 = Tuple[float, float, float]


class CommensurateConfig(BaseModel):
    """Mismatch map ranges and an optional field search"""
    model_config = ConfigDict(extra='forbid')

    b_range: Range3 = (50.0, 700.0, 1.0)
    y_range: Range3 = (50.0, 1000.0, 5.0)
    storage_time: bool = Field(default=True, description="y axis is storage time (ns)")
    threshold: float = Field(default=0.05, ge=0, description="Minima reported below this")
    search_delta: Optional[float] = Field(default=None, gt=0, description="Spacing to search B for")
    search_b_range: Tuple[float, float] = (50.0, 2000.0)
    top_k: int = Field(default=5, ge=1)
    audit: bool = True

    @field_validator('b_range', 'y_range')
    @classmethod
    def _check_range(cls, v: Range3) -> Range3:
        lo, hi, step = v
        if step <= 0 or hi < lo or lo <= 0:
            raise ValueError("expected 0 < lo <= hi and step > 0")
        return v


class SweepConfig(BaseModel):
    """One dotted config parameter stepped over a list of values"""
    model_config = ConfigDict(extra='forbid')

    parameter: Optional[str] = Field(default=None, description="e.g. pump_target.wait_time")
    values: List[Any] = Field(default_factory=list)
    command: str = Field(default="store", pattern="^(store|pump)$")


class RunConfig(BaseModel):
    """Complete experiment description"""
    model_config = ConfigDict(extra='forbid')

    ion: IonClass = Field(default_factory=IonClass)
    field: FieldConfig = Field(default_factory=FieldConfig)
    grid: GridConfig = Field(default_factory=GridConfig)
    spectrum: SpectrumConfig = Field(default_factory=SpectrumConfig)
    pump_target: PumpTarget = Field(default_factory=PumpTarget)
    pulse_train: PulseTrain = Field(default_factory=PulseTrain)
    hardware: HardwareLimits = Field(default_factory=HardwareLimits)
    comb: CombConfig = Field(default_factory=CombConfig)
    pulse: InputPulse = Field(default_factory=InputPulse)
    noise: NoiseModel = Field(default_factory=NoiseModel)
    counting: CountingConfig = Field(default_factory=CountingConfig)
    holeburn: HoleburnConfig = Field(default_factory=HoleburnConfig)
    commensurate: CommensurateConfig = Field(default_factory=CommensurateConfig)
    sweep: SweepConfig = Field(default_factory=SweepConfig)
    seed: int = Field(default=0, ge=0)
    out: Path = Path("out")

    def splittings(self) -> Tuple[float, float]:
        return zeeman_splittings(self.ion, self.field)

    def pattern(self) -> HolePattern:
        return hole_pattern(*self.splittings(), self.ion)

    def baseline(self) -> Spectrum:
        s = self.spectrum
        return baseline_spectrum(s.peak_od, s.passes, self.grid.to_grid(), self.ion,
                                 s.profile_fwhm, s.profile_center)


def _resolve_ion(document: ConfigDocument) -> dict:
    """Replace a named ``ion`` with the validated constants from config/ions"""
    data = dict(document.data)
    name = data.get('ion')
    if isinstance(name, str):
        ion_doc = resolve_named('ions', name)
        data['ion'] = validate_model(IonClass, ion_doc.data, ion_doc)
    return data


def parse_config(document: ConfigDocument) -> RunConfig:
    """Validate a parsed document into a RunConfig"""
    config = validate_model(RunConfig, _resolve_ion(document), document)
    logger.debug(f"Config {document.source} validated")
    return config


def find_config(name: Union[str, Path]) -> ConfigDocument:
    """Load a config by path, or by name from config/experiments"""
    path = Path(name)
    if path.exists() or path.suffix:
        return load_document(path)
    return resolve_named('experiments', str(name))


def load_config(name: Union[str, Path]) -> RunConfig:
    return parse_config(find_config(name))


def _set_dotted(data: dict, dotted: str, value: Any):
    keys = dotted.split('.')
    node: Any = data
    for key in keys[:-1]:
        node = node[int(key)] if isinstance(node, list) else node.setdefault(key, {})
    last = keys[-1]
    if isinstance(node, list):
        node[int(last)] = value
    else:
        node[last] = value


def with_override(config: RunConfig, dotted: str, value: Any) -> RunConfig:
    """
    Copy of ``config`` with one dotted parameter replaced.

    List items are addressed by index, e.g. ``pump_target.windows.0.center``.
    """
    data = copy.deepcopy(config.model_dump())
    try:
        _set_dotted(data, dotted, value)
    except (KeyError, IndexError, ValueError, TypeError):
        raise ConfigError([f"sweep: {dotted}: no such parameter"])
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        problems = [f"sweep: {dotted}={value!r}: "
                    f"{'.'.join(str(p) for p in item['loc'])}: {item['msg']}"
                    for item in e.errors()]
        raise ConfigError(problems)
