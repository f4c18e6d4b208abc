"""Scenario files: the JSON surface of the CLI.

A scenario bundles TX positions, the true target state, noise levels,
search bounds, the trial count, the master seed, and an optional sweep:

    {
      "txs": [{"range_m": 50.0, "angle_deg": 0.0}, ...],
      "target": {"range_m": 50.0, "angle_deg": 90.0,
                 "speed_mps": 20.0, "heading_deg": 90.0},
      "noise": {"sigma_br_m": 0.1, "sigma_brr_mps": 0.1, "sigma_doa_deg": 0.5},
      "bounds": {"max_range_m": 1000.0, "max_speed_mps": 100.0},   # optional
      "trials": 5000,                                              # optional
      "seed": 0,                                                   # optional
      "sweep": {"channel": "br", "values": [0.1, 1.0, 10.0]}       # optional
    }

Angles are degrees in the file and radians everywhere else; unknown keys
are rejected; error messages name the offending field.  Parsed scenarios
keep the file's degree values verbatim so write/parse round-trips exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import ParseError, ValidationError
from .geometry import PolarPoint, PolarVelocity, Scene, TargetState
from .measurement import NoiseSpec
from .montecarlo import SWEEP_CHANNELS, SweepSpec, TrialSpec

DEFAULT_MAX_RANGE_M = 1000.0
DEFAULT_MAX_SPEED_MPS = 100.0
DEFAULT_TRIALS = 5000
DEFAULT_SEED = 0
# Seven log-spaced sigmas per decade-spanning sweep, 0.1 .. 10.
DEFAULT_SWEEP_VALUES = tuple(10.0 ** (k / 3.0 - 1.0) for k in range(7))


@dataclass(frozen=True)
class TxConfig:
    range_m: float
    angle_deg: float


@dataclass(frozen=True)
class TargetConfig:
    range_m: float
    angle_deg: float
    speed_mps: float
    heading_deg: float


@dataclass(frozen=True)
class SweepConfig:
    channel: str
    values: tuple[float, ...]


@dataclass(frozen=True)
class ScenarioFile:
    """A validated scenario, still in boundary units (degrees)."""

    txs: tuple[TxConfig, ...]
    target: TargetConfig
    noise: NoiseSpec
    max_range_m: float = DEFAULT_MAX_RANGE_M
    max_speed_mps: float = DEFAULT_MAX_SPEED_MPS
    trials: int = DEFAULT_TRIALS
    seed: int = DEFAULT_SEED
    sweep: SweepConfig | None = None

    def scene(self) -> Scene:
        return Scene(
            txs=tuple(PolarPoint(t.range_m, math.radians(t.angle_deg)) for t in self.txs),
            max_range_m=self.max_range_m,
            max_speed_mps=self.max_speed_mps,
        )

    def target_state(self) -> TargetState:
        return TargetState(
            position=PolarPoint(self.target.range_m, math.radians(self.target.angle_deg)),
            velocity=PolarVelocity(self.target.speed_mps, math.radians(self.target.heading_deg)),
        )

    def trial_spec(self, heading_domain: str = "full") -> TrialSpec:
        return TrialSpec(
            scene=self.scene(),
            target=self.target_state(),
            noise=self.noise,
            trials=self.trials,
            master_seed=self.seed,
            heading_domain=heading_domain,
        )

    def sweep_spec(self, heading_domain: str = "full") -> SweepSpec:
        if self.sweep is None:
            raise ValidationError("sweep: scenario defines no sweep section")
        return SweepSpec(
            base=self.trial_spec(heading_domain),
            swept_channel=self.sweep.channel,
            values=self.sweep.values,
        )


def _as_object(value, path: str) -> dict:
    if not isinstance(value, dict):
        raise ValidationError(f"{path}: expected an object, got {type(value).__name__}")
    return value


def _reject_unknown(obj: dict, allowed: tuple[str, ...], path: str) -> None:
    for key in obj:
        if key not in allowed:
            raise ValidationError(f"{path}.{key}: unknown key" if path else f"{key}: unknown key")


def _get_number(obj: dict, key: str, path: str, minimum=None, maximum=None, default=None):
    if key not in obj:
        if default is not None:
            return default
        raise ValidationError(f"{path}: missing required field")
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{path}: expected a number, got {type(value).__name__}")
    value = float(value)
    if not math.isfinite(value):
        raise ValidationError(f"{path}: must be finite, got {value}")
    if minimum is not None and value < minimum:
        raise ValidationError(f"{path}: must be >= {minimum}, got {value}")
    if maximum is not None and value > maximum:
        raise ValidationError(f"{path}: must be <= {maximum}, got {value}")
    return value


def _get_integer(obj: dict, key: str, path: str, minimum: int, default: int) -> int:
    if key not in obj:
        return default
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(f"{path}: expected an integer, got {type(value).__name__}")
    if value < minimum:
        raise ValidationError(f"{path}: must be >= {minimum}, got {value}")
    return value


def scenario_from_dict(doc: dict) -> ScenarioFile:
    """Validate a decoded JSON document into a ScenarioFile."""
    _as_object(doc, "scenario")
    _reject_unknown(doc, ("txs", "target", "noise", "bounds", "trials", "seed", "sweep"), "")

    if "txs" not in doc:
        raise ValidationError("txs: missing required field")
    if not isinstance(doc["txs"], list) or not doc["txs"]:
        raise ValidationError("txs: expected a non-empty list")
    txs = []
    for k, entry in enumerate(doc["txs"]):
        path = f"txs[{k}]"
        entry = _as_object(entry, path)
        _reject_unknown(entry, ("range_m", "angle_deg"), path)
        txs.append(
            TxConfig(
                range_m=_get_number(entry, "range_m", f"{path}.range_m", minimum=0.0),
                angle_deg=_get_number(
                    entry, "angle_deg", f"{path}.angle_deg", minimum=0.0, maximum=180.0
                ),
            )
        )
        if txs[-1].range_m <= 0.0:
            raise ValidationError(f"{path}.range_m: must be > 0 (TX collocated with RX)")

    if "target" not in doc:
        raise ValidationError("target: missing required field")
    tgt = _as_object(doc["target"], "target")
    _reject_unknown(tgt, ("range_m", "angle_deg", "speed_mps", "heading_deg"), "target")
    target = TargetConfig(
        range_m=_get_number(tgt, "range_m", "target.range_m", minimum=0.0),
        angle_deg=_get_number(tgt, "angle_deg", "target.angle_deg", minimum=0.0, maximum=180.0),
        speed_mps=_get_number(tgt, "speed_mps", "target.speed_mps", minimum=0.0),
        heading_deg=_get_number(tgt, "heading_deg", "target.heading_deg"),
    )

    if "noise" not in doc:
        raise ValidationError("noise: missing required field")
    noi = _as_object(doc["noise"], "noise")
    _reject_unknown(noi, ("sigma_br_m", "sigma_brr_mps", "sigma_doa_deg"), "noise")
    noise = NoiseSpec(
        sigma_br_m=_get_number(noi, "sigma_br_m", "noise.sigma_br_m", minimum=0.0),
        sigma_brr_mps=_get_number(noi, "sigma_brr_mps", "noise.sigma_brr_mps", minimum=0.0),
        sigma_doa_deg=_get_number(noi, "sigma_doa_deg", "noise.sigma_doa_deg", minimum=0.0),
    )

    bounds = _as_object(doc.get("bounds", {}), "bounds")
    _reject_unknown(bounds, ("max_range_m", "max_speed_mps"), "bounds")
    max_range_m = _get_number(
        bounds, "max_range_m", "bounds.max_range_m", minimum=0.0, default=DEFAULT_MAX_RANGE_M
    )
    max_speed_mps = _get_number(
        bounds, "max_speed_mps", "bounds.max_speed_mps", minimum=0.0, default=DEFAULT_MAX_SPEED_MPS
    )
    if max_range_m <= 0.0:
        raise ValidationError("bounds.max_range_m: must be > 0")
    if max_speed_mps <= 0.0:
        raise ValidationError("bounds.max_speed_mps: must be > 0")
    if target.range_m > max_range_m:
        raise ValidationError(
            f"target.range_m: {target.range_m} exceeds bounds.max_range_m {max_range_m}"
        )
    if target.speed_mps > max_speed_mps:
        raise ValidationError(
            f"target.speed_mps: {target.speed_mps} exceeds bounds.max_speed_mps {max_speed_mps}"
        )

    trials = _get_integer(doc, "trials", "trials", minimum=1, default=DEFAULT_TRIALS)
    seed = _get_integer(doc, "seed", "seed", minimum=0, default=DEFAULT_SEED)
    if seed >= 2**64:
        raise ValidationError(f"seed: must fit in 64 bits, got {seed}")

    sweep = None
    if "sweep" in doc:
        swp = _as_object(doc["sweep"], "sweep")
        _reject_unknown(swp, ("channel", "values"), "sweep")
        if "channel" not in swp:
            raise ValidationError("sweep.channel: missing required field")
        channel = swp["channel"]
        if channel not in SWEEP_CHANNELS:
            raise ValidationError(
                f"sweep.channel: must be one of {list(SWEEP_CHANNELS)}, got {channel!r}"
            )
        if "values" in swp:
            raw = swp["values"]
            if not isinstance(raw, list) or not raw:
                raise ValidationError("sweep.values: expected a non-empty list")
            values = []
            for k, v in enumerate(raw):
                if isinstance(v, bool) or not isinstance(v, (int, float)):
                    raise ValidationError(f"sweep.values[{k}]: expected a number")
                v = float(v)
                if not math.isfinite(v) or v < 0.0:
                    raise ValidationError(f"sweep.values[{k}]: must be finite and >= 0")
                values.append(v)
            if any(b <= a for a, b in zip(values, values[1:])):
                raise ValidationError("sweep.values: must be strictly increasing")
            values = tuple(values)
        else:
            values = DEFAULT_SWEEP_VALUES
        sweep = SweepConfig(channel=channel, values=values)

    return ScenarioFile(
        txs=tuple(txs),
        target=target,
        noise=noise,
        max_range_m=max_range_m,
        max_speed_mps=max_speed_mps,
        trials=trials,
        seed=seed,
        sweep=sweep,
    )


def parse_scenario(path: str | Path) -> ScenarioFile:
    """Load and validate a scenario file.

    Raises ParseError for unreadable or malformed JSON (with line/column)
    and ValidationError for schema violations (with the field path).
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ValidationError("scenario: top level must be a JSON object")
    return scenario_from_dict(doc)


def scenario_to_dict(sc: ScenarioFile) -> dict:
    """Inverse of scenario_from_dict (exact round trip)."""
    doc: dict = {
        "txs": [{"range_m": t.range_m, "angle_deg": t.angle_deg} for t in sc.txs],
        "target": {
            "range_m": sc.target.range_m,
            "angle_deg": sc.target.angle_deg,
            "speed_mps": sc.target.speed_mps,
            "heading_deg": sc.target.heading_deg,
        },
        "noise": {
            "sigma_br_m": sc.noise.sigma_br_m,
            "sigma_brr_mps": sc.noise.sigma_brr_mps,
            "sigma_doa_deg": sc.noise.sigma_doa_deg,
        },
        "bounds": {"max_range_m": sc.max_range_m, "max_speed_mps": sc.max_speed_mps},
        "trials": sc.trials,
        "seed": sc.seed,
    }
    if sc.sweep is not None:
        doc["sweep"] = {"channel": sc.sweep.channel, "values": list(sc.sweep.values)}
    return doc


def write_scenario(sc: ScenarioFile, path: str | Path) -> None:
    Path(path).write_text(json.dumps(scenario_to_dict(sc), indent=2) + "\n", encoding="utf-8")
