"""YAML run configuration: networks, criteria, judgments, simulation settings."""

from __future__ import annotations

from dataclasses import dataclass, replace
from importlib import resources
from typing import Any, Dict, Mapping, Optional, Sequence, Tuple

import yaml

from .anp import LEAF_CRITERIA, PairwiseMatrix
from .simulator import NetworkRangeSpec, SimulationConfig
from .strategy import (
    DEFAULT_DIRECTIONS,
    TRAFFIC_CLASSES,
    CriterionDirection,
    TrafficClassProfile,
    VariantId,
    load_profile,
)

DEFAULT_CONFIG = "default.yaml"


class ConfigError(ValueError):
    """Schema violation; the message starts with the offending field path."""


@dataclass(frozen=True)
class Config:
    networks: Tuple[NetworkRangeSpec, ...]
    directions: Mapping[str, CriterionDirection]
    profiles: Mapping[str, TrafficClassProfile]
    decision_points: int = 12
    seed: int = 42
    replications: int = 1
    variants: Tuple[VariantId, ...] = tuple(VariantId)
    traffic_classes: Tuple[str, ...] = TRAFFIC_CLASSES

    def simulation(self, traffic_class: str, **overrides: Any) -> SimulationConfig:
        """Simulation settings for one traffic class, with optional overrides."""
        if traffic_class not in self.profiles:
            raise ConfigError(f"judgments: no traffic class {traffic_class!r}")
        cfg = SimulationConfig(
            traffic_class=traffic_class,
            seed=self.seed,
            decision_points=self.decision_points,
            replications=self.replications,
            variants=self.variants,
            network_specs=self.networks,
        )
        return replace(cfg, **overrides) if overrides else cfg


def _require(block: Mapping[str, Any], key: str, where: str) -> Any:
    if not isinstance(block, Mapping):
        raise ConfigError(f"{where}: expected a mapping")
    if key not in block:
        raise ConfigError(f"{where}.{key}: missing")
    return block[key]


def _number(x: Any, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {x!r}")
    return float(x)


def _range(x: Any, where: str) -> Tuple[float, float]:
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return (float(x), float(x))
    if not isinstance(x, Sequence) or isinstance(x, str) or len(x) != 2:
        raise ConfigError(f"{where}: expected [lo, hi]")
    lo, hi = _number(x[0], where), _number(x[1], where)
    if hi < lo:
        raise ConfigError(f"{where}: invalid range, upper bound {hi} is below lower bound {lo}")
    if lo < 0:
        raise ConfigError(f"{where}: bounds must be nonnegative")
    return (lo, hi)


def _parse_networks(raw: Any) -> Tuple[NetworkRangeSpec, ...]:
    if not isinstance(raw, list) or not raw:
        raise ConfigError("networks: expected a non-empty list")
    out = []
    for k, item in enumerate(raw):
        where = f"networks[{k}]"
        nid = str(_require(item, "id", where))
        where = f"networks.{nid}"
        try:
            out.append(NetworkRangeSpec(
                nid,
                _number(_require(item, "cb", where), f"{where}.cb"),
                _number(_require(item, "s", where), f"{where}.s"),
                *(_range(_require(item, key, where), f"{where}.{key}")
                  for key in ("ab", "d", "j", "l")),
            ))
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"{where}: {exc}") from None
    ids = [n.network_id for n in out]
    if len(set(ids)) != len(ids):
        raise ConfigError("networks: duplicate network id")
    return tuple(out)


def _parse_criteria(raw: Any) -> Dict[str, CriterionDirection]:
    if raw is None:
        return dict(DEFAULT_DIRECTIONS)
    if not isinstance(raw, Mapping):
        raise ConfigError("criteria: expected a mapping of criterion -> benefit|cost")
    unknown = set(raw) - set(LEAF_CRITERIA)
    if unknown:
        raise ConfigError(f"criteria: unknown criterion {sorted(unknown)}")
    out = dict(DEFAULT_DIRECTIONS)
    for c, d in raw.items():
        try:
            out[c] = CriterionDirection(str(d).lower())
        except ValueError:
            raise ConfigError(f"criteria.{c}: expected benefit or cost, got {d!r}") from None
    return out


def parse_config(text: str) -> Config:
    """Parse and validate a YAML configuration.

    Sections: ``networks`` (list), ``criteria`` (optional directions),
    ``judgments`` (one block per traffic class) and ``simulation``.
    Every judgment matrix is consistency-checked here.

    Raises:
        ConfigError: malformed YAML or a schema violation.
        InconsistentJudgmentsError: a matrix has CR >= 0.1 (message names it).
    """
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid YAML: {exc}") from None
    if not isinstance(doc, Mapping):
        raise ConfigError("top level: expected a mapping")
    unknown = set(doc) - {"networks", "criteria", "judgments", "simulation"}
    if unknown:
        raise ConfigError(f"top level: unknown section {sorted(unknown)}")

    networks = _parse_networks(_require(doc, "networks", "config"))
    directions = _parse_criteria(doc.get("criteria"))
    nets = [n.network_id for n in networks]

    judgments = _require(doc, "judgments", "config")
    if not isinstance(judgments, Mapping) or not judgments:
        raise ConfigError("judgments: expected a mapping of traffic class -> judgments")
    profiles = {}
    for cls, block in judgments.items():
        where = f"judgments.{cls}"
        if not isinstance(block, Mapping):
            raise ConfigError(f"{where}: expected a mapping")
        for sec in ("level1", "level2", "level3"):
            _require(block, sec, where)
        for crit in LEAF_CRITERIA:
            _require(block["level3"], crit, f"{where}.level3")
        profiles[str(cls)] = load_profile({"name": str(cls), **block}, nets, directions)

    sim = doc.get("simulation") or {}
    if not isinstance(sim, Mapping):
        raise ConfigError("simulation: expected a mapping")
    unknown = set(sim) - {"decision_points", "seed", "replications", "variants", "traffic_classes"}
    if unknown:
        raise ConfigError(f"simulation: unknown key {sorted(unknown)}")
    kw: Dict[str, Any] = {}
    for key in ("decision_points", "seed", "replications"):
        if key in sim:
            v = sim[key]
            if isinstance(v, bool) or not isinstance(v, int) or v < (0 if key == "seed" else 1):
                raise ConfigError(f"simulation.{key}: expected a positive integer, got {v!r}")
            kw[key] = v
    if "variants" in sim:
        try:
            kw["variants"] = tuple(VariantId.parse(str(v)) for v in sim["variants"])
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"simulation.variants: {exc}") from None
    classes = tuple(str(c) for c in sim.get("traffic_classes", profiles))
    missing = [c for c in classes if c not in profiles]
    if missing:
        raise ConfigError(f"simulation.traffic_classes: no judgments for {missing}")
    return Config(networks, directions, profiles, traffic_classes=classes, **kw)


def load_config(path: Optional[str] = None) -> Config:
    """Read a config file, or the packaged default when ``path`` is None."""
    if path is None:
        text = resources.files("netselect.data").joinpath(DEFAULT_CONFIG).read_text("utf-8")
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)


def _fmt(x: float) -> Any:
    return int(x) if float(x).is_integer() else float(x)


def _judgment_block(mat: PairwiseMatrix) -> Dict[str, Dict[str, Any]]:
    out: Dict[str, Dict[str, Any]] = {}
    for (a, b), v in mat.upper().items():
        out.setdefault(a, {})[b] = int(v) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return out


def config_to_dict(cfg: Config) -> Dict[str, Any]:
    return {
        "networks": [
            {"id": n.network_id, "cb": _fmt(n.cb), "s": _fmt(n.s),
             "ab": [_fmt(x) for x in n.ab_range], "d": [_fmt(x) for x in n.d_range],
             "j": [_fmt(x) for x in n.j_range], "l": [_fmt(x) for x in n.l_range]}
            for n in cfg.networks
        ],
        "criteria": {c: cfg.directions[c].value for c in LEAF_CRITERIA},
        "judgments": {
            name: {
                "level1": _judgment_block(p.level1),
                "level2": _judgment_block(p.level2),
                "level3": {c: _judgment_block(p.level3[c]) for c in LEAF_CRITERIA},
            }
            for name, p in cfg.profiles.items()
        },
        "simulation": {
            "decision_points": cfg.decision_points,
            "seed": cfg.seed,
            "replications": cfg.replications,
            "variants": [v.value for v in cfg.variants],
            "traffic_classes": list(cfg.traffic_classes),
        },
    }


def serialize_config(cfg: Config) -> str:
    return yaml.safe_dump(config_to_dict(cfg), sort_keys=False)
