"""Seeded Monte Carlo simulation of network selection over repeated decision points.

Each replication draws one attribute stream (a snapshot of every network at
every decision point) and feeds the same stream to all variants, which keep
their own history and selection sequence. Two metrics are collected per
variant: ranking abnormality events and handoffs.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .strategy import (
    HistoryState,
    NetworkSnapshot,
    TrafficClassProfile,
    VariantId,
    select_network,
    update_history,
)

log = logging.getLogger(__name__)

Range = Tuple[float, float]


@dataclass(frozen=True)
class NetworkRangeSpec:
    """Attribute ranges of one candidate network.

    CB and S are fixed; AB, D, J and L are drawn uniformly from their ranges.
    """

    network_id: str
    cb: float
    s: float
    ab_range: Range
    d_range: Range
    j_range: Range
    l_range: Range

    def __post_init__(self) -> None:
        if self.cb < 0 or self.s < 0:
            raise ValueError(f"{self.network_id}: CB and S must be nonnegative")
        for name in ("ab_range", "d_range", "j_range", "l_range"):
            lo, hi = getattr(self, name)
            if lo < 0 or hi < lo:
                raise ValueError(f"{self.network_id}: {name} [{lo}, {hi}] is not a valid range")
            object.__setattr__(self, name, (float(lo), float(hi)))

    def frozen(self) -> "NetworkRangeSpec":
        """Same network with every range collapsed to its midpoint."""
        mid = {k: ((lo + hi) / 2,) * 2 for k, (lo, hi) in
               (("ab_range", self.ab_range), ("d_range", self.d_range),
                ("j_range", self.j_range), ("l_range", self.l_range))}
        return NetworkRangeSpec(self.network_id, self.cb, self.s, **mid)


# Candidate networks: CB %, S %, AB Mbps, D ms, J ms, L per 10^6.
DEFAULT_NETWORKS: Tuple[NetworkRangeSpec, ...] = (
    NetworkRangeSpec("UMTS", 60, 70, (0.1, 2), (25, 50), (5, 10), (20, 80)),
    NetworkRangeSpec("WLAN", 10, 50, (1, 11), (100, 150), (10, 20), (20, 80)),
    NetworkRangeSpec("WIMAX", 40, 60, (1, 60), (60, 100), (3, 10), (20, 80)),
)

ALL_VARIANTS = tuple(VariantId)


@dataclass(frozen=True)
class SimulationConfig:
    traffic_class: str
    seed: int = 42
    decision_points: int = 12
    replications: int = 1
    variants: Tuple[VariantId, ...] = ALL_VARIANTS
    network_specs: Tuple[NetworkRangeSpec, ...] = DEFAULT_NETWORKS

    def __post_init__(self) -> None:
        if self.decision_points < 1:
            raise ValueError("decision_points must be at least 1")
        if self.replications < 1:
            raise ValueError("replications must be at least 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        object.__setattr__(self, "variants", tuple(VariantId(v) for v in self.variants))
        ids = [s.network_id for s in self.network_specs]
        if not ids or len(set(ids)) != len(ids):
            raise ValueError("network ids must be present and unique")


def sample_snapshot(spec: NetworkRangeSpec, rng: np.random.Generator) -> NetworkSnapshot:
    ab, d, j, l = (float(rng.uniform(lo, hi)) for lo, hi in
                   (spec.ab_range, spec.d_range, spec.j_range, spec.l_range))
    return NetworkSnapshot(spec.network_id, float(spec.cb), float(spec.s), ab, d, j, l)


def detect_abnormality(
    variant: VariantId,
    profile: TrafficClassProfile,
    snapshots: Sequence[NetworkSnapshot],
    history: Optional[HistoryState] = None,
    previous_selection: Optional[str] = None,
) -> bool:
    """Whether dropping the lowest-ranked network changes the top choice.

    The survivors are re-ranked from scratch with the same variant: level-3
    weights are re-derived over the reduced set and the Euclidean
    normalisation runs over the survivors only. Fewer than three networks
    never count as an event.
    """
    if len(snapshots) < 3:
        return False
    full = select_network(variant, profile, snapshots, history, previous_selection)
    return _reversal(variant, profile, snapshots, history, previous_selection, full.ranking)


def _reversal(variant, profile, snapshots, history, previous_selection, ranking) -> bool:
    if len(snapshots) < 3:
        return False
    worst = ranking[-1]
    survivors = [s for s in snapshots if s.network_id != worst]
    reduced = select_network(variant, profile, survivors, history, previous_selection)
    return reduced.selected != ranking[0]


def count_handoffs(selections: Sequence[str]) -> int:
    return sum(1 for a, b in zip(selections, selections[1:]) if a != b)


@dataclass(frozen=True)
class RunMetrics:
    abnormality_events: int
    handoff_count: int
    decision_points: int
    selections: Tuple[str, ...]

    @property
    def abnormality_rate(self) -> float:
        return self.abnormality_events / self.decision_points

    @property
    def handoff_rate(self) -> float:
        return self.handoff_count / self.decision_points


@dataclass(frozen=True)
class VariantStep:
    """One variant's view of one decision point."""

    ranking: Tuple[str, ...]
    closeness: Dict[str, float]
    selected: str
    handoff: bool
    abnormal: bool


@dataclass(frozen=True)
class DecisionPointTrace:
    index: int
    snapshots: Tuple[NetworkSnapshot, ...]
    steps: Dict[VariantId, VariantStep]


@dataclass(frozen=True)
class ReplicationResult:
    replication: int
    metrics: Dict[VariantId, RunMetrics]
    trace: Tuple[DecisionPointTrace, ...]


@dataclass(frozen=True)
class Aggregate:
    mean_abnormality_rate: float
    std_abnormality_rate: float
    mean_handoff_rate: float
    std_handoff_rate: float


@dataclass(frozen=True)
class SimulationReport:
    config: SimulationConfig
    replications: Tuple[ReplicationResult, ...]
    aggregates: Dict[VariantId, Aggregate] = field(default_factory=dict)

    def rates(self, variant: VariantId, metric: str) -> np.ndarray:
        """Per-replication ``"abnormality"`` or ``"handoff"`` rates of a variant."""
        attr = f"{metric}_rate"
        return np.array([getattr(r.metrics[variant], attr) for r in self.replications])


def aggregate(reps: Sequence[ReplicationResult], variants: Sequence[VariantId]) -> Dict[VariantId, Aggregate]:
    """Means and sample standard deviations of the per-replication rates."""
    out = {}
    for v in variants:
        ab = [r.metrics[v].abnormality_rate for r in reps]
        ho = [r.metrics[v].handoff_rate for r in reps]
        out[v] = Aggregate(_mean(ab), _std(ab), _mean(ho), _std(ho))
    return out


def _mean(xs: Sequence[float]) -> float:
    return math.fsum(xs) / len(xs)


def _std(xs: Sequence[float]) -> float:
    if len(xs) < 2:
        return 0.0
    m = _mean(xs)
    return math.sqrt(math.fsum((x - m) ** 2 for x in xs) / (len(xs) - 1))


def run_replication(
    config: SimulationConfig,
    profile: TrafficClassProfile,
    rng: np.random.Generator,
    replication: int = 0,
) -> ReplicationResult:
    nets = [s.network_id for s in config.network_specs]
    history = {v: HistoryState.fresh(nets) for v in config.variants}
    selections: Dict[VariantId, List[str]] = {v: [] for v in config.variants}
    events = {v: 0 for v in config.variants}
    trace = []
    for t in range(config.decision_points):
        snaps = tuple(sample_snapshot(spec, rng) for spec in config.network_specs)
        steps = {}
        for v in config.variants:
            prev = selections[v][-1] if selections[v] else None
            h = history[v] if v.uses_history else None
            dec = select_network(v, profile, snaps, h, prev)
            abnormal = _reversal(v, profile, snaps, h, prev, dec.ranking)
            events[v] += abnormal
            selections[v].append(dec.selected)
            history[v] = update_history(history[v], dec.closeness)
            steps[v] = VariantStep(dec.ranking, dec.closeness, dec.selected, dec.handoff, abnormal)
        trace.append(DecisionPointTrace(t, snaps, steps))
    metrics = {
        v: RunMetrics(events[v], count_handoffs(selections[v]), config.decision_points,
                      tuple(selections[v]))
        for v in config.variants
    }
    return ReplicationResult(replication, metrics, tuple(trace))


def run_simulation(config: SimulationConfig, profile: TrafficClassProfile) -> SimulationReport:
    """Run every replication of one traffic class.

    Replication ``k`` draws from the ``k``-th child of ``SeedSequence(seed)``,
    so results do not depend on execution order.
    """
    missing = set(s.network_id for s in config.network_specs) - set(profile.networks)
    if missing:
        raise ValueError(f"profile {profile.name} has no judgments for {sorted(missing)}")
    children = np.random.SeedSequence(config.seed).spawn(config.replications)
    reps = []
    for k, ss in enumerate(children):
        reps.append(run_replication(config, profile, np.random.default_rng(ss), k))
        if (k + 1) % 100 == 0:
            log.debug("%s: %d/%d replications", profile.name, k + 1, config.replications)
    reps.sort(key=lambda r: r.replication)
    return SimulationReport(config, tuple(reps), aggregate(reps, config.variants))
