"""ANP + TOPSIS network selection (variants TOPSIS1..TOPSIS4).

The variants differ along two switches: whether each network gets its own
criterion weights from the level-3 judgments, and whether a history column
carrying each network's previous closeness score joins the decision matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Mapping, Optional, Sequence, Tuple

import numpy as np

from .anp import (
    LEAF_CRITERIA,
    LEVEL1,
    LEVEL2,
    ANPError,
    HierarchyWeights,
    PairwiseMatrix,
    compose_hierarchy,
    consistency,
    derive_weights,
    pairwise_from_labels,
)
from .topsis import ClosenessScores, CriterionDirection, DecisionMatrix, topsis

B, C = CriterionDirection.BENEFIT, CriterionDirection.COST

DEFAULT_DIRECTIONS: Dict[str, CriterionDirection] = {
    "CB": C, "S": B, "AB": B, "D": C, "J": C, "L": C, "H": B,
}
SNAPSHOT_CRITERIA = ("CB", "S", "AB", "D", "J", "L")
TRAFFIC_CLASSES = ("background", "conversational", "interactive", "streaming")


class InconsistentJudgmentsError(ANPError):
    pass


class ProfileError(ValueError):
    """Malformed traffic-class profile."""


class IncompleteHistoryError(ValueError):
    pass


class VariantId(str, Enum):
    TOPSIS1 = "TOPSIS1"
    TOPSIS2 = "TOPSIS2"
    TOPSIS3 = "TOPSIS3"
    TOPSIS4 = "TOPSIS4"

    @property
    def differentiated(self) -> bool:
        return self in (VariantId.TOPSIS3, VariantId.TOPSIS4)

    @property
    def uses_history(self) -> bool:
        return self in (VariantId.TOPSIS2, VariantId.TOPSIS4)

    @property
    def criteria(self) -> Tuple[str, ...]:
        return LEAF_CRITERIA if self.uses_history else SNAPSHOT_CRITERIA

    @classmethod
    def parse(cls, text: str) -> "VariantId":
        key = text.strip().upper().replace("-", "")
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown variant {text!r}") from None


@dataclass(frozen=True)
class NetworkSnapshot:
    network_id: str
    cb: float
    s: float
    ab: float
    d: float
    j: float
    l: float

    def __post_init__(self) -> None:
        vals = self.values()
        if not all(np.isfinite(vals)) or min(vals) < 0:
            raise ValueError(f"snapshot of {self.network_id} has invalid values {vals}")

    def values(self) -> Tuple[float, ...]:
        return (self.cb, self.s, self.ab, self.d, self.j, self.l)


@dataclass(frozen=True)
class HistoryState:
    """Last closeness score per network; starts at 1 for every network."""

    values: Mapping[str, float]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", dict(self.values))
        for net, h in self.values.items():
            if not 0.0 <= h <= 1.0:
                raise ValueError(f"history of {net} is {h}, outside [0, 1]")

    @classmethod
    def fresh(cls, networks: Sequence[str]) -> "HistoryState":
        return cls({n: 1.0 for n in networks})

    def __getitem__(self, network: str) -> float:
        return self.values[network]


@dataclass(frozen=True)
class TrafficClassProfile:
    """Judgment matrices for one traffic class.

    ``level3`` holds, per leaf criterion, a comparison of the candidate
    networks. Composed weights are cached per network subset.
    """

    name: str
    networks: Tuple[str, ...]
    level1: PairwiseMatrix
    level2: PairwiseMatrix
    level3: Mapping[str, PairwiseMatrix]
    directions: Mapping[str, CriterionDirection] = field(
        default_factory=lambda: dict(DEFAULT_DIRECTIONS))
    _cache: Dict[Any, Any] = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.level1.labels != LEVEL1:
            raise ProfileError(f"level-1 elements must be {LEVEL1}, got {self.level1.labels}")
        if self.level2.labels != LEVEL2:
            raise ProfileError(f"level-2 elements must be {LEVEL2}, got {self.level2.labels}")
        missing = [c for c in LEAF_CRITERIA if c not in self.level3]
        if missing:
            raise ProfileError(f"{self.name}: no level-3 judgments for {', '.join(missing)}")
        for crit, mat in self.level3.items():
            if crit not in LEAF_CRITERIA:
                raise ProfileError(f"{self.name}: unknown level-3 criterion {crit!r}")
            if set(mat.labels) != set(self.networks):
                raise ProfileError(f"{self.name}: level-3 {crit} compares {mat.labels}, "
                                   f"expected {self.networks}")
        if set(self.directions) != set(LEAF_CRITERIA):
            raise ProfileError("a direction is required for every leaf criterion")

    def matrices(self) -> Dict[str, PairwiseMatrix]:
        """Every judgment matrix keyed by a readable name."""
        out = {"level1": self.level1, "level2": self.level2}
        out.update({f"level3.{c}": self.level3[c] for c in LEAF_CRITERIA})
        return out

    def hierarchy(self, networks: Optional[Sequence[str]] = None) -> HierarchyWeights:
        nets = tuple(networks) if networks is not None else self.networks
        key = ("hierarchy", nets)
        if key not in self._cache:
            level3 = {c: derive_weights(self._restrict(self.level3[c], nets))
                      for c in LEAF_CRITERIA}
            self._cache[key] = HierarchyWeights(
                derive_weights(self.level1), derive_weights(self.level2), level3)
        return self._cache[key]

    def weight_matrix(self, networks: Sequence[str], variant: VariantId) -> np.ndarray:
        """Rows of composed weights for ``networks`` under ``variant``.

        Uniform-weight variants get identical rows.
        """
        nets = tuple(networks)
        key = ("weights", nets, variant.differentiated, variant.uses_history)
        if key not in self._cache:
            composed = compose_hierarchy(self.hierarchy(nets), variant.differentiated,
                                         variant.criteria)
            w = np.array([composed[n].weights for n in nets])
            w.setflags(write=False)
            self._cache[key] = w
        return self._cache[key]

    @staticmethod
    def _restrict(mat: PairwiseMatrix, nets: Tuple[str, ...]) -> PairwiseMatrix:
        return mat if mat.labels == nets else mat.submatrix(nets)


def _judgment_pairs(block: Any, where: str) -> Dict[Tuple[str, str], Any]:
    if not isinstance(block, Mapping):
        raise ProfileError(f"{where}: expected a mapping of judgments")
    pairs = {}
    for a, row in block.items():
        if not isinstance(row, Mapping):
            raise ProfileError(f"{where}.{a}: expected a mapping of judgments")
        for b, v in row.items():
            pairs[(str(a), str(b))] = v
    return pairs


def _checked(labels: Sequence[str], block: Any, where: str) -> PairwiseMatrix:
    try:
        mat = pairwise_from_labels(labels, _judgment_pairs(block, where))
    except ANPError as exc:
        raise ProfileError(f"{where}: {exc}") from None
    rep = consistency(mat)
    if not rep.acceptable:
        raise InconsistentJudgmentsError(
            f"{where}: consistency ratio {rep.cr:.4f} is not below 0.1")
    return mat


def load_profile(
    config: Mapping[str, Any],
    networks: Optional[Sequence[str]] = None,
    directions: Optional[Mapping[str, CriterionDirection]] = None,
) -> TrafficClassProfile:
    """Build a traffic-class profile from nested judgment mappings.

    ``config`` carries ``name``, ``level1``, ``level2`` and ``level3``.
    A judgment block looks like ``{"QoS": {"S": 3, "CB": "1/2"}}``: each inner
    value says how much more important the outer element is. Omitted pairs
    are an error; every matrix must have a consistency ratio below 0.1.

    Raises:
        ProfileError: missing sections, unknown elements, incomplete judgments.
        InconsistentJudgmentsError: a matrix fails the consistency check; the
            message names it.
    """
    if not isinstance(config, Mapping):
        raise ProfileError("profile must be a mapping")
    name = str(config.get("name", "unnamed"))
    for sec in ("level1", "level2", "level3"):
        if sec not in config:
            raise ProfileError(f"{name}: missing section {sec!r}")
    l3 = config["level3"]
    if not isinstance(l3, Mapping):
        raise ProfileError(f"{name}.level3: expected a mapping per criterion")
    missing = [c for c in LEAF_CRITERIA if c not in l3]
    if missing:
        raise ProfileError(f"{name}.level3: missing criterion {', '.join(missing)}")
    unknown = [c for c in l3 if c not in LEAF_CRITERIA]
    if unknown:
        raise ProfileError(f"{name}.level3: unknown criterion {', '.join(map(str, unknown))}")
    if networks is None:
        seen = []
        for block in l3.values():
            for a, row in (block or {}).items():
                for x in [a, *row]:
                    if str(x) not in seen:
                        seen.append(str(x))
        networks = seen
    nets = tuple(networks)
    return TrafficClassProfile(
        name=name,
        networks=nets,
        level1=_checked(LEVEL1, config["level1"], f"{name}.level1"),
        level2=_checked(LEVEL2, config["level2"], f"{name}.level2"),
        level3={c: _checked(nets, l3[c], f"{name}.level3.{c}") for c in LEAF_CRITERIA},
        directions=dict(directions or DEFAULT_DIRECTIONS),
    )


def build_decision_matrix(
    snapshots: Sequence[NetworkSnapshot],
    history: Optional[HistoryState] = None,
    include_history: bool = False,
    directions: Mapping[str, CriterionDirection] = DEFAULT_DIRECTIONS,
) -> DecisionMatrix:
    """Columns CB, S, AB, D, J, L and optionally H, one row per network."""
    if not snapshots:
        raise ValueError("at least one network snapshot is required")
    rows = [list(s.values()) for s in snapshots]
    crits = SNAPSHOT_CRITERIA
    if include_history:
        if history is None:
            raise IncompleteHistoryError("history requested but none given")
        for s, row in zip(snapshots, rows):
            if s.network_id not in history.values:
                raise IncompleteHistoryError(f"no history entry for {s.network_id}")
            row.append(history[s.network_id])
        crits = LEAF_CRITERIA
    return DecisionMatrix(
        tuple(s.network_id for s in snapshots),
        crits,
        tuple(directions[c] for c in crits),
        np.array(rows, dtype=float),
    )


@dataclass(frozen=True)
class SelectionDecision:
    networks: Tuple[str, ...]
    ranking: Tuple[str, ...]
    scores: ClosenessScores
    selected: str
    handoff: bool

    @property
    def closeness(self) -> Dict[str, float]:
        return dict(zip(self.networks, (float(x) for x in self.scores.c)))


def select_network(
    variant: VariantId,
    profile: TrafficClassProfile,
    snapshots: Sequence[NetworkSnapshot],
    history: Optional[HistoryState] = None,
    previous_selection: Optional[str] = None,
) -> SelectionDecision:
    """Rank the available networks and pick the top one.

    ``history`` is only consulted by TOPSIS2/TOPSIS4. Ties go to
    ``previous_selection``.
    """
    variant = VariantId(variant)
    if variant.uses_history and history is None:
        history = HistoryState.fresh([s.network_id for s in snapshots])
    d = build_decision_matrix(snapshots, history, variant.uses_history, profile.directions)
    w = profile.weight_matrix(d.alternatives, variant)
    res = topsis(d, w, sticky=previous_selection)
    selected = res.ranking[0]
    return SelectionDecision(
        d.alternatives, tuple(res.ranking), res.scores, selected,
        previous_selection is not None and selected != previous_selection)


def update_history(history: HistoryState, scores: Mapping[str, float]) -> HistoryState:
    """Replace each network's history with its latest closeness score.

    Raises:
        IncompleteHistoryError: the score set does not cover the same networks.
    """
    if set(scores) != set(history.values):
        raise IncompleteHistoryError(
            f"scores cover {sorted(scores)}, history covers {sorted(history.values)}")
    return HistoryState({n: float(scores[n]) for n in history.values})
