"""TOPSIS ranking with benefit/cost criteria.

Weights may be shared by all alternatives (shape ``(n,)``) or given per
alternative (shape ``(m, n)``), in which case row ``i`` of the normalised
matrix is scaled by alternative ``i``'s own vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np


class CriterionDirection(str, Enum):
    BENEFIT = "benefit"  # higher is better
    COST = "cost"  # lower is better


class DimensionError(ValueError):
    pass


@dataclass(frozen=True)
class DecisionMatrix:
    alternatives: Tuple[str, ...]
    criteria: Tuple[str, ...]
    directions: Tuple[CriterionDirection, ...]
    values: np.ndarray

    def __post_init__(self) -> None:
        m, n = len(self.alternatives), len(self.criteria)
        if m < 1 or n < 1:
            raise DimensionError("need at least one alternative and one criterion")
        if len(self.directions) != n:
            raise DimensionError("one direction per criterion required")
        v = np.asarray(self.values, dtype=float)
        if v.shape != (m, n):
            raise DimensionError(f"values shape {v.shape} != ({m}, {n})")
        if not np.all(np.isfinite(v)):
            raise ValueError("decision values must be finite")
        cost = np.array([d is CriterionDirection.COST for d in self.directions])
        if np.any(v[:, cost] < 0):
            raise ValueError("cost criteria must be nonnegative")
        object.__setattr__(self, "values", v)

    def drop(self, alternative: str) -> "DecisionMatrix":
        keep = [k for k, a in enumerate(self.alternatives) if a != alternative]
        return DecisionMatrix(
            tuple(self.alternatives[k] for k in keep),
            self.criteria, self.directions, self.values[keep])


@dataclass(frozen=True)
class IdealSolutions:
    ideal: np.ndarray
    anti_ideal: np.ndarray


@dataclass(frozen=True)
class ClosenessScores:
    s_plus: np.ndarray
    s_minus: np.ndarray
    c: np.ndarray


def normalize_euclidean(d: Union[DecisionMatrix, np.ndarray]) -> np.ndarray:
    """Divide each column by its Euclidean norm; all-zero columns stay zero."""
    x = d.values if isinstance(d, DecisionMatrix) else np.asarray(d, dtype=float)
    norms = np.sqrt((x * x).sum(axis=0))
    safe = np.where(norms > 0, norms, 1.0)
    return x / safe


def apply_weights(r: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Scale the normalised matrix by shared ``(n,)`` or per-row ``(m, n)`` weights.

    Raises:
        DimensionError: weight count does not match the criteria.
        ValueError: a weight vector is negative somewhere or does not sum to 1.
    """
    w = np.asarray(weights, dtype=float)
    if w.ndim == 1:
        if w.shape[0] != r.shape[1]:
            raise DimensionError(f"{w.shape[0]} weights for {r.shape[1]} criteria")
    elif w.shape != r.shape:
        raise DimensionError(f"weight matrix {w.shape} does not match {r.shape}")
    if np.any(w < 0) or np.any(np.abs(w.sum(axis=-1) - 1.0) > 1e-10):
        raise ValueError("each weight vector must be nonnegative and sum to 1")
    return r * w


def ideal_solutions(v: np.ndarray, directions: Sequence[CriterionDirection]) -> IdealSolutions:
    hi, lo = v.max(axis=0), v.min(axis=0)
    benefit = np.array([d is CriterionDirection.BENEFIT for d in directions])
    return IdealSolutions(np.where(benefit, hi, lo), np.where(benefit, lo, hi))


def separations(v: np.ndarray, ideals: IdealSolutions) -> Tuple[np.ndarray, np.ndarray]:
    s_plus = np.sqrt(((v - ideals.ideal) ** 2).sum(axis=1))
    s_minus = np.sqrt(((v - ideals.anti_ideal) ** 2).sum(axis=1))
    return s_plus, s_minus


def closeness(s_plus: np.ndarray, s_minus: np.ndarray) -> ClosenessScores:
    """Relative closeness S-/(S+ + S-); 0.5 where both distances vanish."""
    s_plus = np.asarray(s_plus, dtype=float)
    s_minus = np.asarray(s_minus, dtype=float)
    total = s_plus + s_minus
    c = np.divide(s_minus, total, out=np.full_like(total, 0.5), where=total > 0)
    return ClosenessScores(s_plus, s_minus, c)


def rank(
    scores: Union[ClosenessScores, np.ndarray],
    labels: Optional[Sequence[str]] = None,
    sticky: Optional[str] = None,
    tie_tol: float = 1e-12,
) -> List:
    """Order alternatives by decreasing closeness.

    Scores within ``tie_tol`` of each other are treated as tied. Within a tie
    the ``sticky`` alternative (the currently connected network) goes first;
    the rest keep input order.

    Returns:
        Labels in rank order, or indices when ``labels`` is None.
    """
    c = scores.c if isinstance(scores, ClosenessScores) else np.asarray(scores, dtype=float)
    names = list(labels) if labels is not None else list(range(len(c)))
    order = sorted(range(len(c)), key=lambda k: -c[k])
    out: List[int] = []
    k = 0
    while k < len(order):
        group = [order[k]]
        head = c[order[k]]
        k += 1
        while k < len(order) and head - c[order[k]] <= tie_tol:
            group.append(order[k])
            k += 1
        group.sort(key=lambda i: (names[i] != sticky, i))
        out.extend(group)
    return [names[i] for i in out]


@dataclass(frozen=True)
class TopsisResult:
    normalized: np.ndarray
    weighted: np.ndarray
    ideals: IdealSolutions
    scores: ClosenessScores
    ranking: List[str]


def topsis(
    d: DecisionMatrix,
    weights: Union[np.ndarray, Mapping[str, Sequence[float]]],
    sticky: Optional[str] = None,
) -> TopsisResult:
    """Run the full TOPSIS pipeline on a decision matrix.

    Args:
        d: alternatives x criteria performance values.
        weights: one vector shared by all alternatives, an ``(m, n)`` array,
            or a mapping from alternative label to its own vector.
        sticky: alternative preferred on ties.
    """
    if isinstance(weights, Mapping):
        try:
            w = np.array([weights[a] for a in d.alternatives], dtype=float)
        except KeyError as exc:
            raise DimensionError(f"no weight vector for alternative {exc.args[0]!r}") from None
    else:
        w = np.asarray(weights, dtype=float)
    r = normalize_euclidean(d)
    v = apply_weights(r, w)
    ideals = ideal_solutions(v, d.directions)
    s_plus, s_minus = separations(v, ideals)
    scores = closeness(s_plus, s_minus)
    return TopsisResult(r, v, ideals, scores, rank(scores, d.alternatives, sticky))
