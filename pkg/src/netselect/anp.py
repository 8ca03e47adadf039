"""Analytic network process weighting.

Pairwise comparison matrices on the Saaty 1-9 scale, column-normalise /
row-average weight derivation, consistency ratio, supermatrix assembly and
limit, and the three-level hierarchy composition used by the network
selection strategy.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

# Random consistency index by matrix order (orders 1 and 2 are always consistent).
RANDOM_INDEX = {1: 0.0, 2: 0.0, 3: 0.58, 4: 0.90, 5: 1.12, 6: 1.24, 7: 1.32,
                8: 1.41, 9: 1.45, 10: 1.49}

CR_THRESHOLD = 0.1

SAATY_VALUES = frozenset(
    [Fraction(k) for k in range(1, 10)] + [Fraction(1, k) for k in range(2, 10)]
)

Judgment = Union[int, float, str, Fraction]


class ANPError(ValueError):
    """Base class for weighting errors."""


class InvalidJudgmentError(ANPError):
    pass


class IncompleteJudgmentsError(ANPError):
    pass


class DegenerateWeightsError(ANPError):
    pass


class InvalidPriorityError(ANPError):
    pass


class NoLimitError(ANPError):
    """Raised when the supermatrix powers do not settle."""


class IncompleteHierarchyError(ANPError):
    pass


def saaty(value: Judgment) -> Fraction:
    """Coerce a judgment to an exact Saaty ratio.

    Accepts ints, Fractions, strings such as ``"1/3"`` and floats that are
    within 1e-9 of an admissible ratio.

    Raises:
        InvalidJudgmentError: if the value is not one of the 17 admissible ratios.
    """
    try:
        if isinstance(value, float):
            frac = Fraction(value).limit_denominator(9)
            if abs(float(frac) - value) > 1e-9:
                raise InvalidJudgmentError(f"{value!r} is not a Saaty ratio")
        elif isinstance(value, bool):
            raise InvalidJudgmentError(f"{value!r} is not a Saaty ratio")
        else:
            frac = Fraction(str(value).strip()) if isinstance(value, str) else Fraction(value)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise InvalidJudgmentError(f"{value!r} is not a Saaty ratio") from exc
    if frac not in SAATY_VALUES:
        raise InvalidJudgmentError(f"{value!r} is not a Saaty ratio")
    return frac


@dataclass(frozen=True)
class PairwiseMatrix:
    """Positive reciprocal judgment matrix.

    ``values`` is stored as a float array; ``judgments`` keeps the exact
    upper-triangle ratios it was built from (0-based index pairs).
    """

    labels: Tuple[str, ...]
    values: np.ndarray = field(repr=False, compare=False)
    judgments: Tuple[Tuple[Tuple[int, int], Fraction], ...] = ()

    def __post_init__(self) -> None:
        a = self.values
        n = len(self.labels)
        if a.shape != (n, n):
            raise ANPError(f"matrix shape {a.shape} does not match {n} labels")
        if np.any(~np.isfinite(a)) or np.any(a <= 0):
            raise ANPError("pairwise entries must be finite and positive")
        if not np.allclose(np.diag(a), 1.0, rtol=0, atol=1e-12):
            raise ANPError("pairwise diagonal must be 1")
        if not np.allclose(a * a.T, 1.0, rtol=0, atol=1e-12):
            raise ANPError("pairwise matrix is not reciprocal")
        a.setflags(write=False)

    @property
    def n(self) -> int:
        return len(self.labels)

    def upper(self) -> Dict[Tuple[str, str], Fraction]:
        """Upper-triangle judgments keyed by label pairs."""
        return {(self.labels[i], self.labels[j]): v for (i, j), v in self.judgments}

    def submatrix(self, labels: Sequence[str]) -> "PairwiseMatrix":
        """Restrict the comparison to a subset of the compared elements."""
        idx = [self.labels.index(lab) for lab in labels]
        sub = self.values[np.ix_(idx, idx)].copy()
        pos = {old: new for new, old in enumerate(idx)}
        judg = []
        for (i, j), v in self.judgments:
            if i in pos and j in pos:
                a, b = pos[i], pos[j]
                judg.append(((a, b), v) if a < b else ((b, a), 1 / v))
        return PairwiseMatrix(tuple(labels), sub, tuple(sorted(judg)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PairwiseMatrix):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.values, other.values)

    def __hash__(self) -> int:
        return hash((self.labels, self.values.tobytes()))


def build_pairwise(
    judgments: Mapping[Tuple[int, int], Judgment],
    n: int,
    labels: Optional[Sequence[str]] = None,
) -> PairwiseMatrix:
    """Assemble a reciprocal matrix from its upper triangle.

    Args:
        judgments: ``(i, j) -> value`` for every ``1 <= i < j <= n`` (1-based,
            matching the usual x_ij notation). ``value`` says how much more
            important element i is than element j.
        n: matrix order.
        labels: element names; defaults to ``"1".."n"``.

    Raises:
        IncompleteJudgmentsError: a pair is missing or an index is out of range.
        InvalidJudgmentError: a value is off the Saaty scale.
    """
    if n < 1:
        raise IncompleteJudgmentsError("matrix order must be at least 1")
    labels = tuple(labels) if labels is not None else tuple(str(k) for k in range(1, n + 1))
    if len(labels) != n:
        raise ANPError(f"expected {n} labels, got {len(labels)}")
    for i, j in judgments:
        if not (1 <= i < j <= n):
            raise IncompleteJudgmentsError(f"judgment key {(i, j)} outside the upper triangle")
    a = np.ones((n, n))
    exact = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if (i, j) not in judgments:
                raise IncompleteJudgmentsError(
                    f"missing judgment for ({labels[i - 1]}, {labels[j - 1]})")
            v = saaty(judgments[(i, j)])
            a[i - 1, j - 1] = float(v)
            a[j - 1, i - 1] = float(1 / v)
            exact.append(((i - 1, j - 1), v))
    return PairwiseMatrix(labels, a, tuple(exact))


def pairwise_from_labels(
    labels: Sequence[str], judgments: Mapping[Tuple[str, str], Judgment]
) -> PairwiseMatrix:
    """Like :func:`build_pairwise` but keyed by element names.

    A pair may be given in either orientation; ``(b, a): 3`` is read as
    ``(a, b): 1/3``.
    """
    index = {lab: k for k, lab in enumerate(labels, start=1)}
    upper: Dict[Tuple[int, int], Fraction] = {}
    for (a, b), v in judgments.items():
        if a not in index or b not in index:
            raise IncompleteJudgmentsError(f"unknown element in pair ({a}, {b})")
        i, j = index[a], index[b]
        if i == j:
            if saaty(v) != 1:
                raise InvalidJudgmentError(f"self comparison of {a} must be 1")
            continue
        if (min(i, j), max(i, j)) in upper:
            raise ANPError(f"pair ({a}, {b}) given twice")
        upper[(i, j) if i < j else (j, i)] = saaty(v) if i < j else 1 / saaty(v)
    return build_pairwise(upper, len(labels), labels)


def uniform_pairwise(labels: Sequence[str]) -> PairwiseMatrix:
    n = len(labels)
    return build_pairwise({(i, j): 1 for i in range(1, n + 1) for j in range(i + 1, n + 1)},
                          n, labels)


@dataclass(frozen=True)
class WeightVector:
    labels: Tuple[str, ...]
    weights: Tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.labels) != len(self.weights):
            raise ANPError("labels and weights differ in length")
        if any(w < 0 for w in self.weights):
            raise ANPError("weights must be nonnegative")
        if abs(sum(self.weights) - 1.0) > 1e-10:
            raise ANPError(f"weights sum to {sum(self.weights)!r}, not 1")

    @classmethod
    def from_array(cls, labels: Sequence[str], w: np.ndarray) -> "WeightVector":
        return cls(tuple(labels), tuple(float(x) for x in w))

    @classmethod
    def uniform(cls, labels: Sequence[str]) -> "WeightVector":
        n = len(labels)
        return cls(tuple(labels), (1.0 / n,) * n)

    def as_array(self) -> np.ndarray:
        return np.array(self.weights)

    def as_dict(self) -> Dict[str, float]:
        return dict(zip(self.labels, self.weights))

    def __getitem__(self, label: str) -> float:
        return self.weights[self.labels.index(label)]


def normalize_columns(a: PairwiseMatrix) -> np.ndarray:
    """Divide every entry by its column sum."""
    x = a.values
    return x / x.sum(axis=0)


def derive_weights(a: PairwiseMatrix) -> WeightVector:
    """Row averages of the column-normalised matrix."""
    w = normalize_columns(a).mean(axis=1)
    # Row averages of a column-stochastic matrix sum to 1 up to rounding.
    w = w / w.sum()
    return WeightVector.from_array(a.labels, w)


def random_index(n: int) -> float:
    """Saaty's random consistency index for matrices of order ``n`` (1..10)."""
    try:
        return RANDOM_INDEX[n]
    except KeyError:
        raise ANPError(f"no random index tabulated for order {n}") from None


@dataclass(frozen=True)
class ConsistencyReport:
    lambda_max: float
    ci: float
    ri: float
    cr: float
    acceptable: bool
    b: Tuple[float, ...]


def consistency(a: PairwiseMatrix, w: Optional[WeightVector] = None) -> ConsistencyReport:
    """Consistency ratio of a judgment matrix.

    Uses b_i = (A w)_i / w_i and lambda_max = mean(b). For orders 1 and 2 the
    ratio is 0 by definition.

    Raises:
        DegenerateWeightsError: a weight component is zero.
    """
    if w is None:
        w = derive_weights(a)
    if len(w.weights) != a.n:
        raise ANPError("weight vector does not match matrix order")
    wv = w.as_array()
    if np.any(wv <= 0):
        raise DegenerateWeightsError("zero weight component; cannot form b_i")
    n = a.n
    b = (a.values @ wv) / wv
    lam = float(b.mean())
    if n <= 2:
        return ConsistencyReport(lam, 0.0, 0.0, 0.0, True, tuple(b.tolist()))
    ci = (lam - n) / (n - 1)
    ri = random_index(n)
    cr = ci / ri
    return ConsistencyReport(lam, ci, ri, cr, cr < CR_THRESHOLD, tuple(b.tolist()))


# ---------------------------------------------------------------------------
# Supermatrix


@dataclass(frozen=True)
class Cluster:
    name: str
    elements: Tuple[str, ...]


@dataclass(frozen=True)
class Supermatrix:
    clusters: Tuple[Cluster, ...]
    matrix: np.ndarray = field(repr=False, compare=False)

    @property
    def elements(self) -> Tuple[str, ...]:
        return tuple(e for c in self.clusters for e in c.elements)

    def block(self, target: str, source: str) -> np.ndarray:
        """Rows of cluster ``target`` against columns of cluster ``source``."""
        return self.matrix[self._slice(target), self._slice(source)]

    def _slice(self, name: str) -> slice:
        start = 0
        for c in self.clusters:
            if c.name == name:
                return slice(start, start + len(c.elements))
            start += len(c.elements)
        raise KeyError(name)


def form_supermatrix(
    clusters: Sequence[Tuple[str, Sequence[str]]],
    local_priorities: Mapping[Tuple[str, str], WeightVector],
) -> Supermatrix:
    """Place local priority vectors into a partitioned matrix.

    Args:
        clusters: ``(cluster_name, element_names)`` in row/column order.
        local_priorities: ``(source_element, target_cluster) -> WeightVector``;
            the vector describes how ``source_element`` weighs the elements of
            ``target_cluster`` and becomes that element's column segment.

    Raises:
        InvalidPriorityError: unknown cluster/element or a vector whose labels
            do not match the target cluster.
    """
    cl = tuple(Cluster(name, tuple(els)) for name, els in clusters)
    names = [c.name for c in cl]
    if len(set(names)) != len(names):
        raise InvalidPriorityError("duplicate cluster name")
    elements = [e for c in cl for e in c.elements]
    if len(set(elements)) != len(elements):
        raise InvalidPriorityError("element names must be unique across clusters")
    col = {e: k for k, e in enumerate(elements)}
    offsets = {}
    start = 0
    for c in cl:
        offsets[c.name] = start
        start += len(c.elements)
    m = np.zeros((len(elements), len(elements)))
    for (source, target), wv in local_priorities.items():
        if source not in col:
            raise InvalidPriorityError(f"unknown source element {source!r}")
        if target not in offsets:
            raise InvalidPriorityError(f"unknown target cluster {target!r}")
        tc = cl[names.index(target)]
        if len(wv.weights) != len(tc.elements):
            raise InvalidPriorityError(
                f"priority of {source!r} over {target!r} has {len(wv.weights)} entries, "
                f"cluster has {len(tc.elements)}")
        if wv.labels != tc.elements:
            raise InvalidPriorityError(f"priority labels {wv.labels} do not match {tc.elements}")
        o = offsets[target]
        m[o:o + len(tc.elements), col[source]] = wv.weights
    return Supermatrix(cl, m)


def column_normalize(m: np.ndarray) -> np.ndarray:
    """Scale every nonzero column to sum 1; zero columns stay zero."""
    s = m.sum(axis=0)
    out = np.zeros_like(m, dtype=float)
    nz = s > 0
    out[:, nz] = m[:, nz] / s[nz]
    return out


@dataclass(frozen=True)
class LimitResult:
    matrix: np.ndarray = field(repr=False)
    priorities: Dict[str, WeightVector]
    iterations: int
    cyclic: bool


def limit_supermatrix(s: Supermatrix, tol: float = 1e-9, max_iter: int = 200) -> LimitResult:
    """Raise the column-normalised supermatrix to its limiting power.

    Powers are taken by repeated squaring until successive iterates agree to
    ``tol`` (max-abs). If the settled power is not fixed under one more
    multiplication the structure is periodic; the iterates over one period
    are averaged.

    Cluster priorities are read from the mean column of the limit matrix and
    normalised per cluster. Clusters whose limiting mass is zero (transient
    clusters, e.g. criteria in a pure hierarchy) are omitted.

    Raises:
        NoLimitError: squaring did not settle within ``max_iter`` steps, or no
            period up to the matrix order closes the cycle.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    w = column_normalize(s.matrix)
    cur = w
    for it in range(1, max_iter + 1):
        nxt = cur @ cur
        if np.max(np.abs(nxt - cur)) < tol:
            cur = nxt
            break
        cur = nxt
    else:
        raise NoLimitError(f"supermatrix powers did not settle in {max_iter} squarings")

    cyclic = False
    if np.max(np.abs(w @ cur - cur)) >= tol:
        cyclic = True
        acc = [cur]
        step = cur
        for _ in range(w.shape[0]):
            step = w @ step
            if np.max(np.abs(step - cur)) < tol:
                break
            acc.append(step)
        else:
            raise NoLimitError("supermatrix powers are cyclic with no closing period")
        cur = sum(acc) / len(acc)

    mean_col = cur.mean(axis=1)
    priorities: Dict[str, WeightVector] = {}
    start = 0
    for c in s.clusters:
        seg = mean_col[start:start + len(c.elements)]
        start += len(c.elements)
        total = seg.sum()
        if total > tol:
            priorities[c.name] = WeightVector.from_array(c.elements, seg / total)
    return LimitResult(cur, priorities, it, cyclic)


# ---------------------------------------------------------------------------
# Three-level hierarchy

LEVEL1 = ("QoS", "S", "CB", "H")
LEVEL2 = ("AB", "D", "J", "L")
LEAF_CRITERIA = ("CB", "S", "AB", "D", "J", "L", "H")


@dataclass(frozen=True)
class HierarchyWeights:
    """Weights of the goal -> criteria -> QoS parameters -> networks hierarchy.

    ``level1`` ranks QoS, security (S), cost (CB) and history (H);
    ``level2`` splits QoS into AB, D, J, L; ``level3`` maps every leaf
    criterion to a vector over the candidate networks.
    """

    level1: WeightVector
    level2: WeightVector
    level3: Mapping[str, WeightVector]

    @property
    def networks(self) -> Tuple[str, ...]:
        first = next(iter(self.level3.values()))
        return first.labels


def leaf_weight(h: HierarchyWeights, criterion: str) -> float:
    """Level-1 times level-2 weight of a leaf criterion."""
    if criterion in LEVEL2:
        return h.level1["QoS"] * h.level2[criterion]
    return h.level1[criterion]


def compose_hierarchy(
    h: HierarchyWeights,
    differentiated: bool = True,
    criteria: Sequence[str] = LEAF_CRITERIA,
) -> Dict[str, WeightVector]:
    """Per-network weight vectors over the leaf criteria.

    Each network's raw weight for a criterion is the product of the level-1,
    level-2 (QoS children only) and level-3 weights; the raw vector is then
    rescaled to sum 1. With ``differentiated=False`` the level-3 factor is
    dropped and every network gets the same vector.

    Args:
        criteria: leaf criteria to keep, e.g. without ``"H"`` for variants that
            ignore history. Dropped criteria are excluded before rescaling.

    Raises:
        IncompleteHierarchyError: a kept criterion has no level-3 vector.
    """
    missing = [c for c in criteria if c not in h.level3]
    if differentiated and missing:
        raise IncompleteHierarchyError(f"no level-3 weights for {', '.join(missing)}")
    base = np.array([leaf_weight(h, c) for c in criteria])
    out: Dict[str, WeightVector] = {}
    for net in h.networks:
        if differentiated:
            raw = base * np.array([h.level3[c][net] for c in criteria])
        else:
            raw = base
        total = raw.sum()
        if total <= 0:
            raise DegenerateWeightsError(f"composed weights for {net} are all zero")
        out[net] = WeightVector.from_array(criteria, raw / total)
    return out
