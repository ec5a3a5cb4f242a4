"""Hyperplane search for a single tree node.

The search starts from the best axis-parallel split, hill-climbs one
coefficient at a time (each step is an exact 1-D split problem), escapes
local minima with line searches along random directions, and restarts from
random planes. An oblique plane is returned only if it beats the best
axis-parallel split.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .dataset import Dataset
from .impurity import ImpurityMeasure, SplitCounts, get_measure

RNG_ID = "numpy.random.PCG64/SeedSequence"
ORDERS = ("seq", "best", "r50")


@dataclass(frozen=True)
class SearchParams:
    restarts: int = 20
    max_jumps: int = 5
    order: str = "seq"
    p_stag_initial: float = 1.0
    p_stag_decrement_factor: float = 0.1
    seed: int = 0
    axis_parallel_only: bool = False
    min_examples_factor: float = 2
    ap_bias: float = 1.0
    r50_steps: int = 50

    def __post_init__(self):
        if self.restarts < 0 or self.max_jumps < 0:
            raise ValueError("restarts and max_jumps must be non-negative")
        if not 0.0 <= self.p_stag_initial <= 1.0:
            raise ValueError("p_stag_initial must lie in [0, 1]")
        if self.p_stag_decrement_factor <= 0:
            raise ValueError("p_stag_decrement_factor must be positive")
        if self.order not in ORDERS:
            raise ValueError(f"order must be one of {ORDERS}")
        if self.ap_bias < 1.0:
            raise ValueError("ap_bias must be >= 1")


@dataclass(frozen=True, eq=False)
class Hyperplane:
    """Test ``sum_i a_i x_i + a_{d+1} > 0``; ``coefficients`` holds ``a_1..a_{d+1}``."""

    coefficients: np.ndarray

    def __post_init__(self):
        a = np.array(self.coefficients, dtype=float)
        if a.ndim != 1 or a.size < 2:
            raise ValueError("a hyperplane needs d + 1 >= 2 coefficients")
        if not a[:-1].any():
            raise ValueError("degenerate hyperplane: all attribute coefficients are zero")
        a.setflags(write=False)
        object.__setattr__(self, "coefficients", a)

    @classmethod
    def axis(cls, d: int, attribute: int, threshold: float) -> "Hyperplane":
        a = np.zeros(d + 1)
        a[attribute] = 1.0
        a[d] = -threshold
        return cls(a)

    @property
    def d(self) -> int:
        return self.coefficients.size - 1

    def values(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        return X @ self.coefficients[:-1] + self.coefficients[-1]

    def above(self, X) -> np.ndarray:
        return self.values(X) > 0

    def nonzero_attributes(self) -> np.ndarray:
        return np.flatnonzero(self.coefficients[:-1])

    def __eq__(self, other):
        return isinstance(other, Hyperplane) and np.array_equal(self.coefficients, other.coefficients)

    def __repr__(self):
        return f"Hyperplane({self.coefficients.tolist()})"


class Side(enum.Enum):
    BELOW = 0
    ABOVE = 1


def side_of(plane: Hyperplane, x) -> Side:
    """Above iff the plane's value at ``x`` is strictly positive."""
    return Side.ABOVE if float(plane.values(np.atleast_2d(x))[0]) > 0 else Side.BELOW


@dataclass(eq=False)
class SplitCandidate:
    plane: Hyperplane
    impurity: float
    counts: SplitCounts
    evals: int = 0
    axis: Optional[tuple] = None  # (attribute, threshold) for axis-parallel splits
    improvements: tuple = ()  # strict improvements made by each restart

    @property
    def oblique(self) -> bool:
        return self.axis is None

    def separates(self) -> bool:
        return self.counts.n_left > 0 and self.counts.n_right > 0


@dataclass
class SearchStats:
    """Counters filled in by :func:`find_split`; ``traces`` only when ``record_traces``."""

    record_traces: bool = False
    evals: int = 0
    improvements: list = field(default_factory=list)
    stagnant_moves: int = 0
    jumps_tried: int = 0
    jumps_succeeded: int = 0
    traces: list = field(default_factory=list)


def _split_counts(y, above, k) -> tuple[np.ndarray, np.ndarray]:
    up = np.bincount(y[above], minlength=k)
    down = np.bincount(y, minlength=k) - up
    return down, up


# -- one-dimensional split problems -------------------------------------------------------


@dataclass(frozen=True)
class Constraint:
    """One example's condition on a single free coefficient.

    ``relation`` is ``lower`` (above iff value > bound), ``upper`` (above iff
    value < bound), or ``fixed-above`` / ``fixed-below`` when the example's
    side does not depend on the coefficient.
    """

    bound: float
    relation: str
    label: int


def _bounds(V, c, t0):
    fixed = c == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        U = t0 - V / c
    return U, fixed


def compute_constraints(T: Dataset, plane: Hyperplane, m: int) -> list[Constraint]:
    """Constraints on coefficient ``m`` (0-based; ``m == d`` is the constant term)."""
    d = T.d
    if not 0 <= m <= d:
        raise ValueError(f"coefficient index must be in 0..{d}")
    V = plane.values(T.X)
    c = T.X[:, m] if m < d else np.ones(T.n)
    U, fixed = _bounds(V, c, plane.coefficients[m])
    out = []
    for j in range(T.n):
        label = int(T.y[j])
        if fixed[j]:
            out.append(Constraint(float("nan"), "fixed-above" if V[j] > 0 else "fixed-below", label))
        else:
            out.append(Constraint(float(U[j]), "lower" if c[j] > 0 else "upper", label))
    return out


def _sweep(U, lower, y, k, fixed_above, total, measure: ImpurityMeasure, extremes=True):
    """Score every distinct placement of a free value among sorted bounds.

    Returns ``(value, impurity)`` of the minimising placement, smallest value
    on ties.
    """
    uniq, inv = np.unique(U, return_inverse=True)
    m = uniq.size
    key = inv * k + y
    lo_counts = np.bincount(key[lower], minlength=m * k).reshape(m, k)
    up_counts = np.bincount(key[~lower], minlength=m * k).reshape(m, k)
    zero = np.zeros((1, k), dtype=np.int64)
    lo_prefix = np.concatenate([zero, np.cumsum(lo_counts, axis=0)])
    up_prefix = np.concatenate([zero, np.cumsum(up_counts, axis=0)])
    # placement t sits between uniq[t-1] and uniq[t]: lower-bound examples with
    # index < t are above, upper-bound examples with index >= t are above
    above = lo_prefix + (up_prefix[-1] - up_prefix) + fixed_above
    below = total - above
    if not extremes:
        above, below = above[1:-1], below[1:-1]
    if above.shape[0] == 0:
        return None
    imp = measure.batch(below, above)
    best = int(np.argmin(imp))
    t = best if extremes else best + 1
    if t == 0:
        value = uniq[0] - 1.0
    elif t == m:
        value = uniq[-1] + 1.0
    else:
        a, b = uniq[t - 1], uniq[t]
        value = a + (b - a) / 2.0
        if not a < value < b:
            value = b if value <= a else a
    return float(value), float(imp[best])


def _line_search(V, c, t0, y, k, measure):
    U, fixed = _bounds(V, c, t0)
    free = ~fixed
    if not free.any():
        return None
    fixed_above = np.bincount(y[fixed & (V > 0)], minlength=k)
    total = np.bincount(y, minlength=k)
    return _sweep(U[free], c[free] > 0, y[free], k, fixed_above, total, measure)


def best_coefficient_value(constraints, measure="twoing", k: Optional[int] = None):
    """Best value for a single free coefficient given per-example constraints.

    Candidates are midpoints between consecutive distinct bounds plus one
    value beyond each extreme. Returns ``(value, impurity)`` or ``None`` when
    every constraint is fixed (the coefficient is irrelevant).
    """
    measure = get_measure(measure)
    labels = np.array([c.label for c in constraints], dtype=np.int64)
    if k is None:
        k = int(labels.max()) + 1 if labels.size else 1
    rel = np.array([c.relation for c in constraints])
    free = (rel == "lower") | (rel == "upper")
    if not free.any():
        return None
    U = np.array([c.bound for c in constraints], dtype=float)
    fixed_above = np.bincount(labels[rel == "fixed-above"], minlength=k)
    total = np.bincount(labels, minlength=k)
    return _sweep(U[free], rel[free] == "lower", labels[free], k, fixed_above, total, measure)


def best_axis_parallel(T: Dataset, measure="twoing") -> Optional[SplitCandidate]:
    """Exhaustive best threshold split ``x_i > c`` over all attributes.

    Thresholds are midpoints of consecutive distinct values. Ties go to the
    lowest attribute index, then the lowest threshold. Returns ``None`` if no
    attribute takes two distinct values.
    """
    measure = get_measure(measure)
    if T.n < 2 or np.count_nonzero(T.class_counts()) < 2:
        raise ValueError("best_axis_parallel needs at least two examples of two classes")
    k = T.k
    total = T.class_counts()
    y = T.y
    best = None
    no_fixed = np.zeros(k, dtype=np.int64)
    lower = np.ones(T.n, dtype=bool)
    for i in range(T.d):
        res = _sweep(T.X[:, i], lower, y, k, no_fixed, total, measure, extremes=False)
        if res is None:
            continue
        if best is None or res[1] < best[2]:
            best = (i, res[0], res[1])
    if best is None:
        return None
    i, thr, _ = best
    plane = Hyperplane.axis(T.d, i, thr)
    below, above = _split_counts(y, T.X[:, i] > thr, k)
    counts = SplitCounts(below, above)
    return SplitCandidate(plane, measure(counts), counts, evals=1, axis=(i, thr))


# -- randomized hill climbing --------------------------------------------------------------


class Outcome(enum.Enum):
    IMPROVED = "improved"
    STAGNANT = "stagnant-accepted"
    REJECTED = "rejected"


class SearchState:
    """Current plane, its impurity and the stagnation probability for one restart."""

    def __init__(self, T: Dataset, measure, params: SearchParams, rng, stats: Optional[SearchStats] = None):
        self.measure = get_measure(measure)
        self.params = params
        self.rng = rng
        self.stats = stats if stats is not None else SearchStats()
        self.y = T.y
        self.k = T.k
        self.d = T.d
        self.Xa = np.hstack([T.X, np.ones((T.n, 1))])
        self.a = None
        self.V = None
        self.impurity = None
        self.stagnant_steps = 0
        self.improvements = 0
        self.trace = None

    @property
    def p_move(self) -> float:
        # computed from a step count so that ten 0.1 decrements reach exactly zero
        p0 = self.params.p_stag_initial
        return max(0.0, p0 - self.stagnant_steps * self.params.p_stag_decrement_factor * p0)

    def score(self, V) -> float:
        below, above = _split_counts(self.y, V > 0, self.k)
        self.stats.evals += 1
        return float(self.measure.batch(below, above))

    def reset(self, coefficients):
        self.a = np.array(coefficients, dtype=float)
        self.V = self.Xa @ self.a
        self.impurity = self.score(self.V)
        self.stagnant_steps = 0
        self.improvements = 0
        self.trace = [self.impurity] if self.stats.record_traces else None

    def _adopt(self, a, V, impurity):
        if impurity > self.impurity:
            raise AssertionError("search attempted to worsen the impurity")
        self.a, self.V, self.impurity = a, V, impurity
        if self.trace is not None:
            self.trace.append(impurity)

    def propose(self, m: int):
        """Plane with coefficient ``m`` moved to its 1-D optimum, scored; None if no move."""
        res = _line_search(self.V, self.Xa[:, m], self.a[m], self.y, self.k, self.measure)
        if res is None or res[0] == self.a[m]:
            return None
        a1 = self.a.copy()
        a1[m] = res[0]
        if not a1[:-1].any():
            return None
        V1 = self.Xa @ a1
        return a1, V1, self.score(V1)

    def apply(self, proposal) -> Outcome:
        if proposal is None:
            return Outcome.REJECTED
        a1, V1, imp1 = proposal
        if imp1 < self.impurity:
            self._adopt(a1, V1, imp1)
            self.stagnant_steps = 0
            self.improvements += 1
            return Outcome.IMPROVED
        if imp1 == self.impurity:
            p = self.p_move
            take = p >= 1.0 or (p > 0.0 and self.rng.random() < p)
            self.stagnant_steps += 1
            if take:
                self._adopt(a1, V1, imp1)
                self.stats.stagnant_moves += 1
                return Outcome.STAGNANT
        return Outcome.REJECTED


def perturb_coefficient(state: SearchState, m: int) -> Outcome:
    return state.apply(state.propose(m))


def deterministic_pass(state: SearchState, order: str = "seq") -> None:
    """Coordinate-wise hill climbing until a local minimum (or 50 random steps for r50).

    Stops early at impurity 0, where no move can be a strict improvement.
    """
    n_coef = state.d + 1
    if order == "seq":
        while state.impurity > 0:
            modified = False
            for m in range(n_coef):
                if perturb_coefficient(state, m) is not Outcome.REJECTED:
                    modified = True
            if not modified:
                return
    elif order == "best":
        while state.impurity > 0:
            proposals = [state.propose(m) for m in range(n_coef)]
            scored = [(p[2], m) for m, p in enumerate(proposals) if p is not None]
            if not scored:
                return
            _, m = min(scored)
            if state.apply(proposals[m]) is Outcome.REJECTED:
                return
    elif order == "r50":
        for _ in range(state.params.r50_steps):
            if state.impurity == 0:
                return
            perturb_coefficient(state, int(state.rng.integers(n_coef)))
    else:
        raise ValueError(f"unknown perturbation order {order!r}")


def random_jump(state: SearchState, direction=None) -> bool:
    """Line search along a random direction; adopt only a strict improvement."""
    stats = state.stats
    stats.jumps_tried += 1
    r = state.rng.uniform(-1.0, 1.0, state.d + 1) if direction is None else np.asarray(direction, float)
    c = state.Xa @ r
    res = _line_search(state.V, c, 0.0, state.y, state.k, state.measure)
    if res is None or res[0] == 0.0:
        return False
    a1 = state.a + res[0] * r
    if not a1[:-1].any():
        return False
    V1 = state.Xa @ a1
    imp1 = state.score(V1)
    if imp1 < state.impurity:
        state._adopt(a1, V1, imp1)
        state.stagnant_steps = 0
        state.improvements += 1
        stats.jumps_succeeded += 1
        return True
    return False


def random_plane(d: int, rng) -> np.ndarray:
    while True:
        a = rng.uniform(-1.0, 1.0, d + 1)
        if a[:-1].any():
            return a


def restart_rng(seed: int, node_key: int, restart: int):
    """Independent stream per (seed, node, restart) so restarts can run in any order."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(node_key, restart)))


def run_restart(state: SearchState, initial) -> None:
    state.reset(initial)
    while True:
        deterministic_pass(state, state.params.order)
        if state.impurity == 0:
            return
        for _ in range(state.params.max_jumps):
            if random_jump(state):
                break
        else:
            return


def find_split(
    T: Dataset,
    params: SearchParams = SearchParams(),
    measure="twoing",
    node_key: int = 1,
    stats: Optional[SearchStats] = None,
) -> Optional[SplitCandidate]:
    """Best split found for the examples at one node, or None if nothing separates them.

    ``node_key`` identifies the node (root 1, children 2i and 2i+1) and,
    together with ``params.seed``, fixes the random streams.
    """
    measure = get_measure(measure)
    stats = stats if stats is not None else SearchStats(record_traces=False)
    axis = best_axis_parallel(T, measure)
    if axis is None:
        return None
    stats.evals += axis.evals
    if (
        params.axis_parallel_only
        or T.n < params.min_examples_factor * T.d
        or axis.impurity == 0
    ):
        axis.evals = stats.evals
        return axis

    best = None
    per_restart = []
    for r in range(max(1, params.restarts)):
        rng = restart_rng(params.seed, node_key, r)
        state = SearchState(T, measure, params, rng, stats)
        initial = axis.plane.coefficients if r == 0 else random_plane(T.d, rng)
        run_restart(state, initial)
        per_restart.append(state.improvements)
        if state.trace is not None:
            stats.traces.append(state.trace)
        if best is None or state.impurity < best[1]:
            best = (state.a.copy(), state.impurity)
    stats.improvements.extend(per_restart)

    a, imp = best
    if imp < axis.impurity / params.ap_bias:
        below, above = _split_counts(T.y, (np.hstack([T.X, np.ones((T.n, 1))]) @ a) > 0, T.k)
        cand = SplitCandidate(
            Hyperplane(a), imp, SplitCounts(below, above), stats.evals, None, tuple(per_restart)
        )
        if cand.separates():
            return cand
    axis.evals = stats.evals
    axis.improvements = tuple(per_restart)
    return axis
