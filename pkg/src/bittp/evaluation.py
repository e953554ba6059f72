"""Exact evaluation of tours and packing plans.

The two objectives are total profit (maximized) and travel time
(minimized).  The thief's speed decreases linearly with knapsack weight,
so travel time depends on where along the tour each selected item is
picked up.  A single scalar ``alpha`` in [0, 1] blends the objectives:

    f(tour, plan, alpha) = alpha * profit - (1 - alpha) * R * time

with R the instance's renting rate.  ``alpha = 1`` scores pure profit and
``alpha = 0`` pure (rent-priced) time; both endpoints are exact in
floating point given the shared evaluation path below.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .instance import ProblemInstance


@dataclass(frozen=True)
class Tour:
    """A cyclic visiting order: a permutation of cities starting at city 0."""

    order: np.ndarray

    def __post_init__(self) -> None:
        order = np.ascontiguousarray(np.asarray(self.order, dtype=np.int64))
        object.__setattr__(self, "order", order)
        n = order.shape[0]
        if n == 0 or order[0] != 0:
            raise ValueError("tour must start at city 0")
        if order.min() < 0 or order.max() >= n:
            raise ValueError("tour must be a permutation of 0..n-1")
        if (np.bincount(order, minlength=n) != 1).any():
            raise ValueError("tour must be a permutation of 0..n-1")
        order.setflags(write=False)

    def __len__(self) -> int:
        return self.order.shape[0]


class PackingPlan:
    """A subset of items with a cached total weight, bound to one instance."""

    __slots__ = ("inst", "selected", "total_weight")

    def __init__(self, inst: ProblemInstance, selected: np.ndarray | None = None):
        self.inst = inst
        if selected is None:
            self.selected = np.zeros(inst.m, dtype=bool)
            self.total_weight = 0.0
        else:
            selected = np.asarray(selected, dtype=bool)
            if selected.shape != (inst.m,):
                raise ValueError(f"selection mask must have shape ({inst.m},)")
            self.selected = selected.copy()
            self.total_weight = float(inst.weights[self.selected].sum())
            if self.total_weight > inst.capacity:
                raise ValueError("plan exceeds knapsack capacity")

    @classmethod
    def empty(cls, inst: ProblemInstance) -> "PackingPlan":
        return cls(inst)

    @classmethod
    def of(cls, inst: ProblemInstance, items: Iterable[int]) -> "PackingPlan":
        mask = np.zeros(inst.m, dtype=bool)
        mask[list(items)] = True
        return cls(inst, mask)

    def copy(self) -> "PackingPlan":
        dup = PackingPlan.__new__(PackingPlan)
        dup.inst = self.inst
        dup.selected = self.selected.copy()
        dup.total_weight = self.total_weight
        return dup

    def can_add(self, item: int) -> bool:
        return not self.selected[item] and (
            self.total_weight + self.inst.weights[item] <= self.inst.capacity
        )

    def add(self, item: int) -> None:
        if self.selected[item]:
            raise ValueError(f"item {item} already selected")
        new_weight = self.total_weight + float(self.inst.weights[item])
        if new_weight > self.inst.capacity:
            raise ValueError(f"adding item {item} exceeds capacity")
        self.selected[item] = True
        self.total_weight = new_weight

    def remove(self, item: int) -> None:
        if not self.selected[item]:
            raise ValueError(f"item {item} not selected")
        self.selected[item] = False
        self.total_weight -= float(self.inst.weights[item])

    def item_indices(self) -> np.ndarray:
        return np.flatnonzero(self.selected)

    def __contains__(self, item: int) -> bool:
        return bool(self.selected[item])

    def __len__(self) -> int:
        return int(self.selected.sum())


@dataclass(frozen=True)
class Solution:
    """A (tour, plan) pair with its objective values.

    ``alpha`` records the scalarization weight in effect when the solution
    was produced (informational; used in front output).
    """

    tour: Tour
    plan: PackingPlan
    profit: float
    time: float
    alpha: float | None = None

    @classmethod
    def evaluated(
        cls,
        inst: ProblemInstance,
        tour: Tour,
        plan: PackingPlan,
        alpha: float | None = None,
    ) -> "Solution":
        return cls(tour, plan, total_profit(inst, plan), travel_time(inst, tour, plan), alpha)

    @property
    def point(self) -> tuple[float, float]:
        return (self.profit, self.time)


def speed(inst: ProblemInstance, weight: float) -> float:
    """Thief's velocity when carrying ``weight``; affine from v_max down to v_min.

    The result is clamped to [v_min, v_max] so boundary weights are exact
    despite rounding in the slope.
    """
    if not 0 <= weight <= inst.capacity:
        raise ValueError(f"weight {weight} outside [0, {inst.capacity}]")
    v = inst.max_speed - weight * (inst.max_speed - inst.min_speed) / inst.capacity
    return min(max(v, inst.min_speed), inst.max_speed)


class PlanTimes(NamedTuple):
    """Per-leg timing state of one plan on one tour (see TourContext)."""

    omega: np.ndarray      # accumulated knapsack weight after each position
    leg_time: np.ndarray   # time spent on each leg
    total: float


class TourContext:
    """Caches tied to one (instance, tour) pair for repeated plan evaluation.

    Holds leg distances and each item's pickup position so that travel
    time for any plan is a single vectorized pass, and a one-item flip can
    be re-priced from the flipped position's suffix only.
    """

    __slots__ = ("inst", "tour", "leg", "position", "item_pos", "_slope")

    def __init__(self, inst: ProblemInstance, tour: Tour):
        order = tour.order
        if len(order) != inst.n:
            raise ValueError("tour length does not match instance")
        self.inst = inst
        self.tour = tour
        self.leg = inst.leg_lengths(order)
        position = np.empty(inst.n, dtype=np.int64)
        position[order] = np.arange(inst.n)
        self.position = position
        self.item_pos = position[inst.item_city]
        self._slope = (inst.max_speed - inst.min_speed) / inst.capacity

    def weight_by_position(self, selected: np.ndarray) -> np.ndarray:
        """Weight picked up at each tour position under ``selected``."""
        idx = np.flatnonzero(selected)
        return np.bincount(
            self.item_pos[idx], weights=self.inst.weights[idx], minlength=self.inst.n
        )

    def _speeds(self, omega: np.ndarray) -> np.ndarray:
        v = self.inst.max_speed - self._slope * omega
        return np.clip(v, self.inst.min_speed, self.inst.max_speed)

    def time_from_positions(self, weight_by_pos: np.ndarray) -> float:
        """Travel time given per-position pickup weights (single O(n) pass)."""
        omega = np.cumsum(weight_by_pos)
        return float((self.leg / self._speeds(omega)).sum())

    def travel_time(self, selected: np.ndarray) -> float:
        return self.time_from_positions(self.weight_by_position(selected))

    def profit(self, selected: np.ndarray) -> float:
        return float(self.inst.profits[selected].sum())

    def objective(self, selected: np.ndarray, alpha: float) -> float:
        g = self.profit(selected)
        h = self.travel_time(selected)
        return alpha * g - (1.0 - alpha) * self.inst.renting_rate * h

    def plan_times(self, selected: np.ndarray) -> PlanTimes:
        omega = np.cumsum(self.weight_by_position(selected))
        leg_time = self.leg / self._speeds(omega)
        return PlanTimes(omega, leg_time, float(leg_time.sum()))

    def flipped_time(self, times: PlanTimes, item: int, add: bool) -> float:
        """Travel time after toggling ``item``, re-pricing only the suffix."""
        p = self.item_pos[item]
        w = self.inst.weights[item]
        omega = times.omega[p:] + (w if add else -w)
        seg = self.leg[p:] / self._speeds(omega)
        return times.total - float(times.leg_time[p:].sum()) + float(seg.sum())


def weight_after(inst: ProblemInstance, tour: Tour, plan: PackingPlan, i: int) -> float:
    """Knapsack weight after visiting the first ``i`` cities of the tour (1-based count)."""
    if not 1 <= i <= inst.n:
        raise ValueError(f"position {i} outside 1..{inst.n}")
    ctx = TourContext(inst, tour)
    return float(ctx.weight_by_position(plan.selected)[:i].sum())


def travel_time(inst: ProblemInstance, tour: Tour, plan: PackingPlan) -> float:
    """Total travel time of the cyclic tour under ``plan``."""
    return TourContext(inst, tour).travel_time(plan.selected)


def total_profit(inst: ProblemInstance, plan: PackingPlan) -> float:
    """Sum of profits of the selected items."""
    return float(inst.profits[plan.selected].sum())


def weighted_objective(
    inst: ProblemInstance, tour: Tour, plan: PackingPlan, alpha: float
) -> float:
    """Scalarized objective alpha * profit - (1 - alpha) * R * time."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha {alpha} outside [0, 1]")
    g = total_profit(inst, plan)
    h = travel_time(inst, tour, plan)
    return alpha * g - (1.0 - alpha) * inst.renting_rate * h


def validate_solution(
    inst: ProblemInstance, sol: Solution, rel_tol: float = 1e-9
) -> None:
    """Raise ValueError unless ``sol`` is feasible and its cached values agree
    with a from-scratch re-evaluation."""
    if len(sol.tour) != inst.n:
        raise ValueError("tour length does not match instance")
    if sol.plan.selected.shape != (inst.m,):
        raise ValueError("plan size does not match instance")
    weight = float(inst.weights[sol.plan.selected].sum())
    if weight > inst.capacity:
        raise ValueError(f"plan weight {weight} exceeds capacity {inst.capacity}")
    if abs(weight - sol.plan.total_weight) > rel_tol * max(1.0, abs(weight)):
        raise ValueError("plan weight cache is stale")
    g = total_profit(inst, sol.plan)
    h = travel_time(inst, sol.tour, sol.plan)
    if abs(g - sol.profit) > rel_tol * max(1.0, abs(g)):
        raise ValueError(f"cached profit {sol.profit} != recomputed {g}")
    if abs(h - sol.time) > rel_tol * max(1.0, abs(h)):
        raise ValueError(f"cached time {sol.time} != recomputed {h}")
