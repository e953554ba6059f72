"""Randomized score-guided packing for a fixed tour and scalarization weight.

Each attempt draws three exponents, normalizes them to sum to 1, and
scores every item by profit^a / (weight^b * carry_distance^c), where the
carry distance is how far along the tour the item would be hauled.  Items
are then greedily added in score order, with the scalarized objective
re-checked every ``phi`` analyzed items; a failed check rolls back to the
last committed plan and halves ``phi``.  The best committed plan across
attempts is returned, never worse than the empty plan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .evaluation import PackingPlan, Tour, TourContext
from .instance import ProblemInstance

REEVAL_EPSILON = 1e-5


@dataclass(frozen=True)
class ScoredItems:
    """Per-item scores, the descending-score item order, and carry distances."""

    scores: np.ndarray
    order: np.ndarray
    carry_distance: np.ndarray


def carry_distances(ctx: TourContext) -> np.ndarray:
    """Distance each item is carried: from its pickup position to the tour's end,
    including the closing leg back to the start city."""
    suffix = np.cumsum(ctx.leg[::-1])[::-1]
    return suffix[ctx.item_pos]


def score_items(
    inst: ProblemInstance,
    tour: Tour,
    a: float,
    b: float,
    c: float,
    *,
    ctx: TourContext | None = None,
) -> ScoredItems:
    """Score items with exponents (a, b, c), normalized to sum to 1.

    Ties in score break toward the lower item index, so the ordering is
    deterministic.  Scale-invariant: triples that are positive multiples
    of each other produce identical scores.
    """
    if a < 0 or b < 0 or c < 0:
        raise ValueError("score exponents must be non-negative")
    total = a + b + c
    if total == 0:
        raise ValueError("score exponents are all zero")
    a, b, c = a / total, b / total, c / total
    if ctx is None:
        ctx = TourContext(inst, tour)
    dist = carry_distances(ctx)
    scores = inst.profits**a / (inst.weights**b * dist**c)
    order = np.lexsort((np.arange(inst.m), -scores))
    return ScoredItems(scores, order, dist)


def reeval_period(m: int, divisor: int, alpha: float) -> int:
    """Number of items analyzed between objective re-evaluations.

    ceil(m / divisor * alpha + eps); the epsilon keeps the period at 1
    when alpha is 0.
    """
    return math.ceil(m / divisor * alpha + REEVAL_EPSILON)


def randomized_packing(
    inst: ProblemInstance,
    tour: Tour,
    attempts: int,
    alpha: float,
    divisor: int,
    rng: np.random.Generator,
    *,
    ctx: TourContext | None = None,
) -> PackingPlan:
    """Best plan over ``attempts`` randomized greedy constructions for ``tour``.

    Each attempt consumes exactly three uniform draws from ``rng`` (the
    score exponents), so results for a given rng state are reproducible
    and the best objective is non-decreasing in ``attempts``.
    """
    if attempts < 1:
        raise ValueError("attempts must be >= 1")
    if divisor < 1:
        raise ValueError("divisor must be >= 1")
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha {alpha} outside [0, 1]")
    if ctx is None:
        ctx = TourContext(inst, tour)

    m = inst.m
    n = inst.n
    weights = inst.weights
    profits = inst.profits
    capacity = inst.capacity
    rent = inst.renting_rate
    item_pos = ctx.item_pos

    def scalarized(g: float, wpos: np.ndarray) -> float:
        return alpha * g - (1.0 - alpha) * rent * ctx.time_from_positions(wpos)

    empty_wpos = np.zeros(n)
    best_selected = np.zeros(m, dtype=bool)
    best_f = scalarized(0.0, empty_wpos)

    for _ in range(attempts):
        draws = rng.random(3)
        while draws.sum() == 0.0:
            draws = rng.random(3)
        scored = score_items(inst, tour, draws[0], draws[1], draws[2], ctx=ctx)
        phi = reeval_period(m, divisor, alpha)

        selected = np.zeros(m, dtype=bool)
        wpos = np.zeros(n)
        weight = 0.0
        g = 0.0
        committed_selected = selected.copy()
        committed_wpos = wpos.copy()
        committed_weight = 0.0
        committed_g = 0.0
        committed_f = scalarized(0.0, empty_wpos)
        committed_rank = 1
        pending = False

        rank = 1
        while rank <= m and phi >= 1:
            item = scored.order[rank - 1]
            if not selected[item] and weight + weights[item] <= capacity:
                selected[item] = True
                weight += weights[item]
                wpos[item_pos[item]] += weights[item]
                g += profits[item]
                pending = True
            if pending and rank % phi == 0:
                f = scalarized(g, wpos)
                if f > committed_f:
                    np.copyto(committed_selected, selected)
                    np.copyto(committed_wpos, wpos)
                    committed_weight = weight
                    committed_g = g
                    committed_f = f
                    committed_rank = rank
                else:
                    np.copyto(selected, committed_selected)
                    np.copyto(wpos, committed_wpos)
                    weight = committed_weight
                    g = committed_g
                    rank = committed_rank
                    phi //= 2
                pending = False
            rank += 1

        if committed_f > best_f:
            best_selected = committed_selected
            best_f = committed_f

    return PackingPlan(inst, best_selected)
