"""
Delta Chains

This module rewrites a product of delta derivatives into reduced row echelon
form over its affine arguments. Each pivot variable then sits in exactly one
delta, which is what lets a later integration consume it.

Row operations act on the derivative orders as well: adding c times row i to
row j turns d/dw_i into d/dw_i' + c d/dw_j', so delta^(ki)(wi) delta^(kj)(wj)
expands into sum_m C(ki, m) c^m delta^(ki-m)(wi) delta^(kj+m)(wj').
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from vp_calculus.core.expr.affine import AffineExpr, Var, order_variables
from vp_calculus.core.expr.factors import DeltaDeriv
from vp_calculus.utils.logging import get_logger

logger = get_logger("vp_calculus.expr")

OrderState = Dict[Tuple[int, ...], Fraction]


@dataclass
class ChainReduction:
    """
    Result of reducing a delta chain.

    ``rows`` are the reduced arguments, ``pivots`` the pivot variable of each
    row and ``terms`` the (weight, orders) expansion over those rows. A chain
    with an empty support has no terms; a chain with linearly dependent
    arguments is ``degenerate`` and left unreduced.
    """

    rows: List[AffineExpr] = field(default_factory=list)
    pivots: List[Var] = field(default_factory=list)
    terms: List[Tuple[Fraction, Tuple[int, ...]]] = field(default_factory=list)
    degenerate: bool = False

    def deltas(self, orders: Tuple[int, ...]) -> Tuple[DeltaDeriv, ...]:
        return tuple(DeltaDeriv(row, k) for row, k in zip(self.rows, orders))

    def substitutions(self, orders: Tuple[int, ...]) -> List[Tuple[Var, AffineExpr]]:
        """
        Pivot values implied by the order-0 deltas of one expansion term.

        Returns:
            list: (pivot variable, expression it equals on the support)
        """
        result = []
        for row, pivot, k in zip(self.rows, self.pivots, orders):
            if k == 0:
                result.append((pivot, -row.drop(pivot)))
        return result


def _swap(state: OrderState, i: int, j: int) -> OrderState:
    swapped: OrderState = {}
    for orders, weight in state.items():
        orders = list(orders)
        orders[i], orders[j] = orders[j], orders[i]
        swapped[tuple(orders)] = weight
    return swapped


def _scale(state: OrderState, row: int, factor: Fraction) -> OrderState:
    # w = factor * w'  =>  delta^(k)(w) = factor^-k |factor|^-1 delta^(k)(w')
    return {
        orders: weight * factor ** -orders[row] / abs(factor) for orders, weight in state.items()
    }


def _add_multiple(state: OrderState, source: int, target: int, multiple: Fraction) -> OrderState:
    # w_target' = w_target + multiple * w_source
    result: OrderState = {}
    for orders, weight in state.items():
        k_source = orders[source]
        for m in range(k_source + 1):
            new_orders = list(orders)
            new_orders[source] = k_source - m
            new_orders[target] = orders[target] + m
            key = tuple(new_orders)
            result[key] = result.get(key, Fraction(0)) + weight * math.comb(k_source, m) * multiple**m
    return {key: value for key, value in result.items() if value != 0}


def reduce_delta_chain(deltas: Sequence[DeltaDeriv], order: Sequence[Var] = ()) -> ChainReduction:
    """
    Put a delta chain into reduced row echelon form.

    Args:
        deltas (Sequence[DeltaDeriv]): The chain
        order (Sequence[str]): Variables to pivot on first; the rest follow in
            canonical order

    Returns:
        ChainReduction: The reduced chain
    """
    rows = [delta.arg for delta in deltas]
    state: OrderState = {tuple(delta.order for delta in deltas): Fraction(1)}
    names = set()
    for row in rows:
        names.update(row.variables())

    pivots: List[Var] = []
    next_row = 0
    for name in order_variables(names, order):
        candidates = [i for i in range(next_row, len(rows)) if rows[i].coeff(name) != 0]
        if not candidates:
            continue
        chosen = candidates[0]
        if chosen != next_row:
            rows[chosen], rows[next_row] = rows[next_row], rows[chosen]
            state = _swap(state, chosen, next_row)

        lead = rows[next_row].coeff(name)
        if lead != 1:
            rows[next_row] = rows[next_row].scale(1 / lead)
            state = _scale(state, next_row, lead)

        for other in range(len(rows)):
            if other == next_row:
                continue
            weight = rows[other].coeff(name)
            if weight == 0:
                continue
            rows[other] = rows[other] - rows[next_row].scale(weight)
            state = _add_multiple(state, next_row, other, -weight)

        pivots.append(name)
        next_row += 1
        if next_row == len(rows):
            break

    leftovers = rows[next_row:]
    if any(row.constant != 0 for row in leftovers):
        # a delta of a nonzero constant: empty support
        return ChainReduction(rows=rows[:next_row], pivots=pivots)
    if leftovers:
        logger.warning("Delta chain with linearly dependent arguments left unreduced")
        return ChainReduction(degenerate=True)

    return ChainReduction(
        rows=rows,
        pivots=pivots,
        terms=[(state[orders], orders) for orders in sorted(state)],
    )
