"""Exhaustive ground truth at desk scale.

Enumerates every matching of an instance (the telephone-number count T(n)),
decides arbitrary queries by brute force, and lists per-layer super-stable
matchings.  The point of this module is being obviously correct; solvers and
generators are validated against it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .blocking import BASES, Matching, stable_in_layer
from .errors import BudgetExceeded
from .model import MultilayerInstance
from .verify import StabilityQuery, check

__all__ = [
    "OracleBudget",
    "DEFAULT_BUDGET",
    "enumerate_matchings",
    "oracle_solve",
    "oracle_all",
    "oracle_layer_superstable",
    "existence_table",
]


@dataclass(frozen=True)
class OracleBudget:
    max_agents: int = 12
    max_matchings: int | None = None


DEFAULT_BUDGET = OracleBudget()


def _check_budget(n: int, budget: OracleBudget) -> None:
    if n > budget.max_agents:
        raise BudgetExceeded(
            f"{n} agents exceed the oracle budget of {budget.max_agents}"
        )


def _iter_partner_arrays(n: int) -> Iterator[list[int]]:
    """Yield every matching as a partner array (-1 = unmatched).

    Canonical recursion: the smallest unmatched agent either stays single or
    pairs with each larger unmatched agent, in ascending order.  The yielded
    list is reused; callers must copy if they keep it.
    """
    partner = [-1] * n

    def rec(start: int) -> Iterator[list[int]]:
        a = start
        while a < n and partner[a] != -1:
            a += 1
        if a >= n:
            yield partner
            return
        # leave a single
        yield from rec(a + 1)
        for b in range(a + 1, n):
            if partner[b] == -1:
                partner[a] = b
                partner[b] = a
                yield from rec(a + 1)
                partner[a] = -1
                partner[b] = -1

    return rec(0)


def _to_matching(partner: list[int]) -> Matching:
    return Matching(
        tuple((a, b) for a, b in enumerate(partner) if b > a)
    )


def enumerate_matchings(
    n: int, budget: OracleBudget = DEFAULT_BUDGET
) -> Iterator[Matching]:
    """Every matching on ``n`` agents exactly once, deterministic order."""
    _check_budget(n, budget)
    count = 0
    for partner in _iter_partner_arrays(n):
        count += 1
        if budget.max_matchings is not None and count > budget.max_matchings:
            raise BudgetExceeded(
                f"visited more than {budget.max_matchings} matchings"
            )
        yield _to_matching(partner)


def oracle_solve(
    inst: MultilayerInstance,
    q: StabilityQuery,
    budget: OracleBudget = DEFAULT_BUDGET,
) -> Matching | None:
    """First matching satisfying the query in canonical order, or None."""
    q.effective_alpha(inst.ell)
    for m in enumerate_matchings(inst.n, budget):
        if check(inst, m, q).stable:
            return m
    return None


def oracle_all(
    inst: MultilayerInstance,
    q: StabilityQuery,
    budget: OracleBudget = DEFAULT_BUDGET,
) -> list[Matching]:
    """All matchings satisfying the query, canonical order."""
    q.effective_alpha(inst.ell)
    return [
        m for m in enumerate_matchings(inst.n, budget) if check(inst, m, q).stable
    ]


def oracle_layer_superstable(
    inst: MultilayerInstance, layer: int, budget: OracleBudget = DEFAULT_BUDGET
) -> list[Matching]:
    """All matchings that are super stable in one layer."""
    return [
        m
        for m in enumerate_matchings(inst.n, budget)
        if stable_in_layer(inst, m, layer, "super")
    ]


def existence_table(
    inst: MultilayerInstance, budget: OracleBudget = DEFAULT_BUDGET
) -> dict[str, tuple[int, int, int]]:
    """Per base, the best degrees any matching achieves.

    Returns ``base -> (max global count, max pair minimum, max individual
    minimum)``; a query (base, agg, alpha) has a stable matching iff the
    component for its aggregation reaches alpha.  The individual component
    for "strong" is -1 (notion undefined).

    One pass over all matchings, with per-pair layer sets packed into ell-bit
    integers; this is the batched form of oracle_solve used by the randomized
    comparison suites (their agreement is itself under test).
    """
    _check_budget(inst.n, budget)
    n, ell = inst.n, inst.ell
    approvals = inst.approvals
    full = (1 << ell) - 1
    # per-agent approval bitmasks and per-pair approval layer sets are
    # matching-independent
    appr_bits = [
        [sum(1 << i for i in range(ell) if b in approvals[i][a]) for b in range(n)]
        for a in range(n)
    ]
    pairs = [
        (a, b, appr_bits[a][b], appr_bits[b][a])
        for a in range(n)
        for b in range(a + 1, n)
    ]
    best = {base: [0, 0, 0] for base in BASES}
    bw, bs, bp = best["weak"], best["strong"], best["super"]
    for partner in _iter_partner_arrays(n):
        happy = [
            0 if partner[a] == -1 else appr_bits[a][partner[a]] for a in range(n)
        ]
        blk_w = blk_s = blk_p = 0
        min_w = min_s = min_p = ell
        ind_w = ind_p = ell
        for a, b, sa, sb in pairs:
            if partner[a] == b:
                continue
            ha = happy[a]
            hb = happy[b]
            strict_a = sa & ~ha
            strict_b = sb & ~hb
            geq_a = (sa | ~ha) & full
            geq_b = (sb | ~hb) & full
            w = strict_a & strict_b
            s = (strict_a & geq_b) | (strict_b & geq_a)
            p = geq_a & geq_b
            blk_w |= w
            blk_s |= s
            blk_p |= p
            nb = ell - w.bit_count()
            if nb < min_w:
                min_w = nb
            nb = ell - s.bit_count()
            if nb < min_s:
                min_s = nb
            nb = ell - p.bit_count()
            if nb < min_p:
                min_p = nb
            sup = max(
                ((~sa | ha) & full).bit_count(), ((~sb | hb) & full).bit_count()
            )
            if sup < ind_w:
                ind_w = sup
            sup = max((~sa & ha).bit_count(), (~sb & hb).bit_count())
            if sup < ind_p:
                ind_p = sup
        g = ell - blk_w.bit_count()
        if g > bw[0]:
            bw[0] = g
        g = ell - blk_s.bit_count()
        if g > bs[0]:
            bs[0] = g
        g = ell - blk_p.bit_count()
        if g > bp[0]:
            bp[0] = g
        if min_w > bw[1]:
            bw[1] = min_w
        if min_s > bs[1]:
            bs[1] = min_s
        if min_p > bp[1]:
            bp[1] = min_p
        if ind_w > bw[2]:
            bw[2] = ind_w
        if ind_p > bp[2]:
            bp[2] = ind_p
    return {
        base: (rec[0], rec[1], rec[2] if base != "strong" else -1)
        for base, rec in best.items()
    }
