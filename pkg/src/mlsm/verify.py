"""Multilayer stability checking for all eleven notions.

A query combines a base notion (weak/strong/super) with an aggregation:
all-layers, alpha-global, alpha-pair, or alpha-individual.  There is no
strong-individual notion.  All-layers is canonicalized to global(ell).
"""

from __future__ import annotations

from dataclasses import dataclass

from .blocking import BASES, Matching, blocks, is_happy, stable_layers
from .errors import AlphaOutOfRange, InvalidQuery, PairIsMatched
from .model import MultilayerInstance

__all__ = [
    "AGGREGATIONS",
    "StabilityQuery",
    "Verdict",
    "StabilityCounts",
    "check",
    "stability_counts",
    "pair_nonblocking_count",
    "individual_support_counts",
    "all_queries",
]

AGGREGATIONS = ("all", "global", "pair", "individual")


@dataclass(frozen=True)
class StabilityQuery:
    """base x aggregation x degree.  ``alpha`` must be None for "all"."""

    base: str
    agg: str
    alpha: int | None = None

    def __post_init__(self):
        if self.base not in BASES:
            raise InvalidQuery(f"unknown base {self.base!r}")
        if self.agg not in AGGREGATIONS:
            raise InvalidQuery(f"unknown aggregation {self.agg!r}")
        if self.base == "strong" and self.agg == "individual":
            raise InvalidQuery("there is no strong individual stability")
        if self.agg == "all":
            if self.alpha is not None:
                raise InvalidQuery("all-layers takes no alpha")
        elif self.alpha is None:
            raise InvalidQuery(f"{self.agg} aggregation requires alpha")

    def effective_alpha(self, ell: int) -> int:
        """Resolve the degree against an instance, validating the range."""
        if self.agg == "all":
            return ell
        assert self.alpha is not None
        if not 1 <= self.alpha <= ell:
            raise AlphaOutOfRange(f"alpha={self.alpha} outside [1, {ell}]")
        return self.alpha

    def describe(self) -> str:
        if self.agg == "all":
            return f"all-layers {self.base}"
        return f"{self.alpha}-{self.agg} {self.base}"


@dataclass(frozen=True)
class Verdict:
    """Outcome plus a machine-checkable witness.

    For global aggregations ``witness_layers`` is the full set of stable
    layers (even when too small).  For pair/individual aggregations an
    unstable verdict names the lexicographically least violating pair, the
    layers in which it blocks, and (individual only) the two per-agent
    support counts.
    """

    stable: bool
    query: StabilityQuery
    witness_layers: frozenset[int] | None = None
    violating_pair: tuple[int, int] | None = None
    blocking_layers: frozenset[int] | None = None
    supports: tuple[int, int] | None = None


def _unmatched_pairs(inst: MultilayerInstance, m: Matching):
    for a in range(inst.n):
        for b in range(a + 1, inst.n):
            if m.partner(a) != b:
                yield a, b


def pair_nonblocking_count(
    inst: MultilayerInstance, m: Matching, pair: tuple[int, int], base: str
) -> int:
    """Number of layers in which the unmatched pair does not block."""
    a, b = pair
    if m.partner(a) == b:
        raise PairIsMatched(f"pair ({a}, {b}) is in the matching")
    return sum(
        1 for i in range(inst.ell) if not blocks(inst, m, pair, i, base)
    )


def individual_support_counts(
    inst: MultilayerInstance, m: Matching, pair: tuple[int, int], base: str
) -> tuple[int, int]:
    """Per-agent counts of layers satisfying the individual clause.

    Weak: the agent does not approve the other or is happy.  Super: the agent
    does not approve the other and is happy.
    """
    if base == "strong":
        raise InvalidQuery("there is no strong individual stability")
    a, b = pair
    if m.partner(a) == b:
        raise PairIsMatched(f"pair ({a}, {b}) is in the matching")
    count_a = count_b = 0
    for i in range(inst.ell):
        lay = inst.approvals[i]
        sa = b in lay[a]
        sb = a in lay[b]
        ha = is_happy(inst, m, a, i)
        hb = is_happy(inst, m, b, i)
        if base == "weak":
            count_a += int(not sa or ha)
            count_b += int(not sb or hb)
        else:
            count_a += int(not sa and ha)
            count_b += int(not sb and hb)
    return count_a, count_b


def check(inst: MultilayerInstance, m: Matching, q: StabilityQuery) -> Verdict:
    """Decide whether the matching satisfies the queried stability notion."""
    alpha = q.effective_alpha(inst.ell)
    if q.agg in ("all", "global"):
        layers = stable_layers(inst, m, q.base)
        return Verdict(len(layers) >= alpha, q, witness_layers=layers)
    if q.agg == "pair":
        for pair in _unmatched_pairs(inst, m):
            blocked = frozenset(
                i for i in range(inst.ell) if blocks(inst, m, pair, i, q.base)
            )
            if inst.ell - len(blocked) < alpha:
                return Verdict(
                    False, q, violating_pair=pair, blocking_layers=blocked
                )
        return Verdict(True, q)
    # individual
    for pair in _unmatched_pairs(inst, m):
        ca, cb = individual_support_counts(inst, m, pair, q.base)
        if max(ca, cb) < alpha:
            blocked = frozenset(
                i for i in range(inst.ell) if blocks(inst, m, pair, i, q.base)
            )
            return Verdict(
                False,
                q,
                violating_pair=pair,
                blocking_layers=blocked,
                supports=(ca, cb),
            )
    return Verdict(True, q)


@dataclass(frozen=True)
class StabilityCounts:
    """Degrees to which one matching satisfies one base, over all aggregations.

    ``global_count`` is the number of stable layers; ``pair_min`` the minimum
    over unmatched pairs of non-blocking layer counts; ``individual_min`` the
    minimum over unmatched pairs of the better agent's support count (None for
    strong).  With no unmatched pair the minima default to ell.
    """

    global_count: int
    pair_min: int
    individual_min: int | None

    def satisfies(self, agg: str, alpha: int) -> bool:
        if agg in ("all", "global"):
            return self.global_count >= alpha
        if agg == "pair":
            return self.pair_min >= alpha
        if self.individual_min is None:
            raise InvalidQuery("there is no strong individual stability")
        return self.individual_min >= alpha


def stability_counts(
    inst: MultilayerInstance, m: Matching, base: str
) -> StabilityCounts:
    ell = inst.ell
    layer_blocked = [False] * ell
    pair_min = ell
    ind_min: int | None = ell if base != "strong" else None
    for pair in _unmatched_pairs(inst, m):
        nonblocking = 0
        ca = cb = 0
        a, b = pair
        for i in range(ell):
            lay = inst.approvals[i]
            sa = b in lay[a]
            sb = a in lay[b]
            pa = m.partner(a)
            pb = m.partner(b)
            ha = pa is not None and pa in lay[a]
            hb = pb is not None and pb in lay[b]
            if base == "weak":
                blk = sa and not ha and sb and not hb
                ca += int(not sa or ha)
                cb += int(not sb or hb)
            elif base == "super":
                blk = (sa or not ha) and (sb or not hb)
                ca += int(not sa and ha)
                cb += int(not sb and hb)
            else:
                blk = (sa and not ha and (sb or not hb)) or (
                    sb and not hb and (sa or not ha)
                )
            if blk:
                layer_blocked[i] = True
            else:
                nonblocking += 1
        pair_min = min(pair_min, nonblocking)
        if ind_min is not None:
            ind_min = min(ind_min, max(ca, cb))
    return StabilityCounts(ell - sum(layer_blocked), pair_min, ind_min)


def all_queries(ell: int) -> list[StabilityQuery]:
    """Every valid query against an instance with ``ell`` layers."""
    out = []
    for base in BASES:
        out.append(StabilityQuery(base, "all"))
        for agg in ("global", "pair", "individual"):
            if base == "strong" and agg == "individual":
                continue
            for alpha in range(1, ell + 1):
                out.append(StabilityQuery(base, agg, alpha))
    return out
