"""Per-layer semantics: happiness, blocking pairs, layer stability.

Approvals induce a two-level preference in each layer: an agent prefers any
approved agent to any disapproved one and to being unmatched, and is
indifferent within each level.  A pair already in the matching never blocks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import NotSymmetric, PairIsMatched
from .model import MultilayerInstance, is_symmetric

__all__ = [
    "Matching",
    "BASES",
    "rank",
    "is_happy",
    "blocks",
    "blocking_pairs",
    "stable_in_layer",
    "stable_layers",
    "weak_char_check",
    "strong_char_check",
]

BASES = ("weak", "strong", "super")


@dataclass(frozen=True)
class Matching:
    """Disjoint unordered agent pairs with partner lookup."""

    pairs: tuple[tuple[int, int], ...]
    _partner: dict[int, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        partner: dict[int, int] = {}
        for a, b in self.pairs:
            if a == b:
                raise ValueError(f"pair ({a}, {b}) has identical endpoints")
            if a in partner or b in partner:
                raise ValueError(f"agent reused by pair ({a}, {b})")
            partner[a] = b
            partner[b] = a
        object.__setattr__(self, "_partner", partner)

    @classmethod
    def from_pairs(cls, pairs) -> "Matching":
        canon = sorted((min(a, b), max(a, b)) for a, b in pairs)
        return cls(tuple(canon))

    def partner(self, a: int) -> int | None:
        return self._partner.get(a)

    def covers(self, a: int) -> bool:
        return a in self._partner

    def has_pair(self, a: int, b: int) -> bool:
        return self._partner.get(a) == b

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)


def rank(inst: MultilayerInstance, a: int, x: int | None, layer: int) -> int:
    """1 if ``x`` is approved by ``a`` in the layer, else 0 (unmatched ranks 0)."""
    if x is None:
        return 0
    return 1 if x in inst.approvals[layer][a] else 0


def is_happy(inst: MultilayerInstance, m: Matching, a: int, layer: int) -> bool:
    p = m.partner(a)
    return p is not None and p in inst.approvals[layer][a]


def blocks(
    inst: MultilayerInstance,
    m: Matching,
    pair: tuple[int, int],
    layer: int,
    base: str,
) -> bool:
    """Does the unmatched pair block the matching in this layer?

    weak: both sides strictly prefer each other; strong: one strict, the
    other at least indifferent; super: both at least indifferent.
    """
    a, b = pair
    if m.partner(a) == b:
        raise PairIsMatched(f"pair ({a}, {b}) is in the matching")
    lay = inst.approvals[layer]
    sa = b in lay[a]
    sb = a in lay[b]
    pa = m.partner(a)
    pb = m.partner(b)
    ha = pa is not None and pa in lay[a]
    hb = pb is not None and pb in lay[b]
    if base == "weak":
        return sa and not ha and sb and not hb
    strict_a = sa and not ha
    strict_b = sb and not hb
    geq_a = sa or not ha
    geq_b = sb or not hb
    if base == "strong":
        return (strict_a and geq_b) or (strict_b and geq_a)
    if base == "super":
        return geq_a and geq_b
    raise ValueError(f"unknown stability base {base!r}")


def blocking_pairs(
    inst: MultilayerInstance, m: Matching, layer: int, base: str
) -> list[tuple[int, int]]:
    """All unmatched pairs blocking the matching in the layer, lexicographic."""
    out = []
    for a in range(inst.n):
        for b in range(a + 1, inst.n):
            if m.partner(a) == b:
                continue
            if blocks(inst, m, (a, b), layer, base):
                out.append((a, b))
    return out


def stable_in_layer(
    inst: MultilayerInstance, m: Matching, layer: int, base: str
) -> bool:
    for a in range(inst.n):
        for b in range(a + 1, inst.n):
            if m.partner(a) == b:
                continue
            if blocks(inst, m, (a, b), layer, base):
                return False
    return True


def stable_layers(inst: MultilayerInstance, m: Matching, base: str) -> frozenset[int]:
    return frozenset(
        i for i in range(inst.ell) if stable_in_layer(inst, m, i, base)
    )


def weak_char_check(inst: MultilayerInstance, m: Matching, layer: int) -> bool:
    """Symmetric-instance fast path: weakly stable iff the matching restricted
    to the layer's mutual edges is maximal there, i.e. every mutual edge has a
    happy endpoint."""
    if not is_symmetric(inst):
        raise NotSymmetric("weak characterization requires symmetric approvals")
    for a, b in inst.mutual_edges(layer):
        if not is_happy(inst, m, a, layer) and not is_happy(inst, m, b, layer):
            return False
    return True


def strong_char_check(inst: MultilayerInstance, m: Matching, layer: int) -> bool:
    """Symmetric-instance fast path: strongly stable iff every agent with a
    neighbor in the layer is matched along a mutual edge."""
    if not is_symmetric(inst):
        raise NotSymmetric("strong characterization requires symmetric approvals")
    lay = inst.approvals[layer]
    for a in range(inst.n):
        if lay[a] and not is_happy(inst, m, a, layer):
            return False
    return True
