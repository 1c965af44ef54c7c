"""Every positive algorithm for the eleven stability notions, plus a dispatcher.

Complete solvers return a definitive exists / not-exists; the dispatcher
routes each query to the best applicable algorithm and falls back to the
exhaustive oracle at small scale, reporting unknown rather than guessing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb

from .blocking import Matching, stable_in_layer
from .errors import AlphaOutOfRange, AlphaTooHigh, AlphaTooLow, NotSymmetric
from .graphalg import SimpleGraph, has_perfect_matching, maximal_matching, maximum_matching, saturating_matching
from .model import MultilayerInstance, agent_types, changing_agents, is_symmetric
from .oracle import DEFAULT_BUDGET, OracleBudget, _iter_partner_arrays, oracle_solve
from .verify import StabilityQuery, check

__all__ = [
    "SolveResult",
    "threshold_graph",
    "solve_weak_lowalpha",
    "solve_strong_alllayers_symmetric",
    "solve_strong_global_symmetric",
    "layer_superstable_set",
    "solve_super_global",
    "solve_super_individual_highalpha",
    "solve_super_pair_veryhighalpha",
    "solve_super_pair_fpt",
    "solve_by_types",
    "solve_by_changing",
    "dispatch",
]

# dispatcher gates for the parameterized algorithms
TAU_DISPATCH_MAX = 3
BETA_DISPATCH_MAX = 5
STRONG_GLOBAL_SUBSETS_MAX = 10_000


@dataclass(frozen=True)
class SolveResult:
    """exists(M) / not-exists / unknown, tagged with the deciding algorithm."""

    status: str
    algorithm: str
    matching: Matching | None = None
    witness_layers: frozenset[int] | None = None
    detail: str | None = None

    @classmethod
    def found(cls, alg, m, layers=None) -> "SolveResult":
        return cls("exists", alg, m, layers)

    @classmethod
    def none(cls, alg) -> "SolveResult":
        return cls("not-exists", alg)

    @classmethod
    def undecided(cls, alg, detail) -> "SolveResult":
        return cls("unknown", alg, detail=detail)

    @property
    def exists(self) -> bool:
        return self.status == "exists"


def _require_symmetric(inst: MultilayerInstance, what: str) -> None:
    if not is_symmetric(inst):
        raise NotSymmetric(f"{what} requires symmetric approvals")


def _check_alpha(alpha: int, ell: int) -> None:
    if not 1 <= alpha <= ell:
        raise AlphaOutOfRange(f"alpha={alpha} outside [1, {ell}]")


def threshold_graph(inst: MultilayerInstance, k: int, mutual: bool = True) -> SimpleGraph:
    """Graph with an edge where approval persists across at least ``k`` layers.

    ``mutual=True`` counts layers in which both directions are present at
    once; ``mutual=False`` counts each direction separately and requires both
    counts to reach ``k``.  The two coincide on symmetric instances.
    """
    edges = []
    for a in range(inst.n):
        for b in range(a + 1, inst.n):
            if mutual:
                hit = sum(1 for i in range(inst.ell) if inst.mutual(a, b, i))
                if hit >= k:
                    edges.append((a, b))
            else:
                ab = sum(1 for i in range(inst.ell) if inst.approves(a, b, i))
                ba = sum(1 for i in range(inst.ell) if inst.approves(b, a, i))
                if ab >= k and ba >= k:
                    edges.append((a, b))
    return SimpleGraph.from_edges(inst.n, edges)


# ---------------------------------------------------------------------------
# weak stability, low degree (always solvable)


def solve_weak_lowalpha(inst: MultilayerInstance, alpha: int) -> Matching:
    """A matching that is alpha-individually (hence alpha-pair) weakly stable.

    Exists for every instance when alpha <= ceil(ell/2): take a maximal
    matching of the graph whose edges are the pairs approving each other in
    at least ell - alpha + 1 layers (per direction).
    """
    _check_alpha(alpha, inst.ell)
    if alpha > (inst.ell + 1) // 2:
        raise AlphaTooHigh(
            f"alpha={alpha} exceeds ceil(ell/2)={(inst.ell + 1) // 2}"
        )
    g = threshold_graph(inst, inst.ell - alpha + 1, mutual=False)
    return maximal_matching(g)


# ---------------------------------------------------------------------------
# strong stability, symmetric approvals


def _layers_subset(inst: MultilayerInstance, layers) -> MultilayerInstance:
    rows = tuple(inst.approvals[i] for i in layers)
    return MultilayerInstance(inst.n, len(rows), rows, inst.names)


def _delete_agent(inst: MultilayerInstance, victim: int) -> MultilayerInstance:
    remap = {a: (a if a < victim else a - 1) for a in range(inst.n) if a != victim}
    rows = tuple(
        tuple(
            frozenset(remap[b] for b in lay[a] if b != victim)
            for a in range(inst.n)
            if a != victim
        )
        for lay in inst.approvals
    )
    return MultilayerInstance(inst.n - 1, inst.ell, rows)


def solve_strong_alllayers_symmetric(inst: MultilayerInstance) -> Matching | None:
    """Decide all-layers strong stability for symmetric approvals.

    Even n: stable matchings are exactly the perfect matchings of the graph
    keeping, per layer, the mutual edges plus all pairs of agents that
    approve nobody in that layer.  Odd n: some agent must approve nobody in
    any layer; delete one and recurse onto the even case.
    """
    _require_symmetric(inst, "solve_strong_alllayers_symmetric")
    if inst.n % 2 == 1:
        silent = [
            a
            for a in range(inst.n)
            if all(not inst.approvals[i][a] for i in range(inst.ell))
        ]
        if not silent:
            return None
        victim = silent[0]
        sub = solve_strong_alllayers_symmetric(_delete_agent(inst, victim))
        if sub is None:
            return None
        lift = lambda a: a if a < victim else a + 1
        return Matching.from_pairs((lift(a), lift(b)) for a, b in sub.pairs)
    loner = [
        [not inst.approvals[i][a] for a in range(inst.n)]
        for i in range(inst.ell)
    ]
    edges = []
    for a in range(inst.n):
        for b in range(a + 1, inst.n):
            if all(
                inst.mutual(a, b, i) or (loner[i][a] and loner[i][b])
                for i in range(inst.ell)
            ):
                edges.append((a, b))
    return has_perfect_matching(SimpleGraph.from_edges(inst.n, edges))


def solve_strong_global_symmetric(inst: MultilayerInstance, alpha: int) -> SolveResult:
    """Try every size-alpha layer subset through the all-layers algorithm."""
    _require_symmetric(inst, "solve_strong_global_symmetric")
    _check_alpha(alpha, inst.ell)
    tag = "strong-global-symmetric"
    for subset in itertools.combinations(range(inst.ell), alpha):
        m = solve_strong_alllayers_symmetric(_layers_subset(inst, subset))
        if m is not None:
            return SolveResult.found(tag, m, frozenset(subset))
    return SolveResult.none(tag)


# ---------------------------------------------------------------------------
# super stability


def layer_superstable_set(inst: MultilayerInstance, layer: int) -> list[Matching]:
    """All (at most three) super stable matchings of a single layer.

    Mutual pairs are forced; an agent on two mutual pairs kills the layer;
    after removing forced agents, more than three leftovers kill it too,
    otherwise the few completion candidates are checked directly.
    """
    forced = inst.mutual_edges(layer)
    seen: set[int] = set()
    for a, b in forced:
        if a in seen or b in seen:
            return []
        seen.add(a)
        seen.add(b)
    rest = [a for a in range(inst.n) if a not in seen]
    if len(rest) >= 4:
        return []
    if len(rest) <= 1:
        candidates = [forced]
    elif len(rest) == 2:
        candidates = [forced + [(rest[0], rest[1])]]
    else:
        u, v, w = rest
        candidates = [forced + [pair] for pair in ((u, v), (u, w), (v, w))]
    out = []
    for pairs in candidates:
        m = Matching.from_pairs(pairs)
        if stable_in_layer(inst, m, layer, "super"):
            out.append(m)
    return out


def solve_super_global(inst: MultilayerInstance, alpha: int) -> SolveResult:
    """Count multiplicities of per-layer super stable matchings.

    Each layer contributes at most three candidates; a matching super stable
    in at least alpha layers is one whose canonical encoding repeats that
    often.  Complete for arbitrary (also asymmetric) approvals.
    """
    _check_alpha(alpha, inst.ell)
    tag = "super-global"
    hits: dict[Matching, list[int]] = {}
    for i in range(inst.ell):
        for m in layer_superstable_set(inst, i):
            hits.setdefault(m, []).append(i)
    winners = sorted(
        ((m, layers) for m, layers in hits.items() if len(layers) >= alpha),
        key=lambda pair: pair[0].pairs,
    )
    if winners:
        m, layers = winners[0]
        return SolveResult.found(tag, m, frozenset(layers))
    return SolveResult.none(tag)


def _super_threshold_skeleton(inst: MultilayerInstance, alpha: int):
    """Forced edges of the (ell - alpha + 1)-mutual threshold graph.

    Returns (forced pairs, isolated vertices) or None when some vertex has
    threshold degree two or more (no stable matching can contain both forced
    pairs).
    """
    g = threshold_graph(inst, inst.ell - alpha + 1, mutual=True)
    degree = [0] * inst.n
    for u, v in g.edges:
        degree[u] += 1
        degree[v] += 1
    if any(d >= 2 for d in degree):
        return None
    forced = g.sorted_edges()
    isolated = [v for v in range(inst.n) if degree[v] == 0]
    return forced, isolated


def solve_super_individual_highalpha(inst: MultilayerInstance, alpha: int) -> SolveResult:
    """alpha-individual super stability for symmetric approvals, alpha > ell/2.

    The threshold-graph edges are forced, at most two isolated agents can
    survive (matched together when exactly two); the single candidate is
    verified against the checker.
    """
    _require_symmetric(inst, "solve_super_individual_highalpha")
    _check_alpha(alpha, inst.ell)
    if 2 * alpha <= inst.ell:
        raise AlphaTooLow(f"alpha={alpha} is not above ell/2={inst.ell / 2}")
    tag = "super-individual-highalpha"
    skeleton = _super_threshold_skeleton(inst, alpha)
    if skeleton is None:
        return SolveResult.none(tag)
    forced, isolated = skeleton
    if len(isolated) >= 3:
        return SolveResult.none(tag)
    pairs = list(forced)
    if len(isolated) == 2:
        pairs.append((isolated[0], isolated[1]))
    m = Matching.from_pairs(pairs)
    verdict = check(inst, m, StabilityQuery("super", "individual", alpha))
    if verdict.stable:
        return SolveResult.found(tag, m)
    return SolveResult.none(tag)


def solve_super_pair_veryhighalpha(inst: MultilayerInstance, alpha: int) -> SolveResult:
    """alpha-pair super stability for symmetric approvals, alpha > 2*ell/3."""
    _require_symmetric(inst, "solve_super_pair_veryhighalpha")
    _check_alpha(alpha, inst.ell)
    if 3 * alpha <= 2 * inst.ell:
        raise AlphaTooLow(f"alpha={alpha} is not above 2*ell/3={2 * inst.ell / 3}")
    tag = "super-pair-veryhighalpha"
    skeleton = _super_threshold_skeleton(inst, alpha)
    if skeleton is None:
        return SolveResult.none(tag)
    forced, isolated = skeleton
    if len(isolated) >= 3:
        return SolveResult.none(tag)
    pairs = list(forced)
    if len(isolated) == 2:
        pairs.append((isolated[0], isolated[1]))
    m = Matching.from_pairs(pairs)
    verdict = check(inst, m, StabilityQuery("super", "pair", alpha))
    if verdict.stable:
        return SolveResult.found(tag, m)
    return SolveResult.none(tag)


def solve_super_pair_fpt(inst: MultilayerInstance, alpha: int) -> SolveResult:
    """alpha-pair super stability for symmetric approvals, alpha > ell/2.

    Beyond the forced threshold edges, more than 2^(ell+1) isolated agents
    rule out a solution; otherwise the isolated kernel is matched among
    itself exhaustively and each completion is verified.
    """
    _require_symmetric(inst, "solve_super_pair_fpt")
    _check_alpha(alpha, inst.ell)
    if 2 * alpha <= inst.ell:
        raise AlphaTooLow(f"alpha={alpha} is not above ell/2={inst.ell / 2}")
    tag = "super-pair-fpt"
    skeleton = _super_threshold_skeleton(inst, alpha)
    if skeleton is None:
        return SolveResult.none(tag)
    forced, isolated = skeleton
    if len(isolated) > 2 ** (inst.ell + 1):
        return SolveResult.none(tag)
    q = StabilityQuery("super", "pair", alpha)
    for partner in _iter_partner_arrays(len(isolated)):
        pairs = list(forced)
        pairs.extend(
            (isolated[i], isolated[j]) for i, j in enumerate(partner) if j > i
        )
        m = Matching.from_pairs(pairs)
        if check(inst, m, q).stable:
            return SolveResult.found(tag, m)
    return SolveResult.none(tag)


# ---------------------------------------------------------------------------
# few agent types


def _type_approval_table(inst: MultilayerInstance, blocks):
    """type-level approval: does (an agent of) type t approve type u per layer?

    Within a singleton type the relation has no witness pair; those entries
    stay None and are never consulted for feasible usage patterns.
    """
    table = {}
    for t, bt in enumerate(blocks):
        for u, bu in enumerate(blocks):
            if t == u and len(bt) < 2:
                table[(t, u)] = None
                continue
            a = bt[0]
            b = bu[0] if u != t else bt[1]
            table[(t, u)] = tuple(
                b in inst.approvals[i][a] for i in range(inst.ell)
            )
    return table


def _usage_vectors(sizes, edges):
    """All exact per-edge pair counts matching every type's block size.

    ``edges`` are unordered type pairs (loops included, counting double).
    """
    remaining = list(sizes)
    counts = [0] * len(edges)
    last_touch = {}
    for idx, (t, u) in enumerate(edges):
        last_touch[t] = idx
        last_touch[u] = idx
    out = []

    def rec(idx: int):
        if idx == len(edges):
            if all(r == 0 for r in remaining):
                out.append(tuple(counts))
            return
        t, u = edges[idx]
        if t == u:
            top = remaining[t] // 2
        else:
            top = min(remaining[t], remaining[u])
        for c in range(top + 1):
            counts[idx] = c
            if t == u:
                remaining[t] -= 2 * c
            else:
                remaining[t] -= c
                remaining[u] -= c
            dead = (last_touch[t] == idx and remaining[t] != 0) or (
                last_touch[u] == idx and remaining[u] != 0
            )
            if not dead:
                rec(idx + 1)
            if t == u:
                remaining[t] += 2 * c
            else:
                remaining[t] += c
                remaining[u] += c
        counts[idx] = 0

    rec(0)
    return out


@lru_cache(maxsize=64)
def _types_tables(inst: MultilayerInstance):
    """Per usage pattern: the reduced two-agents-per-profile instance and a
    witness matching of the (dummy-padded) instance.

    A pattern records, per type pair, whether it is matched zero times, once,
    or at least twice; stability of a compatible perfect matching depends
    only on that signature, so one reduced check per pattern decides all of
    them.
    """
    padded = inst
    dummy = inst.n % 2 == 1
    if dummy:
        rows = tuple(
            tuple(lay) + (frozenset(),) for lay in inst.approvals
        )
        padded = MultilayerInstance(inst.n + 1, inst.ell, rows)
    blocks = agent_types(padded).blocks
    table = _type_approval_table(padded, blocks)
    sizes = [len(b) for b in blocks]
    edges = [
        (t, u) for t in range(len(blocks)) for u in range(t, len(blocks))
    ]
    by_signature: dict[tuple[int, ...], tuple[int, ...]] = {}
    for usage in _usage_vectors(sizes, edges):
        sig = tuple(min(c, 2) for c in usage)
        by_signature.setdefault(sig, usage)
    entries = []
    for sig in sorted(by_signature):
        usage = by_signature[sig]
        # reduced instance: one matched agent pair per profile copy
        profiles = []  # first-component type per reduced agent
        j_pairs = []
        for idx, (t, u) in enumerate(edges):
            for _ in range(sig[idx]):
                j_pairs.append((len(profiles), len(profiles) + 1))
                profiles.append(t)
                profiles.append(u)
        j_rows = tuple(
            tuple(
                frozenset(
                    y
                    for y in range(len(profiles))
                    if y != x and table[(profiles[x], profiles[y])][i]
                )
                for x in range(len(profiles))
            )
            for i in range(inst.ell)
        )
        j_inst = MultilayerInstance(len(profiles), inst.ell, j_rows)
        j_match = Matching.from_pairs(j_pairs)
        # witness: hand out concrete agents per block, edge by edge
        queues = [list(b) for b in blocks]
        pairs = []
        for idx, (t, u) in enumerate(edges):
            for _ in range(usage[idx]):
                if t == u:
                    pairs.append((queues[t].pop(0), queues[t].pop(0)))
                else:
                    pairs.append((queues[t].pop(0), queues[u].pop(0)))
        witness = Matching.from_pairs(pairs)
        entries.append((j_inst, j_match, witness))
    return tuple(entries), dummy


def solve_by_types(inst: MultilayerInstance, q: StabilityQuery) -> SolveResult:
    """Complete decision for any query, exponential only in the number of
    agent types.

    Iterates usage patterns of type pairs (odd n padded with a dummy agent
    approving and approved by nobody); a pattern is accepted when its reduced
    instance passes the checker, and any accepted pattern yields a concrete
    stable matching.
    """
    q.effective_alpha(inst.ell)
    tag = "agent-types"
    entries, dummy = _types_tables(inst)
    for j_inst, j_match, witness in entries:
        if not check(j_inst, j_match, q).stable:
            continue
        m = witness
        if dummy:
            m = Matching.from_pairs(
                (a, b) for a, b in witness.pairs if b != inst.n
            )
        verdict = check(inst, m, q)
        if verdict.stable:
            return SolveResult.found(tag, m, verdict.witness_layers)
    return SolveResult.none(tag)


# ---------------------------------------------------------------------------
# few changing agents


@lru_cache(maxsize=64)
def _changing_candidates(inst: MultilayerInstance):
    """Candidate matchings for the few-changing-agents search, by base family.

    All guesses of the search are query-independent: which changing agents
    pair up inside B, and (weak only) which agents must stay happy in every
    layer.  The final stability check is the only query-dependent step.
    """
    changing = sorted(changing_agents(inst).agents)
    b_set = set(changing)
    n = inst.n
    static = [a for a in range(n) if a not in b_set]
    # approvals of non-changing agents are identical in all layers
    approved_by: dict[int, frozenset[int]] = {
        b: frozenset(a for a in static if b in inst.approvals[0][a])
        for b in changing
    }

    def graph_for(matched_b: set[int]) -> SimpleGraph:
        edges = []
        for a in static:
            for c in inst.approvals[0][a]:
                if c in matched_b:
                    continue
                if c in b_set or a < c:
                    edges.append((a, c))
        return SimpleGraph.from_edges(n, edges)

    weak_cands: list[Matching] = []
    mcm_cands: list[Matching] = []
    seen_weak: set[tuple] = set()
    seen_mcm: set[tuple] = set()
    beta = len(changing)
    for partner in _iter_partner_arrays(beta):
        b_pairs = [
            (changing[i], changing[j]) for i, j in enumerate(partner) if j > i
        ]
        matched_b = {a for pair in b_pairs for a in pair}
        free_b = [b for b in changing if b not in matched_b]
        g = graph_for(matched_b)
        # strong/super: maximum matching plus arbitrary completion
        mcm = maximum_matching(g)
        leftover = [
            v
            for v in range(n)
            if v not in matched_b and not mcm.covers(v)
        ]
        completion = list(zip(leftover[0::2], leftover[1::2]))
        cand = Matching.from_pairs(b_pairs + list(mcm.pairs) + completion)
        if cand.pairs not in seen_mcm:
            seen_mcm.add(cand.pairs)
            mcm_cands.append(cand)
        # weak: saturate a guessed must-be-happy set, then go maximal
        happy_sets = set()
        for keep_mask in range(1 << len(free_b)):
            kept = frozenset(
                b for k, b in enumerate(free_b) if keep_mask >> k & 1
            )
            for c_mask in range(1 << beta):
                chosen = [
                    changing[k] for k in range(beta) if c_mask >> k & 1
                ]
                happy = kept.union(*(approved_by[b] for b in chosen)) if chosen else kept
                happy_sets.add(happy)
        for happy in sorted(happy_sets, key=sorted):
            sat = saturating_matching(g, happy)
            if sat is None:
                continue
            ext = _extend_maximal(g, sat)
            cand = Matching.from_pairs(b_pairs + list(ext.pairs))
            if cand.pairs not in seen_weak:
                seen_weak.add(cand.pairs)
                weak_cands.append(cand)
    return tuple(weak_cands), tuple(mcm_cands)


def _extend_maximal(g: SimpleGraph, m: Matching) -> Matching:
    used = {a for pair in m.pairs for a in pair}
    pairs = list(m.pairs)
    for u, v in g.sorted_edges():
        if u not in used and v not in used:
            pairs.append((u, v))
            used.add(u)
            used.add(v)
    return Matching.from_pairs(pairs)


def solve_by_changing(inst: MultilayerInstance, q: StabilityQuery) -> SolveResult:
    """Complete decision for symmetric approvals, exponential only in the
    number of agents whose approvals differ between layers."""
    _require_symmetric(inst, "solve_by_changing")
    q.effective_alpha(inst.ell)
    tag = "changing-agents"
    weak_cands, mcm_cands = _changing_candidates(inst)
    for cand in weak_cands if q.base == "weak" else mcm_cands:
        verdict = check(inst, cand, q)
        if verdict.stable:
            return SolveResult.found(tag, cand, verdict.witness_layers)
    return SolveResult.none(tag)


# ---------------------------------------------------------------------------
# dispatcher


def dispatch(
    inst: MultilayerInstance,
    q: StabilityQuery,
    budget: OracleBudget = DEFAULT_BUDGET,
) -> SolveResult:
    """Route a query to the strongest applicable complete algorithm.

    Precedence: the guaranteed weak low-alpha construction, then the
    polynomial super/strong algorithms, then the threshold-graph super
    algorithms, then the parameterized searches (few types, few changing
    agents), then the oracle within budget.  Anything else is unknown, never
    a guessed not-exists.
    """
    ell = inst.ell
    alpha = q.effective_alpha(ell)
    symmetric = is_symmetric(inst)
    if (
        q.base == "weak"
        and q.agg in ("pair", "individual")
        and alpha <= (ell + 1) // 2
    ):
        m = solve_weak_lowalpha(inst, alpha)
        return SolveResult.found("weak-lowalpha", m)
    if q.base == "super" and q.agg in ("all", "global"):
        return solve_super_global(inst, alpha)
    if q.base == "strong" and q.agg in ("all", "global") and symmetric:
        if q.agg == "all" or alpha == ell:
            m = solve_strong_alllayers_symmetric(inst)
            if m is None:
                return SolveResult.none("strong-alllayers-symmetric")
            return SolveResult.found(
                "strong-alllayers-symmetric", m, frozenset(range(ell))
            )
        if comb(ell, alpha) <= STRONG_GLOBAL_SUBSETS_MAX:
            return solve_strong_global_symmetric(inst, alpha)
    if q.base == "super" and symmetric:
        if q.agg == "individual" and 2 * alpha > ell:
            return solve_super_individual_highalpha(inst, alpha)
        if q.agg == "pair" and 3 * alpha > 2 * ell:
            return solve_super_pair_veryhighalpha(inst, alpha)
        if q.agg == "pair" and 2 * alpha > ell:
            return solve_super_pair_fpt(inst, alpha)
    if agent_types(inst).tau <= TAU_DISPATCH_MAX:
        return solve_by_types(inst, q)
    if symmetric and changing_agents(inst).beta <= BETA_DISPATCH_MAX:
        return solve_by_changing(inst, q)
    if inst.n <= budget.max_agents:
        m = oracle_solve(inst, q, budget)
        if m is None:
            return SolveResult.none("oracle")
        verdict = check(inst, m, q)
        return SolveResult.found("oracle", m, verdict.witness_layers)
    return SolveResult.undecided(
        "none", f"no complete algorithm applies and n={inst.n} exceeds the oracle budget"
    )
