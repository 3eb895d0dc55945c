"""Parametrized configuration-search solvers for deviator stability.

The search fixes, per configuration, how every deviator is matched (its
candidate matching M_C) together with a small set B of tolerated blocking
pairs / blocking agents (|B| <= k).  Agents that some deviator prefers to
its assigned partner — and whose pair/agent is not tolerated — must end up
matched strictly better than every such deviator, which is enforced by
truncating their preference lists and solving a weighted matching problem
over the remaining agents.  The first configuration whose extension exists
and verifies decides the outcome.

Running time is exponential only in the number of deviators and the budget;
everything else is polynomial.  In the any-size regime the solver touches
no preference list of agents at acceptability-distance three or more from
the deviator set; the module-level _list_hook lets tests observe every list
read and check exactly that.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace

from .classic import WeightedGraph, gale_shapley, max_cardinality_size, max_weight_matching
from .core import (
    DeviatorProblem,
    Instance,
    Matching,
    Objective,
    SizeRegime,
    SolveOutcome,
    blocking_report,
    objective_value,
    verify_solution,
)

_UNRANKED = 1 << 30

# Test instrumentation: when set, called with an agent id every time this
# module reads that agent's preference-list content.
_list_hook = None


class PerfectInfeasible(ValueError):
    """No perfect matching exists, so the perfect regime has no optimum."""


def _list_of(inst: Instance, agent: int) -> tuple[int, ...]:
    if _list_hook is not None:
        _list_hook(agent)
    return inst.prefs[agent]


def _rank_map(inst: Instance, agent: int, cache: dict) -> dict[int, int]:
    got = cache.get(agent)
    if got is None:
        got = {j: r for r, j in enumerate(_list_of(inst, agent), start=1)}
        cache[agent] = got
    return got


@dataclass(frozen=True)
class CandidateConfiguration:
    """One guess of the deviators' pairs plus the tolerated instability.

    candidate_matching touches only deviators and their chosen partners.
    blocked_set holds candidate blocking pairs (each containing a deviator,
    disjoint from the matching) under the pair objective, or candidate
    blocking deviators under the agent objective.  index is the position in
    the deterministic enumeration.
    """

    candidate_matching: Matching
    blocked_set: frozenset
    index: int


@dataclass(frozen=True)
class TruncationResult:
    """Lists truncated so must-match agents only accept good-enough partners.

    must_match collects every agent some deviator prefers to its assigned
    partner (its pair/agent not tolerated); each keeps only the entries
    strictly better than its best-ranked such deviator.  rejected is set
    when the configuration is self-contradictory, with reason saying why.
    """

    truncated_instance: Instance
    must_match: frozenset[int]
    rejected: bool
    reason: str | None = None
    configuration: CandidateConfiguration | None = None


def enumerate_configurations(p: DeviatorProblem, k: int):
    """Yield every candidate configuration for budget k, in a fixed order.

    Deviators are processed in ascending id; each picks a partner from its
    own list in rank order, or unmatched last.  Combinations that are not
    matchings (a deviator pair without reciprocity, or a partner claimed
    twice) are discarded.  Each matching is then crossed with every
    tolerated set: sizes 0..k, lexicographic within a size, drawn from the
    canonical deviator pairs (pair objective; sets clashing with the
    matching are skipped) or from the deviators themselves (agent
    objective).
    """
    inst = p.instance
    devs = sorted(p.deviators)
    dev_pos = {d: i for i, d in enumerate(devs)}
    options = [list(_list_of(inst, d)) + [None] for d in devs]

    if p.objective is Objective.BLOCKING_PAIRS:
        pool = sorted(
            {(d, r) if d < r else (r, d) for d in devs for r in _list_of(inst, d)}
        )
    else:
        pool = devs

    index = 0
    for combo in itertools.product(*options):
        pairs = []
        used: set[int] = set()
        ok = True
        for d, choice in zip(devs, combo):
            if choice is None:
                continue
            if choice in dev_pos:
                if combo[dev_pos[choice]] != d:
                    ok = False
                    break
                if d < choice:
                    pairs.append((d, choice))
            else:
                if choice in used:
                    ok = False
                    break
                used.add(choice)
                pairs.append((d, choice) if d < choice else (choice, d))
        if not ok:
            continue
        m_c = Matching(frozenset(pairs))
        for size in range(k + 1):
            for blocked in itertools.combinations(pool, size):
                if p.objective is Objective.BLOCKING_PAIRS and any(
                    b in m_c.pairs for b in blocked
                ):
                    continue
                yield CandidateConfiguration(m_c, frozenset(blocked), index)
                index += 1


def truncate_and_collect(p: DeviatorProblem, cfg: CandidateConfiguration) -> TruncationResult:
    """Apply the must-match truncation rule for one configuration.

    Scans all deviators first and truncates afterwards, so an agent
    triggered by several deviators is cut once, at the best-ranked one.
    Rejects when tolerated pairs overlap the candidate matching or when a
    matched pair loses a member's entry to the truncation.
    """
    inst = p.instance
    m_c = cfg.candidate_matching
    rcache: dict[int, dict[int, int]] = {}

    if p.objective is Objective.BLOCKING_PAIRS and any(
        b in m_c.pairs for b in cfg.blocked_set
    ):
        return TruncationResult(
            inst, frozenset(), True, "tolerated pair is matched", cfg
        )

    cut: dict[int, int] = {}
    for d in sorted(p.deviators):
        if p.objective is Objective.BLOCKING_AGENTS and d in cfg.blocked_set:
            continue
        own = _rank_map(inst, d, rcache)
        partner = m_c.partner_of(d)
        bound = own[partner] if partner != d else _UNRANKED
        for r in _list_of(inst, d):
            if own[r] >= bound:
                break
            if p.objective is Objective.BLOCKING_PAIRS:
                key = (d, r) if d < r else (r, d)
                if key in cfg.blocked_set:
                    continue
            back = _rank_map(inst, r, rcache)[d]
            if r not in cut or back < cut[r]:
                cut[r] = back

    prefs = list(inst.prefs)
    for r, stop in cut.items():
        prefs[r] = prefs[r][: stop - 1]
    truncated = Instance(inst.num_agents, tuple(prefs), inst.sides)
    must = frozenset(cut)

    for i, j in m_c.pairs:
        for a, b in ((i, j), (j, i)):
            if a in cut and cut[a] <= _rank_map(inst, a, rcache)[b]:
                return TruncationResult(
                    truncated,
                    must,
                    True,
                    f"matched pair ({i}, {j}) falls to the truncation of {a}",
                    cfg,
                )
    return TruncationResult(truncated, must, False, None, cfg)


def _ball_around_deviators(p: DeviatorProblem, rcache: dict) -> set[int]:
    """Agents within acceptability distance two of the deviator set."""
    inst = p.instance
    level0 = sorted(p.deviators)
    ball = set(level0)
    level1: list[int] = []
    for d in level0:
        for j in _list_of(inst, d):
            if j not in ball and d in _rank_map(inst, j, rcache):
                ball.add(j)
                level1.append(j)
    for v in level1:
        for j in _list_of(inst, v):
            if j not in ball and v in _rank_map(inst, j, rcache):
                ball.add(j)
    return ball


def extend_via_weighted_matching(
    p: DeviatorProblem, trunc: TruncationResult, target_size: int | None
) -> Matching | None:
    """Complete a truncated configuration by one weighted matching, or reject.

    With a target size (maximum-cardinality and perfect regimes) the graph
    spans every agent the candidate matching left unmatched, edge weights
    n + |e ∩ Q| make the matching maximum-cardinality first and Q-covering
    second, and the result is rejected unless all of Q is matched and the
    combined size reaches the target.  Without one (any-size regime) the
    graph only spans such agents within distance two of a deviator, weights
    are |e ∩ Q|, and only Q coverage is required.  Returns the extension
    matching alone; None means reject.
    """
    inst = p.instance
    n = inst.num_agents
    tr = trunc.truncated_instance
    m_c = trunc.configuration.candidate_matching
    matched = m_c.matched_agents()
    q = trunc.must_match
    rcache: dict[int, dict[int, int]] = {}

    for r in q:
        if r not in matched and not _list_of(tr, r):
            return None

    if target_size is None:
        base = 0
        orig_cache: dict[int, dict[int, int]] = {}
        vertices = sorted(
            v for v in _ball_around_deviators(p, orig_cache) if v not in matched
        )
    else:
        base = n
        vertices = [v for v in inst.agents() if v not in matched]

    vset = set(vertices)
    tcache: dict[int, dict[int, int]] = {}
    edges = []
    for i in vertices:
        for j in _list_of(tr, i):
            if i < j and j in vset and i in _rank_map(tr, j, tcache):
                w = base + (i in q) + (j in q)
                assert w <= n + 2
                edges.append((i, j, w))
    m_mw = max_weight_matching(WeightedGraph(frozenset(vertices), tuple(edges)))

    for r in q:
        if r not in matched and not m_mw.is_matched(r):
            return None
    if target_size is not None and len(m_c.pairs) + len(m_mw.pairs) < target_size:
        return None
    return m_mw


def _local_objective(p: DeviatorProblem, matching: Matching, rcache: dict) -> int:
    """The deviator objective computed from deviator-side list scans only.

    Every blocking pair that counts contains a deviator, so scanning each
    deviator's list above its current partner — and consulting only the
    listed agents' own ranks — finds them all without touching lists of
    agents far from the deviator set.
    """
    inst = p.instance
    pairs: set[tuple[int, int]] = set()
    agents: set[int] = set()
    for a in sorted(p.deviators):
        own = _rank_map(inst, a, rcache)
        pa = matching.partner_of(a)
        bound = own.get(pa, _UNRANKED) if pa != a else _UNRANKED
        for x in _list_of(inst, a):
            if own[x] >= bound:
                break
            other = _rank_map(inst, x, rcache)
            px = matching.partner_of(x)
            limit = other.get(px, _UNRANKED) if px != x else _UNRANKED
            if other[a] < limit:
                pairs.add((a, x) if a < x else (x, a))
                agents.add(a)
                if x in p.deviators:
                    agents.add(x)
    if p.objective is Objective.BLOCKING_PAIRS:
        return len(pairs)
    return len(agents)


def _fixed_internal_floor(p: DeviatorProblem, m_c: Matching, rcache: dict) -> int:
    """Objective value already locked in by the candidate matching alone.

    Pairs whose two agents are both matched by M_C keep those partners in
    every completion, so blocking among them is decided now and lower-bounds
    the final value for every tolerated set.
    """
    inst = p.instance
    matched = m_c.matched_agents()
    pairs: set[tuple[int, int]] = set()
    agents: set[int] = set()
    for a in sorted(p.deviators):
        own = _rank_map(inst, a, rcache)
        bound = own[m_c.partner_of(a)] if m_c.is_matched(a) else _UNRANKED
        for x in _list_of(inst, a):
            if own[x] >= bound:
                break
            if x not in matched:
                continue
            other = _rank_map(inst, x, rcache)
            if other[a] < other[m_c.partner_of(x)]:
                pairs.add((a, x) if a < x else (x, a))
                agents.add(a)
                if x in p.deviators:
                    agents.add(x)
    if p.objective is Objective.BLOCKING_PAIRS:
        return len(pairs)
    return len(agents)


def _note(p: DeviatorProblem, index: int | None = None) -> str:
    tag = f"fpt-{p.objective.value}-{p.size_regime.value}"
    return tag if index is None else f"{tag}#{index}"


def solve_fpt(p: DeviatorProblem) -> SolveOutcome:
    """Decide whether the budget is attainable, returning a witness matching.

    Walks the configuration stream in order and returns on the first
    configuration whose truncation survives, whose weighted extension is
    accepted, and whose combined matching verifies at value <= budget.
    Exhausting the stream means infeasible.  The perfect regime runs as
    maximum-cardinality after checking a perfect matching exists at all.
    """
    if p.budget is None:
        raise ValueError("solve_fpt needs an explicit budget")
    k = p.budget
    inst = p.instance

    if p.size_regime is SizeRegime.ANY:
        target = None
    else:
        target = max_cardinality_size(inst)
        if p.size_regime is SizeRegime.PERFECT and 2 * target != inst.num_agents:
            return SolveOutcome.infeasible(_note(p))

    rcache: dict[int, dict[int, int]] = {}
    seen_mc: dict[frozenset, int] = {}
    memo: dict = {}
    for cfg in enumerate_configurations(p, k):
        floor = seen_mc.get(cfg.candidate_matching.pairs)
        if floor is None:
            floor = _fixed_internal_floor(p, cfg.candidate_matching, rcache)
            seen_mc[cfg.candidate_matching.pairs] = floor
        if floor > k:
            continue
        trunc = truncate_and_collect(p, cfg)
        if trunc.rejected:
            continue
        key = (
            cfg.candidate_matching.pairs,
            tuple(
                sorted(
                    (r, len(trunc.truncated_instance.prefs[r]))
                    for r in trunc.must_match
                )
            ),
        )
        if key in memo:
            continue
        m_mw = extend_via_weighted_matching(p, trunc, target)
        if m_mw is None:
            memo[key] = None
            continue
        combined = Matching(frozenset(cfg.candidate_matching.pairs | m_mw.pairs))
        if p.size_regime is SizeRegime.ANY:
            value = _local_objective(p, combined, rcache)
            accepted = value <= k
        else:
            value = objective_value(
                blocking_report(inst, combined, p.deviators), p.objective
            )
            accepted = verify_solution(p, combined, value)
        if accepted:
            return SolveOutcome.solution(combined, value, _note(p, cfg.index))
        memo[key] = value
    return SolveOutcome.infeasible(_note(p))


def optimize_fpt(p: DeviatorProblem) -> SolveOutcome:
    """Minimise the objective by trying budgets 0, 1, 2, ... until one works.

    The first feasible budget is the optimum.  Budgets beyond the tolerated
    pool's size add nothing, and the pool-sized budget always succeeds in
    the any-size and maximum-cardinality regimes.  The perfect regime raises
    PerfectInfeasible when the instance has no perfect matching at all.
    """
    if p.budget is not None:
        raise ValueError("optimize_fpt expects no budget")
    inst = p.instance
    if p.size_regime is SizeRegime.PERFECT:
        if 2 * max_cardinality_size(inst) != inst.num_agents:
            raise PerfectInfeasible("no perfect matching exists")
    if p.objective is Objective.BLOCKING_PAIRS:
        k_max = len({(d, r) if d < r else (r, d) for d in p.deviators for r in _list_of(inst, d)})
    else:
        k_max = len(p.deviators)
    for k in range(k_max + 1):
        out = solve_fpt(replace(p, budget=k))
        if out.feasible:
            return out
    raise AssertionError("the largest budget tolerates every candidate pair")


def solve_bipartite_restriction(p: DeviatorProblem, k: int = 0) -> Matching | None:
    """Zero-budget solve for instances bipartite after dropping conformist edges.

    Removing every conformist-conformist acceptability pair leaves exactly
    the edges that could ever host a deviator blocking pair.  When the
    leftover graph is two-colourable, running the proposal algorithm on the
    induced sided instance yields a matching with no deviator blocking pair
    in the original.  Returns None when the leftover graph is odd-cycled
    (not applicable).
    """
    if k != 0:
        raise ValueError("the bipartite restriction answers budget 0 only")
    if p.size_regime is not SizeRegime.ANY:
        raise ValueError("the bipartite restriction works in the any-size regime")
    inst = p.instance
    n = inst.num_agents
    rcache: dict[int, dict[int, int]] = {}

    adj: list[list[int]] = [[] for _ in range(n + 1)]
    for i in inst.agents():
        for j in _list_of(inst, i):
            if i in _rank_map(inst, j, rcache):
                if i in p.deviators or j in p.deviators:
                    adj[i].append(j)

    color = [-1] * (n + 1)
    for root in inst.agents():
        if color[root] != -1:
            continue
        color[root] = 0
        queue = [root]
        while queue:
            v = queue.pop()
            for w in adj[v]:
                if color[w] == -1:
                    color[w] = 1 - color[v]
                    queue.append(w)
                elif color[w] == color[v]:
                    return None

    prefs = tuple(
        tuple(j for j in inst.prefs[i] if j in adj_set) if i else ()
        for i, adj_set in enumerate(map(set, adj))
    )
    sided = Instance(n, prefs, tuple(color[1:]))
    return gale_shapley(sided)
