"""Core types and checks for stable matching with a designated deviator set.

Agents are numbered 1..n.  Preference lists are strict and may be incomplete;
an agent absent from another's list is unacceptable to it.  A matching is an
agent-disjoint set of mutually acceptable pairs; agents not in any pair are
unmatched.  A pair {i, j} blocks a matching when each side strictly prefers
the other to its current situation, where being unmatched is worse than any
acceptable partner.

Only instability touching a designated set of *deviators* counts here:
conformists tolerate blocking pairs, deviators do not.  The two objectives
are the number of blocking pairs containing at least one deviator, and the
number of deviators contained in at least one blocking pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property


class InstanceError(ValueError):
    """An instance violates a structural requirement."""


class SelfRank(InstanceError):
    """An agent ranks itself."""


class DuplicateEntry(InstanceError):
    """A preference list mentions the same agent twice."""


class AsymmetricAcceptability(InstanceError):
    """Agent i ranks j but j does not rank i."""

    def __init__(self, i: int, j: int):
        super().__init__(f"agent {i} ranks agent {j}, but {j} does not rank {i}")
        self.i = i
        self.j = j


class SidedPairViolation(InstanceError):
    """A sided instance has an acceptable pair within one side."""


class VerificationError(ValueError):
    """A claimed solution fails verification."""


class RegimeViolation(VerificationError):
    """The matching does not belong to the requested matching family."""


class ValueMismatch(VerificationError):
    """The claimed objective value differs from the recomputed one."""


class BudgetExceeded(VerificationError):
    """The objective value exceeds the instability budget."""


class Objective(Enum):
    """What to minimise over the matching family."""

    BLOCKING_PAIRS = "bp"
    BLOCKING_AGENTS = "ba"


class SizeRegime(Enum):
    """The matching family optimised over."""

    ANY = "any"
    MAX_CARDINALITY = "max"
    PERFECT = "perfect"


@dataclass(frozen=True)
class Instance:
    """A strict-preference matching instance.

    prefs[i] is agent i's preference list, most preferred first; prefs[0] is
    an unused placeholder so ids index directly.  sides, when present, tags
    each agent with side 0 or 1 (bipartite instances); it uses the same
    placeholder convention.

    Construction performs shape checks only (list count, id ranges); the
    semantic invariants live in validate_instance so that malformed data can
    still be constructed and then rejected with a precise error.
    """

    num_agents: int
    prefs: tuple[tuple[int, ...], ...]
    sides: tuple[int, ...] | None = None

    def __post_init__(self):
        n = self.num_agents
        if n < 0:
            raise InstanceError("agent count must be non-negative")
        prefs = tuple(tuple(lst) for lst in self.prefs)
        if len(prefs) != n + 1 or prefs[0] != ():
            raise InstanceError(
                "prefs needs an empty placeholder at index 0 and one list per agent"
            )
        for i in range(1, n + 1):
            for j in prefs[i]:
                if not 1 <= j <= n:
                    raise InstanceError(f"agent {i} ranks {j}, outside 1..{n}")
        object.__setattr__(self, "prefs", prefs)
        if self.sides is not None:
            sides = tuple(self.sides)
            if len(sides) == n:
                sides = (0,) + sides
            if len(sides) != n + 1 or any(s not in (0, 1) for s in sides[1:]):
                raise InstanceError("sides must assign 0 or 1 to every agent")
            object.__setattr__(self, "sides", (0,) + sides[1:])

    def agents(self) -> range:
        return range(1, self.num_agents + 1)

    @cached_property
    def d_max(self) -> int:
        """Length of the longest preference list."""
        return max((len(p) for p in self.prefs[1:]), default=0)

    @cached_property
    def ranks(self) -> tuple[dict[int, int], ...]:
        """ranks[i][j] = 1-based position of j on i's list (absent: unacceptable)."""
        tables: list[dict[int, int]] = [{}]
        for i in self.agents():
            tables.append({j: r for r, j in enumerate(self.prefs[i], start=1)})
        return tuple(tables)


def validate_instance(instance: Instance) -> None:
    """Check the semantic invariants, raising on the first violation found.

    Raises SelfRank, DuplicateEntry, AsymmetricAcceptability, or
    SidedPairViolation.  A validated instance has no agent ranking itself,
    no repeated entries, symmetric acceptability, and (when sided) only
    cross-side acceptable pairs.
    """
    for i in instance.agents():
        lst = instance.prefs[i]
        if i in lst:
            raise SelfRank(f"agent {i} ranks itself")
        if len(set(lst)) != len(lst):
            raise DuplicateEntry(f"agent {i} lists a partner twice")
    ranks = instance.ranks
    for i in instance.agents():
        for j in instance.prefs[i]:
            if i not in ranks[j]:
                raise AsymmetricAcceptability(i, j)
    if instance.sides is not None:
        for i in instance.agents():
            for j in instance.prefs[i]:
                if instance.sides[i] == instance.sides[j]:
                    raise SidedPairViolation(
                        f"agents {i} and {j} are acceptable but share side {instance.sides[i]}"
                    )


@dataclass(frozen=True)
class Matching:
    """An agent-disjoint set of pairs; every agent not in a pair is unmatched."""

    pairs: frozenset[tuple[int, int]]
    _partner: dict[int, int] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        norm = set()
        partner: dict[int, int] = {}
        for p in self.pairs:
            i, j = p
            if i == j:
                raise ValueError(f"agent {i} cannot be paired with itself")
            if i > j:
                i, j = j, i
            norm.add((i, j))
        for i, j in norm:
            for a, b in ((i, j), (j, i)):
                if a in partner:
                    raise ValueError(f"agent {a} appears in two pairs")
                partner[a] = b
        object.__setattr__(self, "pairs", frozenset(norm))
        object.__setattr__(self, "_partner", partner)

    @classmethod
    def checked(cls, instance: Instance, pairs) -> "Matching":
        """Build a matching, verifying every pair is mutually acceptable."""
        m = cls(frozenset(tuple(p) for p in pairs))
        ranks = instance.ranks
        for i, j in m.pairs:
            if i < 1 or j > instance.num_agents:
                raise ValueError(f"pair ({i}, {j}) is out of range")
            if j not in ranks[i] or i not in ranks[j]:
                raise ValueError(f"pair ({i}, {j}) is not mutually acceptable")
        return m

    def partner_of(self, i: int) -> int:
        """Partner of agent i, or i itself when unmatched."""
        return self._partner.get(i, i)

    def is_matched(self, i: int) -> bool:
        return i in self._partner

    def matched_agents(self) -> frozenset[int]:
        return frozenset(self._partner)


def matching_size(matching: Matching) -> int:
    """Number of matched pairs."""
    return len(matching.pairs)


def is_perfect(instance: Instance, matching: Matching) -> bool:
    """True when every agent of the instance is matched."""
    return 2 * len(matching.pairs) == instance.num_agents


@dataclass(frozen=True)
class BlockingReport:
    """All blocking pairs of a matching, plus the deviator-restricted view.

    deviator_pairs are the blocking pairs containing at least one deviator;
    deviator_agents are the deviators contained in at least one blocking pair.
    """

    blocking_pairs: frozenset[tuple[int, int]]
    blocking_agents: frozenset[int]
    deviator_pairs: frozenset[tuple[int, int]]
    deviator_agents: frozenset[int]


def blocking_report(
    instance: Instance,
    matching: Matching,
    deviators: frozenset[int] = frozenset(),
) -> BlockingReport:
    """Find every blocking pair and the subset touching the deviator set.

    A pair {i, j} blocks when i and j are mutually acceptable and each
    strictly prefers the other to its current partner; an unmatched agent
    prefers every acceptable partner.  Runs in time linear in the total
    preference-list length: each agent scans its own list only down to its
    current partner's rank.
    """
    ranks = instance.ranks
    n = instance.num_agents
    worst = n + 2
    current = [0] * (n + 1)
    for i in instance.agents():
        p = matching.partner_of(i)
        current[i] = ranks[i].get(p, worst) if p != i else worst
    blocking = set()
    for i in instance.agents():
        ri = current[i]
        for rank_j, j in enumerate(instance.prefs[i], start=1):
            if rank_j >= ri:
                break
            back = ranks[j].get(i)
            if back is not None and back < current[j]:
                blocking.add((i, j) if i < j else (j, i))
    bp = frozenset(blocking)
    ba = frozenset(a for pair in bp for a in pair)
    dp = frozenset(p for p in bp if p[0] in deviators or p[1] in deviators)
    da = frozenset(ba & deviators)
    return BlockingReport(bp, ba, dp, da)


def objective_value(report: BlockingReport, objective: Objective) -> int:
    """The deviator-restricted objective value given a blocking report."""
    if objective is Objective.BLOCKING_PAIRS:
        return len(report.deviator_pairs)
    return len(report.deviator_agents)


@dataclass(frozen=True)
class DeviatorProblem:
    """A deviator-stability question over an instance.

    budget None asks for the minimum objective value over the regime's
    matching family; an integer k asks whether value <= k is achievable.
    """

    instance: Instance
    deviators: frozenset[int]
    objective: Objective = Objective.BLOCKING_PAIRS
    size_regime: SizeRegime = SizeRegime.ANY
    budget: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "deviators", frozenset(self.deviators))
        for d in self.deviators:
            if not 1 <= d <= self.instance.num_agents:
                raise ValueError(f"deviator {d} is not an agent id")
        if self.budget is not None and self.budget < 0:
            raise ValueError("budget must be non-negative")


@dataclass(frozen=True)
class SolveOutcome:
    """Result of a solve: a matching and its objective value, or infeasible.

    certificate_note names the algorithm that produced the outcome and, for
    configuration-search solvers, the accepted configuration's index.
    """

    matching: Matching | None
    value: int | None
    certificate_note: str

    @property
    def feasible(self) -> bool:
        return self.matching is not None

    @classmethod
    def solution(cls, matching: Matching, value: int, certificate_note: str) -> "SolveOutcome":
        return cls(matching, value, certificate_note)

    @classmethod
    def infeasible(cls, certificate_note: str) -> "SolveOutcome":
        return cls(None, None, certificate_note)


def verify_solution(
    problem: DeviatorProblem,
    matching: Matching,
    claimed_value: int,
    strict: bool = False,
) -> bool:
    """Check a claimed solution against its problem.

    Verifies, in order: every pair is mutually acceptable; the matching
    belongs to the regime's family (perfect matchings cover everyone, an
    odd agent count can never be perfect; maximum-cardinality matchings are
    compared against a freshly computed maximum); the recomputed objective
    equals claimed_value; and the value respects the budget when one is set.

    Returns True when everything holds.  With strict=True the failing check
    raises VerificationError (RegimeViolation, ValueMismatch, or
    BudgetExceeded) instead of returning False.
    """
    inst = problem.instance

    def fail(exc: VerificationError) -> bool:
        if strict:
            raise exc
        return False

    ranks = inst.ranks
    for i, j in matching.pairs:
        if i < 1 or j > inst.num_agents or j not in ranks[i] or i not in ranks[j]:
            return fail(VerificationError(f"pair ({i}, {j}) is not mutually acceptable"))

    if problem.size_regime is SizeRegime.PERFECT:
        if not is_perfect(inst, matching):
            return fail(RegimeViolation("matching is not perfect"))
    elif problem.size_regime is SizeRegime.MAX_CARDINALITY:
        from .classic import max_cardinality_size  # deferred: classic builds on core

        if matching_size(matching) != max_cardinality_size(inst):
            return fail(RegimeViolation("matching is not of maximum cardinality"))

    report = blocking_report(inst, matching, problem.deviators)
    actual = objective_value(report, problem.objective)
    if actual != claimed_value:
        return fail(ValueMismatch(f"claimed value {claimed_value}, recomputed {actual}"))
    if problem.budget is not None and actual > problem.budget:
        return fail(BudgetExceeded(f"value {actual} exceeds budget {problem.budget}"))
    return True
