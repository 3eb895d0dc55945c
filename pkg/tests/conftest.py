"""Shared instance builders for the test suite."""

import random

from devmatch.core import DeviatorProblem, Instance, Matching, Objective, SizeRegime


def ordered_cycle(k: int) -> Instance:
    """k agents in a cycle, each preferring its successor to its predecessor."""
    prefs = [()]
    for i in range(1, k + 1):
        succ = i % k + 1
        pred = (i - 2) % k + 1
        prefs.append((succ, pred))
    return Instance(k, tuple(prefs), None)


def variable_gadget() -> Instance:
    """The isolated 8-agent gadget with two perfect matchings.

    Agents 1..4 are the x-side, 5..8 the y-side; agent r's list here is the
    gadget-internal part (the communication entry removed).
    """
    prefs = (
        (),
        (5, 6),
        (6, 7),
        (8, 7),
        (5, 8),
        (1, 4),
        (1, 2),
        (2, 3),
        (3, 4),
    )
    return Instance(8, prefs, (0, 0, 0, 0, 1, 1, 1, 1))


def problem(
    inst: Instance,
    deviators,
    objective=Objective.BLOCKING_PAIRS,
    regime=SizeRegime.ANY,
    budget=None,
) -> DeviatorProblem:
    return DeviatorProblem(inst, frozenset(deviators), objective, regime, budget)


def random_matching(inst: Instance, seed: int) -> Matching:
    """A random valid matching: shuffled greedy fill over mutual pairs."""
    rng = random.Random(seed)
    ranks = inst.ranks
    pairs = [
        (i, j)
        for i in inst.agents()
        for j in inst.prefs[i]
        if i < j and i in ranks[j]
    ]
    rng.shuffle(pairs)
    target = rng.randint(0, len(pairs))
    taken = []
    used = set()
    for i, j in pairs:
        if len(taken) == target:
            break
        if i not in used and j not in used:
            taken.append((i, j))
            used.update((i, j))
    return Matching(frozenset(taken))


def relabel_instance(inst: Instance, perm: dict) -> Instance:
    """Apply an agent permutation {old: new} to an instance."""
    n = inst.num_agents
    prefs = [()] * (n + 1)
    sides = [0] * (n + 1) if inst.sides is not None else None
    for i in inst.agents():
        prefs[perm[i]] = tuple(perm[j] for j in inst.prefs[i])
        if sides is not None:
            sides[perm[i]] = inst.sides[i]
    return Instance(n, tuple(prefs), tuple(sides[1:]) if sides else None)


def induce(inst: Instance, agents: list) -> Instance:
    """Subinstance on the given agents, relabeled 1..k in list order."""
    remap = {a: i for i, a in enumerate(agents, start=1)}
    prefs = [()]
    for a in agents:
        prefs.append(tuple(remap[b] for b in inst.prefs[a] if b in remap))
    sides = None
    if inst.sides is not None:
        sides = tuple(inst.sides[a] for a in agents)
    return Instance(len(agents), tuple(prefs), sides)


def random_22e3_formula(n: int, rng: random.Random):
    """Random 3-CNF where every variable occurs exactly twice per polarity.

    Draws the 4n literal slots as one shuffled sequence and rechunks until
    no clause repeats a variable, so all formulas with that occurrence
    profile are reachable.
    """
    from devmatch.reductions import CnfFormula

    if n % 3:
        raise ValueError("variable count must be divisible by 3")
    slots = [v for v in range(1, n + 1) for _ in range(2)]
    slots += [-v for v in range(1, n + 1) for _ in range(2)]
    while True:
        rng.shuffle(slots)
        clauses = [tuple(slots[i: i + 3]) for i in range(0, len(slots), 3)]
        if all(len({abs(l) for l in c}) == 3 for c in clauses):
            return CnfFormula(n, tuple(clauses))


_LITERAL_MASKS: dict = {}


def _literal_masks(n: int):
    got = _LITERAL_MASKS.get(n)
    if got is None:
        full = (1 << (1 << n)) - 1
        pos = []
        for v in range(n):
            step = 1 << v
            pattern = ((1 << step) - 1) << step
            mask = 0
            for r in range(1 << (n - v - 1)):
                mask |= pattern << (r << (v + 1))
            pos.append(mask)
        got = (pos, full)
        _LITERAL_MASKS[n] = got
    return got


def satisfying_assignment_count(f) -> int:
    """Number of satisfying assignments, evaluated bit-parallel over all 2^n."""
    pos, full = _literal_masks(f.num_vars)
    acc = full
    for clause in f.clauses:
        cm = 0
        for lit in clause:
            cm |= pos[lit - 1] if lit > 0 else (full ^ pos[-lit - 1])
        acc &= cm
        if not acc:
            return 0
    return acc.bit_count()


def first_satisfying_assignment(f):
    """Lexicographically first satisfying assignment, or None."""
    pos, full = _literal_masks(f.num_vars)
    acc = full
    for clause in f.clauses:
        cm = 0
        for lit in clause:
            cm |= pos[lit - 1] if lit > 0 else (full ^ pos[-lit - 1])
        acc &= cm
    if not acc:
        return None
    a = (acc & -acc).bit_length() - 1
    return tuple(bool((a >> v) & 1) for v in range(f.num_vars))


def reference_formula():
    """Four-clause formula over three variables with the (2,2) profile."""
    from devmatch.reductions import CnfFormula

    return CnfFormula(3, ((1, 2, 3), (-1, -2, -3), (1, -2, 3), (-1, 2, -3)))


def single_path_composition(f, variable, occurrence):
    """The one-communication-path subinstance pair for a chosen occurrence.

    Returns (j_sub, deviators, i_sub, projection, comm_edge).  j_sub keeps
    the variable gadget, the linked clause gadget and the connector between
    them, relabeled 1..28; i_sub is the same sixteen gadget agents joined by
    a direct communication edge instead of the connector; projection maps a
    perfect matching of j_sub onto i_sub's agents by dropping connector
    pairs (connectors always match internally in a perfect matching, so
    nothing else is lost).
    """
    from devmatch.reductions import sat_to_perfect_smi

    p, idx = sat_to_perfect_smi(f)
    i, r = variable, occurrence
    j, s = idx.occurrence_of[(i, r)]
    var_ids = [idx.x[(i, rr)] for rr in (1, 2, 3, 4)]
    var_ids += [idx.y[(i, rr)] for rr in (1, 2, 3, 4)]
    clause_ids = [idx.c[(j, ss)] for ss in (1, 2, 3)]
    clause_ids += [idx.p[(j, ss)] for ss in (1, 2, 3)]
    clause_ids += [idx.q[j], idx.z[j]]
    t_ids = [idx.t[(i, r, kappa)] for kappa in range(1, 13)]
    j_sub = induce(p.instance, var_ids + clause_ids + t_ids)
    deviators = frozenset({17, 23})  # the connector's two communication ends

    x_slots = {1: (5, 6), 2: (6, 7), 3: (8, 7), 4: (5, 8)}
    prefs = [()]
    for rr in (1, 2, 3, 4):
        a, b = x_slots[rr]
        prefs.append((a, 8 + s, b) if rr == r else (a, b))
    prefs += [(1, 4), (1, 2), (2, 3), (3, 4)]
    for ss in (1, 2, 3):
        prefs.append((11 + ss, r, 15) if ss == s else (11 + ss, 15))
    for ss in (1, 2, 3):
        prefs.append((8 + ss, 16))
    prefs += [(9, 10, 11), (12, 13, 14)]
    i_sub = Instance(16, tuple(prefs), None)

    def projection(m):
        return frozenset(pair for pair in m.pairs if pair[1] <= 16)

    return j_sub, deviators, i_sub, projection, (r, 8 + s)
