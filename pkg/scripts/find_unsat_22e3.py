"""Search for unsatisfiable (2,2)-E3-SAT formulas at small n.

A (2,2)-E3-SAT formula has exactly 3 distinct literals per clause and every
variable occurring exactly twice unnegated and twice negated, so m = 4n/3.

For n = 3 and n = 6 a counting argument shows every such formula is
satisfiable (each clause over 3 distinct variables falsifies a codimension-3
subcube; at n <= 6 the falsified cubes cannot cover the whole hypercube).
This script runs randomized local search at a given n to look for formulas
whose falsified cubes cover all 2^n assignments, i.e. unsatisfiable formulas.

Usage: python3 find_unsat_22e3.py [n] [count] [out.json]
"""

import json
import random
import sys


def clause_mask(clause, n):
    """Bitmask over 2^n assignments falsified by the clause."""
    mask = 0
    for a in range(1 << n):
        for lit in clause:
            v = abs(lit) - 1
            val = (a >> v) & 1
            if (lit > 0 and val) or (lit < 0 and not val):
                break
        else:
            mask |= 1 << a
    return mask


def coverage(clauses, n):
    m = 0
    for c in clauses:
        m |= clause_mask(c, n)
    return bin(m).count("1")


def random_formula(n, rng):
    """Random feasible (2,2)-e3 formula: m = 4n//3 clauses, slots dealt."""
    m = 4 * n // 3
    while True:
        occ = []
        for v in range(1, n + 1):
            occ += [v, v, -v, -v]
        rng.shuffle(occ)
        clauses = [sorted(occ[3 * j:3 * j + 3], key=abs) for j in range(m)]
        if all(len({abs(l) for l in c}) == 3 for c in clauses):
            return clauses


def try_swap(clauses, i, j, si, sj):
    """Swap slot si of clause i with slot sj of clause j if still feasible."""
    a, b = clauses[i][si], clauses[j][sj]
    if a == b:
        return False
    ci = [abs(l) for k, l in enumerate(clauses[i]) if k != si]
    cj = [abs(l) for k, l in enumerate(clauses[j]) if k != sj]
    if abs(b) in ci or abs(a) in cj:
        return False
    clauses[i][si], clauses[j][sj] = b, a
    return True


def search(n, rng, restarts=400, steps=4000):
    m = 4 * n // 3
    full = (1 << (1 << n)) - 1
    best_overall = None
    for _ in range(restarts):
        clauses = random_formula(n, rng)
        masks = [clause_mask(c, n) for c in clauses]
        cov = 0
        for mk in masks:
            cov |= mk
        score = bin(cov).count("1")
        for _ in range(steps):
            if score == (1 << n):
                return [list(c) for c in clauses]
            i, j = rng.randrange(m), rng.randrange(m)
            si, sj = rng.randrange(3), rng.randrange(3)
            old_i = list(clauses[i])
            old_j = list(clauses[j])
            if not try_swap(clauses, i, j, si, sj):
                continue
            new_mi = clause_mask(clauses[i], n)
            new_mj = clause_mask(clauses[j], n)
            cov2 = 0
            for k, mk in enumerate(masks):
                if k == i:
                    cov2 |= new_mi
                elif k == j:
                    cov2 |= new_mj
                else:
                    cov2 |= mk
            s2 = bin(cov2).count("1")
            # accept non-worsening moves, plus occasional sideways kicks
            if s2 >= score or rng.random() < 0.02:
                masks[i], masks[j] = new_mi, new_mj
                score = s2
            else:
                clauses[i] = old_i
                clauses[j] = old_j
        if best_overall is None or score > best_overall:
            best_overall = score
    print(f"n={n}: best coverage {best_overall}/{1 << n}", file=sys.stderr)
    return None


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 9
    count = int(sys.argv[2]) if len(sys.argv) > 2 else 25
    out = sys.argv[3] if len(sys.argv) > 3 else "unsat_22e3.json"
    found = []
    seen = set()
    seed = 0
    while len(found) < count and seed < 4000:
        rng = random.Random(seed)
        f = search(n, rng, restarts=20, steps=6000)
        seed += 1
        if f is None:
            continue
        key = tuple(sorted(tuple(sorted(c, key=lambda l: (abs(l), l < 0))) for c in f))
        if key in seen:
            continue
        seen.add(key)
        found.append(f)
        print(f"found {len(found)} (seed {seed - 1})", file=sys.stderr)
    with open(out, "w") as fh:
        json.dump({"n": n, "formulas": found}, fh)
    print(f"wrote {len(found)} unsat formulas to {out}")


if __name__ == "__main__":
    main()
