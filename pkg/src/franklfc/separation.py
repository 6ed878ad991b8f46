"""Separation oracle: find an absorbed union-closed family of negative total
weight, or prove none exists.

Given a union-closed family A (with the empty set, union [n]) and integer
weights c, every set S gets weight w(S) = 2*sum(c_i for i in S) - sum(c).
The oracle minimizes sum(w(S) for S in B) over families B that are
union-closed and absorb A (B joined with A stays inside B), reporting either
a family with total weight <= -1 or a search-tree proof that none exists.

The search is a depth-first branch and bound over inclusion/exclusion of
individual sets, branching only on sets of strictly negative weight: dropping
a voluntary nonnegative set from any candidate family keeps it valid and
never raises the total, so some optimal family is generated by its negative
sets, and that family is also the lexicographically smallest optimum.
Propagation at each node closes the included sets under union and absorption
and excludes every set whose forced superset is already excluded.

The lower bound groups each undecided negative set s with a private selection
of positive sets from its absorption cone {s | a : a in A}; including s drags
the whole selection in, so the group contributes min(0, w(s) + selection
weight) instead of w(s) alone.  Groups are disjoint, making the sum a valid
bound, and it is dramatically tighter than summing raw negative weights.

Set indices double as element bitmasks, so the union of sets p and q lives at
index p | q, and the sets t with t | q == x form the subcube between x & ~q
and x, precomputed as one bitmask interval per (x, q) pair.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from itertools import combinations

from .families import CapacityError, SetFamily, UCFamily

MAX_SEARCH_GROUND = 12
MAX_BRUTE_GROUND = 4


@dataclass(frozen=True)
class SeparationProblem:
    family: UCFamily
    weights: tuple[int, ...]

    def __post_init__(self):
        A, c = self.family, self.weights
        if A.n < 1:
            raise ValueError("ground size must be at least 1")
        if 0 not in A.members:
            raise ValueError("family must contain the empty set")
        if A.union_mask() != (1 << A.n) - 1:
            raise ValueError("family union must be the full ground set")
        if len(c) != A.n:
            raise ValueError(f"{len(c)} weights for ground size {A.n}")
        if any(x < 0 for x in c) or sum(c) < 1:
            raise ValueError("weights must be nonnegative with positive sum")

    def set_weights(self) -> list[int]:
        """w(S) for every S in 2^[n], indexed by bitmask."""
        n = self.family.n
        total = sum(self.weights)
        w = [0] * (1 << n)
        w[0] = -total
        for s in range(1, 1 << n):
            low = s & -s
            w[s] = w[s ^ low] + 2 * self.weights[low.bit_length() - 1]
        return w


@dataclass(frozen=True)
class SeparationOutcome:
    empty: bool
    min_weight: int
    nodes: int
    violator: UCFamily | None = None

    @property
    def attestation(self) -> dict:
        return {
            "nodes": self.nodes,
            "min_weight": self.min_weight,
            "proved_empty": self.empty,
        }


def _lex_smaller(a: int, b: int) -> bool:
    """Incidence-bitstring order: smaller = absent at the first differing set."""
    d = a ^ b
    return d != 0 and a & (d & -d) == 0


def _interval_tables(n: int):
    """sub[x] = bitmask of all subsets of x; sup[a] = bitmask of all supersets."""
    size = 1 << n
    sub = [0] * size
    sub[0] = 1
    for x in range(1, size):
        low = x & -x
        sub[x] = sub[x ^ low] | sub[x ^ low] << low
    full = size - 1
    sup = [sub[full ^ a] << a for a in range(size)]
    return sub, sup


def _cone_positives(order, w, absorb):
    """Positive-weight cone members per negative set, largest weight first."""
    out = {}
    for s in order:
        cone = absorb[s]
        members = []
        while cone:
            low = cone & -cone
            cone ^= low
            p = low.bit_length() - 1
            if w[p] > 0:
                members.append(p)
        members.sort(key=lambda p: (-w[p], p))
        out[s] = members
    return out


def separate(problem: SeparationProblem) -> SeparationOutcome:
    """Minimize total weight over absorbed union-closed families.

    Returns Empty when every such family has nonnegative total weight, else
    the minimizing family, tie-broken to the lexicographically smallest
    incidence bitstring.  Fully deterministic.
    """
    A = problem.family
    n = A.n
    if n > MAX_SEARCH_GROUND:
        raise CapacityError(
            f"separation search supports ground size <= {MAX_SEARCH_GROUND}"
            f" (universe of 2^{n} sets), got {n}"
        )
    w = problem.set_weights()
    size = 1 << n
    a_sets = list(A.members)
    absorb = [0] * size
    for s in range(size):
        m = 0
        for a in a_sets:
            m |= 1 << (s | a)
        absorb[s] = m
    sub, sup = _interval_tables(n)

    order = sorted((s for s in range(size) if w[s] < 0), key=lambda s: (w[s], s))
    cone_pos = _cone_positives(order, w, absorb)
    positives = sorted((s for s in range(size) if w[s] > 0), key=lambda s: (-w[s], s))

    nodes = 0
    i_list: list[int] = []
    e_list: list[int] = []
    # state[s]: 0 undecided, 1 included, 2 excluded (mirror of the I/E masks)
    state = bytearray(size)
    claim_gen = [0] * size
    gen = 0

    def propagate(I, E, seed, is_include):
        """Fixpoint of union/absorption forcing.  Returns (I, E, delta_sum)
        or None on conflict (caller restores state from the trail lists)."""
        inc = [seed] if is_include else []
        exc = [] if is_include else [seed]
        dsum = 0
        while inc or exc:
            while inc:
                s = inc.pop()
                st = state[s]
                if st == 1:
                    continue
                if st == 2:
                    return None
                I |= 1 << s
                state[s] = 1
                i_list.append(s)
                dsum += w[s]
                forced = absorb[s]
                for t in i_list:
                    forced |= 1 << (s | t)
                new = forced & ~I
                if new & E:
                    return None
                while new:
                    low = new & -new
                    new ^= low
                    inc.append(low.bit_length() - 1)
                for x in e_list:
                    if x | s == x:
                        ne = sub[x] & sup[x & ~s] & ~E
                        if ne:
                            if ne & I:
                                return None
                            while ne:
                                low = ne & -ne
                                ne ^= low
                                exc.append(low.bit_length() - 1)
            while exc:
                x = exc.pop()
                st = state[x]
                if st == 2:
                    continue
                if st == 1:
                    return None
                E |= 1 << x
                state[x] = 2
                e_list.append(x)
                ne = 0
                for q in a_sets:
                    if q | x == x:
                        ne |= sub[x] & sup[x & ~q]
                for q in i_list:
                    if q | x == x:
                        ne |= sub[x] & sup[x & ~q]
                ne &= ~E
                if ne:
                    if ne & I:
                        return None
                    while ne:
                        low = ne & -ne
                        ne ^= low
                        exc.append(low.bit_length() - 1)
        return I, E, dsum

    def unwind(mark_i, mark_e):
        for s in i_list[mark_i:]:
            state[s] = 0
        for s in e_list[mark_e:]:
            state[s] = 0
        del i_list[mark_i:]
        del e_list[mark_e:]

    claim_owner = [0] * size

    def bound_terms(I):
        """Group lower-bound terms for every undecided negative set.

        Each undecided negative claims still-undecided, unclaimed positives
        it would force into the family: absorption-cone members first, then
        unions with currently included sets.  Still-uncovered negatives are
        then pairwise merged when their mutual union is a claimable positive
        (both in the family forces it in too).  Claims stay disjoint across
        groups, so min(0, group total) sums to a valid lower bound.  Returns
        (terms, merged): per-set group totals and the pair-merged sets.
        """
        nonlocal gen
        gen += 1
        g = gen
        terms = {}
        uncovered = []
        open_pos = None
        for s in order:
            if state[s]:
                continue
            acc = w[s]
            for p in cone_pos[s]:
                if state[p] == 0 and claim_gen[p] != g:
                    claim_gen[p] = g
                    claim_owner[p] = s
                    acc += w[p]
                    if acc >= 0:
                        break
            if acc < 0 and i_list:
                if open_pos is None:
                    open_pos = [u for u in positives if state[u] == 0]
                for u in open_pos:
                    if claim_gen[u] != g and u | s == u and sub[u] & sup[u & ~s] & I:
                        claim_gen[u] = g
                        claim_owner[u] = s
                        acc += w[u]
                        if acc >= 0:
                            break
            if acc < 0:
                terms[s] = acc
                uncovered.append(s)
            else:
                terms[s] = 0
        merged = set()
        for i, s in enumerate(uncovered):
            if s in merged:
                continue
            ts = terms[s]
            for t in uncovered[i + 1:]:
                if t in merged:
                    continue
                u = s | t
                if w[u] > 0 and state[u] == 0 and claim_gen[u] != g:
                    tt = terms[t]
                    both = ts + tt + w[u]
                    best = both if both < ts else ts
                    if tt < best:
                        best = tt
                    if best > ts + tt:
                        claim_gen[u] = g
                        claim_owner[u] = s
                        terms[s] = best if best < 0 else 0
                        terms[t] = 0
                        merged.add(s)
                        merged.add(t)
                        break
        return terms, merged

    def filter_excludable(cur, cutoff, terms, merged):
        """Sets whose inclusion already forces the subtree above the cutoff.

        Every completion containing an undecided negative s weighs at least
        cur + (bound terms of the other groups) + w(s) + the weight of s's
        undecided positive cone members that are unclaimed or claimed by s
        itself (they are forced in, and disjoint from the other groups);
        when that exceeds the cutoff, s can be excluded outright.  Sets in
        pair-merged groups are skipped: their term is not theirs alone.
        """
        g = gen
        total = sum(terms.values())
        out = []
        for s, term in terms.items():
            if s in merged:
                continue
            forced = w[s]
            for p in cone_pos[s]:
                if state[p] == 0 and (claim_gen[p] != g or claim_owner[p] == s):
                    forced += w[p]
            if cur + (total - term) + forced > cutoff:
                out.append(s)
        return out

    sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * size + 100))

    best_val = 0  # value search: only totals <= -1 matter

    def value_dfs(I, E, cur, oidx):
        """Minimum total weight; prunes subtrees that cannot improve it."""
        nonlocal best_val, nodes
        nodes += 1
        if cur < best_val:
            best_val = cur
        while oidx < len(order) and state[order[oidx]]:
            oidx += 1
        if oidx == len(order):
            return
        p = order[oidx]
        for is_include in (True, False):
            mark_i, mark_e = len(i_list), len(e_list)
            res = propagate(I, E, p, is_include)
            if res is not None:
                I2, E2, dsum = res
                terms, merged = bound_terms(I2)
                if cur + dsum + sum(terms.values()) < best_val:
                    drop = filter_excludable(cur + dsum, best_val - 1, terms, merged)
                    ok = True
                    for s in drop:
                        if state[s] == 0:
                            res = propagate(I2, E2, s, False)
                            if res is None:
                                ok = False
                                break
                            I2, E2, _ = res
                    if ok:
                        value_dfs(I2, E2, cur + dsum, oidx + 1)
            unwind(mark_i, mark_e)

    lex_order = sorted(order)

    def lexmin_dfs(I, E, cur, oidx, target):
        """First target-value family in exclude-first, index-ascending order.

        Forced members always have larger masks than their generators, so
        among negative-generated families the first difference sits at a
        branched negative set; visiting leaves in this order therefore yields
        the lexicographically smallest optimal incidence vector first.
        """
        nonlocal nodes
        nodes += 1
        while oidx < len(lex_order) and state[lex_order[oidx]]:
            oidx += 1
        if oidx == len(lex_order):
            return I if cur == target else None
        p = lex_order[oidx]
        for is_include in (False, True):
            mark_i, mark_e = len(i_list), len(e_list)
            res = propagate(I, E, p, is_include)
            hit = None
            if res is not None:
                I2, E2, dsum = res
                terms, _ = bound_terms(I2)
                if cur + dsum + sum(terms.values()) <= target:
                    hit = lexmin_dfs(I2, E2, cur + dsum, oidx + 1, target)
            unwind(mark_i, mark_e)
            if hit is not None:
                return hit
        return None

    value_dfs(0, 0, 0, 0)
    if best_val > -1:
        return SeparationOutcome(empty=True, min_weight=0, nodes=nodes)
    best_mask = lexmin_dfs(0, 0, 0, 0, best_val)
    assert best_mask is not None
    members = tuple(s for s in range(size) if best_mask >> s & 1)
    return SeparationOutcome(
        empty=False,
        min_weight=best_val,
        nodes=nodes,
        violator=UCFamily(n, members),
    )


def brute_force_separate(problem: SeparationProblem) -> SeparationOutcome:
    """Same contract as separate(), by enumerating every subfamily of 2^[n]."""
    A = problem.family
    n = A.n
    if n > MAX_BRUTE_GROUND:
        raise CapacityError(
            f"brute force supports ground size <= {MAX_BRUTE_GROUND}, got {n}"
        )
    w = problem.set_weights()
    size = 1 << n
    a_sets = list(A.members)
    best_val = 1
    best_mask = -1
    checked = 0
    for fam in range(1 << size):
        checked += 1
        members = [s for s in range(size) if fam >> s & 1]
        value = sum(w[s] for s in members)
        if value > -1:
            continue
        ok = all(fam >> (s | t) & 1 for s, t in combinations(members, 2)) and all(
            fam >> (s | a) & 1 for s in members for a in a_sets
        )
        if not ok:
            continue
        if value < best_val or (value == best_val and _lex_smaller(fam, best_mask)):
            best_val, best_mask = value, fam
    if best_mask < 0:
        return SeparationOutcome(empty=True, min_weight=0, nodes=checked)
    members = tuple(s for s in range(size) if best_mask >> s & 1)
    return SeparationOutcome(
        empty=False,
        min_weight=best_val,
        nodes=checked,
        violator=UCFamily(n, members),
    )


def check_violator(problem: SeparationProblem, family: UCFamily) -> bool:
    """Independent re-check: union-closed, absorbs A, total weight <= -1."""
    present = set(family.members)
    for s, t in combinations(family.members, 2):
        if s | t not in present:
            return False
    for s in family.members:
        for a in problem.family.members:
            if s | a not in present:
                return False
    w = problem.set_weights()
    return sum(w[s] for s in family.members) <= -1
