"""Canonical forms of set families under relabeling of the ground set.

The canonical form of a family is the lexicographically smallest sorted tuple
of member bitmasks over all permutations of [n].  It is computed by a
branch-and-bound search that builds the output tuple position by position:
at each step one unplaced set is chosen as the next member of the sorted
encoding and its unlabeled elements are assigned fresh labels.  Prefixes that
can no longer beat or tie the incumbent encoding are cut off, which keeps the
search far below n! in practice.
"""

from __future__ import annotations

from itertools import combinations, permutations
from math import factorial

from .families import CapacityError, SetFamily, elements_of

MAX_CANON_GROUND = 10


class _FoundSmaller(Exception):
    pass


def _search(n, masks, best, stop_below=None):
    """Minimize the sorted-mask encoding over all relabelings.

    best: incumbent encoding (list) or None.  If stop_below is given, raise
    _FoundSmaller as soon as any encoding strictly below it is completed.
    Returns the best encoding found (as a list).
    """
    m = len(masks)
    set_elems = [elements_of(s) for s in masks]  # 1-based original elements
    state = {"best": list(best) if best is not None else None}

    def descend(t, placed, prev, label, free, prefix):
        # Forced suffix: every unplaced set already fully labeled.
        unplaced = [i for i in range(m) if not placed >> i & 1]
        pending = []
        all_forced = True
        for i in unplaced:
            fixed = 0
            unlab = []
            for e in set_elems[i]:
                new = label.get(e)
                if new is None:
                    unlab.append(e)
                else:
                    fixed |= 1 << (new - 1)
            pending.append((i, fixed, unlab))
            if unlab:
                all_forced = False

        best = state["best"]
        if all_forced:
            suffix = sorted(p[1] for p in pending)
            if suffix and suffix[0] <= prev:
                return
            candidate = prefix + suffix
            if best is None or candidate < best:
                state["best"] = candidate
                if stop_below is not None and candidate < stop_below:
                    raise _FoundSmaller
            return

        # Children: (next mask, set index, labeling of its new elements).
        children = []
        for i, fixed, unlab in pending:
            u = len(unlab)
            if u == 0:
                if fixed > prev:
                    children.append((fixed, i, (), ()))
                continue
            if u > len(free):
                return  # cannot happen for injective labelings
            for combo in combinations(free, u):
                mask = fixed
                for l in combo:
                    mask |= 1 << (l - 1)
                if mask <= prev:
                    continue
                for image in permutations(combo):
                    children.append((mask, i, tuple(unlab), image))
        children.sort(key=lambda c: c[0])

        for mask, i, unlab, image in children:
            best = state["best"]
            if best is not None and prefix == best[:t] and mask > best[t]:
                break
            label2 = dict(label)
            for e, l in zip(unlab, image):
                label2[e] = l
            free2 = [l for l in free if l not in image]
            descend(t + 1, placed | 1 << i, mask, label2, free2, prefix + [mask])

    descend(0, 0, -1, {}, list(range(1, n + 1)), [])
    return state["best"]


def _check_ground(family: SetFamily):
    if family.n > MAX_CANON_GROUND:
        raise CapacityError(
            f"canonicalization supports ground size <= {MAX_CANON_GROUND}, got {family.n}"
        )


def canonical_form(family: SetFamily) -> SetFamily:
    """The minimum of the sorted bitmask encoding over all relabelings."""
    _check_ground(family)
    best = _search(family.n, family.members, None)
    return SetFamily(family.n, tuple(best))


def is_canonical(family: SetFamily) -> bool:
    """True iff the family equals its own canonical form (cheap early abort)."""
    _check_ground(family)
    own = list(family.members)
    try:
        best = _search(family.n, family.members, own, stop_below=own)
    except _FoundSmaller:
        return False
    return best == own


def are_isomorphic(a: SetFamily, b: SetFamily) -> bool:
    if a.n != b.n:
        raise ValueError(f"ground sizes differ: {a.n} vs {b.n}")
    if len(a.members) != len(b.members):
        return False
    return canonical_form(a).members == canonical_form(b).members


def permute_family(family: SetFamily, perm: dict[int, int]) -> SetFamily:
    """Apply a permutation of [n] given as a 1-based mapping."""
    out = []
    for s in family.members:
        t = 0
        for e in elements_of(s):
            t |= 1 << (perm[e] - 1)
        out.append(t)
    return SetFamily(family.n, tuple(out))


def automorphism_count(family: SetFamily) -> int:
    """Number of permutations of [n] mapping the family onto itself."""
    _check_ground(family)
    canon = canonical_form(family).members
    n = family.n
    m = len(family.members)
    set_elems = [elements_of(s) for s in family.members]
    total = 0

    def descend(t, placed, label, free):
        nonlocal total
        if t == m:
            total += factorial(len(free))
            return
        target = canon[t]
        for i in range(m):
            if placed >> i & 1:
                continue
            fixed = 0
            unlab = []
            ok = True
            for e in set_elems[i]:
                new = label.get(e)
                if new is None:
                    unlab.append(e)
                elif not target >> (new - 1) & 1:
                    ok = False
                    break
                else:
                    fixed |= 1 << (new - 1)
            if not ok:
                continue
            need = target & ~fixed
            if need.bit_count() != len(unlab):
                continue
            slots = [l for l in free if target >> (l - 1) & 1]
            if len(slots) != len(unlab):
                continue
            for image in permutations(slots):
                label2 = dict(label)
                for e, l in zip(unlab, image):
                    label2[e] = l
                free2 = [l for l in free if l not in image]
                descend(t + 1, placed | 1 << i, label2, free2)

    descend(0, 0, {}, list(range(1, n + 1)))
    return total


def _ksets(n: int, k: int) -> list[int]:
    masks = []
    for combo in combinations(range(n), k):
        mask = 0
        for b in combo:
            mask |= 1 << b
        masks.append(mask)
    masks.sort()
    return masks


def count_generators(n: int, k: int, m: int) -> int:
    """Direct filtered count of m-subsets of k-sets of [n] with union [n]."""
    full = (1 << n) - 1
    count = 0
    for combo in combinations(_ksets(n, k), m):
        u = 0
        for s in combo:
            u |= s
        if u == full:
            count += 1
    return count


def enumerate_generators(n: int, k: int, m: int) -> list[SetFamily]:
    """One canonical representative per isomorphism class of families of m
    distinct k-sets whose union is [n], sorted by encoding.

    Every class representative starts with the set {1,...,k} (the smallest
    possible k-set mask), so only combinations containing it are tested.
    """
    if k != 3:
        raise CapacityError(f"enumeration supports k=3 only, got k={k}")
    if not 1 <= n <= 9:
        raise CapacityError(f"enumeration supports n <= 9, got n={n}")
    if not 1 <= m <= 5:
        raise CapacityError(f"enumeration supports m <= 5, got m={m}")
    full = (1 << n) - 1
    base = (1 << k) - 1
    others = [s for s in _ksets(n, k) if s != base]
    reps = []
    for combo in combinations(others, m - 1):
        u = base
        for s in combo:
            u |= s
        if u != full:
            continue
        fam = SetFamily(n, (base,) + combo)
        if is_canonical(fam):
            reps.append(fam)
    reps.sort(key=lambda f: f.members)
    return reps


def orbit_size(family: SetFamily) -> int:
    """Size of the isomorphism class of a family with U(F) = [n]."""
    return factorial(family.n) // automorphism_count(family)
