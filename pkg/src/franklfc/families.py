"""Set families over a small ground set, stored as machine-word bitmasks.

Elements are 1-based on the outside ([n] = {1, ..., n}); internally element i
occupies bit i-1.  A family is a sorted tuple of distinct set masks, which
makes equality and dedup cheap and all output deterministic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

MAX_GROUND = 16


class CapacityError(ValueError):
    """Requested ground size or search scale beyond what this package supports."""


class ParseError(ValueError):
    """Malformed set, family, or certificate text."""


def set_of(elements) -> int:
    """Bitmask of an iterable of 1-based elements."""
    mask = 0
    for e in elements:
        if e < 1:
            raise ValueError(f"elements are 1-based, got {e}")
        mask |= 1 << (e - 1)
    return mask


def elements_of(mask: int) -> tuple[int, ...]:
    """1-based elements of a bitmask, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length())
        mask ^= low
    return tuple(out)


_BRACE_RE = re.compile(r"^\{(.*)\}$")
_COMPACT_TOKEN_RE = re.compile(r"\((\d+)\)|(\d)")


def parse_set(text: str) -> int:
    """Parse one set: compact digits ("356"), parenthesized multi-digit
    elements ("79(10)"), or brace form ("{3,5,10}").  "{}" is the empty set.
    """
    text = text.strip()
    m = _BRACE_RE.match(text)
    if m:
        body = m.group(1).strip()
        if not body:
            return 0
        try:
            return set_of(int(tok) for tok in body.split(","))
        except ValueError as exc:
            raise ParseError(f"bad brace set {text!r}") from exc
    if not text:
        raise ParseError("empty set text (use '{}' for the empty set)")
    pos = 0
    mask = 0
    for m in _COMPACT_TOKEN_RE.finditer(text):
        if m.start() != pos:
            raise ParseError(f"bad set text {text!r}")
        pos = m.end()
        e = int(m.group(1) or m.group(2))
        if e == 0:
            raise ParseError(f"element 0 in {text!r}; elements are 1-based")
        mask |= 1 << (e - 1)
    if pos != len(text):
        raise ParseError(f"bad set text {text!r}")
    return mask


def format_set(mask: int) -> str:
    """Compact digit form when all elements are single-digit, else brace form."""
    if mask == 0:
        return "{}"
    elems = elements_of(mask)
    if elems[-1] <= 9:
        return "".join(str(e) for e in elems)
    return "{" + ",".join(str(e) for e in elems) + "}"


@dataclass(frozen=True)
class SetFamily:
    """A finite collection of distinct subsets of [n].

    ``members`` is normalized to ascending bitmask order on construction, so
    two families are equal iff they hold the same sets over the same ground.
    """

    n: int
    members: tuple[int, ...]

    def __post_init__(self):
        if not 0 <= self.n <= MAX_GROUND:
            raise CapacityError(f"ground size {self.n} outside 0..{MAX_GROUND}")
        members = tuple(sorted(set(self.members)))
        full = (1 << self.n) - 1
        for s in members:
            if s & ~full:
                raise ValueError(
                    f"set {format_set(s)} does not fit ground size {self.n}"
                )
        object.__setattr__(self, "members", members)

    @classmethod
    def from_sets(cls, n: int, sets) -> "SetFamily":
        """Build from an iterable of element iterables."""
        return cls(n, tuple(set_of(s) for s in sets))

    def __len__(self):
        return len(self.members)

    def __contains__(self, mask: int):
        return mask in set(self.members)

    def __iter__(self):
        return iter(self.members)

    def union_mask(self) -> int:
        """Bitmask of U(F), the union of all members."""
        u = 0
        for s in self.members:
            u |= s
        return u

    def as_text(self) -> str:
        return ", ".join(format_set(s) for s in self.members)

    def to_json_dict(self) -> dict:
        return {"n": self.n, "sets": [list(elements_of(s)) for s in self.members]}

    @classmethod
    def from_json_dict(cls, data: dict) -> "SetFamily":
        try:
            n = int(data["n"])
            sets = data["sets"]
            return cls.from_sets(n, sets)
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad family JSON: {exc}") from exc


class UCFamily(SetFamily):
    """A SetFamily closed under pairwise union."""

    def __post_init__(self):
        super().__post_init__()
        present = set(self.members)
        for i, a in enumerate(self.members):
            for b in self.members[i + 1:]:
                if a | b not in present:
                    raise ValueError(
                        f"not union-closed: {format_set(a)} | {format_set(b)} missing"
                    )


def is_union_closed(family: SetFamily) -> bool:
    present = set(family.members)
    return all(
        a | b in present
        for i, a in enumerate(family.members)
        for b in family.members[i + 1:]
    )


def union_closure(generator: SetFamily) -> UCFamily:
    """Smallest union-closed family containing the generator.

    Does not add the empty set unless it is itself a generator member.
    """
    if not generator.members:
        raise ValueError("union_closure needs a nonempty generator")
    closed = set(generator.members)
    frontier = list(closed)
    while frontier:
        nxt = []
        for s in frontier:
            for t in closed.copy():
                u = s | t
                if u not in closed:
                    closed.add(u)
                    nxt.append(u)
        frontier = nxt
    return UCFamily(generator.n, tuple(closed))


def uplus(left: SetFamily, right: SetFamily) -> SetFamily:
    """The product {A | B : A in left, B in right} (deduplicated)."""
    if left.n != right.n:
        raise ValueError(f"ground sizes differ: {left.n} vs {right.n}")
    out = {a | b for a in left.members for b in right.members}
    return SetFamily(left.n, tuple(out))


def frequencies(family: SetFamily) -> tuple[int, ...]:
    """Component i-1 counts the members containing element i."""
    counts = [0] * family.n
    for s in family.members:
        m = s
        while m:
            low = m & -m
            counts[low.bit_length() - 1] += 1
            m ^= low
    return tuple(counts)


def frankl_witness(family: SetFamily) -> int | None:
    """Smallest element in at least half the members, or None.

    For union-closed families a witness is what Frankl's conjecture predicts;
    None can only happen for families that are not union-closed (or live on a
    larger ground set than their interesting part).
    """
    if not family.members or family.members == (0,):
        raise ValueError("frankl_witness needs a nonempty family != {{}}")
    size = len(family.members)
    for i, count in enumerate(frequencies(family)):
        if 2 * count >= size:
            return i + 1
    return None


def power_set_minus(n: int, j: int) -> SetFamily:
    """All subsets of [n] \\ {j}."""
    if not 1 <= j <= n:
        raise ValueError(f"element {j} outside [1, {n}]")
    if n > MAX_GROUND:
        raise CapacityError(f"ground size {n} exceeds {MAX_GROUND}")
    rest = [e for e in range(1, n + 1) if e != j]
    masks = [0]
    for e in rest:
        bit = 1 << (e - 1)
        masks.extend(m | bit for m in masks)
    return SetFamily(n, tuple(masks))


def parse_family(n: int, texts) -> SetFamily:
    """Family from set texts; ground size n (0 = infer from largest element)."""
    masks = [parse_set(t) for t in texts]
    if n == 0:
        u = 0
        for m in masks:
            u |= m
        n = u.bit_length()
    return SetFamily(n, tuple(masks))
