"""Exact arithmetic on naturals that are far too large to materialize.

Vertices produced by iterated least-realizer constructions have bit positions
that are themselves astronomical, so a plain ``int`` representation explodes.
A natural is held either as a plain ``int`` (when its bit length stays at or
below ``INT_BIT_LIMIT``) or as a :class:`Big`: the descending tuple of its set
bit positions, each position again a natural in the same representation.

Only the operations the graph model needs are provided: total order,
successor, bit tests, and the minimal value >= N whose bits agree with a
finite 0/1 constraint map.
"""

from __future__ import annotations

from functools import cmp_to_key

INT_BIT_LIMIT = 4096


class Big:
    """A natural stored as its set of bit positions, sorted descending."""

    __slots__ = ("bits", "bitset", "_hash")

    def __init__(self, bits):
        self.bits = bits  # tuple, descending, canonical naturals
        self.bitset = frozenset(bits)
        self._hash = hash(("radograph.Big", bits))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if isinstance(other, Big):
            return self._hash == other._hash and self.bits == other.bits
        if isinstance(other, int):
            # canonical ints never overlap with Big values, but tolerate
            # a raw oversized int
            return other.bit_length() > INT_BIT_LIMIT and nat_cmp(self, canon(other)) == 0
        return NotImplemented

    def __ne__(self, other):
        eq = self.__eq__(other)
        if eq is NotImplemented:
            return eq
        return not eq

    def __lt__(self, other):
        return nat_cmp(self, other) < 0

    def __le__(self, other):
        return nat_cmp(self, other) <= 0

    def __gt__(self, other):
        return nat_cmp(self, other) > 0

    def __ge__(self, other):
        return nat_cmp(self, other) >= 0

    def __repr__(self):
        inner = ", ".join(repr(b) for b in self.bits[:4])
        if len(self.bits) > 4:
            inner += f", ... ({len(self.bits)} bits)"
        return f"Big[{inner}]"


def canon(x):
    """Canonical representation: small ints stay ints, everything else is Big."""
    if isinstance(x, Big):
        return x
    if isinstance(x, int):
        if x < 0:
            raise ValueError("vertices are naturals")
        if x.bit_length() <= INT_BIT_LIMIT:
            return x
        return Big(tuple(p for p in range(x.bit_length() - 1, -1, -1) if (x >> p) & 1))
    raise TypeError(f"not a natural: {x!r}")


def bits_desc(x):
    """Set bit positions of x, descending."""
    if isinstance(x, Big):
        return list(x.bits)
    return [p for p in range(x.bit_length() - 1, -1, -1) if (x >> p) & 1]


def nat_cmp(a, b):
    """Three-way compare of two naturals in either representation."""
    a_int = isinstance(a, int)
    b_int = isinstance(b, int)
    if a_int and b_int:
        return (a > b) - (a < b)
    if a is b:
        return 0
    # a canonical int is < 2**INT_BIT_LIMIT <= any Big
    if a_int:
        if a.bit_length() <= INT_BIT_LIMIT:
            return -1
        a = canon(a)
    if b_int:
        if b.bit_length() <= INT_BIT_LIMIT:
            return 1
        b = canon(b)
    if a._hash == b._hash and a.bits == b.bits:
        return 0
    for pa, pb in zip(a.bits, b.bits):
        if pa is pb:
            continue
        if type(pa) is int and type(pb) is int:
            if pa != pb:
                return -1 if pa < pb else 1
            continue
        c = nat_cmp(pa, pb)
        if c:
            return c
    # shared top bits; the number with extra lower bits is larger
    la, lb = len(a.bits), len(b.bits)
    return (la > lb) - (la < lb)


def nat_eq(a, b):
    return nat_cmp(a, b) == 0


_desc_key = cmp_to_key(lambda a, b: -nat_cmp(a, b))
nat_key = cmp_to_key(nat_cmp)


def from_bits(positions):
    """Build the natural with exactly the given set bit positions."""
    seen = {}
    for p in positions:
        seen.setdefault(canon(p), None)
    ps = list(seen)
    if all(isinstance(p, int) for p in ps) and (not ps or max(ps) < INT_BIT_LIMIT):
        return sum(1 << p for p in ps)
    return Big(tuple(sorted(ps, key=_desc_key)))


def succ(x):
    """x + 1."""
    if isinstance(x, int):
        return canon(x + 1)
    bs = set(x.bits)
    k = 0
    while k in bs:
        bs.discard(k)
        k += 1
    bs.add(k)
    return from_bits(bs)


def bit_test(x, p):
    """Whether bit at position p of x is set (p a natural, possibly huge)."""
    if isinstance(x, int):
        if isinstance(p, int):
            return bool((x >> p) & 1) if p < x.bit_length() else False
        return False  # canonical int < 2**INT_BIT_LIMIT <= 2**p
    return p in x.bitset


def vmax(values, default=0):
    """Maximum of an iterable of naturals (canonical), or default if empty."""
    best = None
    for v in values:
        if best is None or nat_cmp(v, best) > 0:
            best = v
    return canon(default) if best is None else best


def min_with_bits_geq(n, constraints):
    """Least natural X >= n with X's bit at p equal to constraints[p] for all p.

    constraints maps canonical positions to 0/1. Walks the relevant bit
    positions from the top, staying tight with n until a constraint forces the
    value above or below n; in the latter case the lowest free position above
    the failure is bumped.
    """
    nbits = set(bits_desc(n))
    pool = set(constraints) | nbits
    # sort int positions natively; only Big positions need the slow key
    allpos = sorted(
        (p for p in pool if not isinstance(p, int)), key=_desc_key
    ) + sorted((p for p in pool if isinstance(p, int)), reverse=True)
    for p in allpos:
        in_n = p in nbits
        if p not in constraints:
            continue  # free position, copy n's bit
        want = constraints[p]
        if want == (1 if in_n else 0):
            continue
        if want == 1:
            # forced above n at p: keep n's bits above p, set p, minimal below
            high = [q for q in nbits if nat_cmp(q, p) > 0]
            low = [q for q, b in constraints.items() if b == 1 and nat_cmp(q, p) < 0]
            return from_bits(high + [p] + low)
        # want == 0 while n has 1 at p: fell below n, bump a free zero above p
        q = succ(p)
        while q in constraints or q in nbits:
            q = succ(q)
        high = [r for r in nbits if nat_cmp(r, q) > 0]
        low = [r for r, b in constraints.items() if b == 1 and nat_cmp(r, q) < 0]
        return from_bits(high + [q] + low)
    return from_bits(nbits)


def encode(v):
    """JSON-compatible encoding: plain number, or {"^": [positions...]}."""
    if isinstance(v, int):
        return v
    return {"^": [encode(p) for p in v.bits]}


def decode(obj):
    if isinstance(obj, int):
        return canon(obj)
    if isinstance(obj, dict) and set(obj) == {"^"}:
        return from_bits(decode(p) for p in obj["^"])
    raise ValueError(f"not an encoded vertex: {obj!r}")
