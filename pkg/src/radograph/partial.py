"""Finite partial automorphisms of the graph: injective, edge-preserving maps."""

from __future__ import annotations

from .bignat import canon, encode, decode, nat_key
from .errors import CycleDetected, EdgeViolation, NotInjective
from .graph import adjacent


class _Undefined:
    def __repr__(self):
        return "UNDEFINED"

    def __bool__(self):
        return False


UNDEFINED = _Undefined()


class PartialAutomorphism:
    """A finite injective map on vertices that preserves the edge relation.

    Validity is not enforced at construction time; call check() to test it.
    """

    def __init__(self, pairs=()):
        self._fwd = {}
        self._bwd = {}
        items = pairs.items() if hasattr(pairs, "items") else pairs
        for u, v in items:
            u, v = canon(u), canon(v)
            if u in self._fwd:
                raise ValueError(f"duplicate domain vertex {u!r}")
            self._fwd[u] = v
            self._bwd.setdefault(v, u)

    def __len__(self):
        return len(self._fwd)

    def __eq__(self, other):
        return isinstance(other, PartialAutomorphism) and self._fwd == other._fwd

    def __repr__(self):
        return f"PartialAutomorphism({len(self._fwd)} pairs)"

    def domain(self):
        return set(self._fwd)

    def range(self):
        return set(self._fwd.values())

    def rd(self):
        """Domain union range."""
        return set(self._fwd) | set(self._fwd.values())

    def pairs(self):
        return sorted(self._fwd.items(), key=lambda p: nat_key(p[0]))

    def apply(self, v, default=UNDEFINED):
        return self._fwd.get(canon(v), default)

    def inverse_apply(self, v, default=UNDEFINED):
        v = canon(v)
        if v not in self._bwd:
            return default
        # _bwd may be stale under non-injectivity; resolve honestly
        u = self._bwd[v]
        return u if self._fwd.get(u) == v else next(
            w for w, x in self._fwd.items() if x == v
        )

    def check(self):
        """Return None if valid, else the violation as an exception instance."""
        seen = {}
        for u, v in self._fwd.items():
            if v in seen:
                return NotInjective(f"{seen[v]!r} and {u!r} both map to {v!r}")
            seen[v] = u
        dom = list(self._fwd)
        for i, u in enumerate(dom):
            for w in dom[i + 1:]:
                if adjacent(u, w) != adjacent(self._fwd[u], self._fwd[w]):
                    return EdgeViolation(u, w)
        return None

    def forward_end(self, v):
        """Follow the map forward from v until it leaves the domain."""
        v = canon(v)
        seen = {v}
        while v in self._fwd:
            v = self._fwd[v]
            if v in seen:
                raise CycleDetected(f"forward chain from {v!r} closes up")
            seen.add(v)
        return v

    def backward_end(self, v):
        """Follow the map backward from v until it leaves the range."""
        v = canon(v)
        seen = {v}
        while v in self._bwd:
            v = self._bwd[v]
            if v in seen:
                raise CycleDetected(f"backward chain from {v!r} closes up")
            seen.add(v)
        return v

    def orbit_paths(self):
        """Decompose the map into maximal chains and closed cycles.

        Returns a list of {"kind": "path"|"cycle", "vertices": [...]}, each
        chain listed from its backward end, each cycle from its least vertex.
        """
        out = []
        visited = set()
        for start in self._fwd:
            if start in visited:
                continue
            try:
                v = self.backward_end(start)
            except CycleDetected:
                # walk the cycle containing start
                cyc = [start]
                v = self._fwd[start]
                while v != start:
                    cyc.append(v)
                    v = self._fwd[v]
                if cyc[0] in visited:
                    continue
                least = min(range(len(cyc)), key=lambda i: nat_key(cyc[i]))
                cyc = cyc[least:] + cyc[:least]
                visited.update(cyc)
                out.append({"kind": "cycle", "vertices": cyc})
                continue
            if v in visited:
                continue
            path = [v]
            while v in self._fwd:
                v = self._fwd[v]
                path.append(v)
            visited.update(path)
            out.append({"kind": "path", "vertices": path})
        out.sort(key=lambda o: nat_key(o["vertices"][0]))
        return out

    def compose_path(self, other):
        """self after other, defined where the chain of lookups is."""
        pairs = []
        for u, mid in other._fwd.items():
            if mid in self._fwd:
                pairs.append((u, self._fwd[mid]))
        return PartialAutomorphism(pairs)

    def restricted(self, vertices):
        vs = {canon(v) for v in vertices}
        return PartialAutomorphism((u, v) for u, v in self._fwd.items() if u in vs)

    def extended(self, u, v):
        u, v = canon(u), canon(v)
        pairs = dict(self._fwd)
        pairs[u] = v
        return PartialAutomorphism(pairs)

    def inverse(self):
        return PartialAutomorphism((v, u) for u, v in self._fwd.items())

    def to_json(self):
        return {"pairs": [[encode(u), encode(v)] for u, v in self.pairs()]}

    @classmethod
    def from_json(cls, obj):
        return cls((decode(u), decode(v)) for u, v in obj["pairs"])
