"""Lazy total automorphisms of the graph, and finite families of them.

An oracle answers image/preimage queries by extending a finite core map one
step at a time; the extension realizes the adjacency type forced by the core,
so the core stays a partial automorphism forever. Constructed oracles
(build_fp / build_c0) additionally maintain orbit chains with a prescribed
edge pattern along every orbit, persistent non-adjacency prohibitions, and a
round-robin task queue of fresh-orbit witnesses.
"""

from __future__ import annotations

import math

from .bignat import canon, encode, decode, nat_cmp, nat_key, vmax
from .errors import (
    ConstructionConflict,
    ImplementationFault,
    NotConstructed,
    UntouchedVertex,
)
from .graph import adjacent, realize
from .partial import PartialAutomorphism

STAR = "(*)"
STAR0 = "(*)0"
STAR1 = "(*)1"


class AutomorphismOracle:
    """One lazy automorphism. Use the module-level constructors."""

    def __init__(self, kind, seed=0, pattern=None, seed_pairs=None):
        self.kind = kind
        self.seed = seed
        self.pattern = tuple(pattern) if pattern is not None else None
        self._fwd = {}
        self._bwd = {}
        self.tasks = []
        self.declared_finite_orbits = frozenset()
        # orbit machinery, present only for constructed oracles
        self._chains = {}        # orbit-id -> consecutive points of the chain
        self._orbit_of = {}      # vertex -> orbit-id
        self._reps = []          # first point of each orbit, creation order
        self._constraints = {}   # orbit-id -> vertices future points must avoid
        self._pending = {}       # witness root -> forced 0/1 for its first f-edge
        self._next_oid = 0
        self._witness_counter = 1
        self._touch_cursor = 0
        self._max = canon(0)

        if kind == "seeded":
            core = PartialAutomorphism(seed_pairs or ())
            err = core.check()
            if err is not None:
                raise err
            for u, v in core.pairs():
                self._store(u, v)
            cyc = set()
            for orb in core.orbit_paths():
                if orb["kind"] == "cycle":
                    cyc.update(orb["vertices"])
            self.declared_finite_orbits = frozenset(cyc)
        elif kind in ("fp", "c0"):
            self._touch(canon(seed))
        elif kind != "identity":
            raise ValueError(f"unknown oracle kind {kind!r}")

    # -- identity & bookkeeping ------------------------------------------

    @property
    def constructed(self):
        return self.kind in ("fp", "c0")

    def identity_key(self):
        seed = tuple(self.seed) if isinstance(self.seed, (list, tuple)) else self.seed
        return (self.kind, seed, self.pattern)

    def core(self):
        return PartialAutomorphism(self._fwd)

    def _store(self, u, v):
        self._fwd[u] = v
        self._bwd[v] = u
        self._max = vmax([self._max, u, v])

    def _bound(self):
        return vmax([self._max] + list(self._orbit_of))

    # -- queries ----------------------------------------------------------

    def image(self, v):
        v = canon(v)
        if self.kind == "identity":
            return v
        if v in self._fwd:
            return self._fwd[v]
        self.tasks.append(["image", encode(v)])
        if self.constructed:
            oid = self._orbit_of.get(v)
            if oid is None:
                oid = self._touch(v)
            while self._fwd.get(v) is None:
                self._extend_forward(oid)
            return self._fwd[v]
        return self._extend_image(v)

    def preimage(self, v):
        v = canon(v)
        if self.kind == "identity":
            return v
        if v in self._bwd:
            return self._bwd[v]
        self.tasks.append(["preimage", encode(v)])
        if self.constructed:
            oid = self._orbit_of.get(v)
            if oid is None:
                oid = self._touch(v)
            while self._bwd.get(v) is None:
                self._extend_backward(oid)
            return self._bwd[v]
        return self._extend_preimage(v)

    def _extend_image(self, v):
        # new value w must satisfy w R f(x) <-> v R x for every stored pair
        tau = {fx: 1 if adjacent(x, v) else 0 for x, fx in self._fwd.items()}
        w = realize(tau, (), vmax([self._bound(), v]))
        self._store(v, w)
        return w

    def _extend_preimage(self, v):
        tau = {x: 1 if adjacent(v, fx) else 0 for x, fx in self._fwd.items()}
        u = realize(tau, (), vmax([self._bound(), v]))
        self._store(u, v)
        return u

    def restriction_fingerprint(self, m_set):
        return PartialAutomorphism((m, self.image(m)) for m in m_set)

    # -- constructed-oracle machinery ------------------------------------

    def _require_constructed(self):
        if not self.constructed:
            raise NotConstructed(f"oracle of kind {self.kind!r} has no orbit registry")

    def _pattern_bit(self, n):
        """Adjacency value required between orbit points at distance n >= 1."""
        if self.kind == "fp" and self.pattern and n <= len(self.pattern):
            return 1 if self.pattern[n - 1] == 0 else 0
        return 0

    def _touch(self, v):
        v = canon(v)
        if v in self._orbit_of:
            return self._orbit_of[v]
        oid = self._next_oid
        self._next_oid += 1
        self._chains[oid] = [v]
        self._orbit_of[v] = oid
        self._reps.append(v)
        self._max = vmax([self._max, v])
        return oid

    def _assemble(self, required, touched_snapshot):
        """Merge required tau entries (conflicts are internal faults) and
        default every remaining touched vertex to non-adjacent."""
        tau = {}
        for key, val, why in required:
            old = tau.get(key)
            if old is not None and old[0] != val:
                raise ImplementationFault(
                    f"tau conflict at {key!r}: {old[1]} wants {old[0]}, {why} wants {val}"
                )
            tau[key] = (val, why)
        out = {k: v for k, (v, _) in tau.items()}
        for t in touched_snapshot:
            out.setdefault(t, 0)
        return out

    def _extend_forward(self, oid):
        chain = self._chains[oid]
        last = chain[-1]
        required = []
        m = len(chain) - 1
        for j, u in enumerate(chain):
            n = (m + 1) - j
            bit = self._pattern_bit(n)
            if n == 1 and u in self._pending:
                bit = self._pending[u]
            required.append((u, bit, f"pattern@{n}"))
        for x in self._constraints.get(oid, ()):
            required.append((x, 0, "prohibition"))
        for x, fx in self._fwd.items():
            required.append((fx, 1 if adjacent(x, last) else 0, "mirror"))
        tau = self._assemble(required, self._orbit_of)
        new = realize(tau, (), self._bound())
        chain.append(new)
        self._orbit_of[new] = oid
        self._store(last, new)
        self._pending.pop(last, None)
        return new

    def _extend_backward(self, oid):
        chain = self._chains[oid]
        first = chain[0]
        required = []
        for j, u in enumerate(chain):
            required.append((u, self._pattern_bit(j + 1), f"pattern@{j + 1}"))
        for x in self._constraints.get(oid, ()):
            required.append((x, 0, "prohibition"))
        for x, fx in self._fwd.items():
            required.append((x, 1 if adjacent(first, fx) else 0, "mirror"))
        tau = self._assemble(required, self._orbit_of)
        new = realize(tau, (), self._bound())
        chain.insert(0, new)
        self._orbit_of[new] = oid
        self._store(new, first)
        return new

    def orbit_id(self, v):
        self._require_constructed()
        v = canon(v)
        if v not in self._orbit_of:
            raise UntouchedVertex(f"{v!r} was never touched by this construction")
        return self._orbit_of[v]

    def orbit_representatives(self):
        self._require_constructed()
        return list(self._reps)

    def orbit_points(self, oid):
        self._require_constructed()
        return list(self._chains[oid])

    def touched(self):
        self._require_constructed()
        return list(self._orbit_of)

    def star_witness(self, tau, variant=STAR, _log=True):
        """Fresh-orbit vertex realizing tau; the variant fixes its first f-edge."""
        self._require_constructed()
        if variant not in (STAR, STAR0, STAR1):
            raise ValueError(f"unknown variant {variant!r}")
        if variant in (STAR0, STAR1):
            want = 0 if variant == STAR0 else 1
            if self._pattern_bit(1) != want:
                raise ConstructionConflict(
                    f"variant {variant} contradicts the orbit edge pattern"
                )
        full = {t: 0 for t in self._orbit_of}
        for w, b in tau.items():
            full[canon(w)] = 1 if b else 0
        v = realize(full, (), self._bound())
        self._touch(v)
        if variant in (STAR0, STAR1):
            self._pending[v] = 0 if variant == STAR0 else 1
        if _log:
            self.tasks.append([
                "star",
                sorted(
                    ([encode(w), 1 if b else 0] for w, b in tau.items()),
                    key=lambda p: str(p[0]),
                ),
                variant,
            ])
        return v

    def c0_witness(self, a_set, b_set, _log=True):
        """Fresh-orbit vertex adjacent to A, never adjacent to the orbits of
        A and B outside A — past points via tau, future points via a
        persistent prohibition honored by all later extensions."""
        self._require_constructed()
        a_set = {canon(a) for a in a_set}
        b_set = {canon(b) for b in b_set}
        if a_set & b_set:
            raise ValueError("witness sets must be disjoint")
        oids = set()
        for x in a_set | b_set:
            if x not in self._orbit_of:
                raise UntouchedVertex(f"{x!r} was never touched by this construction")
            oids.add(self._orbit_of[x])
        full = {t: 0 for t in self._orbit_of}
        for a in a_set:
            full[a] = 1
        v = realize(full, (), self._bound())
        self._touch(v)
        self._pending[v] = self._pattern_bit(1)
        for oid in oids:
            self._constraints.setdefault(oid, set()).add(v)
        if _log:
            self.tasks.append([
                "witness2",
                sorted((encode(a) for a in a_set), key=str),
                sorted((encode(b) for b in b_set), key=str),
            ])
        return v

    def constraint_log(self):
        self._require_constructed()
        return {oid: set(vs) for oid, vs in self._constraints.items()}

    def develop(self, rounds=1):
        """One or more scheduler rounds: touch the least fresh natural, grow
        every orbit one step in each direction, then serve one witness task."""
        self._require_constructed()
        self.tasks.append(["develop", rounds])
        for _ in range(rounds):
            while canon(self._touch_cursor) in self._orbit_of:
                self._touch_cursor += 1
            self._touch(canon(self._touch_cursor))
            for oid in list(self._chains):
                self._extend_forward(oid)
                self._extend_backward(oid)
            self._serve_witness()

    def _serve_witness(self):
        base = [v for v in self._orbit_of][:9]
        while True:
            code = self._witness_counter
            self._witness_counter += 1
            a_set, b_set = set(), set()
            i = 0
            while code and i < len(base):
                code, digit = divmod(code, 3)
                if digit == 1:
                    a_set.add(base[i])
                elif digit == 2:
                    b_set.add(base[i])
                i += 1
            if not (a_set or b_set):
                continue
            break
        if self.kind == "c0":
            self.c0_witness(a_set, b_set, _log=False)
        else:
            tau = {a: 1 for a in a_set}
            tau.update({b: 0 for b in b_set})
            self.star_witness(tau, STAR, _log=False)

    # -- serialization ----------------------------------------------------

    def to_json(self):
        if self.kind == "seeded":
            seed = [[encode(u), encode(v)] for u, v in sorted(
                self.seed and PartialAutomorphism(self.seed).pairs() or [],
                key=lambda p: nat_key(p[0]),
            )]
        else:
            seed = self.seed
        core = sorted(self._fwd.items(), key=lambda p: nat_key(p[0]))
        return {
            "seed": seed,
            "kind": self.kind,
            "pattern": list(self.pattern) if self.pattern is not None else None,
            "core": [[encode(u), encode(v)] for u, v in core],
            "tasks": self.tasks,
        }


def identity_oracle(seed=0):
    return AutomorphismOracle("identity", seed=seed)


def seeded_oracle(pairs, seed=None):
    pairs = [(canon(u), canon(v)) for u, v in (
        pairs.items() if hasattr(pairs, "items") else pairs
    )]
    o = AutomorphismOracle("seeded", seed=pairs, seed_pairs=pairs)
    return o


def build_fp(pattern, seed=0):
    """Oracle whose orbits obey: point adjacent to its n-th successor iff
    pattern[n-1] == 0 (non-edge beyond the pattern's depth)."""
    pattern = tuple(int(b) for b in pattern)
    if any(b not in (0, 1) for b in pattern):
        raise ValueError("pattern must be 0/1-valued")
    return AutomorphismOracle("fp", seed=seed, pattern=pattern)


def build_c0(seed=0):
    """Oracle with infinite chain orbits, no edges within any orbit, default
    non-adjacency across orbits, and persistent witness prohibitions."""
    return AutomorphismOracle("c0", seed=seed, pattern=())


def replay(log):
    """Rebuild an oracle from its construction log by re-running every task."""
    kind = log["kind"]
    if kind == "seeded":
        o = seeded_oracle([(decode(u), decode(v)) for u, v in log["seed"]])
    elif kind == "identity":
        o = identity_oracle(log["seed"])
    elif kind == "fp":
        o = build_fp(log["pattern"], log["seed"])
    elif kind == "c0":
        o = build_c0(log["seed"])
    else:
        raise ValueError(f"unknown oracle kind {kind!r}")
    for task in log["tasks"]:
        op = task[0]
        if op == "image":
            o.image(decode(task[1]))
        elif op == "preimage":
            o.preimage(decode(task[1]))
        elif op == "develop":
            o.develop(task[2] if len(task) > 2 else task[1])
        elif op == "star":
            o.star_witness({decode(w): b for w, b in task[1]}, task[2])
        elif op == "witness2":
            o.c0_witness([decode(a) for a in task[1]], [decode(b) for b in task[2]])
        else:
            raise ValueError(f"unknown task {op!r}")
    return o


# -- module-level views matching the operation names ----------------------

def image(o, v):
    return o.image(v)


def preimage(o, v):
    return o.preimage(v)


def restriction_fingerprint(o, m_set):
    return o.restriction_fingerprint(m_set)


def star_witness(o, tau, variant=STAR):
    return o.star_witness(tau, variant)


def orbit_id(o, v):
    return o.orbit_id(v)


def orbit_representatives(o):
    return o.orbit_representatives()


class CompactFamily:
    """Finite stand-in for a compact set of automorphisms."""

    def __init__(self, members):
        members = list(members)
        if not members:
            raise ValueError("a compact family must be nonempty")
        keys = [m.identity_key() for m in members]
        if len(set(keys)) != len(keys):
            raise ValueError("family members must have distinct construction seeds")
        self.members = members

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def family_image(self, m_set):
        return {h.image(v) for h in self.members for v in m_set}

    def family_preimage(self, m_set):
        return {h.preimage(v) for h in self.members for v in m_set}

    def m_star(self, m_set):
        m_set = {canon(v) for v in m_set}
        return m_set | self.family_preimage(m_set)

    def dK(self, x, y, radius):
        """Exact distance in the orbit graph if <= radius, else math.inf."""
        x, y = canon(x), canon(y)
        if x == y:
            return 0
        frontier = {x}
        seen = {x}
        for dist in range(1, radius + 1):
            nxt = set()
            for u in frontier:
                for h in self.members:
                    for w in (h.image(u), h.preimage(u)):
                        if w == y:
                            return dist
                        if w not in seen:
                            seen.add(w)
                            nxt.add(w)
            frontier = nxt
            if not frontier:
                break
        return math.inf


def family_image(k, m_set):
    return k.family_image(m_set)


def family_preimage(k, m_set):
    return k.family_preimage(m_set)


def m_star(k, m_set):
    return k.m_star(m_set)


def dK(k, x, y, radius):
    return k.dK(x, y, radius)
