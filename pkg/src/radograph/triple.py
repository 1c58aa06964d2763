"""Good triples: a finite partial conjugation skeleton (g, {phi_h}, M).

For a finite family K of lazy automorphisms and a constructed target f, the
triple tracks a partial map g, one finite map phi per restriction class of K
over M* = M u K^{-1}(M), and the support set M. The ten structural
conditions are decidable on this finite data; the four extension operations
grow the triple while keeping all ten conditions intact. phi is shared per
fingerprint class: members that agree on M* always hold the same dict.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bignat import canon, encode, decode, nat_key
from .errors import (
    AlreadyDefined,
    ConstructionConflict,
    FiniteOrbitsUnsupported,
    ImplementationFault,
    IncompatibleTau,
    PreconditionPhiMissing,
)
from .graph import adjacent
from .oracle import STAR0
from .partial import PartialAutomorphism
from .splitting import split_far


@dataclass
class ClassView:
    """One restriction class over the current M*: fingerprint, members, phi."""

    key: tuple
    indices: list
    phi: dict
    hmap: dict   # m -> h(m) on M*
    hinv: dict   # h(m) -> m

    def hg_range(self, g):
        return {self.hmap[v] for v in g.values()}


@dataclass
class BadSituation:
    h: int
    hp: int
    x: object
    xp: object
    y: object


@dataclass
class UglySituation:
    h: int
    hp: int
    x: object
    y: object


class GoodTriple:
    def __init__(self, family, target):
        if target.declared_finite_orbits:
            raise FiniteOrbitsUnsupported("target declares finite orbits")
        for h in family:
            if h.declared_finite_orbits:
                raise FiniteOrbitsUnsupported(
                    "family member declares finite orbits"
                )
        if not target.constructed:
            raise ConstructionConflict("target must be a constructed oracle")
        if target._pattern_bit(1) != 0:
            raise ConstructionConflict(
                "target must admit edge-free fresh-orbit witnesses"
            )
        self.family = family
        self.target = target
        self.g = {}
        self.g_inv = {}
        self.M = set()
        shared = {}
        self._phi = [shared for _ in family.members]

    # -- structure --------------------------------------------------------

    def add_to_m(self, vertices):
        """Enlarge the support set; refinement of classes happens lazily."""
        self.M.update(canon(v) for v in vertices)
        return self

    def m_star(self):
        return sorted(self.family.m_star(self.M), key=nat_key)

    def classes(self):
        mstar = self.m_star()
        groups = {}
        for i, h in enumerate(self.family.members):
            key = tuple((m, h.image(m)) for m in mstar)
            groups.setdefault(key, []).append(i)
        out = []
        for key, idxs in groups.items():
            ph = self._phi[idxs[0]]
            for i in idxs[1:]:
                if self._phi[i] is not ph:
                    if self._phi[i] == ph:
                        self._phi[i] = ph  # re-share after a refinement
                    else:
                        raise ImplementationFault(
                            "members with equal fingerprints hold different phi"
                        )
            hmap = dict(key)
            out.append(ClassView(key, idxs, ph, hmap, {v: m for m, v in hmap.items()}))
        return out

    def _hg_map(self, cls):
        return {w: cls.hmap[vb] for w, vb in self.g.items()}

    # -- detectors --------------------------------------------------------

    def find_bad(self):
        out = []
        classes = self.classes()
        f = self.target
        for c in classes:
            ran_c = c.hg_range(self.g)
            for c2 in classes:
                ran_c2 = c2.hg_range(self.g)
                for x in c.phi:
                    if x in ran_c or x not in c.hinv:
                        continue
                    u = c.hinv[x]
                    xp = c2.hmap.get(u)
                    if xp is None or xp not in c2.phi or xp in ran_c2:
                        continue
                    for y in c.phi:
                        if y in self.g or y not in c2.phi:
                            continue
                        lhs = adjacent(c.phi[x], f.image(c.phi[y]))
                        rhs = adjacent(c2.phi[xp], f.image(c2.phi[y]))
                        if lhs != rhs:
                            out.append(
                                BadSituation(c.indices[0], c2.indices[0], x, xp, y)
                            )
        return out

    def find_ugly(self):
        out = []
        classes = self.classes()
        f = self.target
        for c in classes:
            ran_c = c.hg_range(self.g)
            for c2 in classes:
                ran_c2 = c2.hg_range(self.g)
                for x in c.phi:
                    if x in ran_c or x not in c.hinv:
                        continue
                    y = c2.hmap.get(c.hinv[x])
                    if y is None or y in ran_c2 or y in self.g:
                        continue
                    if y in c2.phi:
                        continue
                    if y in c.phi and adjacent(c.phi[x], f.image(c.phi[y])):
                        out.append(UglySituation(c.indices[0], c2.indices[0], x, y))
        return out

    # -- the ten-condition checker ----------------------------------------

    def check(self):
        """{"ok": True} or {"ok": False, "condition": name, "witness": data}."""
        f = self.target

        def fail(cond, witness):
            return {"ok": False, "condition": cond, "witness": witness}

        err = PartialAutomorphism(self.g).check()
        if err is not None:
            return fail("(i)", repr(err))
        try:
            classes = self.classes()
        except ImplementationFault as e:
            return fail("(vi)", str(e))
        for c in classes:
            err = PartialAutomorphism(c.phi).check()
            if err is not None:
                return fail("(i)", repr(err))

        rd_g = set(self.g) | set(self.g.values())
        if not rd_g <= self.M:
            return fail("(ii)", "rd(g) escapes M")
        for c in classes:
            if not set(c.phi) <= self.M:
                return fail("(ii)", "dom(phi) escapes M")
            hg = self._hg_map(c)
            need = set(hg) | set(hg.values())
            if not need <= set(c.phi):
                return fail("(ii)", sorted(need - set(c.phi), key=nat_key)[0])

        # (iii) vacuous: no finite-orbit set to respect

        for c in classes:
            hg = self._hg_map(c)
            for v, w in hg.items():
                if v in c.phi and w in c.phi:
                    if c.phi[w] != f.image(c.phi[v]):
                        return fail("(iv)", encode(v))

        for c in classes:
            hg = self._hg_map(c)
            chain_of = _chain_ids(hg, c.phi)
            if chain_of is None:
                return fail("(vii)", c.indices)
            orbit_of_chain = {}
            for w in c.phi:
                oid = f.orbit_id(c.phi[w])
                cid = chain_of[w]
                prev = orbit_of_chain.get(oid)
                if prev is None:
                    orbit_of_chain[oid] = cid
                elif prev != cid:
                    return fail("(v)", encode(w))

        for c in classes:
            for c2 in classes:
                if c is c2:
                    continue
                for w in c.phi:
                    if w not in c.hinv or w not in c2.hinv:
                        continue
                    if c2.hinv[w] != c.hinv[w]:
                        continue
                    if adjacent(f.image(c.phi[w]), c.phi[w]) and w not in c2.phi:
                        return fail("(viii)", encode(w))

        ugly = self.find_ugly()
        if ugly:
            return fail("(ix)", ugly[0])
        bad = self.find_bad()
        if bad:
            return fail("(x)", bad[0])
        return {"ok": True}

    # -- extension operations ---------------------------------------------

    def extend_phi(self, cls, v):
        """Define the class's phi at v by a fresh-orbit target witness whose
        adjacency type pre-empts every bad and ugly situation."""
        v = canon(v)
        if v not in self.M:
            raise ValueError(f"{v!r} is outside M")
        if v in cls.phi:
            raise AlreadyDefined(f"phi already defined at {v!r}")
        f = self.target
        classes = self.classes()
        req = []
        for w, pw in cls.phi.items():
            req.append((pw, 1 if adjacent(v, w) else 0, "match"))
        ran_c = cls.hg_range(self.g)
        if v not in self.g:
            # pre-empt bad/ugly situations with v in the y slot
            for x in cls.phi:
                if x in ran_c or x not in cls.hinv:
                    continue
                u = cls.hinv[x]
                key = None
                for c2 in classes:
                    xp = c2.hmap.get(u)
                    if xp is None or xp in c2.hg_range(self.g):
                        continue
                    if xp in c2.phi and v in c2.phi:
                        if key is None:
                            key = f.preimage(cls.phi[x])
                        bit = adjacent(c2.phi[xp], f.image(c2.phi[v]))
                        req.append((key, 1 if bit else 0, "pre-bad-y"))
                    elif xp == v and v not in c2.phi:
                        if key is None:
                            key = f.preimage(cls.phi[x])
                        req.append((key, 0, "pre-ugly-y"))
            # pre-empt situations with v in the x slot
            if v not in ran_c and v in cls.hinv:
                u0 = cls.hinv[v]
                for c2 in classes:
                    xp = c2.hmap.get(u0)
                    if xp is None or xp in c2.hg_range(self.g):
                        continue
                    for y in cls.phi:
                        if y in self.g:
                            continue
                        if xp in c2.phi and y in c2.phi:
                            bit = adjacent(c2.phi[xp], f.image(c2.phi[y]))
                            req.append((f.image(cls.phi[y]), 1 if bit else 0, "pre-bad-x"))
                        elif xp == y and y not in c2.phi:
                            req.append((f.image(cls.phi[y]), 0, "pre-ugly-x"))
        tau = {}
        for key, bit, why in req:
            old = tau.get(key)
            if old is not None and old[0] != bit:
                raise ImplementationFault(
                    f"witness requirements clash at {key!r}: {old[1]} vs {why}"
                )
            tau[key] = (bit, why)
        z = f.star_witness({k: b for k, (b, _) in tau.items()}, STAR0)
        cls.phi[v] = z
        return self

    def extend_phi_all(self, v):
        v = canon(v)
        for cls in self.classes():
            if v not in cls.phi:
                self.extend_phi(cls, v)
        return self

    def _merge_tau(self, entries):
        tau = {}
        for key, bit, why in entries:
            old = tau.get(key)
            if old is not None and old[0] != bit:
                raise IncompatibleTau(f"tau clash at {key!r}: {old[1]} vs {why}")
            tau[key] = (bit, why)
        return {k: b for k, (b, _) in tau.items()}

    def extend_domain_g(self, v):
        """Adjoin v to dom(g): the image is a far splitting point v-bar, and
        every phi gains h(v-bar) -> f(phi(v))."""
        v = canon(v)
        if v in self.g:
            raise AlreadyDefined(f"g already defined at {v!r}")
        classes = self.classes()
        for c in classes:
            if v not in c.phi:
                raise PreconditionPhiMissing(f"phi missing at {v!r}")
        f = self.target
        entries = [
            (w, 1 if adjacent(self.g_inv[w], v) else 0, "g-range")
            for w in self.g_inv
        ]
        for c in classes:
            fz = f.image(c.phi[v])
            for u, pu in c.phi.items():
                entries.append(
                    (c.hinv[u], 1 if adjacent(pu, fz) else 0, "phi-pullback")
                )
        tau = self._merge_tau(entries)
        mstar = set(self.m_star())
        vbar = split_far(self.family, mstar, tau)
        self.g[v] = vbar
        self.g_inv[vbar] = v
        self.M.add(vbar)
        for c in classes:
            fz = f.image(c.phi[v])
            for i in c.indices:
                self._phi[i] = dict(self._phi[i])
            for i in c.indices:
                hv = self.family.members[i].image(vbar)
                self.M.add(hv)
                self._phi[i][hv] = fz
        return self

    def extend_range_g(self, v):
        """Adjoin v to ran(g): the preimage is a far splitting point, and
        every phi gains v-bar -> f^{-1}(phi(h(v)))."""
        v = canon(v)
        if v not in self.M:
            raise ValueError(f"{v!r} is outside M")
        if v in self.g_inv:
            raise AlreadyDefined(f"g already hits {v!r}")
        classes = self.classes()
        for c in classes:
            if c.hmap[v] not in c.phi:
                raise PreconditionPhiMissing(f"phi missing at image of {v!r}")
        f = self.target
        entries = [
            (w, 1 if adjacent(self.g[w], v) else 0, "g-domain") for w in self.g
        ]
        for c in classes:
            fz = f.preimage(c.phi[c.hmap[v]])
            for u, pu in c.phi.items():
                entries.append((u, 1 if adjacent(pu, fz) else 0, "phi-direct"))
        tau = self._merge_tau(entries)
        mstar = set(self.m_star())
        vbar = split_far(self.family, mstar, tau)
        self.g[vbar] = v
        self.g_inv[v] = vbar
        self.M.add(vbar)
        for c in classes:
            fz = f.preimage(c.phi[c.hmap[v]])
            for i in c.indices:
                self._phi[i] = dict(self._phi[i])
            for i in c.indices:
                self._phi[i][vbar] = fz
        return self

    def extend_phi_range(self, z):
        """Make z's target orbit meet the phi-range of every class, via
        mutually far splitting points."""
        z = canon(z)
        zoid = self.target.orbit_id(z)
        fresh = []
        for c in self.classes():
            if any(self.target.orbit_id(pv) == zoid for pv in c.phi.values()):
                continue
            tau = {w: (1 if adjacent(pw, z) else 0) for w, pw in c.phi.items()}
            m_set = set(self.m_star()) | set(fresh)
            v_c = split_far(self.family, m_set, tau)
            c.phi[v_c] = z
            self.M.add(v_c)
            fresh.append(v_c)
        return self

    # -- serialization ----------------------------------------------------

    def to_snapshot(self):
        phis = []
        seen = []
        for c in self.classes():
            phis.append({
                "fingerprint": [[encode(m), encode(w)] for m, w in c.key],
                "map": [[encode(u), encode(w)] for u, w in sorted(
                    c.phi.items(), key=lambda p: nat_key(p[0])
                )],
            })
            seen.append(c.indices)
        return {
            "g": [[encode(u), encode(w)] for u, w in sorted(
                self.g.items(), key=lambda p: nat_key(p[0])
            )],
            "M": [encode(m) for m in sorted(self.M, key=nat_key)],
            "phi": phis,
            "family_ref": [h.to_json() for h in self.family],
            "target_ref": self.target.to_json(),
        }

    @classmethod
    def from_snapshot(cls, snapshot, family, target):
        """Rebuild a triple from snapshot data against live (replayed) oracles.

        phi entries are matched to members by fingerprint; a fingerprint that
        matches no member, or a member with no matching fingerprint, raises.
        """
        t = cls.__new__(cls)
        t.family = family
        t.target = target
        t.g = {}
        t.g_inv = {}
        for u, w in snapshot["g"]:
            u, w = decode(u), decode(w)
            t.g[u] = w
            t.g_inv[w] = u
        t.M = {decode(m) for m in snapshot["M"]}
        by_key = {}
        for entry in snapshot["phi"]:
            key = tuple((decode(m), decode(w)) for m, w in entry["fingerprint"])
            by_key[key] = {decode(u): decode(w) for u, w in entry["map"]}
        mstar = sorted(family.m_star(t.M), key=nat_key)
        t._phi = []
        cache = {}
        for h in family.members:
            key = tuple((m, h.image(m)) for m in mstar)
            if key not in by_key:
                raise ValueError("snapshot phi does not cover a family member")
            if key not in cache:
                cache[key] = dict(by_key[key])
            t._phi.append(cache[key])
        return t


def _chain_ids(hg, phi_dom):
    """Union-find of hg-chains over dom(phi); None if a cycle exists."""
    parent = {}

    def find(a):
        while parent.get(a, a) != a:
            parent[a] = parent.get(parent[a], parent[a])
            a = parent[a]
        return a

    vertices = set(phi_dom) | set(hg) | set(hg.values())
    for v in vertices:
        parent.setdefault(v, v)
    for v, w in hg.items():
        ra, rb = find(v), find(w)
        if ra != rb:
            parent[ra] = rb
    # cycle check: follow hg from each vertex
    for start in hg:
        seen = set()
        v = start
        while v in hg:
            if v in seen:
                return None
            seen.add(v)
            v = hg[v]
    return {w: find(w) for w in phi_dom}


def init(family, target):
    return GoodTriple(family, target)


def find_bad(t):
    return t.find_bad()


def find_ugly(t):
    return t.find_ugly()


def check(t):
    return t.check()


def extend_phi(t, cls, v):
    return t.extend_phi(cls, v)


def extend_phi_all(t, v):
    return t.extend_phi_all(v)


def extend_domain_g(t, v):
    return t.extend_domain_g(v)


def extend_range_g(t, v):
    return t.extend_range_g(v)


def extend_phi_range(t, z):
    return t.extend_phi_range(z)
