"""Driving a good triple to a conjugation: scheduled rounds, the C0
back-and-forth conjugator, and factorization certificates.

Odd rounds pull one more target orbit into every phi-range; even rounds
ingest the least natural into both dom(g) and ran(g). Every extension step
is followed by the full ten-condition check, and everything is logged to a
trace so the schedule promises can be audited afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bignat import canon, decode, encode, nat_key
from .errors import (
    CertificateError,
    FiniteOrbitsUnsupported,
    ImplementationFault,
    NotC0Built,
)
from .graph import adjacent
from .oracle import CompactFamily, build_c0, identity_oracle
from .partial import PartialAutomorphism
from .triple import GoodTriple


@dataclass
class TranslationResult:
    triple: GoodTriple
    trace: list
    steps_run: int

    def g_image(self, v):
        """g(v), ingesting v with an extra targeted round if needed."""
        v = canon(v)
        if v not in self.triple.g:
            _even_round(self.triple, self.trace, v)
            self.steps_run += 1
        return self.triple.g[v]

    def g_preimage(self, v):
        v = canon(v)
        if v not in self.triple.g_inv:
            _even_round(self.triple, self.trace, v)
            self.steps_run += 1
        return self.triple.g_inv[v]

    def checks_passed(self):
        return sum(1 for e in self.trace if e.get("check", {}).get("ok"))

    def to_json(self):
        t = self.triple
        return {
            "steps": self.steps_run,
            "g": [[encode(u), encode(w)] for u, w in sorted(
                t.g.items(), key=lambda p: nat_key(p[0])
            )],
            "m_size": len(t.M),
            "classes": len(t.classes()),
            "checks_passed": self.checks_passed(),
            "trace": self.trace,
        }


def _record(t, trace, round_no, parity, op, arg):
    rep = t.check()
    trace.append({
        "round": round_no,
        "parity": parity,
        "op": op,
        "arg": arg,
        "check": rep,
    })
    if not rep["ok"]:
        raise ImplementationFault(f"check failed after {op}: {rep}")


def _even_round(t, trace, v=None, round_no=0):
    """Ingest one vertex into dom(g) and ran(g), phi first."""
    if v is None:
        k = 0
        while canon(k) in t.g and canon(k) in t.g_inv:
            k += 1
        v = canon(k)
    images = sorted({h.image(v) for h in t.family}, key=nat_key)
    t.add_to_m({v}, )
    t.add_to_m(images)
    _record(t, trace, round_no, "even", "add_to_m", [encode(v)] + [encode(w) for w in images])
    for cls in t.classes():
        if v not in cls.phi:
            t.extend_phi(cls, v)
            _record(t, trace, round_no, "even", "extend_phi", encode(v))
    if v not in t.g:
        t.extend_domain_g(v)
        _record(t, trace, round_no, "even", "extend_domain_g", encode(v))
    for w in images:
        for cls in t.classes():
            if w not in cls.phi:
                t.extend_phi(cls, w)
                _record(t, trace, round_no, "even", "extend_phi", encode(w))
    if v not in t.g_inv:
        t.extend_range_g(v)
        _record(t, trace, round_no, "even", "extend_range_g", encode(v))
    return v


def _covered(t, z):
    zoid = t.target.orbit_id(z)
    return all(
        any(t.target.orbit_id(pv) == zoid for pv in c.phi.values())
        for c in t.classes()
    )


def _odd_round(t, trace, round_no):
    """Pull the least-index uncovered target orbit into every phi-range."""
    reps = t.target.orbit_representatives()
    z = next((r for r in reps if not _covered(t, r)), None)
    if z is None:
        t.target.develop(1)
        reps = t.target.orbit_representatives()
        z = next((r for r in reps if not _covered(t, r)), None)
    if z is None:
        trace.append({"round": round_no, "parity": "odd", "op": "noop", "arg": None,
                      "check": t.check()})
        return None
    t.extend_phi_range(z)
    _record(t, trace, round_no, "odd", "extend_phi_range", encode(z))
    return z


def translate(family, target, steps):
    """Run the scheduled construction for the given number of rounds."""
    t = GoodTriple(family, target)
    trace = []
    trace.append({"round": 0, "parity": "init", "op": "init", "arg": None,
                  "check": t.check()})
    for n in range(1, steps + 1):
        if n % 2 == 1:
            _odd_round(t, trace, n)
        else:
            _even_round(t, trace, None, n)
    return TranslationResult(t, trace, steps)


# -- C0 back-and-forth conjugation ----------------------------------------


def conjugate_c0(f, fp, depth):
    """Finite partial conjugation phi with phi(f(v)) = fp(phi(v)) wherever
    both sides are built, via the orbit-pairing back-and-forth."""
    for o in (f, fp):
        if getattr(o, "kind", None) != "c0":
            raise NotC0Built("both oracles must come from build_c0")
    phi = {}
    phi_inv = {}
    paired = {}      # f-orbit-id -> (anchor in f, anchor in fp)
    paired_rev = {}  # fp-orbit-id -> same anchors

    def offset(oracle, anchor, v):
        chain = oracle.orbit_points(oracle.orbit_id(anchor))
        return chain.index(v) - chain.index(anchor)

    def walk(oracle, start, n):
        v = start
        for _ in range(abs(n)):
            v = oracle.image(v) if n > 0 else oracle.preimage(v)
        return v

    def add_pair(a, b):
        phi[a] = b
        phi_inv[b] = a
        foid = f.orbit_id(a)
        poid = fp.orbit_id(b)
        paired.setdefault(foid, (a, b))
        paired_rev.setdefault(poid, paired[foid])

    def fresh_partner(side_oracle, other_oracle, v, fwd_map):
        """Witness in other_oracle matching v's adjacency into dom(fwd_map)."""
        a_set = {fwd_map[w] for w in fwd_map if adjacent(v, w)}
        covered = {other_oracle.orbit_id(x) for x in a_set}
        b_set = set()
        for w, img in fwd_map.items():
            oid = other_oracle.orbit_id(img)
            if oid not in covered:
                covered.add(oid)
                b_set.add(img)
        return other_oracle.c0_witness(a_set, b_set)

    def next_missing(oracle, taken):
        # creation order, not numeric order: a point's edges to everything
        # created before it are either builder-controlled or get matched
        # exactly by the witness below, so pairing in this order keeps the
        # growing map edge-preserving
        while True:
            v = next((u for u in oracle.touched() if u not in taken), None)
            if v is not None:
                return v
            oracle.develop(1)

    for step in range(depth):
        if step % 2 == 0:
            v = next_missing(f, phi)
            foid = f.orbit_id(v)
            if foid in paired:
                a, b = paired[foid]
                add_pair(v, walk(fp, b, offset(f, a, v)))
            else:
                add_pair(v, fresh_partner(f, fp, v, phi))
        else:
            v = next_missing(fp, phi_inv)
            poid = fp.orbit_id(v)
            if poid in paired_rev:
                a, b = paired_rev[poid]
                add_pair(walk(f, a, offset(fp, b, v)), v)
            else:
                add_pair(fresh_partner(fp, f, v, phi_inv), v)
    return PartialAutomorphism(phi)


# -- Truss factorization ---------------------------------------------------


def truss_factor(h, steps, target=None):
    """Translate {id, h} onto an edge-free-orbit target f; the certificates
    witness, per member h', the pointwise identity phi(h'(g(v))) = f(phi(v)),
    i.e. that g and h o g both act like f up to conjugation at every
    checked point."""
    if h.declared_finite_orbits:
        raise FiniteOrbitsUnsupported("h must not declare finite orbits")
    members = [identity_oracle()]
    if h.identity_key() != members[0].identity_key():
        members.append(h)
    family = CompactFamily(members)
    target = target or build_c0(seed=0)
    res = translate(family, target, steps)
    certs = [
        _certificate(res.triple, i, member)
        for i, member in enumerate(family.members)
    ]
    return res, certs


def _certificate(t, index, member):
    phi = t._phi[index]
    f = t.target
    points = []
    for v in t.g:
        gv = t.g[v]
        hgv = member.image(gv)
        if v in phi and hgv in phi:
            f.image(phi[v])  # pin f(phi(v)) into the serialized core
            points.append(v)
    points.sort(key=nat_key)
    return {
        "kind": "conjugation",
        "f_ref": f.to_json(),
        "h_ref": "id" if member.kind == "identity" else member.to_json(),
        "g": [[encode(u), encode(w)] for u, w in sorted(
            t.g.items(), key=lambda p: nat_key(p[0])
        )],
        "phi": [[encode(u), encode(w)] for u, w in sorted(
            phi.items(), key=lambda p: nat_key(p[0])
        )],
        "checked_points": [encode(v) for v in points],
    }


def conjugation_certificate(f, fp, phi):
    """Certificate for a direct conjugation phi(f(v)) = fp(phi(v))."""
    points = []
    fwd = dict(phi.pairs())
    for v in fwd:
        if f.image(v) in fwd:
            fp.image(fwd[v])  # pin fp(phi(v)) into the serialized core
            points.append(v)
    points.sort(key=nat_key)
    return {
        "kind": "conjugation",
        "f_ref": fp.to_json(),
        "h_ref": f.to_json(),
        "g": None,
        "phi": [[encode(u), encode(w)] for u, w in phi.pairs()],
        "checked_points": [encode(v) for v in points],
    }


def verify(cert):
    """Re-check a conjugation certificate from its serialized data alone.

    The identity phi(h(g(v))) = f(phi(v)) is evaluated by pure lookups in
    the embedded finite maps; any missing lookup or mismatch rejects."""
    try:
        if cert.get("kind") != "conjugation":
            raise CertificateError("not a conjugation certificate")
        fcore = {decode(u): decode(w) for u, w in cert["f_ref"]["core"]}
        href = cert["h_ref"]
        hcore = None if href == "id" else {
            decode(u): decode(w) for u, w in href["core"]
        }
        g = None if cert.get("g") is None else {
            decode(u): decode(w) for u, w in cert["g"]
        }
        phi = {decode(u): decode(w) for u, w in cert["phi"]}
        points = [decode(p) for p in cert["checked_points"]]
    except CertificateError:
        raise
    except Exception as exc:
        raise CertificateError(f"malformed certificate: {exc}") from exc

    for name, m in (("phi", phi), ("g", g or {}), ("f", fcore), ("h", hcore or {})):
        err = PartialAutomorphism(m).check()
        if err is not None:
            return {"ok": False, "reason": f"{name} is not a partial automorphism: {err!r}"}
    if not points:
        return {"ok": False, "reason": "certificate checks no points"}
    for v in points:
        try:
            gv = v if g is None else g[v]
            hgv = gv if hcore is None else hcore[gv]
            lhs = phi[hgv]
            rhs = fcore[phi[v]]
        except KeyError as exc:
            return {"ok": False, "reason": f"lookup failed at {v!r}: {exc}"}
        if lhs != rhs:
            return {"ok": False, "reason": f"identity fails at {v!r}"}
    return {"ok": True, "checked": len(points)}
