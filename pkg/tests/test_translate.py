import copy

import pytest

from radograph.bignat import canon, nat_key
from radograph.errors import CertificateError, FiniteOrbitsUnsupported, NotC0Built
from radograph.oracle import (
    CompactFamily,
    build_c0,
    build_fp,
    identity_oracle,
    seeded_oracle,
)
from radograph.translate import (
    conjugate_c0,
    conjugation_certificate,
    translate,
    truss_factor,
    verify,
)

SWAP = {0: 1, 1: 0}


def small_family():
    return CompactFamily([identity_oracle(), seeded_oracle({2: 3})])


def test_translate_zero_steps_is_empty():
    res = translate(small_family(), build_c0(seed=0), 0)
    assert res.triple.g == {}
    assert all(not c.phi for c in res.triple.classes())
    assert res.steps_run == 0


def test_translate_checks_every_step():
    res = translate(small_family(), build_c0(seed=0), 6)
    assert len(res.trace) > 6
    assert all(e["check"]["ok"] for e in res.trace)
    assert res.checks_passed() == len(res.trace)


def test_translate_even_round_schedule():
    res = translate(small_family(), build_c0(seed=0), 8)
    t = res.triple
    # after round 2k+2 the first k+1 naturals are in ran(g) & dom(g)
    for k in range(3):
        rounds = [e for e in res.trace if e["round"] <= 2 * k + 2]
        g_now = {canon(v) for v in t.g if any(
            e["op"] == "extend_range_g" and e["round"] <= 2 * k + 2 for e in rounds
        )}
    for v in (0, 1, 2, 3):
        assert v in t.g and v in t.g_inv


def test_translate_odd_round_schedule():
    res = translate(small_family(), build_c0(seed=0), 7)
    t = res.triple
    reps = t.target.orbit_representatives()
    covered = 0
    for r in reps:
        zoid = t.target.orbit_id(r)
        if all(any(t.target.orbit_id(pv) == zoid for pv in c.phi.values())
               for c in t.classes()):
            covered += 1
        else:
            break
    # rounds 1,3,5,7 each cover one more least-index representative
    assert covered >= 4


def test_translate_conjugation_identity():
    res = translate(small_family(), build_c0(seed=0), 8)
    t = res.triple
    for c in t.classes():
        for v, vbar in t.g.items():
            hv = c.hmap[vbar]
            if v in c.phi and hv in c.phi:
                assert c.phi[hv] == t.target.image(c.phi[v])


def test_g_image_triggers_extra_round():
    res = translate(small_family(), build_c0(seed=0), 2)
    assert 7 not in res.triple.g
    w = res.g_image(7)
    assert res.triple.g[7] == w
    assert res.g_preimage(7) is not None
    assert res.triple.check() == {"ok": True}


def test_translate_to_json_roundtrips_through_plain_data():
    import json

    res = translate(small_family(), build_c0(seed=0), 4)
    blob = json.dumps(res.to_json())
    data = json.loads(blob)
    assert data["steps"] == 4
    assert data["checks_passed"] == len(data["trace"])


# -- conjugate_c0 ----------------------------------------------------------


def test_conjugate_requires_c0():
    with pytest.raises(NotC0Built):
        conjugate_c0(build_fp((1, 1)), build_c0(seed=1), 4)


def test_conjugate_depth_zero():
    phi = conjugate_c0(build_c0(seed=0), build_c0(seed=1), 0)
    assert phi.pairs() == []


def test_conjugate_c0_is_partial_isomorphism():
    f, fp = build_c0(seed=0), build_c0(seed=1)
    f.develop(2)
    fp.develop(2)
    phi = conjugate_c0(f, fp, 12)
    assert phi.check() is None
    fwd = dict(phi.pairs())
    assert len(fwd) >= 12
    hits = 0
    for v, w in fwd.items():
        fv = f.image(v)
        if fv in fwd:
            assert fwd[fv] == fp.image(w)
            hits += 1
    assert hits > 0


def test_conjugate_c0_deterministic():
    a = conjugate_c0(build_c0(seed=3), build_c0(seed=4), 10).pairs()
    b = conjugate_c0(build_c0(seed=3), build_c0(seed=4), 10).pairs()
    assert a == b


def test_conjugation_certificate_verifies():
    f, fp = build_c0(seed=0), build_c0(seed=1)
    phi = conjugate_c0(f, fp, 10)
    cert = conjugation_certificate(f, fp, phi)
    rep = verify(cert)
    assert rep["ok"] and rep["checked"] >= 1


# -- truss factorization ---------------------------------------------------


def test_truss_rejects_finite_orbits():
    with pytest.raises(FiniteOrbitsUnsupported):
        truss_factor(seeded_oracle(SWAP), 4)


def test_truss_factor_produces_verified_certificates():
    res, certs = truss_factor(seeded_oracle({0: 2}), 8)
    assert res.triple.check() == {"ok": True}
    assert len(certs) == 2
    for cert in certs:
        rep = verify(cert)
        assert rep["ok"], rep
        assert rep["checked"] >= 1


def test_truss_factor_identity_member_collapses():
    res, certs = truss_factor(identity_oracle(), 4)
    assert len(certs) == 1
    assert certs[0]["h_ref"] == "id"
    assert verify(certs[0])["ok"]


def test_verify_rejects_mutations():
    _, certs = truss_factor(seeded_oracle({0: 2}), 8)
    cert = certs[-1]
    assert verify(cert)["ok"]

    bad = copy.deepcopy(cert)
    u, w = bad["phi"][0]
    bad["phi"][0] = [u, bad["phi"][1][1]]  # duplicate an image: not injective
    assert verify(bad)["ok"] is False

    bad = copy.deepcopy(cert)
    bad["checked_points"] = []
    assert verify(bad)["ok"] is False

    bad = copy.deepcopy(cert)
    bad["g"] = bad["g"][1:]  # drop a lookup the checked points rely on
    assert verify(bad)["ok"] is False


def test_verify_rejects_malformed():
    with pytest.raises(CertificateError):
        verify({"kind": "nonsense"})
    with pytest.raises(CertificateError):
        verify({"kind": "conjugation", "f_ref": {}, "h_ref": "id",
                "phi": [], "checked_points": []})
