"""The countable random graph in its bit-membership presentation.

Vertices are naturals; u and v (u < v) are adjacent exactly when bit u of v
is set. ``realize`` returns the least fresh vertex with a prescribed
adjacency pattern towards finitely many existing vertices.
"""

from __future__ import annotations

from . import bignat
from .bignat import canon, nat_cmp, nat_key, succ, vmax


def adjacent(u, v):
    """Edge relation: bit min(u,v) of max(u,v). Irreflexive and symmetric."""
    u = canon(u)
    v = canon(v)
    c = nat_cmp(u, v)
    if c == 0:
        return False
    lo, hi = (u, v) if c < 0 else (v, u)
    return bignat.bit_test(hi, lo)


def realize(tau, forbidden=(), lower_bound=0):
    """Least vertex v with v > max(dom(tau) + {lower_bound}), v not forbidden,
    and adjacent(v, w) == tau[w] for every w in dom(tau)."""
    constraints = {canon(w): (1 if b else 0) for w, b in tau.items()}
    bad = {canon(f) for f in forbidden}
    limit = vmax(list(constraints) + [canon(lower_bound)])
    n = succ(limit)
    while True:
        v = bignat.min_with_bits_geq(n, constraints)
        if v not in bad:
            return v
        n = succ(v)


def induced_subgraph(vertices):
    """Adjacency map restricted to the given finite vertex set."""
    vs = sorted({canon(v) for v in vertices}, key=nat_key)
    return {v: [w for w in vs if adjacent(v, w)] for v in vs}


def to_dot(vertices, name="radograph"):
    """GraphViz DOT text for the subgraph induced on the given vertices."""
    vs = sorted({canon(v) for v in vertices}, key=nat_key)
    labels = {v: _label(v) for v in vs}
    lines = [f"graph {name} {{"]
    for v in vs:
        lines.append(f'  "{labels[v]}";')
    for i, v in enumerate(vs):
        for w in vs[i + 1:]:
            if adjacent(v, w):
                lines.append(f'  "{labels[v]}" -- "{labels[w]}";')
    lines.append("}")
    return "\n".join(lines)


def _label(v):
    if isinstance(v, int):
        return str(v) if v.bit_length() <= 64 else f"int#{v.bit_length()}b"
    return f"big#{hash(v) & 0xFFFFFFFF:08x}"
