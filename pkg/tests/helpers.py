"""Independent reference routines for the test suite.

Nothing here imports the package's linear algebra: ranks come from a plain
textbook elimination (inverse via Fermat) or from enumerating the row space,
determinants from the Leibniz formula.
"""

from __future__ import annotations

import functools
import itertools

from adtcap.builder import GenParams, random_network


def naive_rank(rows, p):
    m = [[v % p for v in r] for r in rows]
    if not m:
        return 0
    r = 0
    for c in range(len(m[0])):
        pivot = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = pow(m[r][c], p - 2, p)
        m[r] = [v * inv % p for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        r += 1
    return r


def span_rank(rows, p):
    """log_p of the row-space size, by enumerating every combination (tiny inputs only)."""
    if not rows:
        return 0
    span = set()
    for coeffs in itertools.product(range(p), repeat=len(rows)):
        span.add(tuple(sum(c * r[j] for c, r in zip(coeffs, rows)) % p for j in range(len(rows[0]))))
    n, size = 0, 1
    while size < len(span):
        size *= p
        n += 1
    return n


def det_leibniz(m, p):
    n = len(m)
    total = 0
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        prod = 1
        for i in range(n):
            prod = prod * m[i][perm[i]] % p
            if not prod:
                break
        total += -prod if inv % 2 else prod
    return total % p


def kuhn_matching(support, n):
    """Perfect matching rows->cols in a 0/1 support pattern, or None."""
    match_col = [-1] * n

    def try_row(r, seen):
        for c in range(n):
            if support[r][c] and not seen[c]:
                seen[c] = True
                if match_col[c] == -1 or try_row(match_col[c], seen):
                    match_col[c] = r
                    return True
        return False

    for r in range(n):
        if not try_row(r, [False] * n):
            return None
    return {match_col[c]: c for c in range(n)}


def random_full_rank(rng, k, p, density=0.6):
    """Random k x k matrix over F_p with nonzero determinant."""
    while True:
        m = [[rng.randrange(1, p) if rng.random() < density else 0 for _ in range(k)] for _ in range(k)]
        if naive_rank(m, p) == k:
            return m


def random_layer(rng, k, p, density=0.6):
    """A synthetic full-rank used layer plus one unused input.

    Inputs 0..k-1 and outputs 0..k-1 are used; input k is unused.  Returns
    (rows, adj, mate_x, mate_y, used_y): the dense (k+1) x k transfer matrix
    and the same data as adjacency dicts plus a perfect matching on the used part.
    """
    m = random_full_rank(rng, k, p, density)
    extra = [rng.randrange(1, p) if rng.random() < density else 0 for _ in range(k)]
    rows = m + [extra]
    adj = [{y: v for y, v in enumerate(r) if v} for r in rows]
    match = kuhn_matching(m, k)
    assert match is not None
    mate_x = dict(match)
    mate_y = {y: x for x, y in mate_x.items()}
    return rows, adj, mate_x, mate_y, set(range(k))


def acceptance_params(seed: int) -> GenParams:
    return GenParams(
        layers=3 + seed % 3,
        max_nodes_per_layer=4,
        max_levels_per_node=3,
        edge_density=0.5,
        p=(2, 3, 5)[(seed // 3) % 3],
        seed=seed,
    )


@functools.lru_cache(maxsize=None)
def corpus(n: int = 500):
    return tuple(random_network(acceptance_params(s)) for s in range(n))


def matching_rank_ok(solver, p):
    """Independent check of every cut: consistent perfect matching over real edges, full rank."""
    idx = solver.idx
    for l, ux in enumerate(solver.used_x):
        ux = sorted(ux)
        uy = sorted(solver.used_y[l])
        if sorted(solver.mate_x[x] for x in ux) != uy:
            return False
        if any(solver.mate_x[x] not in idx.out_adj[x] for x in ux):
            return False
        rows = [[idx.out_adj[x].get(y, 0) for y in uy] for x in ux]
        if naive_rank(rows, p) != len(ux):
            return False
    return True

