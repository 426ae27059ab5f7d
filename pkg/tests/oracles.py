"""Brute-force reference implementations, written independently of the package routes.

Each oracle works from first principles on tiny instances: explicit
recursion over self-avoiding paths, plain-Python Floyd-Warshall, direct
enumeration of monotone paths.  None of them calls the package's path
search, graph builders or exact solvers.
"""
from __future__ import annotations

import itertools
import math


def nbrs(v):
    for i in range(len(v)):
        for s in (-1, 1):
            w = list(v)
            w[i] += s
            yield tuple(w)


def ekey(u, v):
    """(low-coordinate endpoint, 1-based axis) for a nearest-neighbour pair."""
    i = next(k for k in range(len(u)) if u[k] != v[k])
    lo = u if u[i] < v[i] else v
    return (tuple(lo), i + 1)


def in_window(v, lo, hi):
    return all(a <= c <= b for c, a, b in zip(v, lo, hi))


def all_saws(lo, hi, x, y):
    """Every self-avoiding lattice path from x to y inside [lo, hi], by recursion."""
    out = []

    def rec(v, path, seen):
        if v == y:
            out.append(tuple(path))
            return
        for w in nbrs(v):
            if w not in seen and in_window(w, lo, hi):
                seen.add(w)
                path.append(w)
                rec(w, path, seen)
                path.pop()
                seen.discard(w)

    rec(tuple(x), [tuple(x)], {tuple(x)})
    return out


def path_cost(path, wfun):
    # reverse-order Kahan summation, independent of the package's fsum
    s, c = 0.0, 0.0
    for u, v in reversed(list(zip(path, path[1:]))):
        yv = wfun(ekey(u, v)) - c
        t = s + yv
        c = (t - s) - yv
        s = t
    return s


def saw_minimum(lo, hi, x, y, wfun, rel_tol=1e-9):
    """(minimal passage time, set of minimizing vertex sequences) over all SAWs in the window."""
    paths = all_saws(lo, hi, x, y)
    costs = [path_cost(p, wfun) for p in paths]
    best = min(costs)
    tol = rel_tol * max(best, 1.0)
    return best, {p for p, c in zip(paths, costs) if c <= best + tol}


def floyd_max(vertices, edges, wfun):
    """Largest finite shortest-path distance in the graph (vertices, edges)."""
    idx = {v: i for i, v in enumerate(vertices)}
    n = len(vertices)
    D = [[math.inf] * n for _ in range(n)]
    for i in range(n):
        D[i][i] = 0.0
    for e in edges:
        (b, a) = e
        u = tuple(b)
        v = list(b)
        v[a - 1] += 1
        v = tuple(v)
        i, j = idx[u], idx[v]
        w = wfun(e)
        D[i][j] = min(D[i][j], w)
        D[j][i] = min(D[j][i], w)
    for k in range(n):
        Dk = D[k]
        for i in range(n):
            dik = D[i][k]
            if dik == math.inf:
                continue
            Di = D[i]
            for j in range(n):
                if dik + Dk[j] < Di[j]:
                    Di[j] = dik + Dk[j]
    return max(d for row in D for d in row if d < math.inf)


def oriented_min(n, wfun):
    """Min over all C(2n, n) up-right paths from (0,0) to (n,n)."""
    best = math.inf
    for ups in itertools.combinations(range(2 * n), n):
        up = set(ups)
        v = (0, 0)
        tot = 0.0
        for s in range(2 * n):
            a = 2 if s in up else 1
            tot += wfun((v, a))
            v = (v[0] + (a == 1), v[1] + (a == 2))
        best = min(best, tot)
    return best


def animal_max(n, d, xfun):
    """Unpruned maximum of summed edge values over self-avoiding n-step walks from the origin."""
    best = -1

    def rec(v, k, acc, seen):
        nonlocal best
        if k == n:
            best = max(best, acc)
            return
        for w in nbrs(v):
            if w not in seen:
                seen.add(w)
                rec(w, k + 1, acc + xfun(ekey(v, w)), seen)
                seen.discard(w)

    o = (0,) * d
    rec(o, 0, 0, {o})
    return best


def bfs_hops(open_edges, u, v, allowed=None):
    """Fewest open edges from u to v; allowed(e) filters usable edges."""
    from collections import deque
    if u == v:
        return 0
    adj = {}
    for e in open_edges:
        if allowed is not None and not allowed(e):
            continue
        b, a = e
        w = list(b)
        w[a - 1] += 1
        w = tuple(w)
        adj.setdefault(tuple(b), []).append(w)
        adj.setdefault(w, []).append(tuple(b))
    seen = {u: 0}
    q = deque([u])
    while q:
        x = q.popleft()
        for y in adj.get(x, []):
            if y not in seen:
                seen[y] = seen[x] + 1
                if y == v:
                    return seen[y]
                q.append(y)
    return math.inf
