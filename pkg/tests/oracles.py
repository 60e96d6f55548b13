"""Independent brute-force implementations used to cross-check the library.

These deliberately avoid networkx and the library's own algorithms: path
enumeration by DFS, union-find for components, a from-scratch augmenting
path max-flow. Only usable on small graphs.
"""

from itertools import combinations


def all_paths(adj, s, t, path=None, seen=None):
    """Every simple path s..t as node lists (DFS enumeration)."""
    path = (path or [s])
    seen = seen or {s}
    if s == t:
        yield list(path)
        return
    for w in adj.get(s, ()):
        if w not in seen:
            yield from all_paths(adj, w, t, path + [w], seen | {w})


def brute_betweenness(nodes, adj, normalized=True):
    """Betweenness by exhaustive enumeration of all simple paths."""
    nodes = sorted(nodes)
    score = {v: 0.0 for v in nodes}
    for s, t in combinations(nodes, 2):
        paths = list(all_paths(adj, s, t))
        if not paths:
            continue
        shortest = min(len(p) for p in paths)
        sps = [p for p in paths if len(p) == shortest]
        for v in nodes:
            if v in (s, t):
                continue
            through = sum(1 for p in sps if v in p)
            score[v] += through / len(sps)
    if normalized:
        n = len(nodes)
        if n > 2:
            scale = (n - 1) * (n - 2) / 2
            score = {v: c / scale for v, c in score.items()}
    return score


def brute_transitivity(nodes, adj):
    """3 * triangles / length-2 paths via triple loops."""
    nodes = sorted(nodes)
    triangles = 0
    for a, b, c in combinations(nodes, 3):
        if b in adj.get(a, ()) and c in adj.get(a, ()) and c in adj.get(b, ()):
            triangles += 1
    paths2 = 0
    for v in nodes:
        d = len(adj.get(v, ()))
        paths2 += d * (d - 1) // 2
    if paths2 == 0:
        return 0.0
    return 3 * triangles / paths2


class UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def union_find_components(nodes, edges):
    """List of component node-sets via union-find."""
    uf = UnionFind(nodes)
    for a, b in edges:
        uf.union(a, b)
    comps = {}
    for v in nodes:
        comps.setdefault(uf.find(v), set()).add(v)
    return list(comps.values())


def augmenting_path_max_flow(capacities, s, t):
    """Edmonds-Karp on a dict {(u, v): capacity}."""
    residual = dict(capacities)
    for (u, v) in list(capacities):
        residual.setdefault((v, u), 0)
    flow = 0
    while True:
        # BFS for an augmenting path
        parent = {s: None}
        queue = [s]
        while queue and t not in parent:
            u = queue.pop(0)
            for (x, y), cap in residual.items():
                if x == u and cap > 0 and y not in parent:
                    parent[y] = u
                    queue.append(y)
        if t not in parent:
            return flow
        # bottleneck along the path
        path = []
        v = t
        while parent[v] is not None:
            path.append((parent[v], v))
            v = parent[v]
        push = min(residual[e] for e in path)
        for (u, v) in path:
            residual[(u, v)] -= push
            residual[(v, u)] += push
        flow += push
