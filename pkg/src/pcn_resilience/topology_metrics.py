"""Graph measures used to classify the network (distances, centrality,
clustering, small-world coefficient) plus reference random graphs.

All metrics here work on the undirected simple projection of the channel
graph: parallel channels are collapsed and their capacities summed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import networkx as nx
import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path as csgraph_shortest_path

from .graph_model import PcnGraph, largest_connected_component


class ConvergenceError(Exception):
    """Iterative computation failed to converge."""

    def __init__(self, msg, iterations):
        super().__init__(msg)
        self.iterations = iterations


@dataclass
class MetricReport:
    node_count: int
    edge_count: int
    diameter: int
    avg_distance: float
    clustering: float
    central_point_dominance: float
    smallworld_S: float | None = None
    gamma: float | None = None
    lambda_: float | None = None

    def to_dict(self) -> dict:
        d = {
            "node_count": self.node_count,
            "edge_count": self.edge_count,
            "diameter": self.diameter,
            "avg_distance": self.avg_distance,
            "clustering": self.clustering,
            "central_point_dominance": self.central_point_dominance,
        }
        if self.smallworld_S is not None:
            d["smallworld_S"] = self.smallworld_S
            d["gamma"] = self.gamma
            d["lambda"] = self.lambda_
        return d

    # Table-style CSV row (node count, edge count, diameter, average
    # distance, central point dominance); column order is frozen.
    CSV_HEADER = "node_count,edge_count,diameter,avg_distance,central_point_dominance"

    def to_csv_row(self) -> str:
        return (
            f"{self.node_count},{self.edge_count},{self.diameter},"
            f"{self.avg_distance:.6g},{self.central_point_dominance:.6g}"
        )


def degree_distribution(g: PcnGraph) -> dict[int, int]:
    """Map degree -> node count. Parallel channels each count."""
    counts: dict[int, int] = {}
    deg = {v: 0 for v in g.nodes}
    for e in g.edges.values():
        deg[e.a] += 1
        deg[e.b] += 1
    for d in deg.values():
        counts[d] = counts.get(d, 0) + 1
    return counts


def betweenness_centrality(g: PcnGraph, normalized: bool = True,
                           sample_sources: int | None = None,
                           seed: int = 0) -> dict[str, float]:
    """Shortest-path betweenness on the simple projection.

    `sample_sources` switches to pivot sampling for large graphs; exact
    (all sources) when None.
    """
    sg = g.simple_graph()
    if sample_sources is not None and sample_sources < sg.number_of_nodes():
        return nx.betweenness_centrality(
            sg, k=sample_sources, normalized=normalized, seed=seed)
    return nx.betweenness_centrality(sg, normalized=normalized)


def eigenvector_centrality(g: PcnGraph, weighted: bool = False,
                           tol: float = 1e-8, max_iter: int = 1000) -> dict[str, float]:
    """Power iteration on the (optionally capacity-weighted) adjacency
    matrix of the largest component; unit Euclidean norm."""
    if not g.nodes:
        raise ValueError("eigenvector centrality of an empty graph")
    lcc = largest_connected_component(g)
    sg = lcc.simple_graph()
    order = sorted(sg.nodes())
    index = {v: i for i, v in enumerate(order)}
    n = len(order)
    adj = np.zeros((n, n))
    for u, v, data in sg.edges(data=True):
        w = float(data["capacity"]) if weighted else 1.0
        adj[index[u], index[v]] = w
        adj[index[v], index[u]] = w

    # diagonal shift breaks the +/- eigenvalue tie on bipartite graphs
    # without changing the eigenvectors
    scale = adj.max()
    if scale > 0:
        adj = adj / scale + np.eye(n)

    x = np.ones(n) / np.sqrt(n)
    for it in range(1, max_iter + 1):
        y = adj @ x
        norm = np.linalg.norm(y)
        if norm == 0:
            return {v: x[i] for v, i in index.items()}
        y /= norm
        if np.max(np.abs(y - x)) < tol:
            return {v: float(y[i]) for v, i in index.items()}
        x = y
    raise ConvergenceError(
        f"power iteration did not converge within {max_iter} iterations", max_iter)


def transitivity(g: PcnGraph) -> float:
    """3 * triangles / length-2 paths on the simple projection; 0 when the
    graph has no length-2 paths."""
    sg = g.simple_graph()
    if sg.number_of_nodes() == 0:
        return 0.0
    return nx.transitivity(sg)


def _distance_matrix(sg: nx.Graph, order: list[str]) -> np.ndarray:
    index = {v: i for i, v in enumerate(order)}
    n = len(order)
    rows, cols = [], []
    for u, v in sg.edges():
        rows += [index[u], index[v]]
        cols += [index[v], index[u]]
    mat = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    return csgraph_shortest_path(mat, method="D", unweighted=True, directed=False)


def distance_stats(g: PcnGraph, sample_pairs="exact", seed: int = 0) -> tuple[int, float]:
    """(diameter, average distance) over the graph, which should be a single
    connected component. The diameter is always exact; the average may be
    estimated over `sample_pairs` uniformly drawn pairs."""
    sg = g.simple_graph()
    n = sg.number_of_nodes()
    if n <= 1:
        return 0, 0.0
    order = sorted(sg.nodes())
    dist = _distance_matrix(sg, order)
    finite = dist[np.isfinite(dist)]
    diameter = int(finite.max())
    if sample_pairs == "exact":
        off_diag = dist[~np.eye(n, dtype=bool)]
        off_diag = off_diag[np.isfinite(off_diag)]
        avg = float(off_diag.mean()) if off_diag.size else 0.0
    else:
        rng = random.Random(seed)
        total, count = 0.0, 0
        for _ in range(int(sample_pairs)):
            i = rng.randrange(n)
            j = rng.randrange(n - 1)
            if j >= i:
                j += 1
            d = dist[i, j]
            if np.isfinite(d):
                total += d
                count += 1
        avg = total / count if count else 0.0
    return diameter, avg


def central_point_dominance(g: PcnGraph, sample_sources: int | None = None,
                            seed: int = 0) -> float:
    """Maximum normalized betweenness over all nodes."""
    bc = betweenness_centrality(g, normalized=True,
                                sample_sources=sample_sources, seed=seed)
    return max(bc.values()) if bc else 0.0


def biconnected_analysis(g: PcnGraph) -> tuple[list[set[str]], set[str]]:
    """(biconnected components, articulation points) of the simple projection."""
    sg = g.simple_graph()
    comps = [set(c) for c in nx.biconnected_components(sg)]
    arts = set(nx.articulation_points(sg))
    return comps, arts


def generate_reference(kind: str, n: int, target_edges: int, seed: int) -> PcnGraph:
    """Reference random graph with unit capacities.

    erdos-renyi: G(n, M) with exactly target_edges edges.
    barabasi-albert: attachment parameter m = round(target_edges / n); the
    resulting edge count is whatever preferential attachment produces.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    if kind == "erdos-renyi":
        if target_edges > n * (n - 1) // 2:
            raise ValueError("target_edges exceeds the complete graph")
        sg = nx.gnm_random_graph(n, target_edges, seed=seed)
    elif kind == "barabasi-albert":
        m = max(1, round(target_edges / n))
        if m >= n:
            raise ValueError("attachment parameter m must be < n")
        sg = nx.barabasi_albert_graph(n, m, seed=seed)
    else:
        raise ValueError(f"unknown reference kind {kind!r}")

    nodes = {f"n{i}" for i in sg.nodes()}
    from .graph_model import ChannelEdge
    edges = {}
    for idx, (u, v) in enumerate(sorted(sg.edges())):
        cid = f"ref{idx}"
        edges[cid] = ChannelEdge(channel_id=cid, a=f"n{u}", b=f"n{v}",
                                 capacity=1, balance_ab=1, balance_ba=1)
    return PcnGraph(nodes=nodes, edges=edges)


def smallworld_coefficient(g: PcnGraph, reference_runs: int = 10, seed: int = 0,
                           sample_pairs="exact"):
    """Small-world coefficient against size-matched ER references.

    Returns (S, gamma, lambda, C_g, C_r, L_g, L_r) where gamma = C_g/C_r and
    lambda = L_g/L_r; C_r and L_r are averaged over `reference_runs` graphs.
    """
    lcc = largest_connected_component(g)
    n = lcc.node_count
    m = len({frozenset((e.a, e.b)) for e in lcc.edges.values()})
    c_g = transitivity(lcc)
    _, l_g = distance_stats(lcc, sample_pairs=sample_pairs, seed=seed)

    c_rs, l_rs = [], []
    for i in range(reference_runs):
        ref = generate_reference("erdos-renyi", n, m, seed=seed + i)
        ref_lcc = largest_connected_component(ref)
        c_rs.append(transitivity(ref))
        _, l_r = distance_stats(ref_lcc, sample_pairs=sample_pairs, seed=seed + i)
        l_rs.append(l_r)
    c_r = sum(c_rs) / len(c_rs)
    l_r = sum(l_rs) / len(l_rs)
    if c_r == 0:
        raise ValueError(
            "reference clustering is zero across all runs; "
            "use a larger graph or more reference runs")
    return smallworld_from_measures(c_g, l_g, c_r, l_r) + (c_g, c_r, l_g, l_r)


def smallworld_from_measures(c_g: float, l_g: float, c_r: float, l_r: float):
    """(S, gamma, lambda) from clustering coefficients and mean path lengths."""
    gamma = c_g / c_r
    lam = l_g / l_r
    return gamma / lam, gamma, lam


def random_failure_experiment(g: PcnGraph, failures: list[int], runs: int = 100,
                              seed: int = 0) -> dict[int, float]:
    """Mean connected-component count after removing k random nodes, for
    each k in `failures`, averaged over `runs` repetitions."""
    if failures and max(failures) >= g.node_count:
        raise ValueError("failure count must be smaller than the node count")
    sg = g.simple_graph()
    nodes = sorted(sg.nodes())
    adj = {v: list(sg.neighbors(v)) for v in nodes}
    rng = random.Random(seed)
    result = {}
    for k in failures:
        total = 0
        for _ in range(runs):
            removed = set(rng.sample(nodes, k))
            total += _count_components(adj, removed)
        result[k] = total / runs
    return result


def _count_components(adj: dict[str, list[str]], removed: set[str]) -> int:
    seen = set(removed)
    count = 0
    for start in adj:
        if start in seen:
            continue
        count += 1
        stack = [start]
        seen.add(start)
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
    return count


def metric_report(g: PcnGraph, smallworld_runs: int = 0, seed: int = 0,
                  sample_pairs="exact",
                  betweenness_sources: int | None = None) -> MetricReport:
    """Bundle the headline measures for one graph (computed on its largest
    connected component for the distance metrics)."""
    lcc = largest_connected_component(g)
    diameter, avg = distance_stats(lcc, sample_pairs=sample_pairs, seed=seed)
    report = MetricReport(
        node_count=g.node_count,
        edge_count=g.edge_count,
        diameter=diameter,
        avg_distance=avg,
        clustering=transitivity(g),
        central_point_dominance=central_point_dominance(
            g, sample_sources=betweenness_sources, seed=seed),
    )
    if smallworld_runs > 0:
        s, gamma, lam, *_ = smallworld_coefficient(
            g, reference_runs=smallworld_runs, seed=seed, sample_pairs=sample_pairs)
        report.smallworld_S = s
        report.gamma = gamma
        report.lambda_ = lam
    return report
