"""Attack operations (channel exhaustion, node isolation), target-selection
strategies, budget-constrained execution, and adversarial-advantage metrics.

Node targets carry an isolation cost equal to the node's total outbound
balance at planning time; cut targets carry the summed capacity of their
channels. Budget-mode execution skips unaffordable targets and only ever
removes complete cuts.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import networkx as nx

from . import payment_sim
from .graph_model import PcnGraph, connected_components, remove_nodes
from .payment_sim import VolumeModel, UNIT_VOLUMES
from .topology_metrics import betweenness_centrality, eigenvector_centrality

STRATEGY_KINDS = ("degree", "betweenness", "eigenvector",
                  "ranked-min-cut", "parallel-paths", "random")


class StalePlanError(Exception):
    """Plan costs no longer match the graph they are executed against."""


@dataclass(frozen=True)
class Strategy:
    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in STRATEGY_KINDS:
            raise ValueError(f"unknown strategy kind {self.kind!r}")
        if self.kind == "ranked-min-cut" and self.params.get("cut_samples", 0) < 1:
            raise ValueError("ranked-min-cut requires cut_samples >= 1")
        if self.kind == "parallel-paths" and self.params.get("payment_samples", 0) < 1:
            raise ValueError("parallel-paths requires payment_samples >= 1")


@dataclass(frozen=True)
class NodeTarget:
    node: str
    isolation_cost: int


@dataclass(frozen=True)
class CutTarget:
    channel_ids: tuple[str, ...]
    cost: int


@dataclass
class AttackPlan:
    targets: list
    strategy: Strategy


@dataclass
class MetricBundle:
    s: float
    r: int
    F_bar: float
    g_bar: float | None = None

    def to_dict(self) -> dict:
        d = {"s": self.s, "r": self.r, "F_bar": self.F_bar}
        if self.g_bar is not None:
            d["g_bar"] = self.g_bar
        return d


@dataclass
class SimReport:
    a_priori: MetricBundle
    a_posteriori: MetricBundle
    delta_s: float
    delta_r: float
    delta_F: float
    delta_g: float | None
    spent: int
    removed: int

    def to_dict(self) -> dict:
        d = {
            "a_priori": self.a_priori.to_dict(),
            "a_posteriori": self.a_posteriori.to_dict(),
            "advantage": {
                "delta_s": self.delta_s,
                "delta_r": self.delta_r,
                "delta_F": self.delta_F,
            },
            "spent": self.spent,
            "removed": self.removed,
        }
        if self.delta_g is not None:
            d["advantage"]["delta_g"] = self.delta_g
        return d


@dataclass(frozen=True)
class MetricParams:
    attempts: int = 1000
    flow_rounds: int = 100
    volumes: VolumeModel = UNIT_VOLUMES
    hub: str | None = None


def advantage(m: float, m_prime: float) -> float:
    """Relative decrease |1 - m'/m| of a metric under attack."""
    if m == 0:
        raise ValueError("advantage is undefined for a zero a-priori metric")
    return abs(1.0 - m_prime / m)


def reachability(g: PcnGraph) -> int:
    """Size of the largest connected component."""
    comps = connected_components(g)
    return len(comps[0]) if comps else 0


def exhaust_channel(g: PcnGraph, channel_id: str, direction: str = "ab") -> PcnGraph:
    """New graph with the given channel direction drained to zero (the
    reverse direction is credited by the drained amount)."""
    if channel_id not in g.edges:
        raise KeyError(f"unknown channel {channel_id}")
    if direction not in ("ab", "ba"):
        raise ValueError("direction must be 'ab' or 'ba'")
    out = g.copy()
    e = out.edges[channel_id]
    src = e.a if direction == "ab" else e.b
    e.shift(src, e.balance(src))
    return out


def exhaust_node_channels(g: PcnGraph, v: str) -> PcnGraph:
    """New graph with every outbound balance of `v` drained (counterparties
    credited); the node and its channels stay in the graph."""
    if v not in g.nodes:
        raise KeyError(f"unknown node {v}")
    out = g.copy()
    for e in out.channels_of(v):
        e.shift(v, e.balance(v))
    return out


def isolation_cost(g: PcnGraph, v: str) -> int:
    """Funds an attacker needs to drain every outbound channel of `v`."""
    return g.outbound_balance(v)


def isolate_node(g: PcnGraph, v: str, mode: str = "routing") -> tuple[PcnGraph, int]:
    """Remove `v` from the routable graph. The reported cost is the sum of
    its outbound balances in both modes; in griefing mode the funds are only
    locked, so budget accounting treats the monetary cost as zero."""
    if v not in g.nodes:
        raise KeyError(f"unknown node {v}")
    if mode not in ("routing", "griefing"):
        raise ValueError("mode must be 'routing' or 'griefing'")
    cost = isolation_cost(g, v)
    return remove_nodes(g, [v]), cost


def _rank_nodes(scores: dict[str, float]) -> list[str]:
    return sorted(scores, key=lambda v: (-scores[v], v))


def plan_targets(g: PcnGraph, strategy: Strategy, limit: int) -> AttackPlan:
    """Ordered target list of length <= limit for the given strategy."""
    if limit < 1:
        raise ValueError("limit must be >= 1")

    if strategy.kind == "degree":
        deg = {v: 0 for v in g.nodes}
        for e in g.edges.values():
            deg[e.a] += 1
            deg[e.b] += 1
        ranked = _rank_nodes(deg)
    elif strategy.kind == "betweenness":
        ranked = _rank_nodes(betweenness_centrality(
            g, normalized=True,
            sample_sources=strategy.params.get("sample_sources"),
            seed=strategy.params.get("seed", 0)))
    elif strategy.kind == "eigenvector":
        scores = {v: 0.0 for v in g.nodes}
        scores.update(eigenvector_centrality(g, weighted=True))
        ranked = _rank_nodes(scores)
    elif strategy.kind == "random":
        ranked = sorted(g.nodes)
        random.Random(strategy.params.get("seed", 0)).shuffle(ranked)
    elif strategy.kind == "parallel-paths":
        ranked = _rank_parallel_paths(g, strategy)
    else:
        cuts = _rank_min_cuts(g, strategy)
        targets = [CutTarget(channel_ids=cut, cost=sum(g.edges[c].capacity for c in cut))
                   for cut in cuts[:limit]]
        return AttackPlan(targets=targets, strategy=strategy)

    targets = [NodeTarget(node=v, isolation_cost=isolation_cost(g, v))
               for v in ranked[:limit]]
    return AttackPlan(targets=targets, strategy=strategy)


def _rank_parallel_paths(g: PcnGraph, strategy: Strategy) -> list[str]:
    """Rank nodes by how often they forward simulated payments, excluding
    paths that touch the adversary's own hub."""
    params = strategy.params
    hub = params.get("hub")
    volumes = params.get("volumes", UNIT_VOLUMES)
    rng = random.Random(params.get("seed", 0))
    specs = payment_sim.sample_specs(g.nodes, params["payment_samples"], volumes, rng)
    counts = {v: 0 for v in g.nodes}
    for outcome in payment_sim.evaluate_payments(g, specs, apply=False):
        if not outcome.success or (hub is not None and hub in outcome.path):
            continue
        for v in outcome.path[1:-1]:
            counts[v] += 1
    if hub is not None:
        counts.pop(hub, None)
    return _rank_nodes(counts)


def _rank_min_cuts(g: PcnGraph, strategy: Strategy) -> list[tuple[str, ...]]:
    """Sample minimum (s, t)-cuts for random terminal pairs and rank the
    distinct cuts by occurrence count."""
    params = strategy.params
    rng = random.Random(params.get("seed", 0))
    sg = g.simple_graph()
    pairs = payment_sim.sample_pairs(g.nodes, params["cut_samples"], rng)

    # channel ids per simple-projection edge, for canonical cut identity
    by_pair: dict[frozenset, list[str]] = {}
    for e in g.edges.values():
        by_pair.setdefault(frozenset((e.a, e.b)), []).append(e.channel_id)

    occurrences: dict[tuple[str, ...], int] = {}
    for s, t in pairs:
        if not nx.has_path(sg, s, t):
            continue
        _, (side_s, side_t) = nx.minimum_cut(sg, s, t, capacity="capacity")
        cut_ids = []
        for u, v in sg.edges():
            if (u in side_s) != (v in side_s):
                cut_ids.extend(by_pair[frozenset((u, v))])
        key = tuple(sorted(cut_ids))
        occurrences[key] = occurrences.get(key, 0) + 1
    return sorted(occurrences, key=lambda c: (-occurrences[c], c))


def _measure(g: PcnGraph, specs, flow_pairs, params: MetricParams,
             seed: int) -> MetricBundle:
    outcomes = payment_sim.evaluate_payments(g, specs, apply=False)
    s = sum(o.success for o in outcomes) / len(specs)
    flows = payment_sim.evaluate_flows(g, flow_pairs)
    f_bar = sum(flows) / len(flow_pairs)
    g_bar = None
    if params.hub is not None and params.hub in g.nodes:
        g_bar = payment_sim.fee_gain(g, params.hub, params.attempts,
                                     params.volumes, seed=seed)
    elif params.hub is not None:
        g_bar = 0.0
    return MetricBundle(s=s, r=reachability(g), F_bar=f_bar, g_bar=g_bar)


def execute_attack(g: PcnGraph, plan: AttackPlan, constraint: tuple,
                   metric_params: MetricParams = MetricParams(),
                   seed: int = 0, griefing: bool = False) -> SimReport:
    """Measure metrics, walk the plan under a ('count', n) or
    ('budget', satoshi) constraint, and re-measure on the surviving graph.

    Both measurements share one sampled payment/flow sequence per seed;
    sequences hitting removed nodes count as failures (s) or zero (F_bar).
    """
    kind, value = constraint
    if kind not in ("count", "budget"):
        raise ValueError("constraint must be ('count', n) or ('budget', satoshi)")

    # staleness check: planned node costs must match this graph
    for target in plan.targets:
        if isinstance(target, NodeTarget):
            if target.node not in g.nodes:
                raise StalePlanError(f"planned node {target.node} not in graph")
            if isolation_cost(g, target.node) != target.isolation_cost:
                raise StalePlanError(
                    f"isolation cost of {target.node} changed since planning")
        else:
            missing = [c for c in target.channel_ids if c not in g.edges]
            if missing:
                raise StalePlanError(f"planned channels missing: {missing}")

    rng = random.Random(seed)
    specs = payment_sim.sample_specs(g.nodes, metric_params.attempts,
                                     metric_params.volumes, rng)
    flow_pairs = payment_sim.sample_pairs(g.nodes, metric_params.flow_rounds, rng)

    before = _measure(g, specs, flow_pairs, metric_params, seed)

    current = g
    spent = 0
    removed = 0
    budget = value if kind == "budget" else None
    for target in plan.targets:
        if kind == "count" and removed >= value:
            break
        cost = 0 if griefing and isinstance(target, NodeTarget) else (
            target.isolation_cost if isinstance(target, NodeTarget) else target.cost)
        if budget is not None and cost > budget - spent:
            continue
        if isinstance(target, NodeTarget):
            if target.node in current.nodes:
                current = remove_nodes(current, [target.node])
        else:
            current = current.copy()
            for cid in target.channel_ids:
                current.edges.pop(cid, None)
        spent += cost
        removed += 1

    after = _measure(current, specs, flow_pairs, metric_params, seed)

    delta_g = None
    if before.g_bar is not None and before.g_bar != 0:
        delta_g = advantage(before.g_bar, after.g_bar)
    return SimReport(
        a_priori=before,
        a_posteriori=after,
        delta_s=advantage(before.s, after.s),
        delta_r=advantage(before.r, after.r),
        delta_F=advantage(before.F_bar, after.F_bar),
        delta_g=delta_g,
        spent=spent,
        removed=removed,
    )
