"""Multicast network model: DAG multigraphs, max-flow, and generators.

A `Network` is a finite directed acyclic multigraph with a unique source,
a receiver set, and a declared source dimension `omega`.  Edge ids are
topological (source edges first), so kernel propagation can run in id
order.  Max flow is edge-disjoint path count under unit capacities; flows
to an edge set attach a super-sink behind the designated edges.

Generators cover the five-layer family (parameterized by omega and the
layer-3 out-degree tuple), its all-twos instance (the Swirl network),
combination networks, and the hub composition that splices a combination
subnetwork next to an existing network behind a shared relay.

For every generated family `omega == |Out(source)|` except combination
networks, whose source fans out to all middle nodes while the source
dimension stays 2; codes there assign explicit kernels to the source rows
(see `lnc.codes`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .errors import BudgetExceeded, DEFAULT_BUDGETS, InputError


@dataclass(frozen=True)
class Edge:
    id: int
    tail: str
    head: str


@dataclass(frozen=True)
class Network:
    """Directed acyclic multigraph with unique source and receiver set."""

    nodes: tuple[str, ...]
    edges: tuple[Edge, ...]
    source: str
    receivers: tuple[str, ...]
    omega: int
    family: str | None = None
    params: dict = field(default_factory=dict, compare=False)

    # -- adjacency helpers ------------------------------------------------

    def in_edges(self, node: str) -> list[Edge]:
        return [e for e in self.edges if e.head == node]

    def out_edges(self, node: str) -> list[Edge]:
        return [e for e in self.edges if e.tail == node]

    def edge(self, eid: int) -> Edge:
        e = self.edges[eid]
        if e.id != eid:
            raise InputError(f"edge ids not contiguous at {eid}")
        return e

    def source_edges(self) -> list[Edge]:
        return self.out_edges(self.source)

    def validate(self) -> None:
        """Check the multicast model invariants; raises InputError on failure."""
        if len(set(self.nodes)) != len(self.nodes):
            raise InputError("duplicate node ids")
        if [e.id for e in self.edges] != list(range(len(self.edges))):
            raise InputError("edge ids must be 0..m-1 in order")
        node_set = set(self.nodes)
        for e in self.edges:
            if e.tail not in node_set or e.head not in node_set:
                raise InputError(f"edge {e.id} references unknown node")
        if self.in_edges(self.source):
            raise InputError("source must have no incoming edges")
        order = {n: i for i, n in enumerate(self._topo_order())}
        for e in self.edges:
            if order[e.tail] >= order[e.head]:
                raise InputError("graph has a cycle")
        # edge ids respect topology: tails never come after heads in id order
        for d in self.edges:
            for e in self.edges:
                if d.head == e.tail and d.id >= e.id:
                    raise InputError(f"edge ids {d.id},{e.id} out of topological order")
        for r in self.receivers:
            if maxflow_to_edges(self, [e.id for e in self.in_edges(r)]) != self.omega:
                raise InputError(f"receiver {r} has max flow != {self.omega}")

    def _topo_order(self) -> list[str]:
        indeg = {n: 0 for n in self.nodes}
        for e in self.edges:
            indeg[e.head] += 1
        stack = [n for n in self.nodes if indeg[n] == 0]
        out = []
        while stack:
            n = stack.pop()
            out.append(n)
            for e in self.out_edges(n):
                indeg[e.head] -= 1
                if indeg[e.head] == 0:
                    stack.append(e.head)
        if len(out) != len(self.nodes):
            raise InputError("graph has a cycle")
        return out

    # -- serialization ----------------------------------------------------

    def to_json_dict(self) -> dict:
        d = {
            "nodes": list(self.nodes),
            "edges": [{"id": e.id, "tail": e.tail, "head": e.head} for e in self.edges],
            "source": self.source,
            "receivers": list(self.receivers),
            "omega": self.omega,
        }
        if self.family:
            d["family"] = self.family
            d["params"] = dict(self.params)
        return d

    @staticmethod
    def from_json_dict(d: dict) -> "Network":
        edges = tuple(Edge(int(e["id"]), e["tail"], e["head"]) for e in d["edges"])
        return Network(
            nodes=tuple(d["nodes"]),
            edges=edges,
            source=d["source"],
            receivers=tuple(d["receivers"]),
            omega=int(d["omega"]),
            family=d.get("family"),
            params=d.get("params", {}),
        )


def maxflow_to_edges(net: Network, edge_ids) -> int:
    """Maximum number of edge-disjoint source paths ending at edges in the set.

    Each designated edge is subdivided and its midpoint wired to a
    super-sink, so a path may either terminate at a designated edge or
    continue through it, and each designated edge absorbs at most one path.
    """
    ids = list(edge_ids)
    if not ids:
        raise InputError("edge set must be nonempty")
    known = {e.id for e in net.edges}
    for eid in ids:
        if eid not in known:
            raise InputError(f"unknown edge id {eid}")
    designated = set(ids)

    # Build unit-capacity arc list: nodes are strings, plus midpoints and sink.
    arcs: list[list] = []  # [tail, head, cap]
    adj: dict[object, list[int]] = {}

    def add_arc(u, v, cap):
        adj.setdefault(u, []).append(len(arcs))
        arcs.append([u, v, cap])
        adj.setdefault(v, []).append(len(arcs))
        arcs.append([v, u, 0])

    sink = ("sink",)
    for e in net.edges:
        if e.id in designated:
            mid = ("mid", e.id)
            add_arc(e.tail, mid, 1)
            add_arc(mid, e.head, 1)
            add_arc(mid, sink, 1)
        else:
            add_arc(e.tail, e.head, 1)

    # Dinic
    source = net.source
    flow = 0
    while True:
        level = {source: 0}
        queue = [source]
        for u in queue:
            for ai in adj.get(u, []):
                t, h, cap = arcs[ai]
                if cap > 0 and h not in level:
                    level[h] = level[u] + 1
                    queue.append(h)
        if sink not in level:
            return flow
        it = {u: 0 for u in adj}

        def dfs(u, pushed):
            if u == sink:
                return pushed
            while it[u] < len(adj[u]):
                ai = adj[u][it[u]]
                t, h, cap = arcs[ai]
                if cap > 0 and level.get(h, -1) == level[u] + 1:
                    d = dfs(h, min(pushed, cap))
                    if d > 0:
                        arcs[ai][2] -= d
                        arcs[ai ^ 1][2] += d
                        return d
                it[u] += 1
            return 0

        while True:
            pushed = dfs(source, 1 << 30)
            if pushed == 0:
                break
            flow += pushed


def gen_n_omega_d(omega: int, d: tuple[int, ...], budgets=DEFAULT_BUDGETS) -> Network:
    """The five-layer family: source, omega relay nodes, omega layer-3 nodes
    (node j fed by relays j and j+1 cyclically), d_j leaf nodes under layer-3
    node j, and one receiver for every omega-subset of leaves with full flow.
    """
    if omega < 3:
        raise InputError("family requires omega >= 3")
    if len(d) != omega or any(dj <= 1 for dj in d):
        raise InputError("degree tuple must have omega entries, all > 1")
    n_grey = sum(d)
    n_subsets = 1
    for i in range(omega):
        n_subsets = n_subsets * (n_grey - i) // (i + 1)
    if n_subsets > budgets.receiver_subsets:
        raise BudgetExceeded("receiver enumeration", n_subsets, budgets.receiver_subsets)

    nodes = ["s"]
    edges: list[Edge] = []
    eid = 0
    for j in range(1, omega + 1):
        nodes.append(f"u{j}")
        edges.append(Edge(eid, "s", f"u{j}"))
        eid += 1
    for j in range(1, omega + 1):
        nodes.append(f"v{j}")
    for j in range(1, omega + 1):
        jn = j + 1 if j < omega else 1
        edges.append(Edge(eid, f"u{j}", f"v{j}"))
        eid += 1
        edges.append(Edge(eid, f"u{jn}", f"v{j}"))
        eid += 1
    grey = []
    grey_edge: dict[str, int] = {}
    for j in range(1, omega + 1):
        for k in range(1, d[j - 1] + 1):
            g = f"g{j}_{k}"
            nodes.append(g)
            grey.append(g)
            edges.append(Edge(eid, f"v{j}", g))
            grey_edge[g] = eid
            eid += 1

    partial = Network(tuple(nodes), tuple(edges), "s", (), omega,
                      family="n_omega_d", params={"omega": omega, "d": list(d)})
    receivers = []
    recv_edges = []
    for subset in combinations(grey, omega):
        if maxflow_to_edges(partial, [grey_edge[g] for g in subset]) == omega:
            receivers.append(subset)
    for idx, subset in enumerate(receivers):
        t = f"t{idx}"
        nodes.append(t)
        for g in subset:
            edges.append(Edge(eid, g, t))
            eid += 1
        recv_edges.append(t)
    return Network(tuple(nodes), tuple(edges), "s", tuple(recv_edges), omega,
                   family="n_omega_d", params={"omega": omega, "d": list(d)})


def gen_swirl(omega: int, budgets=DEFAULT_BUDGETS) -> Network:
    """The all-twos instance of the five-layer family."""
    net = gen_n_omega_d(omega, (2,) * omega, budgets)
    return Network(net.nodes, net.edges, net.source, net.receivers, net.omega,
                   family="swirl", params={"omega": omega, "d": [2] * omega})


def gen_combination(n_plus_1: int, choose: int = 2) -> Network:
    """Combination network: source fans out to n+1 middle nodes, one receiver
    per pair of middle nodes, source dimension 2."""
    if choose != 2:
        raise InputError("only pair-receiver combination networks are supported")
    if n_plus_1 < 3:
        raise InputError("need at least 3 middle nodes (n >= 2)")
    nodes = ["s"]
    edges: list[Edge] = []
    eid = 0
    mids = []
    for i in range(1, n_plus_1 + 1):
        m = f"m{i}"
        nodes.append(m)
        mids.append(m)
        edges.append(Edge(eid, "s", m))
        eid += 1
    receivers = []
    for idx, (a, b) in enumerate(combinations(mids, 2)):
        t = f"t{idx}"
        nodes.append(t)
        edges.append(Edge(eid, a, t))
        eid += 1
        edges.append(Edge(eid, b, t))
        eid += 1
        receivers.append(t)
    return Network(tuple(nodes), tuple(edges), "s", tuple(receivers), 2,
                   family="combination", params={"n_plus_1": n_plus_1, "n": n_plus_1 - 1})


def compose_with_combination(n1: Network, n: int, budgets=DEFAULT_BUDGETS) -> Network:
    """Hub composition: a fresh super-source feeds a relay hub, which feeds
    the original network, a combination subnetwork on n+1 middle nodes, and
    omega-2 direct lines to every combination receiver.

    The result has the source dimension of `n1`; every original receiver of
    either subnetwork is a receiver of the composite.
    """
    omega = n1.omega
    if omega < 2:
        raise InputError("composition needs source dimension >= 2")
    n2 = gen_combination(n + 1)

    nodes = ["S", "hub"]
    edges: list[Edge] = []
    eid = 0
    for _ in range(omega):
        edges.append(Edge(eid, "S", "hub"))
        eid += 1

    def sub(name: str, prefix: str) -> str:
        return f"{prefix}.{name}"

    # hub feeds both original sources
    nodes.extend(sub(v, "a") for v in n1.nodes)
    nodes.extend(sub(v, "b") for v in n2.nodes)
    for _ in range(omega):
        edges.append(Edge(eid, "hub", sub(n1.source, "a")))
        eid += 1
    for _ in range(2):
        edges.append(Edge(eid, "hub", sub(n2.source, "b")))
        eid += 1
    for e in n1.edges:
        edges.append(Edge(eid, sub(e.tail, "a"), sub(e.head, "a")))
        eid += 1
    for e in n2.edges:
        edges.append(Edge(eid, sub(e.tail, "b"), sub(e.head, "b")))
        eid += 1
    for t in n2.receivers:
        for _ in range(omega - 2):
            edges.append(Edge(eid, "hub", sub(t, "b")))
            eid += 1
    receivers = tuple(sub(t, "a") for t in n1.receivers) + tuple(sub(t, "b") for t in n2.receivers)
    return Network(tuple(nodes), tuple(edges), "S", receivers, omega,
                   family="composite",
                   params={"inner_family": n1.family, "inner_params": dict(n1.params), "n": n})
