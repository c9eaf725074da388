"""Labeled DAG/CPDAG types and the structural queries built on them.

Nodes are positional indices 0..d-1 internally; labels are only attached
for I/O. All functions here are pure and operate on immutable graphs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from collections import deque


class GraphError(ValueError):
    """Invalid graph construction or query."""


class ExtensionCapExceeded(RuntimeError):
    """Equivalence class larger than the requested enumeration cap."""

    def __init__(self, cap):
        self.cap = cap
        super().__init__(
            f"equivalence class has more than {cap} consistent extensions; "
            "raise the cap or skip this graph"
        )


def _default_labels(d):
    return tuple(f"X{i + 1}" for i in range(d))


def _check_nodes(d, nodes):
    for v in nodes:
        if not (0 <= v < d):
            raise GraphError(f"node index {v} out of range for d={d}")


def is_acyclic(edges, d):
    """True iff the directed edges over nodes 0..d-1 admit a topological order."""
    _check_nodes(d, (v for e in edges for v in e))
    indeg = [0] * d
    children = [[] for _ in range(d)]
    for i, j in edges:
        children[i].append(j)
        indeg[j] += 1
    queue = deque(v for v in range(d) if indeg[v] == 0)
    seen = 0
    while queue:
        v = queue.popleft()
        seen += 1
        for c in children[v]:
            indeg[c] -= 1
            if indeg[c] == 0:
                queue.append(c)
    return seen == d


@dataclass(frozen=True)
class Dag:
    """Directed acyclic graph over d labeled nodes."""

    d: int
    edges: frozenset = field(default_factory=frozenset)
    labels: tuple = None

    def __post_init__(self):
        if self.d < 1:
            raise GraphError("d must be positive")
        edges = frozenset((int(i), int(j)) for i, j in self.edges)
        object.__setattr__(self, "edges", edges)
        labels = self.labels if self.labels is not None else _default_labels(self.d)
        labels = tuple(labels)
        if len(labels) != self.d or len(set(labels)) != self.d:
            raise GraphError("labels must be d distinct strings")
        object.__setattr__(self, "labels", labels)
        for i, j in edges:
            if i == j:
                raise GraphError(f"self-loop at node {i}")
        _check_nodes(self.d, (v for e in edges for v in e))
        seen_pairs = set()
        for i, j in edges:
            pair = (min(i, j), max(i, j))
            if pair in seen_pairs:
                raise GraphError(f"both orientations present for pair {pair}")
            seen_pairs.add(pair)
        if not is_acyclic(edges, self.d):
            raise GraphError("edge set contains a directed cycle")

    @property
    def m(self):
        return len(self.edges)

    def parents(self, v):
        return frozenset(i for i, j in self.edges if j == v)

    def children(self, v):
        return frozenset(j for i, j in self.edges if i == v)

    def descendants(self, v):
        """All nodes reachable from v by a directed path (excluding v)."""
        out = set()
        stack = [v]
        while stack:
            u = stack.pop()
            for c in self.children(u):
                if c not in out:
                    out.add(c)
                    stack.append(c)
        out.discard(v)
        return frozenset(out)

    def topological_order(self):
        indeg = {v: 0 for v in range(self.d)}
        for _, j in self.edges:
            indeg[j] += 1
        queue = deque(sorted(v for v in range(self.d) if indeg[v] == 0))
        order = []
        while queue:
            v = queue.popleft()
            order.append(v)
            for c in sorted(self.children(v)):
                indeg[c] -= 1
                if indeg[c] == 0:
                    queue.append(c)
        return order


@dataclass(frozen=True)
class Cpdag:
    """Partially directed graph: directed plus undirected edges, no mixed pairs.

    Ingested external outputs may be improper (not a valid equivalence-class
    representative); validity is only enforced where extensions are needed.
    """

    d: int
    directed: frozenset = field(default_factory=frozenset)
    undirected: frozenset = field(default_factory=frozenset)
    labels: tuple = None

    def __post_init__(self):
        if self.d < 1:
            raise GraphError("d must be positive")
        directed = frozenset((int(i), int(j)) for i, j in self.directed)
        undirected = frozenset(
            (min(int(i), int(j)), max(int(i), int(j))) for i, j in self.undirected
        )
        object.__setattr__(self, "directed", directed)
        object.__setattr__(self, "undirected", undirected)
        labels = self.labels if self.labels is not None else _default_labels(self.d)
        labels = tuple(labels)
        if len(labels) != self.d or len(set(labels)) != self.d:
            raise GraphError("labels must be d distinct strings")
        object.__setattr__(self, "labels", labels)
        _check_nodes(self.d, (v for e in directed | undirected for v in e))
        pairs = set()
        for i, j in itertools.chain(directed, undirected):
            if i == j:
                raise GraphError(f"self-loop at node {i}")
        for i, j in directed:
            pairs.add((min(i, j), max(i, j)))
        if len(pairs) != len(directed):
            raise GraphError("both orientations present for some pair")
        if pairs & undirected:
            raise GraphError("pair appears both directed and undirected")

    @property
    def m(self):
        return len(self.directed) + len(self.undirected)

    def directed_parents(self, v):
        return frozenset(i for i, j in self.directed if j == v)


@dataclass(frozen=True, order=True)
class VStructure:
    """Collider a -> b <- c with a, c non-adjacent; (a, c) in canonical order."""

    a: int
    c: int
    b: int

    def __post_init__(self):
        if self.a > self.c:
            raise GraphError("v-structure parents must be in canonical order")


def skeleton(g):
    """Unordered adjacent pairs of a Dag or Cpdag."""
    if isinstance(g, Dag):
        return frozenset((min(i, j), max(i, j)) for i, j in g.edges)
    return frozenset((min(i, j), max(i, j)) for i, j in g.directed) | g.undirected


def _adjacent(skel, i, j):
    return (min(i, j), max(i, j)) in skel


def v_structures(g):
    """All v-structures of a Dag or Cpdag (only fully directed colliders count)."""
    directed = g.edges if isinstance(g, Dag) else g.directed
    skel = skeleton(g)
    by_child = {}
    for i, j in directed:
        by_child.setdefault(j, []).append(i)
    out = set()
    for b, pars in by_child.items():
        for a, c in itertools.combinations(sorted(pars), 2):
            if not _adjacent(skel, a, c):
                out.add(VStructure(a, c, b))
    return frozenset(out)


def d_separated(g, i, j, z):
    """True iff every path between i and j is blocked by z (standard d-separation).

    Reachability search over (node, arrival-direction) states, Bayes-ball style.
    """
    if not isinstance(g, Dag):
        raise GraphError("d-separation is defined on DAGs")
    z = frozenset(z)
    _check_nodes(g.d, [i, j])
    _check_nodes(g.d, z)
    if i == j:
        raise GraphError("i and j must differ")
    if i in z or j in z:
        raise GraphError("endpoints may not be in the conditioning set")

    # Nodes with a descendant (or themselves) in z: colliders open iff in this set.
    anc_of_z = set(z)
    changed = True
    while changed:
        changed = False
        for a, b in g.edges:
            if b in anc_of_z and a not in anc_of_z:
                anc_of_z.add(a)
                changed = True

    # States: (node, "up") entered via an edge out of the node (from a child),
    # (node, "down") entered via an edge into the node (from a parent).
    start = [(i, "up")]
    visited = set(start)
    queue = deque(start)
    while queue:
        v, direction = queue.popleft()
        if v == j and v != i:
            return False
        if direction == "up":
            if v in z:
                continue
            moves = [(p, "up") for p in g.parents(v)]
            moves += [(c, "down") for c in g.children(v)]
        else:
            moves = []
            if v not in z:
                moves += [(c, "down") for c in g.children(v)]
            if v in anc_of_z:
                moves += [(p, "up") for p in g.parents(v)]
        for state in moves:
            if state not in visited:
                visited.add(state)
                queue.append(state)
    return True


def _meek_close(d, skel, directed):
    """Close a set of directed orientations under the four Meek rules.

    `directed` maps nothing; it is a set of (i, j) orientations over pairs in
    `skel`. Returns the closed set. Undirected pairs are those in skel with
    neither orientation present.
    """
    directed = set(directed)

    def oriented(i, j):
        return (i, j) in directed

    def und(i, j):
        return _adjacent(skel, i, j) and not oriented(i, j) and not oriented(j, i)

    half_edges = [(a, b) for (a, b) in skel] + [(b, a) for (a, b) in skel]
    changed = True
    while changed:
        changed = False
        for x, y in half_edges:
            if not und(x, y):
                continue
            orient = False
            # R1: z -> x - y with z, y non-adjacent  =>  x -> y
            # (y -> x would create a new v-structure at x)
            for z in range(d):
                if oriented(z, x) and z != y and not _adjacent(skel, z, y):
                    orient = True
                    break
            # R2: x -> z -> y with x - y  =>  x -> y  (y -> x would be a cycle)
            if not orient:
                for z in range(d):
                    if oriented(x, z) and oriented(z, y):
                        orient = True
                        break
            # R3: x - z1 -> y, x - z2 -> y, z1, z2 non-adjacent  =>  x -> y
            if not orient:
                pointing = [z for z in range(d) if oriented(z, y) and und(x, z)]
                for z1, z2 in itertools.combinations(pointing, 2):
                    if not _adjacent(skel, z1, z2):
                        orient = True
                        break
            # R4: x ~ z1, z1 -> z2 -> y with z1, y non-adjacent  =>  x -> y
            if not orient:
                for z1 in range(d):
                    if z1 in (x, y) or not _adjacent(skel, x, z1):
                        continue
                    if _adjacent(skel, z1, y):
                        continue
                    for z2 in range(d):
                        if oriented(z1, z2) and oriented(z2, y):
                            orient = True
                            break
                    if orient:
                        break
            if orient:
                directed.add((x, y))
                changed = True
    return directed


def dag_to_cpdag(g):
    """Completed partially directed graph of g's Markov equivalence class.

    Keep the skeleton, direct v-structure edges, close under the Meek rules,
    leave the rest undirected.
    """
    skel = skeleton(g)
    directed = set()
    for vs in v_structures(g):
        # Both collider edges are compelled with their DAG orientation.
        directed.add((vs.a, vs.b))
        directed.add((vs.c, vs.b))
    directed = _meek_close(g.d, skel, directed)
    # Meek closure can only re-derive orientations consistent with g.
    undirected = frozenset(
        p for p in skel if (p[0], p[1]) not in directed and (p[1], p[0]) not in directed
    )
    return Cpdag(g.d, frozenset(directed), undirected, g.labels)


def enumerate_extensions(p, cap=10_000):
    """All DAGs extending Cpdag p: same skeleton, all directed edges kept,
    acyclic, and no v-structure absent from p.

    Backtracking over undirected pairs with Meek closure after each choice;
    raises ExtensionCapExceeded beyond `cap` results.
    """
    skel = skeleton(p)
    base_vs = v_structures(p)
    results = []

    def valid_partial(directed):
        # No 2-cycles, no directed cycle, no new fully-directed v-structure.
        if any((j, i) in directed for i, j in directed):
            return False
        if not _is_acyclic_set(directed, p.d):
            return False
        by_child = {}
        for i, j in directed:
            by_child.setdefault(j, []).append(i)
        for b, pars in by_child.items():
            for a, c in itertools.combinations(sorted(pars), 2):
                if not _adjacent(skel, a, c):
                    if VStructure(a, c, b) not in base_vs:
                        return False
        return True

    def recurse(directed):
        undecided = [
            (i, j)
            for i, j in sorted(skel)
            if (i, j) not in directed and (j, i) not in directed
        ]
        if not undecided:
            dag = Dag(p.d, frozenset(directed), p.labels)
            results.append(dag)
            if len(results) > cap:
                raise ExtensionCapExceeded(cap)
            return
        i, j = undecided[0]
        for choice in ((i, j), (j, i)):
            trial = set(directed)
            trial.add(choice)
            trial = _meek_close(p.d, skel, trial)
            if valid_partial(trial):
                recurse(trial)

    start = _meek_close(p.d, skel, set(p.directed))
    if not valid_partial(start):
        raise GraphError("graph admits no consistent DAG extension")
    recurse(start)
    if not results:
        raise GraphError("graph admits no consistent DAG extension")
    return results


def _is_acyclic_set(edges, d):
    indeg = [0] * d
    children = [[] for _ in range(d)]
    for i, j in edges:
        children[i].append(j)
        indeg[j] += 1
    queue = deque(v for v in range(d) if indeg[v] == 0)
    seen = 0
    while queue:
        v = queue.popleft()
        seen += 1
        for c in children[v]:
            indeg[c] -= 1
            if indeg[c] == 0:
                queue.append(c)
    return seen == d


def with_labels(g, labels):
    """Same graph structure with a different label tuple."""
    if isinstance(g, Dag):
        return Dag(g.d, g.edges, tuple(labels))
    return Cpdag(g.d, g.directed, g.undirected, tuple(labels))


def all_dags(d):
    """Every labeled DAG on d nodes (brute force; d <= 4 in practice)."""
    pairs = list(itertools.combinations(range(d), 2))
    out = []
    for states in itertools.product((None, 0, 1), repeat=len(pairs)):
        edges = set()
        for (i, j), s in zip(pairs, states):
            if s == 0:
                edges.add((i, j))
            elif s == 1:
                edges.add((j, i))
        if is_acyclic(edges, d):
            out.append(Dag(d, frozenset(edges)))
    return out
