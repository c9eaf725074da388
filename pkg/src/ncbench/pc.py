"""Reference PC algorithm: stable skeleton search, v-structure orientation
from separating sets, and Meek-rule closure.

Two conditional-independence backends: a Fisher-z test for vanishing partial
correlations on Gaussian data, and a d-separation oracle on a known DAG.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from .graphs import Cpdag, Dag, VStructure, _adjacent, _meek_close, d_separated


class CiTestError(RuntimeError):
    """Numerical failure inside a conditional-independence test."""


@dataclass(frozen=True)
class PcConfig:
    alpha: float = 0.05
    max_cond_size: int | None = None

    def __post_init__(self):
        if not (0 < self.alpha < 1):
            raise ValueError("alpha must be in (0, 1)")


def fisher_z_test(data, i, j, z):
    """Two-sided p-value for zero partial correlation of columns i, j given z."""
    z = sorted(z)
    n = data.shape[0]
    if n <= len(z) + 3:
        raise CiTestError(f"need n > |z| + 3 (n={n}, |z|={len(z)})")
    idx = [i, j] + z
    cov = np.cov(data[:, idx], rowvar=False)
    if cov.ndim == 0:
        cov = cov.reshape(1, 1)
    try:
        prec = np.linalg.inv(cov)
    except np.linalg.LinAlgError as exc:
        raise CiTestError(f"singular conditioning covariance for {idx}") from exc
    r = -prec[0, 1] / math.sqrt(prec[0, 0] * prec[1, 1])
    r = max(-1 + 1e-12, min(1 - 1e-12, r))
    stat = math.sqrt(n - len(z) - 3) * abs(0.5 * math.log((1 + r) / (1 - r)))
    return 2 * norm.sf(stat)


class FisherZTest:
    def __init__(self, data, alpha):
        self.data = np.asarray(data, dtype=float)
        self.alpha = alpha
        self.d = self.data.shape[1]

    def independent(self, i, j, z):
        return fisher_z_test(self.data, i, j, z) >= self.alpha


class OracleTest:
    def __init__(self, graph):
        self.graph = graph
        self.d = graph.d

    def independent(self, i, j, z):
        return d_separated(self.graph, i, j, z)


def _skeleton_phase(test, d, max_cond_size):
    """Stable skeleton search: edges removed only between conditioning-set
    size levels, so the result is independent of node ordering."""
    adj = {v: set(range(d)) - {v} for v in range(d)}
    sepsets = {}
    level = 0
    while True:
        if max_cond_size is not None and level > max_cond_size:
            break
        if all(len(adj[v]) - 1 < level for v in range(d)):
            break
        to_remove = []
        for i in range(d):
            for j in sorted(adj[i]):
                if i >= j:
                    continue
                # Neighborhoods frozen at the start of the level (stable PC).
                candidates = sorted(adj[i] - {j})
                found = False
                if len(candidates) >= level:
                    for s in itertools.combinations(candidates, level):
                        if test.independent(i, j, set(s)):
                            sepsets[(i, j)] = frozenset(s)
                            found = True
                            break
                if not found:
                    candidates = sorted(adj[j] - {i})
                    if len(candidates) >= level:
                        for s in itertools.combinations(candidates, level):
                            if test.independent(i, j, set(s)):
                                sepsets[(i, j)] = frozenset(s)
                                found = True
                                break
                if found:
                    to_remove.append((i, j))
        for i, j in to_remove:
            adj[i].discard(j)
            adj[j].discard(i)
        level += 1
    skel = frozenset(
        (i, j) for i in range(d) for j in adj[i] if i < j
    )
    return skel, sepsets


def _orient_v_structures(d, skel, sepsets):
    """Orient unshielded triples whose middle node is outside the separating
    set; conflicting orientations are dropped (left undirected)."""
    votes = set()
    for i, k in itertools.combinations(range(d), 2):
        if _adjacent(skel, i, k):
            continue
        sep = sepsets.get((i, k))
        if sep is None:
            continue
        for b in range(d):
            if b in (i, k):
                continue
            if _adjacent(skel, i, b) and _adjacent(skel, k, b) and b not in sep:
                votes.add((i, b))
                votes.add((k, b))
    # Conflict: both orientations requested for the same pair.
    conflicted = {(i, j) for (i, j) in votes if (j, i) in votes}
    return votes - conflicted


def pc(data_or_graph, cfg=None):
    """Run PC; accepts a data matrix (Fisher-z) or a Dag (d-separation oracle).

    Returns the estimated Cpdag. The output may be an improper CPDAG on
    finite data; it is returned as-is.
    """
    cfg = cfg or PcConfig()
    if isinstance(data_or_graph, Dag):
        test = OracleTest(data_or_graph)
    else:
        test = FisherZTest(data_or_graph, cfg.alpha)
    d = test.d
    skel, sepsets = _skeleton_phase(test, d, cfg.max_cond_size)
    directed = _orient_v_structures(d, skel, sepsets)
    directed = _meek_close(d, skel, directed)
    # Meek closure with conflicting inputs can produce 2-cycles; drop both
    # orientations of any such pair (conservative, documented behavior).
    two_cycles = {(i, j) for (i, j) in directed if (j, i) in directed}
    directed -= two_cycles
    undirected = frozenset(
        p for p in skel if p not in {(min(i, j), max(i, j)) for i, j in directed}
    )
    return Cpdag(d, frozenset(directed), undirected)
