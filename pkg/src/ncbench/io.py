"""Graph file ingestion and export.

Two formats:
  - edge list CSV with header ``from,to,type``, type in {directed, undirected};
  - adjacency matrix CSV: labels in the header row and the first column,
    entry (i, j)=1 with (j, i)=0 means i -> j, symmetric 1s mean undirected.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

from .graphs import Cpdag, Dag, GraphError, is_acyclic


class ParseError(ValueError):
    """Malformed graph file."""


@dataclass(frozen=True)
class GraphFile:
    path: str
    format: str = "edge-list"  # or "adjacency-matrix"
    kind: str = "dag"  # or "cpdag"

    def __post_init__(self):
        if self.format not in ("edge-list", "adjacency-matrix"):
            raise ParseError(f"unknown format {self.format!r}")
        if self.kind not in ("dag", "cpdag"):
            raise ParseError(f"unknown graph kind {self.kind!r}")


def _build(kind, labels, directed, undirected, path):
    index = {lab: i for i, lab in enumerate(labels)}
    d = len(labels)
    dir_idx = frozenset((index[a], index[b]) for a, b in directed)
    und_idx = frozenset(
        (min(index[a], index[b]), max(index[a], index[b])) for a, b in undirected
    )
    if kind == "dag":
        if und_idx:
            raise ParseError(f"{path}: undirected edges not allowed in a dag file")
        if not is_acyclic(dir_idx, d):
            raise ParseError(f"{path}: declared dag contains a cycle")
        return Dag(d, dir_idx, tuple(labels))
    return Cpdag(d, dir_idx, und_idx, tuple(labels))


def _parse_edge_list(path, kind):
    labels = []
    seen = set()
    directed = []
    undirected = []
    pairs = set()

    def note(lab):
        if lab not in seen:
            seen.add(lab)
            labels.append(lab)

    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header] != ["from", "to", "type"]:
            raise ParseError(f"{path}: expected header 'from,to,type'")
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 3:
                raise ParseError(f"{path}:{lineno}: expected 3 columns, got {len(row)}")
            a, b, typ = (c.strip() for c in row)
            typ = typ.lower()
            if typ not in ("directed", "undirected"):
                raise ParseError(f"{path}:{lineno}: unknown edge type {typ!r}")
            if a == b:
                raise ParseError(f"{path}:{lineno}: self-loop at {a!r}")
            note(a)
            note(b)
            pair = tuple(sorted((a, b)))
            if pair in pairs:
                raise ParseError(f"{path}:{lineno}: duplicate edge between {a!r} and {b!r}")
            pairs.add(pair)
            if typ == "directed":
                directed.append((a, b))
            else:
                undirected.append((a, b))
    return labels, directed, undirected


def _parse_adjacency_matrix(path, kind):
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh) if any(c.strip() for c in row)]
    if not rows:
        raise ParseError(f"{path}: empty file")
    header = [c.strip() for c in rows[0]]
    if header and header[0] == "":
        header = header[1:]
    labels = header
    d = len(labels)
    if len(set(labels)) != d:
        raise ParseError(f"{path}: duplicate node labels in header")
    if len(rows) != d + 1:
        raise ParseError(f"{path}: expected {d} matrix rows, got {len(rows) - 1}")
    mat = [[0] * d for _ in range(d)]
    for r, row in enumerate(rows[1:]):
        cells = [c.strip() for c in row]
        if len(cells) != d + 1:
            raise ParseError(f"{path}: row {r + 2} has {len(cells)} cells, expected {d + 1}")
        if cells[0] != labels[r]:
            raise ParseError(
                f"{path}: row label {cells[0]!r} does not match header order ({labels[r]!r})"
            )
        for c, cell in enumerate(cells[1:]):
            if cell not in ("0", "1"):
                raise ParseError(f"{path}: matrix entries must be 0 or 1, got {cell!r}")
            mat[r][c] = int(cell)
    directed = []
    undirected = []
    for i in range(d):
        if mat[i][i]:
            raise ParseError(f"{path}: self-loop at {labels[i]!r}")
        for j in range(i + 1, d):
            if mat[i][j] and mat[j][i]:
                undirected.append((labels[i], labels[j]))
            elif mat[i][j]:
                directed.append((labels[i], labels[j]))
            elif mat[j][i]:
                directed.append((labels[j], labels[i]))
    return labels, directed, undirected


def parse_graph(gf):
    """Read a GraphFile into a Dag or Cpdag; labels come from the file."""
    if gf.format == "edge-list":
        labels, directed, undirected = _parse_edge_list(gf.path, gf.kind)
    else:
        labels, directed, undirected = _parse_adjacency_matrix(gf.path, gf.kind)
    return _build(gf.kind, labels, directed, undirected, gf.path)


def write_graph(g, path, fmt="edge-list"):
    """Write a graph in canonical form (sorted edges, normalized tokens)."""
    if fmt == "edge-list":
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["from", "to", "type"])
            directed = g.edges if isinstance(g, Dag) else g.directed
            rows = [
                (g.labels[i], g.labels[j], "directed") for i, j in sorted(directed)
            ]
            if not isinstance(g, Dag):
                rows += [
                    (g.labels[i], g.labels[j], "undirected")
                    for i, j in sorted(g.undirected)
                ]
            for row in sorted(rows):
                writer.writerow(row)
    elif fmt == "adjacency-matrix":
        d = g.d
        mat = [[0] * d for _ in range(d)]
        directed = g.edges if isinstance(g, Dag) else g.directed
        for i, j in directed:
            mat[i][j] = 1
        if not isinstance(g, Dag):
            for i, j in g.undirected:
                mat[i][j] = 1
                mat[j][i] = 1
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow([""] + list(g.labels))
            for i in range(d):
                writer.writerow([g.labels[i]] + mat[i])
    else:
        raise ParseError(f"unknown format {fmt!r}")


def align_to(reference, g):
    """Re-index g's nodes to match the reference graph's label order.

    Raises GraphError listing the differing labels when the node sets differ.
    """
    if set(reference.labels) != set(g.labels):
        only_ref = sorted(set(reference.labels) - set(g.labels))
        only_g = sorted(set(g.labels) - set(reference.labels))
        raise GraphError(
            f"node sets differ: only in reference {only_ref}, only in other {only_g}"
        )
    remap = {old: reference.labels.index(lab) for old, lab in enumerate(g.labels)}
    if isinstance(g, Dag):
        return Dag(
            g.d,
            frozenset((remap[i], remap[j]) for i, j in g.edges),
            reference.labels,
        )
    return Cpdag(
        g.d,
        frozenset((remap[i], remap[j]) for i, j in g.directed),
        frozenset((remap[i], remap[j]) for i, j in g.undirected),
        reference.labels,
    )
