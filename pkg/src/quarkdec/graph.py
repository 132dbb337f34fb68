"""In-memory directed graph with atomic bidirectional edges.

A reciprocated pair of arcs can be collapsed into a single *bidirectional*
edge, which is stored once and never treated as two unidirectional edges.
Node identifiers from the input are remapped to dense integers 0..n-1; the
original strings are kept in a side table.

Loaders accept a file path, a text file object, a byte stream, or an
iterable of lines. Blank lines and lines starting with '#' are skipped.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass, field
from typing import Optional

from .errors import ConfigurationError, FormatError, ParseError

UNIDIRECTIONAL = "unidirectional"
BIDIRECTIONAL = "bidirectional"

_SIGN_TOKENS = {"+1": 1, "+": 1, "-1": -1, "-": -1}


@dataclass
class LoadInfo:
    """Counters for input irregularities that were tolerated while loading."""

    self_loops: int = 0
    duplicate_edges: int = 0
    reciprocal_signed_pairs: int = 0
    unlabeled_nodes: int = 0


@dataclass
class Graph:
    """Immutable after construction; safe to share across threads.

    Neighbor sequences are strictly sorted dense node ids.  For signed
    graphs, ``out_sign[u][i]`` is the sign of the arc ``u -> out_uni[u][i]``
    (and likewise for ``in_sign``); unsigned graphs carry ``None`` there.
    """

    node_names: list
    out_uni: list
    in_uni: list
    bidir: list
    out_sign: Optional[list] = None
    in_sign: Optional[list] = None
    labels: Optional[list] = None
    info: LoadInfo = field(default_factory=LoadInfo)
    _name_ids: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self._name_ids:
            self._name_ids = {name: i for i, name in enumerate(self.node_names)}

    # -- basic size queries -------------------------------------------------

    @property
    def num_nodes(self):
        return len(self.node_names)

    @property
    def num_unidirectional(self):
        return sum(len(a) for a in self.out_uni)

    @property
    def num_bidirectional(self):
        return sum(len(a) for a in self.bidir) // 2

    @property
    def num_edges(self):
        """Atomic edge count: one per unidirectional arc or bidirectional pair."""
        return self.num_unidirectional + self.num_bidirectional

    @property
    def is_signed(self):
        return self.out_sign is not None

    @property
    def has_labels(self):
        return self.labels is not None

    def node_id(self, name):
        return self._name_ids[name]

    def sign_counts(self):
        pos = neg = 0
        if self.is_signed:
            for row in self.out_sign:
                for s in row:
                    if s > 0:
                        pos += 1
                    else:
                        neg += 1
        return pos, neg

    def label_counts(self):
        counts = {}
        if self.labels is not None:
            for lab in self.labels:
                if lab is not None:
                    counts[lab] = counts.get(lab, 0) + 1
        return counts

    def summary(self):
        pos, neg = self.sign_counts()
        return {
            "nodes": self.num_nodes,
            "edges": self.num_edges,
            "unidirectional": self.num_unidirectional,
            "bidirectional": self.num_bidirectional,
            "positive": pos,
            "negative": neg,
            "labels": self.label_counts(),
        }

    # -- edge queries -------------------------------------------------------

    def canonical_edges(self):
        """All stored edges as (src, dst, kind, sign) over dense ids.

        Bidirectional edges appear once with src < dst and sign None.
        """
        out = []
        for u in range(self.num_nodes):
            row = self.out_uni[u]
            signs = self.out_sign[u] if self.is_signed else None
            for i, v in enumerate(row):
                out.append((u, v, UNIDIRECTIONAL, signs[i] if signs else None))
            for v in self.bidir[u]:
                if u < v:
                    out.append((u, v, BIDIRECTIONAL, None))
        out.sort()
        return out

    def named_edges(self):
        names = self.node_names
        return [(names[u], names[v], kind, sign) for u, v, kind, sign in self.canonical_edges()]

    def connected(self, u, v):
        """True if any edge (either direction or bidirectional) joins u and v."""
        return (
            _in_sorted(self.bidir[u], v)
            or _in_sorted(self.out_uni[u], v)
            or _in_sorted(self.in_uni[u], v)
        )

    def pair_relation(self, u, v):
        """Relation of the pair (u, v) seen from u.

        Returns a tuple of flags ``(out, in, bi)`` where ``out``/``in`` are
        the signs (or True for unsigned) of the arcs u->v / v->u, or None.
        """
        bi = _in_sorted(self.bidir[u], v)
        o = _sorted_index(self.out_uni[u], v)
        i = _sorted_index(self.in_uni[u], v)
        out_val = in_val = None
        if o >= 0:
            out_val = self.out_sign[u][o] if self.is_signed else True
        if i >= 0:
            in_val = self.in_sign[u][i] if self.is_signed else True
        return out_val, in_val, bi

    # -- serialization ------------------------------------------------------

    def write_edge_list(self, fp):
        """Serialize back to edge-list text; reloading yields an equal graph.

        Bidirectional edges are written as both arcs so that reloading with
        reciprocal merging reconstructs them; signed graphs get a sign column.
        """
        names = self.node_names
        for u in range(self.num_nodes):
            if self.is_signed:
                for v, s in zip(self.out_uni[u], self.out_sign[u]):
                    fp.write(f"{names[u]} {names[v]} {'+1' if s > 0 else '-1'}\n")
            else:
                for v in self.out_uni[u]:
                    fp.write(f"{names[u]} {names[v]}\n")
                for v in self.bidir[u]:
                    fp.write(f"{names[u]} {names[v]}\n")

    def structurally_equal(self, other):
        return (
            self.node_names == other.node_names
            and self.named_edges() == other.named_edges()
            and self.labels == other.labels
        )

    # -- internal invariant check (used by tests) ---------------------------

    def check_invariants(self):
        n = self.num_nodes
        for u in range(n):
            for seq in (self.out_uni[u], self.in_uni[u], self.bidir[u]):
                assert all(seq[i] < seq[i + 1] for i in range(len(seq) - 1)), "unsorted"
                assert all(0 <= v < n and v != u for v in seq), "bad neighbor"
            o, i, b = set(self.out_uni[u]), set(self.in_uni[u]), set(self.bidir[u])
            assert not (o & b) and not (i & b), "overlapping neighbor sets"
            if not self.is_signed:
                assert not (o & i), "unmerged reciprocal pair in unsigned graph"
        for u in range(n):
            for v in self.out_uni[u]:
                assert _in_sorted(self.in_uni[v], u), "out/in asymmetry"
            for v in self.bidir[u]:
                assert _in_sorted(self.bidir[v], u), "bidir asymmetry"


def _in_sorted(seq, x):
    return _sorted_index(seq, x) >= 0


def _sorted_index(seq, x):
    lo, hi = 0, len(seq)
    while lo < hi:
        mid = (lo + hi) // 2
        if seq[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo < len(seq) and seq[lo] == x else -1


def _iter_lines(source):
    """Yield text lines from a path (str/PathLike), bytes, or line iterable."""
    if isinstance(source, (str, os.PathLike)):
        with open(source, "r", encoding="utf-8") as fp:
            yield from fp
        return
    if isinstance(source, bytes):
        yield from io.StringIO(source.decode("utf-8"))
        return
    first = True
    for line in source:
        if isinstance(line, bytes):
            line = line.decode("utf-8")
        if first:
            line = line.lstrip("﻿")
            first = False
        yield line


class _NodeInterner:
    def __init__(self):
        self.names = []
        self.ids = {}

    def get(self, name):
        nid = self.ids.get(name)
        if nid is None:
            nid = len(self.names)
            self.ids[name] = nid
            self.names.append(name)
        return nid


def load_directed_edge_list(source, merge_reciprocal=True):
    """Parse 'u v' lines into a Graph.

    With ``merge_reciprocal`` (the default for unsigned directed data), any
    pair {u->v, v->u} collapses into one bidirectional edge.  Duplicates are
    dropped and counted; self-loops are dropped and counted.
    """
    interner = _NodeInterner()
    arcs = set()
    info = LoadInfo()
    for line_no, raw in enumerate(_iter_lines(source), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected 'u v', got {line!r}", line_no)
        u = interner.get(parts[0])
        v = interner.get(parts[1])
        if u == v:
            info.self_loops += 1
            continue
        key = (u, v)
        if key in arcs:
            info.duplicate_edges += 1
        else:
            arcs.add(key)
    return _assemble_unsigned(interner.names, arcs, merge_reciprocal, info)


def _assemble_unsigned(names, arcs, merge_reciprocal, info):
    n = len(names)
    out_uni = [[] for _ in range(n)]
    in_uni = [[] for _ in range(n)]
    bidir = [[] for _ in range(n)]
    for u, v in arcs:
        if merge_reciprocal and (v, u) in arcs:
            if u < v:
                bidir[u].append(v)
                bidir[v].append(u)
            continue
        out_uni[u].append(v)
        in_uni[v].append(u)
    for seq in (out_uni, in_uni, bidir):
        for row in seq:
            row.sort()
    return Graph(names, out_uni, in_uni, bidir, info=info)


def load_signed_edge_list(source):
    """Parse 'u v s' (optionally 'u v s t') lines into a signed Graph.

    Signs are one of +1, -1, +, -.  All edges stay unidirectional; a
    reciprocal signed pair is kept as two separate edges and counted in the
    load summary.  When a timestamp column is present, repeated ordered
    pairs keep the occurrence with the largest timestamp (ties: the later
    line); without timestamps the first occurrence wins.  A file must use
    timestamps on all data lines or none.
    """
    interner = _NodeInterner()
    chosen = {}
    has_ts = None
    info = LoadInfo()
    for line_no, raw in enumerate(_iter_lines(source), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) not in (3, 4):
            if len(parts) == 2:
                raise FormatError(
                    f"line {line_no}: unsigned line {line!r} in signed edge list"
                )
            raise ParseError(f"expected 'u v s [t]', got {line!r}", line_no)
        sign = _SIGN_TOKENS.get(parts[2])
        if sign is None:
            raise ParseError(f"unparsable sign token {parts[2]!r}", line_no)
        line_has_ts = len(parts) == 4
        if has_ts is None:
            has_ts = line_has_ts
        elif has_ts != line_has_ts:
            raise FormatError(
                f"line {line_no}: mixed timestamped and untimestamped lines"
            )
        ts = None
        if line_has_ts:
            try:
                ts = int(parts[3])
            except ValueError:
                raise ParseError(f"bad timestamp {parts[3]!r}", line_no) from None
        u = interner.get(parts[0])
        v = interner.get(parts[1])
        if u == v:
            info.self_loops += 1
            continue
        key = (u, v)
        prev = chosen.get(key)
        if prev is None:
            chosen[key] = (sign, ts)
        else:
            info.duplicate_edges += 1
            if has_ts and ts >= prev[1]:
                chosen[key] = (sign, ts)
    names = interner.names
    n = len(names)
    out_pairs = [[] for _ in range(n)]
    for (u, v), (sign, _ts) in chosen.items():
        out_pairs[u].append((v, sign))
        if (v, u) in chosen and u < v:
            info.reciprocal_signed_pairs += 1
    out_uni = [[] for _ in range(n)]
    in_uni = [[] for _ in range(n)]
    out_sign = [[] for _ in range(n)]
    in_sign = [[] for _ in range(n)]
    for u in range(n):
        for v, sign in sorted(out_pairs[u]):
            out_uni[u].append(v)
            out_sign[u].append(sign)
    for u in range(n):
        for i, v in enumerate(out_uni[u]):
            in_uni[v].append(u)
            in_sign[v].append(out_sign[u][i])
    for v in range(n):
        order = sorted(range(len(in_uni[v])), key=in_uni[v].__getitem__)
        in_uni[v] = [in_uni[v][i] for i in order]
        in_sign[v] = [in_sign[v][i] for i in order]
    return Graph(
        names, out_uni, in_uni, [[] for _ in range(n)], out_sign, in_sign, info=info
    )


def load_node_labels(graph, source):
    """Attach categorical node labels from 'node label' lines.

    Returns a new Graph sharing adjacency with the input.  Unknown node
    identifiers are an error (all offending lines are listed); conflicting
    duplicate labels are an error; unlabeled nodes are permitted and counted.
    """
    labels = [None] * graph.num_nodes
    bad_lines = []
    for line_no, raw in enumerate(_iter_lines(source), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected 'node label', got {line!r}", line_no)
        name, label = parts
        nid = graph._name_ids.get(name)
        if nid is None:
            bad_lines.append(f"line {line_no}: unknown node {name!r}")
            continue
        if labels[nid] is not None and labels[nid] != label:
            raise ParseError(
                f"conflicting label {label!r} for node {name!r} "
                f"(already {labels[nid]!r})",
                line_no,
            )
        labels[nid] = label
    if bad_lines:
        raise ParseError("unknown node identifiers:\n" + "\n".join(bad_lines))
    info = LoadInfo(
        self_loops=graph.info.self_loops,
        duplicate_edges=graph.info.duplicate_edges,
        reciprocal_signed_pairs=graph.info.reciprocal_signed_pairs,
        unlabeled_nodes=sum(1 for lab in labels if lab is None),
    )
    return Graph(
        graph.node_names,
        graph.out_uni,
        graph.in_uni,
        graph.bidir,
        graph.out_sign,
        graph.in_sign,
        labels,
        info,
        dict(graph._name_ids),
    )


def induced_label_filter(graph, keep_labels):
    """Induced subgraph on nodes whose label is in ``keep_labels``.

    Node ids are re-densified; the original string identifiers are retained
    in the result's side table, so the translation back is always available.
    An empty label set yields an empty graph.
    """
    if graph.labels is None:
        raise ConfigurationError("graph has no node labels")
    keep_labels = set(keep_labels)
    kept = [u for u in range(graph.num_nodes) if graph.labels[u] in keep_labels]
    remap = {old: new for new, old in enumerate(kept)}
    names = [graph.node_names[old] for old in kept]
    n = len(kept)
    out_uni = [[] for _ in range(n)]
    in_uni = [[] for _ in range(n)]
    bidir = [[] for _ in range(n)]
    out_sign = [[] for _ in range(n)] if graph.is_signed else None
    in_sign = [[] for _ in range(n)] if graph.is_signed else None
    for old_u in kept:
        u = remap[old_u]
        for i, old_v in enumerate(graph.out_uni[old_u]):
            v = remap.get(old_v)
            if v is not None:
                out_uni[u].append(v)
                in_uni[v].append(u)
                if graph.is_signed:
                    out_sign[u].append(graph.out_sign[old_u][i])
        for old_v in graph.bidir[old_u]:
            v = remap.get(old_v)
            if v is not None:
                bidir[u].append(v)
    if graph.is_signed:
        for u in range(n):
            pairs = sorted(zip(out_uni[u], out_sign[u]))
            out_uni[u] = [v for v, _ in pairs]
            out_sign[u] = [s for _, s in pairs]
        for u in range(n):
            in_uni[u] = []
            in_sign[u] = []
        for u in range(n):
            for i, v in enumerate(out_uni[u]):
                in_uni[v].append(u)
                in_sign[v].append(out_sign[u][i])
        for v in range(n):
            order = sorted(range(len(in_uni[v])), key=in_uni[v].__getitem__)
            in_uni[v] = [in_uni[v][i] for i in order]
            in_sign[v] = [in_sign[v][i] for i in order]
    else:
        for seq in (out_uni, in_uni, bidir):
            for row in seq:
                row.sort()
    labels = [graph.labels[old] for old in kept]
    return Graph(names, out_uni, in_uni, bidir, out_sign, in_sign, labels, graph.info)


def loads(text, mode="directed", merge_reciprocal=True):
    """Convenience: load a graph from an in-memory string."""
    stream = io.StringIO(text)
    if mode == "signed":
        return load_signed_edge_list(stream)
    return load_directed_edge_list(stream, merge_reciprocal=merge_reciprocal)
