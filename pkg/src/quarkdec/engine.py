"""Space-efficient on-the-fly motif enumeration.

Degrees are computed by streaming over the graph's adjacency; motif
instances are never materialized.  For each base pair (u, v) the combined
neighborhoods of u and v are intersected via dictionary probes, so a pass
costs O(sum over edges of min-degree) work and memory stays linear in the
edge count.

Unit instances get dense ids: node units reuse node ids, edge units use the
canonical connected-pair index (sorted by (min, max)), triangle units use a
sorted global triangle index built during the counting pass.
"""

from __future__ import annotations

from array import array
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Optional

from . import motifs
from .errors import ConfigurationError
from .motifs import CLIQUE, DIRECTED, SIGNED, UnitKind

# Stored pair-relation codes, always from the (min, max) perspective.
# Unsigned: 0 = uni min->max, 1 = uni max->min, 2 = bidirectional,
# 3 = two opposite unidirectional arcs (only in unmerged graphs).
# Signed: 4 + out_state*3 + in_state with states {0: none, 1: '+', 2: '-'}.
REL_OUT, REL_IN, REL_BI, REL_BOTH = 0, 1, 2, 3

# Translation from stored codes to classification-table codes (-1: no class).
_DIR_TRANS = [0, 1, 2, -1] + [-1] * 12
_SIGNED_TRANS = [-1] * 16
_SIGNED_TRANS[4 + 1 * 3 + 0] = 0  # '+', min->max
_SIGNED_TRANS[4 + 2 * 3 + 0] = 1  # '-', min->max
_SIGNED_TRANS[4 + 0 * 3 + 1] = 2  # '+', max->min
_SIGNED_TRANS[4 + 0 * 3 + 2] = 3  # '-', max->min


def _has(sorted_row, x):
    i = bisect_left(sorted_row, x)
    return i < len(sorted_row) and sorted_row[i] == x


class EdgeIndex:
    """Canonical connected-pair index plus flat adjacency, cached per graph."""

    __slots__ = ("n", "pairs", "rel", "lookup", "adj", "census_cache", "tri_cache")

    def __init__(self, graph):
        n = graph.num_nodes
        self.n = n
        pairs = []
        rel = array("b")
        for u in range(n):
            for v in graph.bidir[u]:
                if u < v:
                    pairs.append((u, v))
                    rel.append(REL_BI)
        if graph.is_signed:
            for u in range(n):
                row = graph.out_uni[u]
                srow = graph.out_sign[u]
                for k, v in enumerate(row):
                    brow = graph.out_uni[v]
                    bi = bisect_left(brow, u)
                    back = bi < len(brow) and brow[bi] == u
                    if u < v:
                        o = 1 if srow[k] > 0 else 2
                        i = (1 if graph.out_sign[v][bi] > 0 else 2) if back else 0
                        pairs.append((u, v))
                        rel.append(4 + o * 3 + i)
                    elif not back:
                        pairs.append((v, u))
                        rel.append(4 + 0 * 3 + (1 if srow[k] > 0 else 2))
        else:
            for u in range(n):
                for v in graph.out_uni[u]:
                    back = _has(graph.out_uni[v], u)
                    if u < v:
                        pairs.append((u, v))
                        rel.append(REL_BOTH if back else REL_OUT)
                    elif not back:
                        pairs.append((v, u))
                        rel.append(REL_IN)
        order = sorted(range(len(pairs)), key=pairs.__getitem__)
        self.pairs = [pairs[i] for i in order]
        self.rel = array("b", (rel[i] for i in order))
        lookup = {}
        adj = [[] for _ in range(n)]
        for eid, (u, v) in enumerate(self.pairs):
            lookup[u * n + v] = (eid << 4) | self.rel[eid]
            adj[u].append(v)
            adj[v].append(u)
        for row in adj:
            row.sort()
        self.lookup = lookup
        self.adj = adj
        self.census_cache = {}
        self.tri_cache = None

    @property
    def num_pairs(self):
        return len(self.pairs)


def get_index(graph) -> EdgeIndex:
    idx = getattr(graph, "_quarkdec_index", None)
    if idx is None:
        idx = EdgeIndex(graph)
        graph._quarkdec_index = idx
    return idx


# -- unit universes -----------------------------------------------------------


@dataclass(eq=False)
class UnitUniverse:
    """Dense id space for the unit instances of a (graph, unit kind) pair."""

    kind: UnitKind
    count: int
    pairs: Optional[list] = None
    triples: Optional[list] = None
    tri_ids: Optional[dict] = None

    def instance(self, uid):
        if self.kind is UnitKind.NODE:
            return (uid,)
        if self.kind is UnitKind.EDGE:
            return self.pairs[uid]
        return self.triples[uid]

    def id_of(self, instance):
        instance = tuple(sorted(instance))
        if self.kind is UnitKind.NODE:
            uid = instance[0]
            return uid if len(instance) == 1 and 0 <= uid < self.count else None
        if self.kind is UnitKind.EDGE:
            lo = bisect_left(self.pairs, instance)
            if lo < len(self.pairs) and self.pairs[lo] == instance:
                return lo
            return None
        return self.tri_ids.get(instance)

    def instances(self):
        return [self.instance(i) for i in range(self.count)]


def unit_universe(graph, unit) -> UnitUniverse:
    idx = get_index(graph)
    if unit is UnitKind.NODE:
        return UnitUniverse(UnitKind.NODE, graph.num_nodes)
    if unit is UnitKind.EDGE:
        return UnitUniverse(UnitKind.EDGE, idx.num_pairs, pairs=idx.pairs)
    triples = _triangle_universe(idx)
    ids = {t: i for i, t in enumerate(triples)}
    return UnitUniverse(UnitKind.TRIANGLE, len(triples), triples=triples, tri_ids=ids)


def _triangle_universe(idx):
    """All pair-connected triples (undirected triangles), sorted."""
    if idx.tri_cache is not None:
        return idx.tri_cache
    pairs, lookup, adj, n = idx.pairs, idx.lookup, idx.adj, idx.n
    triples = []
    for u, v in pairs:
        au, av = adj[u], adj[v]
        it = au if len(au) <= len(av) else av
        for w in it[bisect_right(it, v):]:
            if (u * n + w) in lookup and (v * n + w) in lookup:
                triples.append((u, v, w))
    triples.sort()
    idx.tri_cache = triples
    return triples


def check_compatible(graph, spec):
    if spec.family == SIGNED and not graph.is_signed:
        raise ConfigurationError(f"{spec} requires a signed graph")
    if spec.family == DIRECTED and graph.is_signed:
        raise ConfigurationError(f"{spec} requires an unsigned directed graph")
    if spec.requires_labels and not graph.has_labels:
        raise ConfigurationError(f"{spec} requires node labels")


# -- class keys and per-class orbit lookups ------------------------------------


def _class_key(spec):
    return spec.motif.labels if spec.family == CLIQUE else spec.motif.name


def _spec_for_key(family, key, unit, size):
    if family in (DIRECTED, SIGNED):
        return motifs.make_spec(unit, motifs.parse_motif(key))
    if key is None:
        base = motifs.VANILLA_TRIANGLE if size == 3 else motifs.VANILLA_CLIQUE4
        return motifs.make_spec(unit, base)
    mk = motifs.labeled_triangle if size == 3 else motifs.labeled_clique4
    return motifs.make_spec(unit, mk(list(key)))


def _clique_keys(graph, size):
    """Vanilla plus every label multiset over the labels present in the graph."""
    import itertools

    keys = [None]
    if graph.has_labels:
        present = sorted({lab for lab in graph.labels if lab is not None})
        keys.extend(itertools.combinations_with_replacement(present, size))
    return keys


def _position_label_orbit(spec, unit):
    """Map a member's sorted label tuple to its orbit id (clique family).

    In a labeled clique, positions with equal label multisets are always in
    the same orbit, so the labels identify the orbit.
    """
    motif = spec.motif
    table = spec.orbit_table if unit is spec.unit else motifs.compute_orbits(unit, motif)
    out = {}
    for oid, members in enumerate(table.orbit_members):
        for pos in members:
            key = (
                tuple(sorted(motif.labels[i] for i in pos))
                if motif.labels is not None
                else None
            )
            prev = out.setdefault(key, oid)
            assert prev == oid, "label multiset does not identify the orbit"
    return out


# -- family census: degrees for every class in one pass ------------------------


class Census:
    """Per-class degrees, totals, and (optionally) orbit degrees."""

    __slots__ = ("degrees", "orbit_degrees", "totals", "universe", "orbit_counts")

    def __init__(self, degrees, orbit_degrees, totals, universe, orbit_counts):
        self.degrees = degrees
        self.orbit_degrees = orbit_degrees
        self.totals = totals
        self.universe = universe
        self.orbit_counts = orbit_counts


def get_census(graph, spec, workers=1, orbits=False) -> Census:
    check_compatible(graph, spec)
    idx = get_index(graph)
    base_key = (spec.family, spec.unit, spec.motif.size)
    census = idx.census_cache.get((*base_key, True))
    if census is None and not orbits:
        census = idx.census_cache.get((*base_key, False))
    if census is None:
        census = _run_census(graph, idx, spec, workers, orbits)
        idx.census_cache[(*base_key, orbits)] = census
        if orbits:
            idx.census_cache.pop((*base_key, False), None)
    return census


def _run_census(graph, idx, spec, workers, orbits):
    family, unit, size = spec.family, spec.unit, spec.motif.size
    if family == CLIQUE:
        keys = _clique_keys(graph, size)
    else:
        classes = motifs.DIRECTED_CLASSES if family == DIRECTED else motifs.SIGNED_CLASSES
        keys = [m.name for m in classes]
    universe = unit_universe(graph, unit)
    orbit_counts = [
        _spec_for_key(family, k, unit, size).orbit_count for k in keys
    ]
    if size == 3:
        total_work = idx.num_pairs
        kernel = _clique3_chunk if family == CLIQUE else _tabled_chunk
    else:
        total_work = universe.count
        kernel = _clique4_chunk
    ctx = (graph, idx, family, unit, keys, orbit_counts, universe, orbits)
    chunks = _chunk_ranges(total_work, workers)
    results = _map_chunks(kernel, ctx, chunks, workers)
    degrees = {k: array("i", bytes(4 * universe.count)) for k in keys}
    orbit_degrees = (
        {
            k: array("i", bytes(4 * universe.count * orbit_counts[i]))
            for i, k in enumerate(keys)
        }
        if orbits
        else None
    )
    totals = dict.fromkeys(keys, 0)
    for part_deg, part_orb, part_tot in results:
        for i, k in enumerate(keys):
            _iadd(degrees[k], part_deg[i])
            if orbits:
                _iadd(orbit_degrees[k], part_orb[i])
            totals[k] += part_tot[i]
    return Census(degrees, orbit_degrees, totals, universe, dict(zip(keys, orbit_counts)))


def _iadd(dst, src):
    for i, v in enumerate(src):
        if v:
            dst[i] += v


def _chunk_ranges(total, workers):
    workers = max(1, int(workers))
    if workers == 1 or total < 4 * workers:
        return [(0, total)]
    step = (total + workers - 1) // workers
    return [(lo, min(lo + step, total)) for lo in range(0, total, step)]


_FORK_STATE = None


def _fork_entry(lo, hi):
    fn, ctx = _FORK_STATE
    return fn(ctx, lo, hi)


def _map_chunks(fn, ctx, chunks, workers):
    if len(chunks) == 1 or workers <= 1:
        return [fn(ctx, lo, hi) for lo, hi in chunks]
    import multiprocessing as mp

    try:
        mp_ctx = mp.get_context("fork")
    except ValueError:
        return [fn(ctx, lo, hi) for lo, hi in chunks]
    global _FORK_STATE
    _FORK_STATE = (fn, ctx)
    try:
        with mp_ctx.Pool(processes=min(workers, len(chunks))) as pool:
            return pool.starmap(_fork_entry, chunks)
    finally:
        _FORK_STATE = None


def _alloc(keys, orbit_counts, count, orbits):
    deg = [array("i", bytes(4 * count)) for _ in keys]
    orb = (
        [array("i", bytes(4 * count * b)) for b in orbit_counts]
        if orbits
        else [None] * len(keys)
    )
    return deg, orb, [0] * len(keys)


def _tabled_chunk(ctx, lo, hi):
    """Directed/signed triangle census over base pairs [lo, hi)."""
    graph, idx, family, unit, keys, orbit_counts, universe, orbits = ctx
    pairs, lookup, adj, rel, n = idx.pairs, idx.lookup, idx.adj, idx.rel, idx.n
    if family == DIRECTED:
        table, trans, width = motifs.directed_triangle_table(), _DIR_TRANS, 3
    else:
        table, trans, width = motifs.signed_triangle_table(), _SIGNED_TRANS, 4
    deg, orb, tot = _alloc(keys, orbit_counts, universe.count, orbits)
    is_edge = unit is UnitKind.EDGE
    for eid in range(lo, hi):
        r1 = trans[rel[eid]]
        if r1 < 0:
            continue
        u, v = pairs[eid]
        au, av = adj[u], adj[v]
        it = au if len(au) <= len(av) else av
        un, vn = u * n, v * n
        for w in it[bisect_right(it, v):]:
            pk2 = lookup.get(un + w)
            if pk2 is None:
                continue
            pk3 = lookup.get(vn + w)
            if pk3 is None:
                continue
            r2 = trans[pk2 & 15]
            if r2 < 0:
                continue
            r3 = trans[pk3 & 15]
            if r3 < 0:
                continue
            entry = table[(r1 * width + r2) * width + r3]
            if entry is None:
                continue
            c = entry[0]
            tot[c] += 1
            d = deg[c]
            if is_edge:
                f, g = pk2 >> 4, pk3 >> 4
                d[eid] += 1
                d[f] += 1
                d[g] += 1
                if orbits:
                    b = orbit_counts[c]
                    o = orb[c]
                    o[eid * b + entry[1]] += 1
                    o[f * b + entry[2]] += 1
                    o[g * b + entry[3]] += 1
            else:
                d[u] += 1
                d[v] += 1
                d[w] += 1
                if orbits:
                    b = orbit_counts[c]
                    o = orb[c]
                    o[u * b + entry[4]] += 1
                    o[v * b + entry[5]] += 1
                    o[w * b + entry[6]] += 1
    return deg, orb, tot


def _clique3_chunk(ctx, lo, hi):
    """Triangle census for the clique family (vanilla + label multisets)."""
    graph, idx, family, unit, keys, orbit_counts, universe, orbits = ctx
    pairs, lookup, adj, n = idx.pairs, idx.lookup, idx.adj, idx.n
    labels = graph.labels if graph.has_labels else None
    key_ids = {k: i for i, k in enumerate(keys)}
    pair_orbit = edge_orbit = node_orbit = None
    if orbits:
        specs = [_spec_for_key(CLIQUE, k, unit, 3) for k in keys]
        if unit is UnitKind.EDGE:
            edge_orbit = [_position_label_orbit(s, UnitKind.EDGE) for s in specs]
        else:
            node_orbit = [_position_label_orbit(s, UnitKind.NODE) for s in specs]
    deg, orb, tot = _alloc(keys, orbit_counts, universe.count, orbits)
    is_edge = unit is UnitKind.EDGE
    for eid in range(lo, hi):
        u, v = pairs[eid]
        au, av = adj[u], adj[v]
        it = au if len(au) <= len(av) else av
        un, vn = u * n, v * n
        for w in it[bisect_right(it, v):]:
            pk2 = lookup.get(un + w)
            if pk2 is None:
                continue
            pk3 = lookup.get(vn + w)
            if pk3 is None:
                continue
            slots = [0]
            if labels is not None:
                la, lb, lc = labels[u], labels[v], labels[w]
                if la is not None and lb is not None and lc is not None:
                    slots.append(key_ids[tuple(sorted((la, lb, lc)))])
            for c in slots:
                tot[c] += 1
                d = deg[c]
                if is_edge:
                    f, g = pk2 >> 4, pk3 >> 4
                    d[eid] += 1
                    d[f] += 1
                    d[g] += 1
                    if orbits:
                        b = orbit_counts[c]
                        o = orb[c]
                        if c == 0:
                            o[eid * b] += 1
                            o[f * b] += 1
                            o[g * b] += 1
                        else:
                            lk = edge_orbit[c]
                            o[eid * b + lk[tuple(sorted((la, lb)))]] += 1
                            o[f * b + lk[tuple(sorted((la, lc)))]] += 1
                            o[g * b + lk[tuple(sorted((lb, lc)))]] += 1
                else:
                    d[u] += 1
                    d[v] += 1
                    d[w] += 1
                    if orbits:
                        b = orbit_counts[c]
                        o = orb[c]
                        if c == 0:
                            o[u * b] += 1
                            o[v * b] += 1
                            o[w * b] += 1
                        else:
                            lk = node_orbit[c]
                            o[u * b + lk[(la,)]] += 1
                            o[v * b + lk[(lb,)]] += 1
                            o[w * b + lk[(lc,)]] += 1
    return deg, orb, tot


def _clique4_chunk(ctx, lo, hi):
    """4-clique census over base triangles [lo, hi); unit is the triangle."""
    graph, idx, family, unit, keys, orbit_counts, universe, orbits = ctx
    lookup, adj, n = idx.lookup, idx.adj, idx.n
    labels = graph.labels if graph.has_labels else None
    key_ids = {k: i for i, k in enumerate(keys)}
    tri_orbit = None
    if orbits:
        specs = [_spec_for_key(CLIQUE, k, unit, 4) for k in keys]
        tri_orbit = [_position_label_orbit(s, UnitKind.TRIANGLE) for s in specs]
    deg, orb, tot = _alloc(keys, orbit_counts, universe.count, orbits)
    triples, tri_ids = universe.triples, universe.tri_ids
    for tid in range(lo, hi):
        a, b_, c = triples[tid]
        rows = sorted((adj[a], adj[b_], adj[c]), key=len)
        it = rows[0]
        an, bn, cn = a * n, b_ * n, c * n
        for x in it[bisect_right(it, c):]:
            if (an + x) not in lookup or (bn + x) not in lookup or (cn + x) not in lookup:
                continue
            slots = [0]
            lx = None
            if labels is not None:
                la, lb, lc, lx = labels[a], labels[b_], labels[c], labels[x]
                if la is not None and lb is not None and lc is not None and lx is not None:
                    slots.append(key_ids[tuple(sorted((la, lb, lc, lx)))])
            m1 = tid
            m2 = tri_ids[(a, b_, x)]
            m3 = tri_ids[(a, c, x)]
            m4 = tri_ids[(b_, c, x)]
            for ckey in slots:
                tot[ckey] += 1
                d = deg[ckey]
                d[m1] += 1
                d[m2] += 1
                d[m3] += 1
                d[m4] += 1
                if orbits:
                    bb = orbit_counts[ckey]
                    o = orb[ckey]
                    if ckey == 0:
                        o[m1 * bb] += 1
                        o[m2 * bb] += 1
                        o[m3 * bb] += 1
                        o[m4 * bb] += 1
                    else:
                        lk = tri_orbit[ckey]
                        o[m1 * bb + lk[tuple(sorted((la, lb, lc)))]] += 1
                        o[m2 * bb + lk[tuple(sorted((la, lb, lx)))]] += 1
                        o[m3 * bb + lk[tuple(sorted((la, lc, lx)))]] += 1
                        o[m4 * bb + lk[tuple(sorted((lb, lc, lx)))]] += 1
    return deg, orb, tot


# -- public degree API ----------------------------------------------------------


@dataclass(eq=False)
class DegreeMap:
    """Motif degrees per unit instance; zero-degree instances read as 0."""

    graph: object
    spec: object
    universe: UnitUniverse
    values: array

    def degree(self, instance):
        uid = self.universe.id_of(instance)
        return self.values[uid] if uid is not None else 0

    def items(self):
        inst = self.universe.instance
        return [(inst(i), d) for i, d in enumerate(self.values) if d]

    def as_dict(self):
        return dict(self.items())

    def sum(self):
        return sum(self.values)

    def max(self):
        return max(self.values, default=0)


@dataclass(eq=False)
class OrbitDegreeMap:
    """Per-orbit motif degrees; vectors of length spec.orbit_count."""

    graph: object
    spec: object
    universe: UnitUniverse
    values: array  # flattened, uid * b + orbit

    @property
    def orbit_count(self):
        return self.spec.orbit_count

    def vector(self, instance):
        uid = self.universe.id_of(instance)
        b = self.orbit_count
        if uid is None:
            return (0,) * b
        return tuple(self.values[uid * b : (uid + 1) * b])

    def items(self):
        inst = self.universe.instance
        b = self.orbit_count
        out = []
        for uid in range(self.universe.count):
            vec = tuple(self.values[uid * b : (uid + 1) * b])
            if any(vec):
                out.append((inst(uid), vec))
        return out

    def as_dict(self):
        return dict(self.items())


def motif_degrees(graph, spec, workers=1) -> DegreeMap:
    """Exact count of induced motif instances containing each unit instance."""
    census = get_census(graph, spec, workers)
    key = _class_key(spec)
    values = census.degrees.get(key)
    if values is None:
        values = array("i", bytes(4 * census.universe.count))
    return DegreeMap(graph, spec, census.universe, values)


def orbit_degrees(graph, spec, workers=1) -> OrbitDegreeMap:
    """Per-orbit instance counts; rows sum to the plain motif degree."""
    census = get_census(graph, spec, workers, orbits=True)
    key = _class_key(spec)
    values = census.orbit_degrees.get(key)
    if values is None:
        values = array("i", bytes(4 * census.universe.count * spec.orbit_count))
    return OrbitDegreeMap(graph, spec, census.universe, values)


def count_total(graph, motif, workers=1) -> int:
    """Number of induced instances of the motif class in the graph."""
    if isinstance(motif, str):
        motif = motifs.parse_motif(motif)
    spec = motifs.make_spec(motifs.default_unit(motif), motif)
    census = get_census(graph, spec, workers)
    return census.totals.get(_class_key(spec), 0)


def census_rows(graph, family_motifs, unit, workers=1):
    """(motif name, total, max degree, sum of degrees) for the count command."""
    rows = []
    for motif in family_motifs:
        spec = motifs.make_spec(unit, motif)
        dm = motif_degrees(graph, spec, workers)
        census = get_census(graph, spec, workers)
        rows.append(
            (motif.name, census.totals.get(_class_key(spec), 0), dm.max(), dm.sum())
        )
    return rows


# -- per-instance enumeration (peeling support and public streams) --------------


class PeelContext:
    """Bound state for enumerating live instances of one class quickly."""

    __slots__ = (
        "graph", "spec", "idx", "universe", "family", "unit", "class_id",
        "table", "trans", "width", "labels", "label_key", "edge_orbit",
        "node_orbit", "tri_orbit", "orbit_count",
    )

    def __init__(self, graph, spec):
        check_compatible(graph, spec)
        self.graph = graph
        self.spec = spec
        self.idx = get_index(graph)
        self.universe = unit_universe(graph, spec.unit)
        self.family = spec.family
        self.unit = spec.unit
        self.orbit_count = spec.orbit_count
        self.labels = graph.labels if graph.has_labels else None
        self.label_key = None
        self.edge_orbit = self.node_orbit = self.tri_orbit = None
        self.table = self.trans = self.width = self.class_id = None
        if self.family == DIRECTED:
            self.table = motifs.directed_triangle_table()
            self.trans = _DIR_TRANS
            self.width = 3
            self.class_id = [m.name for m in motifs.DIRECTED_CLASSES].index(
                spec.motif.name
            )
        elif self.family == SIGNED:
            self.table = motifs.signed_triangle_table()
            self.trans = _SIGNED_TRANS
            self.width = 4
            self.class_id = [m.name for m in motifs.SIGNED_CLASSES].index(
                spec.motif.name
            )
        else:
            self.label_key = spec.motif.labels
            if spec.motif.size == 3:
                if spec.unit is UnitKind.EDGE:
                    self.edge_orbit = _position_label_orbit(spec, UnitKind.EDGE)
                else:
                    self.node_orbit = _position_label_orbit(spec, UnitKind.NODE)
            else:
                self.tri_orbit = _position_label_orbit(spec, UnitKind.TRIANGLE)

    def _label_slot_ok(self, *nodes):
        if self.label_key is None:
            return True
        if self.labels is None:
            return False
        labs = [self.labels[x] for x in nodes]
        if None in labs:
            return False
        return tuple(sorted(labs)) == self.label_key

    # Each record: (member ids..., orbit of self, orbits of members...).
    # Members exclude the queried unit itself; orbits align with
    # (self, member1, member2[, member3]).

    def _classify_sorted(self, a, b, c, ra, rb, rc):
        """Table entry for the sorted triple, or None."""
        trans = self.trans
        r1 = trans[ra]
        if r1 < 0:
            return None
        r2 = trans[rb]
        if r2 < 0:
            return None
        r3 = trans[rc]
        if r3 < 0:
            return None
        entry = self.table[(r1 * self.width + r2) * self.width + r3]
        if entry is None or entry[0] != self.class_id:
            return None
        return entry

    def edge_instances(self, eid, processed=None):
        idx = self.idx
        pairs, lookup, adj, rel, n = idx.pairs, idx.lookup, idx.adj, idx.rel, idx.n
        u, v = pairs[eid]
        au, av = adj[u], adj[v]
        it = au if len(au) <= len(av) else av
        out = []
        clique = self.family == CLIQUE
        labels = self.labels
        for w in it:
            if w == u or w == v:
                continue
            pk2 = lookup.get((u * n + w) if u < w else (w * n + u))
            if pk2 is None:
                continue
            pk3 = lookup.get((v * n + w) if v < w else (w * n + v))
            if pk3 is None:
                continue
            f, g = pk2 >> 4, pk3 >> 4
            if processed is not None and (processed[f] or processed[g]):
                continue
            if clique:
                if not self._label_slot_ok(u, v, w):
                    continue
                if self.label_key is None:
                    out.append((f, g, 0, 0, 0))
                else:
                    lk = self.edge_orbit
                    la, lb, lc = labels[u], labels[v], labels[w]
                    out.append((
                        f, g,
                        lk[tuple(sorted((la, lb)))],
                        lk[tuple(sorted((la, lc)))],
                        lk[tuple(sorted((lb, lc)))],
                    ))
                continue
            # order the triple to use the classification table
            if w > v:
                entry = self._classify_sorted(u, v, w, rel[eid], pk2 & 15, pk3 & 15)
                pos = (1, 2, 3)  # orbit fields for (self=(a,b), f=(a,c), g=(b,c))
            elif w < u:
                entry = self._classify_sorted(w, u, v, pk2 & 15, pk3 & 15, rel[eid])
                pos = (3, 1, 2)
            else:
                entry = self._classify_sorted(u, w, v, pk2 & 15, rel[eid], pk3 & 15)
                pos = (2, 1, 3)
            if entry is None:
                continue
            out.append((f, g, entry[pos[0]], entry[pos[1]], entry[pos[2]]))
        return out

    def node_instances(self, nid, processed=None):
        idx = self.idx
        lookup, adj, rel, n = idx.lookup, idx.adj, idx.rel, idx.n
        row = adj[nid]
        out = []
        clique = self.family == CLIQUE
        labels = self.labels
        for i, v in enumerate(row):
            if processed is not None and processed[v]:
                continue
            pk1 = lookup.get((nid * n + v) if nid < v else (v * n + nid))
            for w in row[i + 1:]:
                if processed is not None and processed[w]:
                    continue
                pk3 = lookup.get((v * n + w))
                if pk3 is None:
                    continue
                pk2 = lookup.get((nid * n + w) if nid < w else (w * n + nid))
                if clique:
                    if not self._label_slot_ok(nid, v, w):
                        continue
                    if self.label_key is None:
                        out.append((v, w, 0, 0, 0))
                    else:
                        lk = self.node_orbit
                        out.append((
                            v, w,
                            lk[(labels[nid],)], lk[(labels[v],)], lk[(labels[w],)],
                        ))
                    continue
                # v < w always; place nid
                if nid < v:
                    entry = self._classify_sorted(nid, v, w, pk1 & 15, pk2 & 15, pk3 & 15)
                    pos = (4, 5, 6)
                elif nid > w:
                    entry = self._classify_sorted(v, w, nid, pk3 & 15, pk1 & 15, pk2 & 15)
                    pos = (6, 4, 5)
                else:
                    entry = self._classify_sorted(v, nid, w, pk1 & 15, pk3 & 15, pk2 & 15)
                    pos = (5, 4, 6)
                if entry is None:
                    continue
                out.append((v, w, entry[pos[0]], entry[pos[1]], entry[pos[2]]))
        return out

    def tri_instances(self, tid, processed=None):
        idx = self.idx
        lookup, adj, n = idx.lookup, idx.adj, idx.n
        universe = self.universe
        a, b_, c = universe.triples[tid]
        tri_ids = universe.tri_ids
        rows = sorted((adj[a], adj[b_], adj[c]), key=len)
        it = rows[0]
        labels = self.labels
        out = []
        for x in it:
            if x == a or x == b_ or x == c:
                continue
            if (min(a, x) * n + max(a, x)) not in lookup:
                continue
            if (min(b_, x) * n + max(b_, x)) not in lookup:
                continue
            if (min(c, x) * n + max(c, x)) not in lookup:
                continue
            if not self._label_slot_ok(a, b_, c, x):
                continue
            m2 = tri_ids[tuple(sorted((a, b_, x)))]
            m3 = tri_ids[tuple(sorted((a, c, x)))]
            m4 = tri_ids[tuple(sorted((b_, c, x)))]
            if processed is not None and (processed[m2] or processed[m3] or processed[m4]):
                continue
            if self.label_key is None:
                out.append((m2, m3, m4, 0, 0, 0, 0))
            else:
                lk = self.tri_orbit
                la, lb, lc, lx = labels[a], labels[b_], labels[c], labels[x]
                out.append((
                    m2, m3, m4,
                    lk[tuple(sorted((la, lb, lc)))],
                    lk[tuple(sorted((la, lb, lx)))],
                    lk[tuple(sorted((la, lc, lx)))],
                    lk[tuple(sorted((lb, lc, lx)))],
                ))
        return out

    def instances_of(self, uid, processed=None):
        if self.unit is UnitKind.EDGE:
            return self.edge_instances(uid, processed)
        if self.unit is UnitKind.NODE:
            return self.node_instances(uid, processed)
        return self.tri_instances(uid, processed)


@dataclass(frozen=True)
class NInstance:
    """One induced motif occurrence: its nodes, unit members, member orbits."""

    nodes: tuple
    members: tuple
    orbits: tuple


def containing_instances(graph, spec, instance, live=None):
    """Stream the induced motif instances containing a unit instance.

    ``live``, when given, is a predicate over member instances; occurrences
    containing any non-live member (other than the queried one) are skipped,
    mirroring the duplicate protection used during peeling.
    """
    ctx = PeelContext(graph, spec)
    instance = tuple(sorted(instance)) if not isinstance(instance, int) else (instance,)
    uid = ctx.universe.id_of(instance)
    if uid is None:
        return
    inst_of = ctx.universe.instance
    t = spec.units_per_motif
    for rec in ctx.instances_of(uid):
        member_ids = rec[: t - 1]
        orbits = rec[t - 1 :]
        members = tuple(inst_of(m) for m in member_ids)
        if live is not None and not all(live(m) for m in members):
            continue
        nodes = sorted({x for m in members for x in m} | set(instance))
        yield NInstance(tuple(nodes), (instance, *members), tuple(orbits))


def iter_instances(graph, motif):
    """Yield the sorted node tuple of every induced instance of the class."""
    if isinstance(motif, str):
        motif = motifs.parse_motif(motif)
    spec = motifs.make_spec(motifs.default_unit(motif), motif)
    check_compatible(graph, spec)
    idx = get_index(graph)
    if spec.motif.size == 4:
        ctx = PeelContext(graph, spec)
        universe = ctx.universe
        for tid in range(universe.count):
            a, b_, c = universe.triples[tid]
            for rec in ctx.tri_instances(tid):
                nodes = set(universe.triples[rec[0]]) | {a, b_, c}
                nodes |= set(universe.triples[rec[1]])
                quad = tuple(sorted(nodes))
                if quad[:3] == (a, b_, c):  # count each 4-clique once
                    yield quad
        return
    pairs, lookup, adj, rel, n = idx.pairs, idx.lookup, idx.adj, idx.rel, idx.n
    if spec.family == CLIQUE:
        ctx = PeelContext(graph, spec)
        for eid, (u, v) in enumerate(pairs):
            au, av = adj[u], adj[v]
            it = au if len(au) <= len(av) else av
            for w in it[bisect_right(it, v):]:
                if (u * n + w) in lookup and (v * n + w) in lookup:
                    if ctx._label_slot_ok(u, v, w):
                        yield (u, v, w)
        return
    if spec.family == DIRECTED:
        table, trans, width = motifs.directed_triangle_table(), _DIR_TRANS, 3
    else:
        table, trans, width = motifs.signed_triangle_table(), _SIGNED_TRANS, 4
    names = (
        [m.name for m in motifs.DIRECTED_CLASSES]
        if spec.family == DIRECTED
        else [m.name for m in motifs.SIGNED_CLASSES]
    )
    target = names.index(spec.motif.name)
    for eid, (u, v) in enumerate(pairs):
        r1 = trans[rel[eid]]
        if r1 < 0:
            continue
        au, av = adj[u], adj[v]
        it = au if len(au) <= len(av) else av
        for w in it[bisect_right(it, v):]:
            pk2 = lookup.get(u * n + w)
            if pk2 is None:
                continue
            pk3 = lookup.get(v * n + w)
            if pk3 is None:
                continue
            r2 = trans[pk2 & 15]
            r3 = trans[pk3 & 15]
            if r2 < 0 or r3 < 0:
                continue
            entry = table[(r1 * width + r2) * width + r3]
            if entry is not None and entry[0] == target:
                yield (u, v, w)
