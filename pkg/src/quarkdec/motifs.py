"""Catalog of supported motifs and their orbit structure.

Three families are supported:

* ``directed``   -- the seven 3-node motifs over unidirectional and atomic
                    bidirectional edges (cycle, acyclic, out+, in+, cycle+,
                    cycle++, reciprocal);
* ``signed``     -- the twelve 3-node motifs over signed unidirectional
                    edges (four cycle sign-groups, eight acyclic variants);
* ``clique``     -- undirected triangles and 4-cliques, optionally with a
                    node-label multiset (e.g. tri:FFM, clique4:FFFM).

Orbits of unit positions (nodes, edges, triangles) inside a motif are
computed by exhaustive automorphism enumeration over the motif's node
permutations, respecting edge kinds, signs, and node labels.  Orbit ids are
numbered by the lexicographically smallest position in each orbit.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .errors import ConfigurationError

DIRECTED = "directed"
SIGNED = "signed"
CLIQUE = "clique"

# Oriented pair relations.  "o": first->second, "i": second->first,
# "b": bidirectional, "u": undirected; signed arcs carry their sign.
_FLIP = {
    "o": "i", "i": "o", "b": "b", "u": "u",
    "o+": "i+", "o-": "i-", "i+": "o+", "i-": "o-",
}


class UnitKind(enum.Enum):
    """The small motif that receives quark numbers."""

    NODE = "node"
    EDGE = "edge"
    TRIANGLE = "tri"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class CanonicalMotif:
    """A motif class as a concrete little graph on nodes 0..size-1."""

    name: str
    family: str
    size: int
    pair_rels: tuple  # ((i, j, rel), ...) with i < j
    labels: Optional[tuple] = None

    def rel(self, a, b):
        """Oriented relation from a to b, or None if the pair is unconnected."""
        key = (a, b) if a < b else (b, a)
        for i, j, rel in self.pair_rels:
            if (i, j) == key:
                return rel if a < b else _FLIP[rel]
        return None

    @property
    def is_vanilla(self):
        return self.labels is None or all(lab is None for lab in self.labels)

    def __str__(self):
        return self.name


def _motif(name, family, size, rels, labels=None):
    return CanonicalMotif(name, family, size, tuple(rels), labels)


def _directed_catalog():
    mk = lambda name, r01, r02, r12: _motif(
        name, DIRECTED, 3, [(0, 1, r01), (0, 2, r02), (1, 2, r12)]
    )
    return [
        mk("cycle", "o", "i", "o"),
        mk("acyclic", "o", "o", "o"),
        mk("out+", "o", "o", "b"),
        mk("in+", "i", "i", "b"),
        mk("cycle+", "o", "b", "o"),
        mk("cycle++", "o", "b", "b"),
        mk("reciprocal", "b", "b", "b"),
    ]


def _signed_catalog():
    out = []
    # Cycle 0->1->2->0; the sign group is rotation-invariant so any placement
    # of the multiset gives the same class.
    for name, signs in [
        ("cycle+++", "+++"), ("cycle++-", "++-"),
        ("cycle+--", "+--"), ("cycle---", "---"),
    ]:
        s01, s12, s20 = signs
        out.append(_motif(name, SIGNED, 3, [
            (0, 1, "o" + s01), (0, 2, "i" + s20), (1, 2, "o" + s12)]))
    # Acyclic 0->1, 0->2, 1->2.  Variant letter = position of the odd sign
    # among (source->middle, source->sink, middle->sink) = (a, b, c).
    variants = [
        ("acyclic+++", "+++"),
        ("acyclic++-a", "-++"), ("acyclic++-b", "+-+"), ("acyclic++-c", "++-"),
        ("acyclic+--a", "+--"), ("acyclic+--b", "-+-"), ("acyclic+--c", "--+"),
        ("acyclic---", "---"),
    ]
    for name, signs in variants:
        sa, sb, sc = signs
        out.append(_motif(name, SIGNED, 3, [
            (0, 1, "o" + sa), (0, 2, "o" + sb), (1, 2, "o" + sc)]))
    return out


def _clique_motif(size, labels):
    rels = [(i, j, "u") for i in range(size) for j in range(i + 1, size)]
    base = "tri" if size == 3 else "clique4"
    if labels is None:
        return _motif(base, CLIQUE, size, rels)
    labels = tuple(sorted(labels))
    return _motif(f"{base}:{''.join(labels)}", CLIQUE, size, rels, labels)


DIRECTED_CLASSES = _directed_catalog()
SIGNED_CLASSES = _signed_catalog()
DIRECTED_BY_NAME = {m.name: m for m in DIRECTED_CLASSES}
SIGNED_BY_NAME = {m.name: m for m in SIGNED_CLASSES}
VANILLA_TRIANGLE = _clique_motif(3, None)
VANILLA_CLIQUE4 = _clique_motif(4, None)


def labeled_triangle(labels):
    if len(labels) != 3:
        raise ValueError("labeled triangle needs exactly 3 labels")
    return _clique_motif(3, labels)


def labeled_clique4(labels):
    if len(labels) != 4:
        raise ValueError("labeled 4-clique needs exactly 4 labels")
    return _clique_motif(4, labels)


def parse_motif(name):
    """Resolve a CLI motif name to its catalog entry.

    Accepted: the seven directed names, the twelve signed names, ``tri`` and
    ``clique4`` (vanilla), and labeled forms like ``tri:FFM`` or
    ``clique4:F,F,M,M`` (comma form for multi-character labels).
    """
    text = name.strip()
    if ":" in text:
        base, _, labs = text.partition(":")
        labels = labs.split(",") if "," in labs else list(labs)
        labels = [lab for lab in labels if lab]
        if base == "tri":
            return labeled_triangle(labels)
        if base == "clique4":
            return labeled_clique4(labels)
        raise ValueError(f"unknown labeled motif base {base!r}")
    low = text.lower()
    if low == "tri":
        return VANILLA_TRIANGLE
    if low == "clique4":
        return VANILLA_CLIQUE4
    if low in DIRECTED_BY_NAME:
        return DIRECTED_BY_NAME[low]
    if low in SIGNED_BY_NAME:
        return SIGNED_BY_NAME[low]
    raise ValueError(f"unknown motif {name!r}")


def list_motifs(family=None):
    names = [m.name for m in DIRECTED_CLASSES + SIGNED_CLASSES]
    names += [VANILLA_TRIANGLE.name, VANILLA_CLIQUE4.name]
    if family is None:
        return names
    pool = {
        DIRECTED: [m.name for m in DIRECTED_CLASSES],
        SIGNED: [m.name for m in SIGNED_CLASSES],
        CLIQUE: [VANILLA_TRIANGLE.name, VANILLA_CLIQUE4.name],
    }
    return pool[family]


# -- automorphisms and orbits ------------------------------------------------


def automorphisms(motif):
    """All node permutations of the motif that preserve relations and labels."""
    nodes = range(motif.size)
    out = []
    for perm in itertools.permutations(nodes):
        if motif.labels is not None and any(
            motif.labels[perm[i]] != motif.labels[i] for i in nodes
        ):
            continue
        if all(
            motif.rel(perm[a], perm[b]) == motif.rel(a, b)
            for a in nodes
            for b in nodes
            if a < b
        ):
            out.append(perm)
    return out


def unit_positions(motif, unit):
    """Occurrences of the vanilla unit inside the motif, as sorted node tuples."""
    nodes = range(motif.size)
    if unit is UnitKind.NODE:
        return [(i,) for i in nodes]
    if unit is UnitKind.EDGE:
        return [
            (i, j) for i in nodes for j in nodes
            if i < j and motif.rel(i, j) is not None
        ]
    if unit is UnitKind.TRIANGLE:
        return [
            trip for trip in itertools.combinations(nodes, 3)
            if all(motif.rel(a, b) is not None for a, b in itertools.combinations(trip, 2))
        ]
    raise ValueError(f"unknown unit {unit!r}")


@dataclass(frozen=True, eq=False)
class OrbitTable:
    """Orbit partition of unit positions under the motif's automorphisms."""

    positions: tuple
    orbit_of: dict
    orbit_members: tuple

    @property
    def orbit_count(self):
        return len(self.orbit_members)


def compute_orbits(unit, motif):
    positions = unit_positions(motif, unit)
    autos = automorphisms(motif)
    reach = {p: {p} for p in positions}
    for sigma in autos:
        for p in positions:
            reach[p].add(tuple(sorted(sigma[x] for x in p)))
    orbits = []
    seen = set()
    for p in sorted(positions):
        if p in seen:
            continue
        members = tuple(sorted(reach[p]))
        orbits.append(members)
        seen.update(members)
    orbit_of = {}
    for oid, members in enumerate(orbits):
        for p in members:
            orbit_of[p] = oid
    return OrbitTable(tuple(sorted(positions)), orbit_of, tuple(orbits))


# -- the (unit, motif) pair driving a decomposition ---------------------------


@dataclass(frozen=True, eq=False)
class MotifSpec:
    """The decomposition parameters: a vanilla unit inside a motif class.

    Instances are interned by ``make_spec``; compare by identity.
    """

    unit: UnitKind
    motif: CanonicalMotif
    orbit_table: OrbitTable
    node_orbit_table: OrbitTable

    @property
    def units_per_motif(self):
        return len(self.orbit_table.positions)

    @property
    def orbit_count(self):
        return self.orbit_table.orbit_count

    @property
    def node_orbit_count(self):
        return self.node_orbit_table.orbit_count

    @property
    def family(self):
        return self.motif.family

    @property
    def requires_signs(self):
        return self.motif.family == SIGNED

    @property
    def requires_labels(self):
        return self.motif.labels is not None

    def __str__(self):
        return f"{self.unit.value}-in-{self.motif.name}"


@lru_cache(maxsize=None)
def _make_spec_cached(unit, motif):
    if motif.size == 3 and unit is UnitKind.TRIANGLE:
        raise ConfigurationError(
            "triangle units pair with 4-clique motifs, not 3-node motifs"
        )
    if motif.size == 4 and unit is not UnitKind.TRIANGLE:
        raise ConfigurationError("4-clique motifs require the triangle unit")
    table = compute_orbits(unit, motif)
    node_table = compute_orbits(UnitKind.NODE, motif)
    spec = MotifSpec(unit, motif, table, node_table)
    assert spec.units_per_motif >= 2
    return spec


def make_spec(unit, motif):
    """Build a MotifSpec, validating the unit/motif pairing."""
    if isinstance(motif, str):
        motif = parse_motif(motif)
    if isinstance(unit, str):
        unit = UnitKind(unit)
    return _make_spec_cached(unit, motif)


def default_unit(motif):
    return UnitKind.TRIANGLE if motif.size == 4 else UnitKind.EDGE


# -- classification of concrete node sets -------------------------------------


def _concrete_rels(graph, nodes):
    """Oriented relation descriptors among ``nodes`` in local indexing.

    Returns None if some pair carries two opposite unidirectional arcs (not
    representable as a single induced relation and hence matching no class).
    """
    rels = {}
    for a in range(len(nodes)):
        for b in range(a + 1, len(nodes)):
            out_val, in_val, bi = graph.pair_relation(nodes[a], nodes[b])
            if bi:
                rels[(a, b)] = "b"
            elif out_val is not None and in_val is not None:
                return None
            elif out_val is not None:
                rels[(a, b)] = ("o" + ("+" if out_val > 0 else "-")) if graph.is_signed else "o"
            elif in_val is not None:
                rels[(a, b)] = ("i" + ("+" if in_val > 0 else "-")) if graph.is_signed else "i"
            else:
                rels[(a, b)] = None
    return rels


def _match(rels, size, candidates, labels=None):
    """First (motif, mapping) whose structure matches ``rels`` under some
    node bijection; mapping[x] is the canonical node for local node x."""
    def local_rel(a, b):
        return rels[(a, b)] if a < b else (_FLIP[r] if (r := rels[(b, a)]) else None)

    for motif in candidates:
        for perm in itertools.permutations(range(size)):
            if labels is not None and motif.labels is not None and any(
                motif.labels[perm[x]] != labels[x] for x in range(size)
            ):
                continue
            if all(
                local_rel(a, b) == motif.rel(perm[a], perm[b])
                for a in range(size)
                for b in range(a + 1, size)
            ):
                return motif, perm
    return None, None


def classify_directed_triangle(graph, u, v, w):
    """Directed triangle class of {u, v, w}, or None if not an induced triangle.

    The result is invariant under permutation of the arguments.
    """
    if len({u, v, w}) != 3:
        raise ValueError("nodes must be distinct")
    if graph.is_signed:
        raise ConfigurationError("directed classification needs an unsigned graph")
    rels = _concrete_rels(graph, (u, v, w))
    if rels is None or any(r is None for r in rels.values()):
        return None
    motif, _ = _match(rels, 3, DIRECTED_CLASSES)
    return motif.name if motif else None


def classify_signed_triangle(graph, u, v, w):
    """Signed triangle class of {u, v, w}, or None."""
    if len({u, v, w}) != 3:
        raise ValueError("nodes must be distinct")
    if not graph.is_signed:
        raise ConfigurationError("signed classification needs a signed graph")
    rels = _concrete_rels(graph, (u, v, w))
    if rels is None or any(r is None for r in rels.values()):
        return None
    motif, _ = _match(rels, 3, SIGNED_CLASSES)
    return motif.name if motif else None


def match_labeled_clique(graph, nodes, motif):
    """True iff ``nodes`` form an undirected clique matching the class labels.

    Directions are ignored; for a vanilla class only the clique structure
    counts.
    """
    nodes = tuple(nodes)
    if len(nodes) != motif.size or len(set(nodes)) != motif.size:
        return False
    for a, b in itertools.combinations(nodes, 2):
        if not graph.connected(a, b):
            return False
    if motif.labels is None:
        return True
    if graph.labels is None:
        raise ConfigurationError("labeled motif on an unlabeled graph")
    have = [graph.labels[x] for x in nodes]
    if None in have:
        return False
    return sorted(have) == list(motif.labels)


def instance_units_with_orbits(graph, nodes, spec):
    """For an N instance given by ``nodes``, the unit instances it contains
    with their orbit ids, or None if the nodes are not an instance of the
    spec's motif.  Brute-force isomorphism matching; used by the reference
    implementation.
    """
    nodes = tuple(sorted(nodes))
    motif = spec.motif
    if motif.family == CLIQUE:
        if not _is_clique(graph, nodes):
            return None
        if motif.labels is not None:
            if graph.labels is None:
                raise ConfigurationError("labeled motif on an unlabeled graph")
            labels = tuple(graph.labels[x] for x in nodes)
            if None in labels:
                return None
            rels = {
                (a, b): "u"
                for a in range(len(nodes))
                for b in range(a + 1, len(nodes))
            }
            matched, perm = _match(rels, motif.size, [motif], labels=labels)
            if matched is None:
                return None
        else:
            perm = tuple(range(motif.size))
    else:
        rels = _concrete_rels(graph, nodes)
        if rels is None or any(r is None for r in rels.values()):
            return None
        matched, perm = _match(rels, motif.size, [motif])
        if matched is None:
            return None
    out = []
    for pos in unit_positions(motif, spec.unit):
        # pos is in canonical coordinates; pull back through the mapping.
        local = tuple(sorted(x for x in range(motif.size) if perm[x] in pos))
        member = tuple(sorted(nodes[x] for x in local))
        out.append((member, spec.orbit_table.orbit_of[pos]))
    return out


def _is_clique(graph, nodes):
    return all(
        graph.connected(a, b) for a, b in itertools.combinations(nodes, 2)
    )


# -- fast classification tables for the enumeration engine -------------------

_DIR_REL_CODES = {"o": 0, "i": 1, "b": 2}
_SIGNED_REL_CODES = {"o+": 0, "o-": 1, "i+": 2, "i-": 3}


def _build_table(rel_codes, classes, class_ids):
    """Exhaustive table over ordered relation triples ((a,b),(a,c),(b,c)).

    Each entry holds (class_id, edge orbit ids for pairs (a,b),(a,c),(b,c),
    node orbit ids for (a,b,c)), or None for combinations matching no class.
    """
    code_to_rel = {v: k for k, v in rel_codes.items()}
    width = len(rel_codes)
    table = [None] * (width ** 3)
    edge_tables = {m.name: compute_orbits(UnitKind.EDGE, m) for m in classes}
    node_tables = {m.name: compute_orbits(UnitKind.NODE, m) for m in classes}
    for r_ab in range(width):
        for r_ac in range(width):
            for r_bc in range(width):
                rels = {
                    (0, 1): code_to_rel[r_ab],
                    (0, 2): code_to_rel[r_ac],
                    (1, 2): code_to_rel[r_bc],
                }
                motif, perm = _match(rels, 3, classes)
                if motif is None:
                    continue
                et = edge_tables[motif.name]
                nt = node_tables[motif.name]
                orbit_pair = lambda a, b: et.orbit_of[tuple(sorted((perm[a], perm[b])))]
                entry = (
                    class_ids[motif.name],
                    orbit_pair(0, 1), orbit_pair(0, 2), orbit_pair(1, 2),
                    nt.orbit_of[(perm[0],)], nt.orbit_of[(perm[1],)], nt.orbit_of[(perm[2],)],
                )
                table[(r_ab * width + r_ac) * width + r_bc] = entry
    return table


@lru_cache(maxsize=None)
def directed_triangle_table():
    ids = {m.name: i for i, m in enumerate(DIRECTED_CLASSES)}
    return _build_table(_DIR_REL_CODES, DIRECTED_CLASSES, ids)


@lru_cache(maxsize=None)
def signed_triangle_table():
    ids = {m.name: i for i, m in enumerate(SIGNED_CLASSES)}
    table = _build_table(_SIGNED_REL_CODES, SIGNED_CLASSES, ids)
    assert all(entry is not None for entry in table)
    return table


# -- orbit attribution metadata for role profiles -----------------------------


@dataclass(frozen=True)
class EdgeOrbitAttribution:
    """How an edge orbit's score maps onto the node orbits of its endpoints.

    ``kind`` is one of:
      * "directed": endpoints resolved by arc direction (tail, head orbits);
      * "label":    endpoints resolved by node label ({label: node orbit});
      * "symmetric": both endpoints share one node orbit;
      * "ambiguous": a symmetric edge joins two distinct node orbits, which
        cannot be told apart from quark numbers alone.
    """

    kind: str
    data: tuple


def edge_orbit_attributions(spec):
    """Per edge-orbit endpoint attribution rules for a VanillaEdge spec."""
    if spec.unit is not UnitKind.EDGE:
        raise ConfigurationError("role profiles need an edge unit")
    motif = spec.motif
    node_orbit = spec.node_orbit_table.orbit_of
    out = []
    for members in spec.orbit_table.orbit_members:
        i, j = members[0]
        rel = motif.rel(i, j)
        oi, oj = node_orbit[(i,)], node_orbit[(j,)]
        if rel in ("o", "i") or (rel and rel[0] in "oi" and len(rel) == 2):
            tail, head = (i, j) if rel.startswith("o") else (j, i)
            out.append(
                EdgeOrbitAttribution("directed", (node_orbit[(tail,)], node_orbit[(head,)]))
            )
        elif motif.labels is not None and motif.labels[i] != motif.labels[j]:
            out.append(
                EdgeOrbitAttribution(
                    "label", ((motif.labels[i], oi), (motif.labels[j], oj))
                )
            )
        elif oi == oj:
            out.append(EdgeOrbitAttribution("symmetric", (oi,)))
        else:
            out.append(EdgeOrbitAttribution("ambiguous", (oi, oj)))
    return tuple(out)


def orbit_legend(spec):
    """Human-readable description of each unit orbit, for CSV headers."""
    lines = []
    for oid, members in enumerate(spec.orbit_table.orbit_members):
        pos = ",".join("(" + "-".join(map(str, p)) + ")" for p in members)
        lines.append(f"orbit {oid}: positions {pos} of {spec.motif.name}")
    return lines
