# -*- coding: utf-8 -*-

# Copyright 2026 The wafflecert developers

# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.

# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.

# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.

"""
Quotient graphs of churro/waffle decompositions and their groupings.

A quotient graph is bipartite: waffle vertices (surfaces), churro vertices
(cyclic pieces) and one edge per flap family, always directed from its waffle
to its churro. Each edge carries a reflectivity flag, from which its weight
(1/2 or 1) is derived, and a coweight (the cardinality of the flap family).

The functions in here decide whether the graph admits a flat discrete
grouping: augment by low power groups along a spanning tree, compare the two
stabilizer descriptors on every remaining edge, and fall back to the balance
condition for an obstruction. Everything is exact; no floats are used.

Example Usage:
>>> X = QuotientGraph(
...     [Vertex("w1", WAFFLE), Vertex("c", CHURRO), Vertex("w2", WAFFLE)],
...     [QuotientEdge("e1", "w1", "c", False, 2), QuotientEdge("e2", "w2", "c", False, 3)],
... )
>>> augment_tree(X).vertices["w1"].flapContribution.order
3
>>> isinstance(augment_graph(X), Certificate)
True
"""

from collections import namedtuple, deque
from fractions import Fraction
import logging
import math

import networkx as nx
from networkx.utils import UnionFind
from treelib import Tree

from .errors import PreconditionError, ComputationError
from .lowpower import TRIVIAL, LowPowerGroup, lowpower, lp_sum, lp_quotient, lp_difference

logger = logging.getLogger(__name__)

WAFFLE = "waffle"
CHURRO = "churro"

Vertex = namedtuple("Vertex", ["id", "kind"])


class QuotientEdge(
    namedtuple(
        "QuotientEdge", ["id", "waffle", "churro", "reflective", "coweight", "lpOrder"]
    )
):
    """one flap family: the edge waffle -> churro"""

    __slots__ = ()

    def __new__(cls, id, waffle, churro, reflective, coweight, lpOrder=None):
        # pylint: disable=redefined-builtin
        if isinstance(coweight, bool) or int(coweight) != coweight or coweight < 1:
            raise PreconditionError("edge '%s': coweight must be a positive integer" % id)
        if lpOrder is None:
            lpOrder = coweight
        return super().__new__(
            cls, id, waffle, churro, bool(reflective), int(coweight), int(lpOrder)
        )


class BipartiteViolation(PreconditionError):
    """raised if an edge does not join a waffle to a churro"""

    def __init__(self, edgeId, message):
        super().__init__("edge '%s': %s" % (edgeId, message))
        self.edgeId = edgeId


class OrientationViolation(PreconditionError):
    """raised if an edge is directed from a churro to a waffle"""

    def __init__(self, edgeId):
        super().__init__("edge '%s' points from a churro to a waffle" % edgeId)
        self.edgeId = edgeId


class Disconnected(PreconditionError):
    """raised if the quotient graph is not connected"""

    def __init__(self, components):
        super().__init__("quotient graph has %d components" % len(components))
        self.components = components


class NotATree(PreconditionError):
    """raised if a tree is required and the graph has a cycle"""


class NoSolution(PreconditionError):
    """raised if sheet numbers can't satisfy the degree equation on a cycle"""

    def __init__(self, cycle):
        super().__init__(
            "sheet numbers are inconsistent around the cycle %s" % " ".join(cycle.edges)
        )
        self.cycle = cycle


class NonIntegralSheets(PreconditionError):
    """raised if a prescribed sheet number propagates to a non-integer"""

    def __init__(self, vertexId, value):
        super().__init__("sheet number of '%s' would be %s" % (vertexId, value))
        self.vertexId = vertexId
        self.value = value


class IncompleteAssignment(PreconditionError):
    """raised if sheet numbers are missing for some vertices"""

    def __init__(self, missing):
        super().__init__("no sheet number for %s" % ", ".join(missing))
        self.missing = missing


class IndexOutOfRange(PreconditionError):
    """raised for a flap index outside 1..number of flap families"""


class InternalInconsistency(ComputationError):
    """raised if an exact identity that must hold fails"""


class QuotientGraph:
    """
    The bipartite quotient graph.

    Parameters
    ----------
    vertices : iterable of Vertex
        unique ids, kind WAFFLE or CHURRO.
    edges : iterable of QuotientEdge
        unique ids; parallel edges are allowed.

    Raises
    ------
    BipartiteViolation
        for unknown endpoints, a churro-churro or waffle-waffle edge, or an
        lpOrder differing from the coweight.
    OrientationViolation
        if the waffle field names a churro and the churro field a waffle.
    """

    def __init__(self, vertices, edges):
        self.vertices = {}
        for vertex in vertices:
            if vertex.kind not in (WAFFLE, CHURRO):
                raise PreconditionError("vertex '%s' has unknown kind %r" % vertex)
            if vertex.id in self.vertices:
                raise PreconditionError("duplicate vertex id '%s'" % vertex.id)
            self.vertices[vertex.id] = vertex

        self.edges = {}
        for edge in edges:
            self._check_edge(edge)
            if edge.id in self.edges:
                raise PreconditionError("duplicate edge id '%s'" % edge.id)
            self.edges[edge.id] = edge

        self._stars = {vid: [] for vid in self.vertices}
        for edge in self.sorted_edges():
            self._stars[edge.waffle].append(edge)
            self._stars[edge.churro].append(edge)

    def _check_edge(self, edge):
        for end in (edge.waffle, edge.churro):
            if end not in self.vertices:
                raise BipartiteViolation(edge.id, "unknown vertex '%s'" % end)
        kinds = (self.vertices[edge.waffle].kind, self.vertices[edge.churro].kind)
        if kinds == (CHURRO, WAFFLE):
            raise OrientationViolation(edge.id)
        if kinds != (WAFFLE, CHURRO):
            raise BipartiteViolation(edge.id, "joins two %s vertices" % kinds[0])
        if edge.lpOrder != edge.coweight:
            raise BipartiteViolation(
                edge.id,
                "flap group order %d differs from coweight %d" % (edge.lpOrder, edge.coweight),
            )

    def __repr__(self):
        return "QuotientGraph(%d vertices, %d edges)" % (len(self.vertices), len(self.edges))

    def sorted_vertices(self):
        return sorted(self.vertices)

    def sorted_edges(self):
        return [self.edges[eid] for eid in sorted(self.edges)]

    def star(self, vertexId):
        """edges incident to a vertex, sorted by id"""
        return list(self._stars[vertexId])

    def n_churro(self, churroId):
        """N_c, the product of the flap group orders over the star of c"""
        return math.prod(edge.lpOrder for edge in self._stars[churroId])

    def multigraph(self):
        graph = nx.MultiGraph()
        for vertex in self.vertices.values():
            graph.add_node(vertex.id, kind=vertex.kind)
        for edge in self.sorted_edges():
            graph.add_edge(edge.waffle, edge.churro, key=edge.id)
        return graph

    def is_connected(self):
        return bool(self.vertices) and nx.is_connected(self.multigraph())

    def is_tree(self):
        return self.is_connected() and len(self.edges) == len(self.vertices) - 1

    def replace_edge(self, edge):
        """a copy with one edge swapped for a modified one of the same id"""
        edges = dict(self.edges)
        edges[edge.id] = edge
        return QuotientGraph(self.vertices.values(), edges.values())


def weight(edge):
    """1/2 for reflective edges, 1 otherwise"""
    return Fraction(1, 2) if edge.reflective else Fraction(1)


def nu(edge):
    """cowt(e) / wt(e)"""
    return Fraction(edge.coweight) / weight(edge)


SpanningTree = namedtuple("SpanningTree", ["tree", "edges", "chords"])


def spanning_tree(X):
    """
    the lexicographically least spanning tree

    Kruskal over the edge ids in sorted order. The tree is returned as a
    treelib Tree rooted at the least vertex id; every node stores the id of the
    edge to its parent as data.

    Raises
    ------
    Disconnected
    """
    if not X.vertices:
        raise PreconditionError("empty quotient graph")
    components = UnionFind(X.sorted_vertices())
    treeEdges = []
    chords = []
    for edge in X.sorted_edges():
        if components[edge.waffle] == components[edge.churro]:
            chords.append(edge.id)
        else:
            components.union(edge.waffle, edge.churro)
            treeEdges.append(edge.id)

    parts = sorted(sorted(part) for part in components.to_sets())
    if len(parts) > 1:
        raise Disconnected(parts)

    adjacency = _adjacency(X, treeEdges)
    root = X.sorted_vertices()[0]
    tree = Tree()
    tree.create_node(tag=root, identifier=root, data=None)
    queue = deque([root])
    while queue:
        current = queue.popleft()
        for edgeId, neighbour in adjacency[current]:
            if neighbour not in tree:
                tree.create_node(tag=neighbour, identifier=neighbour, parent=current, data=edgeId)
                queue.append(neighbour)
    return SpanningTree(tree, tuple(treeEdges), tuple(chords))


def _adjacency(X, edgeIds):
    adjacency = {vid: [] for vid in X.vertices}
    for edgeId in sorted(edgeIds):
        edge = X.edges[edgeId]
        adjacency[edge.waffle].append((edgeId, edge.churro))
        adjacency[edge.churro].append((edgeId, edge.waffle))
    return adjacency


def _component(adjacency, start, excluded):
    seen = {start}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        for edgeId, neighbour in adjacency[current]:
            if edgeId != excluded and neighbour not in seen:
                seen.add(neighbour)
                queue.append(neighbour)
    return seen


def _tree_path(tree, start, end):
    """vertices and edge ids along the tree from start to end"""
    upStart = list(tree.rsearch(start))
    upEnd = list(tree.rsearch(end))
    onEndBranch = set(upEnd)
    meet = next(vid for vid in upStart if vid in onEndBranch)
    head = upStart[: upStart.index(meet) + 1]
    tail = upEnd[: upEnd.index(meet)]
    vertices = head + tail[::-1]
    edges = [tree[vid].data for vid in upStart[: upStart.index(meet)]]
    edges += [tree[vid].data for vid in tail[::-1]]
    return vertices, edges


VertexAugmentation = namedtuple("VertexAugmentation", ["flapContribution", "reflectorBank"])
VertexAugmentation.__doc__ = "A_v = flap contribution (+) Z2^reflectorBank"

Augmentation = namedtuple("Augmentation", ["vertices", "treeEdges"])


def augmentation_order(vertexAugmentation):
    return vertexAugmentation.flapContribution.order * 2**vertexAugmentation.reflectorBank


def _augment(X, treeEdgeIds):
    """
    per-vertex augmentation along the given tree edges

    A tree edge e points to v if v lies on the churro side of e in the tree,
    and away from v otherwise. Edges pointing away contribute L(N_c)/L(cowt e)
    to the flap contribution, where N_c runs over the full star of c;
    reflective edges pointing to v add one Z2 to the reflector bank.
    """
    adjacency = _adjacency(X, treeEdgeIds)
    flaps = {vid: [] for vid in X.vertices}
    banks = {vid: 0 for vid in X.vertices}
    for edgeId in sorted(treeEdgeIds):
        edge = X.edges[edgeId]
        churroSide = _component(adjacency, edge.churro, excluded=edgeId)
        contribution = lp_quotient(lowpower(X.n_churro(edge.churro)), lowpower(edge.coweight))
        for vid in X.vertices:
            if vid in churroSide:
                banks[vid] += int(edge.reflective)
            else:
                flaps[vid].append(contribution)
    vertices = {
        vid: VertexAugmentation(lp_sum(*flaps[vid]), banks[vid]) for vid in sorted(X.vertices)
    }
    return Augmentation(vertices, tuple(sorted(treeEdgeIds)))


def augment_tree(X):
    """
    the augmentation of a tree-shaped quotient graph

    Raises
    ------
    NotATree
    """
    if not X.is_tree():
        raise NotATree("%r is not a tree" % X)
    return _augment(X, list(X.edges))


class StabilizerDescriptor(
    namedtuple("StabilizerDescriptor", ["core", "tauFlag", "lpPart", "reflectors"])
):
    """
    Stabilizer of an edge strand seen from one side.

    core names the infinite cyclic part; tauFlag marks the involution of a
    reflective edge; lpPart and reflectors (count of Z2 factors) together form
    the finite part.
    """

    __slots__ = ()

    @property
    def finite_part(self):
        return lp_sum(self.lpPart, LowPowerGroup([2] * self.reflectors))

    @property
    def totalOrder(self):
        return self.lpPart.order * 2**self.reflectors

    def to_json(self):
        return {
            "core": self.core,
            "tau": self.tauFlag,
            "lp_order": self.lpPart.order,
            "lp_primes": list(self.lpPart.primes),
            "reflectors": self.reflectors,
        }


EDGE_CORE = "Z_e"


def edge_stabilizer_pair(edge, X, A):
    """
    the waffle side and churro side stabilizer descriptors of an edge

    Parameters
    ----------
    edge : QuotientEdge or str
    X : QuotientGraph
    A : Augmentation

    Returns
    -------
    waffleSide, churroSide : StabilizerDescriptor
    """
    if not isinstance(edge, QuotientEdge):
        edge = X.edges[edge]
    atWaffle = A.vertices[edge.waffle]
    atChurro = A.vertices[edge.churro]
    waffleSide = StabilizerDescriptor(
        EDGE_CORE,
        edge.reflective,
        atWaffle.flapContribution,
        atWaffle.reflectorBank + int(edge.reflective),
    )
    otherFlaps = lp_quotient(lowpower(X.n_churro(edge.churro)), lowpower(edge.coweight))
    churroSide = StabilizerDescriptor(
        EDGE_CORE,
        edge.reflective,
        lp_sum(otherFlaps, atChurro.flapContribution),
        atChurro.reflectorBank,
    )
    return waffleSide, churroSide


def check_edge_iso(pair):
    """
    do the two descriptors describe isomorphic stabilizers

    Both finite parts are low power groups (Z2 is one), so they are isomorphic
    iff their total orders agree. The tau flags must agree and both sides must
    expose the distinguished Z_e.
    """
    waffleSide, churroSide = pair
    return (
        waffleSide.core == churroSide.core == EDGE_CORE
        and waffleSide.tauFlag == churroSide.tauFlag
        and waffleSide.totalOrder == churroSide.totalOrder
    )


def strict_edge_iso(pair):
    """lp parts and reflector counts agree separately"""
    waffleSide, churroSide = pair
    return (
        check_edge_iso(pair)
        and waffleSide.lpPart == churroSide.lpPart
        and waffleSide.reflectors == churroSide.reflectors
    )


def edge_iso_witness(pair):
    """the prime multisets in excess on the waffle and on the churro side"""
    waffleSide, churroSide = pair
    return lp_difference(waffleSide.finite_part, churroSide.finite_part)


class CycleWitness(
    namedtuple("CycleWitness", ["vertices", "edges", "oddProduct", "evenProduct"])
):
    """
    a cycle with its alternating nu products

    The cycle starts at the churro end of its least edge id and runs through
    that edge first; oddProduct multiplies nu over edges 1, 3, 5, ... of that
    order and evenProduct over edges 2, 4, ....
    """

    __slots__ = ()

    @property
    def balanced(self):
        return self.oddProduct == self.evenProduct

    def to_json(self):
        return {
            "vertices": list(self.vertices),
            "edges": list(self.edges),
            "odd_product": fraction_to_json(self.oddProduct),
            "even_product": fraction_to_json(self.evenProduct),
        }


def fraction_to_json(value):
    value = Fraction(value)
    if value.denominator == 1:
        return value.numerator
    return "%d/%d" % (value.numerator, value.denominator)


def _canonical_cycle(X, vertices, edges):
    """rotate and orient a closed walk, edges[k] joining vertices[k] and vertices[k+1]"""
    size = len(edges)
    k = min(range(size), key=lambda i: edges[i])
    if vertices[k] == X.edges[edges[k]].churro:
        order = [(k + i) % size for i in range(size)]
        cycleVertices = [vertices[i] for i in order]
        cycleEdges = [edges[i] for i in order]
    else:
        cycleVertices = [vertices[(k + 1 - i) % size] for i in range(size)]
        cycleEdges = [edges[(k - i) % size] for i in range(size)]
    odd = math.prod(nu(X.edges[e]) for e in cycleEdges[0::2])
    even = math.prod(nu(X.edges[e]) for e in cycleEdges[1::2])
    return CycleWitness(tuple(cycleVertices), tuple(cycleEdges), Fraction(odd), Fraction(even))


def fundamental_cycle(X, spanning, chordId):
    """the cycle closed by a chord over the spanning tree"""
    chord = X.edges[chordId]
    vertices, edges = _tree_path(spanning.tree, chord.churro, chord.waffle)
    # the walk closes from the waffle back to the churro through the chord
    return _canonical_cycle(X, vertices, edges + [chordId])


def cycle_balance(X):
    """
    the balance condition on a fundamental cycle basis

    Returns
    -------
    balanced : bool
    witnesses : list of CycleWitness
        the unbalanced fundamental cycles.

    Raises
    ------
    Disconnected
    """
    spanning = spanning_tree(X)
    witnesses = []
    for chordId in spanning.chords:
        cycle = fundamental_cycle(X, spanning, chordId)
        logger.debug("cycle %s: %s vs %s", cycle.edges, cycle.oddProduct, cycle.evenProduct)
        if not cycle.balanced:
            witnesses.append(cycle)
    return not witnesses, witnesses


def sheet_relation_check(X, S):
    """
    sht(waffle) * wt(e) == sht(churro) * cowt(e) on every edge

    Raises
    ------
    IncompleteAssignment
        if S lacks a vertex of X.
    """
    missing = [vid for vid in X.sorted_vertices() if vid not in S]
    if missing:
        raise IncompleteAssignment(missing)
    return all(
        Fraction(S[edge.waffle]) * weight(edge) == Fraction(S[edge.churro]) * edge.coweight
        for edge in X.sorted_edges()
    )


def solve_sheets(X, root=None, value=None):
    """
    propagate sheet numbers through the degree equation

    Parameters
    ----------
    X : QuotientGraph
    root : str, optional
        vertex to start from. The default is the least vertex id.
    value : int, optional
        sheet number of root. Without it the least positive integral
        solution is returned.

    Returns
    -------
    sheets : dict
        vertex id -> positive int.

    Raises
    ------
    NoSolution
        with the violating fundamental cycle.
    NonIntegralSheets
        if value forces a fractional sheet number somewhere.
    """
    spanning = spanning_tree(X)
    tree = spanning.tree
    if root is None:
        root = tree.root
    if root not in X.vertices:
        raise PreconditionError("unknown vertex '%s'" % root)

    sheets = {root: Fraction(1 if value is None else value)}
    adjacency = _adjacency(X, spanning.edges)
    queue = deque([root])
    while queue:
        current = queue.popleft()
        for edgeId, neighbour in adjacency[current]:
            if neighbour in sheets:
                continue
            edge = X.edges[edgeId]
            if current == edge.waffle:
                sheets[neighbour] = sheets[current] * weight(edge) / edge.coweight
            else:
                sheets[neighbour] = sheets[current] * edge.coweight / weight(edge)
            queue.append(neighbour)

    for chordId in spanning.chords:
        chord = X.edges[chordId]
        if sheets[chord.waffle] * weight(chord) != sheets[chord.churro] * chord.coweight:
            raise NoSolution(fundamental_cycle(X, spanning, chordId))

    if value is None:
        scale = math.lcm(*[s.denominator for s in sheets.values()])
        integral = {vid: int(s * scale) for vid, s in sheets.items()}
        common = math.gcd(*integral.values())
        return {vid: integral[vid] // common for vid in sorted(integral)}

    for vid in sorted(sheets):
        if sheets[vid].denominator != 1:
            raise NonIntegralSheets(vid, sheets[vid])
    return {vid: int(sheets[vid]) for vid in sorted(sheets)}


ChordRecord = namedtuple("ChordRecord", ["edgeId", "waffleSide", "churroSide", "matched"])

Certificate = namedtuple(
    "Certificate", ["augmentation", "spanningTree", "vertexOrders", "chords", "flatness"]
)
Certificate.__doc__ = "a flat discrete grouping was found"

Obstruction = namedtuple("Obstruction", ["cycle", "chord"])
Obstruction.__doc__ = "an unbalanced cycle, found through the failing chord"


def augment_graph(X):
    """
    search a flat discrete grouping for a connected quotient graph

    Augments along the lexicographically least spanning tree with the full
    flap factors, then compares both stabilizer descriptors of every chord.

    Returns
    -------
    Certificate or Obstruction
        an obstruction cites the first failing chord and its fundamental cycle,
        which is always unbalanced.

    Raises
    ------
    Disconnected
    InternalInconsistency
        if a tree edge fails the iso check or a failing chord closes a
        balanced cycle.
    """
    spanning = spanning_tree(X)
    A = _augment(X, spanning.edges)

    flatness = {}
    for edgeId in spanning.edges:
        pair = edge_stabilizer_pair(edgeId, X, A)
        if not strict_edge_iso(pair):
            raise InternalInconsistency("tree edge '%s' fails the stabilizer check" % edgeId)
        flatness[edgeId] = True

    chords = []
    for chordId in spanning.chords:
        pair = edge_stabilizer_pair(chordId, X, A)
        matched = check_edge_iso(pair)
        chords.append(ChordRecord(chordId, pair[0], pair[1], matched))
        if not matched:
            cycle = fundamental_cycle(X, spanning, chordId)
            if cycle.balanced:
                raise InternalInconsistency(
                    "chord '%s' fails on a balanced cycle %s" % (chordId, cycle.edges)
                )
            logger.info("chord %s closes an unbalanced cycle", chordId)
            return Obstruction(cycle, chordId)
        flatness[chordId] = True

    vertexOrders = {vid: augmentation_order(aug) for vid, aug in A.vertices.items()}
    logger.info("flat grouping found over %d chords", len(chords))
    return Certificate(A, spanning, vertexOrders, tuple(chords), flatness)


def certificate_to_json(certificate):
    return {
        "kind": "certificate",
        "spanning_tree": list(certificate.spanningTree.edges),
        "vertex_augmentations": {
            vid: {
                "flap_contribution": aug.flapContribution.to_json(),
                "reflector_bank": aug.reflectorBank,
                "order": certificate.vertexOrders[vid],
            }
            for vid, aug in sorted(certificate.augmentation.vertices.items())
        },
        "chords": [
            {
                "edge": record.edgeId,
                "waffle_side": record.waffleSide.to_json(),
                "churro_side": record.churroSide.to_json(),
                "matched": record.matched,
            }
            for record in certificate.chords
        ],
        "flat_edges": sorted(certificate.flatness),
    }


def obstruction_to_json(obstruction):
    return {"kind": "obstruction", "chord": obstruction.chord, "cycle": obstruction.cycle.to_json()}


CORE_TAGS = ("Z", "Z-semidirect-Z2")


class CoreFactor(namedtuple("CoreFactor", ["tag"])):
    """Z for an orientation preserving core, Z-semidirect-Z2 if the ends are swapped"""

    __slots__ = ()

    def __new__(cls, tag):
        if tag not in CORE_TAGS:
            raise PreconditionError("core factor must be one of %s, got %r" % (CORE_TAGS, tag))
        return super().__new__(cls, tag)


BasicChurroGroup = namedtuple("BasicChurroGroup", ["core", "flapFactor"])


def basic_churro_group(flapFamilySizes, core):
    """
    core factor together with one low power factor per flap family

    Parameters
    ----------
    flapFamilySizes : sequence of int
        n_k >= 1.
    core : CoreFactor or str
    """
    if not isinstance(core, CoreFactor):
        core = CoreFactor(core)
    factors = []
    for size in flapFamilySizes:
        if isinstance(size, bool) or int(size) != size or size < 1:
            raise PreconditionError("flap family sizes must be positive integers, got %r" % size)
        factors.append(lowpower(size))
    return BasicChurroGroup(core, tuple(factors))


def churro_group(X, churroId, core="Z"):
    """the basic churro group read off the star of a churro vertex"""
    if X.vertices[churroId].kind != CHURRO:
        raise PreconditionError("'%s' is not a churro" % churroId)
    return basic_churro_group([edge.lpOrder for edge in X.star(churroId)], core)


def flap_stabilizer(bcg, flapIndex, coreStab):
    """
    the stabilizer of a flap in the basic churro group

    All flap factors but the flap's own family survive.

    Parameters
    ----------
    bcg : BasicChurroGroup
    flapIndex : int
        1-based index of the flap family.
    coreStab : CoreFactor or str
        stabilizer of the flap in the core factor.
    """
    if not isinstance(coreStab, CoreFactor):
        coreStab = CoreFactor(coreStab)
    if not 1 <= flapIndex <= len(bcg.flapFactor):
        raise IndexOutOfRange(
            "flap index %d outside 1..%d" % (flapIndex, len(bcg.flapFactor))
        )
    others = [f for i, f in enumerate(bcg.flapFactor, start=1) if i != flapIndex]
    return StabilizerDescriptor(coreStab.tag, False, lp_sum(*others) if others else TRIVIAL, 0)
