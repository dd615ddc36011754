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
Reading and validating input documents.

An input document is one JSON object with the keys "surfaces", "churros",
"edges", "window" and "tolerances". parse collects every problem it finds,
each with the line of the member it concerns, before raising a SchemaError.
The quotient graph is built last, so graph shape errors (BipartiteViolation,
OrientationViolation) surface only for documents that are otherwise valid.
"""

from collections import namedtuple
import json
import logging
import re

from .config import FIELD_FOR_KEY
from .errors import PreconditionError
from .groupings import (
    CHURRO,
    CORE_TAGS,
    WAFFLE,
    QuotientEdge,
    QuotientGraph,
    Vertex,
)
from .patterns import MAX_GENUS, CurveSpec, InvalidCurve, InvalidWindow, Window


class SchemaError(PreconditionError):
    """raised if an input document does not follow the schema"""

    def __init__(self, problems):
        super().__init__("%d problem(s): %s" % (len(problems), "; ".join(problems)))
        self.problems = problems


class InputLogger(logging.Logger):
    """A logger prefixing the file and line of the member being validated."""

    def __init__(self, name):
        super().__init__(name)
        self.filename = ""
        self.lineno = 0

    def set_position(self, filename, lineno):
        self.filename = filename
        self.lineno = lineno

    def _position(self, msg):
        return "%s:%d: %s" % (self.filename, self.lineno, msg)

    def warning(self, msg, *args, **kwargs):
        super().warning(self._position(msg), *args, **kwargs)

    def error(self, msg, *args, **kwargs):
        super().error(self._position(msg), *args, **kwargs)


oldClass = logging.getLoggerClass()
logging.setLoggerClass(InputLogger)
logger = logging.getLogger(__name__)
logging.setLoggerClass(oldClass)


TOP_KEYS = {"surfaces", "churros", "edges", "window", "tolerances"}
SURFACE_KEYS = {"id", "genus", "curves", "extra_curves"}
CURVE_KEYS = {"edge", "word", "label"}
CHURRO_KEYS = {"id", "core", "flap_families", "match"}
MATCH_KEYS = {"churro", "flaps"}
EDGE_KEYS = {"id", "waffle", "churro", "reflective", "coweight", "tau"}
WINDOW_KEYS = {"radius", "word_length_cap", "margin", "saturate"}

DERIVE = "derive"

WindowSpec = namedtuple("WindowSpec", ["window", "margin", "saturate"])
SurfaceSpec = namedtuple("SurfaceSpec", ["id", "genus", "curves", "extraCurves"])
SurfaceSpec.__doc__ = "curves maps edge ids to CurveSpec"
ChurroSpec = namedtuple("ChurroSpec", ["id", "core", "flapFamilies", "match"])
ChurroMatch = namedtuple("ChurroMatch", ["churro", "flaps"])
EdgeSpec = namedtuple("EdgeSpec", ["id", "waffle", "churro", "reflective", "coweight", "tau"])
InputSpec = namedtuple(
    "InputSpec", ["path", "surfaces", "churros", "edges", "window", "tolerances"]
)

DEFAULT_WINDOW = {"radius": 3.0, "word_length_cap": 4, "margin": None, "saturate": False}

_MEMBER = re.compile(r'"((?:[^"\\]|\\.)*)"\s*:\s*("(?:[^"\\]|\\.)*")?')


class _LineIndex:
    """line numbers of JSON members, found by scanning the raw text"""

    def __init__(self, text):
        self.keys = []
        self.ids = {}
        for match in _MEMBER.finditer(text):
            line = text.count("\n", 0, match.start()) + 1
            self.keys.append((match.group(1), line))
            if match.group(1) == "id" and match.group(2) is not None:
                self.ids.setdefault(json.loads(match.group(2)), line)

    def of_key(self, key, after=0):
        for name, line in self.keys:
            if name == key and line >= after:
                return line
        return after

    def of_id(self, entryId, section):
        return self.ids.get(entryId, self.of_key(section))


class _Problems:
    def __init__(self, path, lines):
        self.path = path
        self.lines = lines
        self.items = []

    def add(self, line, message, *args):
        text = message % args if args else message
        logger.set_position(self.path, line)
        logger.error(text)
        self.items.append("line %d: %s" % (line, text))

    def unknown_keys(self, entry, allowed, line, where):
        for key in sorted(set(entry) - allowed):
            self.add(self.lines.of_key(key, line), "unknown field '%s' in %s", key, where)


def _is_int(value):
    return isinstance(value, int) and not isinstance(value, bool)


def _is_number(value):
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _entries(document, key, problems):
    value = document.get(key)
    if not isinstance(value, list):
        problems.add(problems.lines.of_key(key), "'%s' must be a list", key)
        return []
    valid = []
    for position, entry in enumerate(value):
        if not isinstance(entry, dict):
            problems.add(problems.lines.of_key(key), "%s[%d] must be an object", key, position)
        elif not isinstance(entry.get("id"), str):
            problems.add(problems.lines.of_key(key), "%s[%d] needs a string id", key, position)
        else:
            valid.append(entry)
    return valid


def _window(document, problems):
    raw = dict(DEFAULT_WINDOW)
    given = document.get("window", {})
    line = problems.lines.of_key("window")
    if not isinstance(given, dict):
        problems.add(line, "'window' must be an object")
        given = {}
    problems.unknown_keys(given, WINDOW_KEYS, line, "window")
    raw.update({key: value for key, value in given.items() if key in WINDOW_KEYS})
    if not _is_number(raw["radius"]) or not _is_int(raw["word_length_cap"]):
        problems.add(line, "window radius must be a number and word_length_cap an integer")
        return None
    marginValid = raw["margin"] is None or _is_number(raw["margin"])
    if not marginValid or not isinstance(raw["saturate"], bool):
        problems.add(line, "window margin must be a number and saturate a boolean")
        return None
    try:
        window = Window(raw["radius"], raw["word_length_cap"])
    except InvalidWindow as ex:
        problems.add(line, str(ex))
        return None
    return WindowSpec(window, raw["margin"], raw["saturate"])


def _curve(entry, line, problems, where):
    word = entry.get("word")
    if not isinstance(word, list) or not all(_is_int(letter) for letter in word):
        problems.add(line, "%s: word must be a list of integers", where)
        return None
    label = entry.get("label")
    if label is not None and not isinstance(label, str):
        problems.add(line, "%s: label must be a string", where)
        return None
    try:
        return CurveSpec(word, label)
    except InvalidCurve as ex:
        problems.add(line, "%s: %s", where, ex)
        return None


def _surface(entry, problems):
    line = problems.lines.of_id(entry["id"], "surfaces")
    where = "surface '%s'" % entry["id"]
    problems.unknown_keys(entry, SURFACE_KEYS, line, where)
    genus = entry.get("genus")
    if not _is_int(genus) or not 2 <= genus <= MAX_GENUS:
        problems.add(line, "%s: genus must be an integer in 2..%d", where, MAX_GENUS)
    curves = {}
    for curveEntry in entry.get("curves", []):
        if not isinstance(curveEntry, dict) or not isinstance(curveEntry.get("edge"), str):
            problems.add(line, "%s: every curve needs an edge id", where)
            continue
        problems.unknown_keys(curveEntry, CURVE_KEYS, line, where)
        curve = _curve(curveEntry, line, problems, where)
        if curveEntry["edge"] in curves:
            problems.add(line, "%s: two curves for edge '%s'", where, curveEntry["edge"])
        elif curve is not None:
            curves[curveEntry["edge"]] = curve
    extra = []
    for curveEntry in entry.get("extra_curves", []):
        if not isinstance(curveEntry, dict):
            problems.add(line, "%s: extra curves must be objects", where)
            continue
        problems.unknown_keys(curveEntry, CURVE_KEYS - {"edge"}, line, where)
        curve = _curve(curveEntry, line, problems, where)
        if curve is not None:
            extra.append(curve)
    if isinstance(genus, int) and any(
        abs(letter) > 2 * genus for curve in list(curves.values()) + extra for letter in curve.word
    ):
        problems.add(line, "%s: curve letters must lie in +-1..%d", where, 2 * genus)
    return SurfaceSpec(entry["id"], genus, curves, tuple(extra))


def _churro(entry, problems):
    line = problems.lines.of_id(entry["id"], "churros")
    where = "churro '%s'" % entry["id"]
    problems.unknown_keys(entry, CHURRO_KEYS, line, where)
    core = entry.get("core", "Z")
    if core not in CORE_TAGS:
        problems.add(line, "%s: core must be one of %s", where, ", ".join(CORE_TAGS))
    families = entry.get("flap_families", {})
    if not isinstance(families, dict) or not all(
        _is_int(size) and size >= 1 for size in families.values()
    ):
        problems.add(line, "%s: flap_families maps edge ids to positive integers", where)
        families = {}
    match = entry.get("match")
    if match is not None:
        if (
            not isinstance(match, dict)
            or set(match) - MATCH_KEYS
            or not isinstance(match.get("churro"), str)
            or not isinstance(match.get("flaps"), dict)
        ):
            problems.add(line, "%s: match needs a churro id and a flaps object", where)
            match = None
        else:
            match = ChurroMatch(match["churro"], dict(match["flaps"]))
    return ChurroSpec(entry["id"], core, dict(families), match)


def _edge(entry, problems):
    line = problems.lines.of_id(entry["id"], "edges")
    where = "edge '%s'" % entry["id"]
    problems.unknown_keys(entry, EDGE_KEYS, line, where)
    for key in ("waffle", "churro"):
        if not isinstance(entry.get(key), str):
            problems.add(line, "%s: missing %s id", where, key)
    reflective = entry.get("reflective", False)
    if not isinstance(reflective, bool):
        problems.add(line, "%s: reflective must be true or false", where)
    coweight = entry.get("coweight", DERIVE)
    if coweight != DERIVE and not (_is_int(coweight) and coweight >= 1):
        problems.add(line, "%s: coweight must be a positive integer or \"derive\"", where)
    tau = entry.get("tau")
    if tau is not None and not (_is_number(tau) and tau > 0):
        problems.add(line, "%s: tau must be a positive number", where)
    return EdgeSpec(
        entry["id"], entry.get("waffle"), entry.get("churro"), reflective, coweight, tau
    )


def _unique(entries, what, problems):
    seen = set()
    for entry in entries:
        if entry.id in seen:
            problems.add(problems.lines.of_id(entry.id, what), "duplicate id '%s'", entry.id)
        seen.add(entry.id)


def _cross_references(spec, problems):
    lines = problems.lines
    ids = {s.id for s in spec.surfaces} | {c.id for c in spec.churros}
    churros = {churro.id: churro for churro in spec.churros}
    edges = {edge.id: edge for edge in spec.edges}
    for edge in spec.edges:
        for end in (edge.waffle, edge.churro):
            if isinstance(end, str) and end not in ids:
                problems.add(
                    lines.of_id(edge.id, "edges"),
                    "edge '%s': unknown vertex '%s'",
                    edge.id,
                    end,
                )
        if edge.coweight == DERIVE:
            churro = churros.get(edge.churro)
            if churro is None or edge.id not in churro.flapFamilies:
                problems.add(
                    lines.of_id(edge.id, "edges"),
                    "edge '%s': coweight \"derive\" needs flap_families['%s'] on its churro",
                    edge.id,
                    edge.id,
                )
    for surface in spec.surfaces:
        for edgeId in surface.curves:
            if edgeId not in edges or edges[edgeId].waffle != surface.id:
                problems.add(
                    lines.of_id(surface.id, "surfaces"),
                    "surface '%s': curve for '%s', which is no edge of this surface",
                    surface.id,
                    edgeId,
                )
    surfaces = {surface.id: surface for surface in spec.surfaces}
    for edge in spec.edges:
        surface = surfaces.get(edge.waffle)
        if edge.tau is None and surface is not None and edge.id not in surface.curves:
            problems.add(
                lines.of_id(edge.id, "edges"),
                "edge '%s': no tau given and no curve on '%s' to compute it",
                edge.id,
                edge.waffle,
            )
    for churro in spec.churros:
        if churro.match is None:
            continue
        other = churros.get(churro.match.churro)
        if other is None:
            problems.add(
                lines.of_id(churro.id, "churros"),
                "churro '%s': match with unknown churro '%s'",
                churro.id,
                churro.match.churro,
            )


def parse_document(text, path="<input>"):
    """
    validate the text of an input document

    Returns
    -------
    InputSpec

    Raises
    ------
    SchemaError
        listing all problems found.
    """
    lines = _LineIndex(text)
    problems = _Problems(path, lines)
    try:
        document = json.loads(text)
    except json.JSONDecodeError as ex:
        problems.add(ex.lineno, "not valid JSON: %s", ex.msg)
        raise SchemaError(problems.items) from ex
    if not isinstance(document, dict):
        problems.add(1, "the document must be a JSON object")
        raise SchemaError(problems.items)

    problems.unknown_keys(document, TOP_KEYS, 1, "the document")
    window = _window(document, problems)
    tolerances = document.get("tolerances", {})
    if not isinstance(tolerances, dict):
        problems.add(lines.of_key("tolerances"), "'tolerances' must be an object")
        tolerances = {}
    for key in sorted(set(tolerances) - set(FIELD_FOR_KEY)):
        problems.add(lines.of_key(key), "unknown tolerance '%s'", key)

    sections = {
        key: _entries(document, key, problems) for key in ("surfaces", "churros", "edges")
    }
    spec = InputSpec(
        path=path,
        surfaces=tuple(_surface(entry, problems) for entry in sections["surfaces"]),
        churros=tuple(_churro(entry, problems) for entry in sections["churros"]),
        edges=tuple(_edge(entry, problems) for entry in sections["edges"]),
        window=window,
        tolerances=dict(tolerances),
    )
    _unique(spec.surfaces + spec.churros, "surfaces", problems)
    _unique(spec.edges, "edges", problems)
    if not problems.items:
        _cross_references(spec, problems)
    if problems.items:
        raise SchemaError(problems.items)
    # bipartite and orientation errors
    quotient_graph(spec)
    logger.info(
        "%s: %d surfaces, %d churros, %d edges",
        path,
        len(spec.surfaces),
        len(spec.churros),
        len(spec.edges),
    )
    return spec


def parse(path):
    """
    read and validate an input document

    Raises
    ------
    SchemaError
    BipartiteViolation
    OrientationViolation
    """
    with open(path, "r", encoding="utf-8") as inputFile:
        text = inputFile.read()
    logger.info("opened file: %s", path)
    return parse_document(text, str(path))


def edge_coweight(spec, edge):
    """the coweight of an edge and whether it was derived"""
    if edge.coweight != DERIVE:
        return edge.coweight, False
    churro = next(churro for churro in spec.churros if churro.id == edge.churro)
    return churro.flapFamilies[edge.id], True


def quotient_graph(spec):
    """
    the quotient graph of an input

    Returns
    -------
    X : QuotientGraph
    derived : list of str
        ids of edges whose coweight was derived from flap families.
    """
    vertices = [Vertex(surface.id, WAFFLE) for surface in spec.surfaces]
    vertices += [Vertex(churro.id, CHURRO) for churro in spec.churros]
    edges = []
    derived = []
    for edge in spec.edges:
        coweight, wasDerived = edge_coweight(spec, edge)
        if wasDerived:
            derived.append(edge.id)
        edges.append(QuotientEdge(edge.id, edge.waffle, edge.churro, edge.reflective, coweight))
    return QuotientGraph(vertices, edges), derived
