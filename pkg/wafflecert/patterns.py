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
Closed surface groups and finite windows of their line patterns.

The surface group of genus g is realized by the side pairings of the regular
4g-gon with vertex angle 2 pi / 4g. A curve is a cyclically reduced word in
the generators a1, b1, ..., ag, bg, encoded as signed 1-based indices
(a1 = 1, b1 = 2, a2 = 3, ...; negative means inverse). The line pattern of a
set of curves is the set of axes of all their conjugates; a Window truncates
it to conjugators of bounded word length and lines meeting a hyperbolic ball
about i.

Example Usage:
>>> surface = standard_generators(2)
>>> window = Window(3.0, 2)
>>> pattern = generate_pattern(surface, [CurveSpec((1,), "a1")], window)
>>> all(line.orbitLabel == "a1" for line in pattern.lines)
True
"""

from collections import namedtuple
import logging
import math

import numpy as np

from .config import DEFAULTS
from .errors import PreconditionError, ComputationError
from .hyperbolic import (
    TWO_PI,
    BoundaryPoint,
    Geodesic,
    MobiusMap,
    NotHyperbolic,
    angle_gap,
    axis_and_translation_length,
)

logger = logging.getLogger(__name__)

MAX_GENUS = 6


class UnsupportedGenus(PreconditionError):
    """raised for genera above MAX_GENUS"""


class RelatorDefect(ComputationError):
    """raised if the generators fail the surface relator numerically"""

    def __init__(self, genus, defect):
        super().__init__("genus %d relator defect %.3g is too large" % (genus, defect))
        self.defect = defect


class DeterminantDefect(ComputationError):
    """raised if a side pairing is not unimodular within detTol"""

    def __init__(self, determinant):
        super().__init__("side pairing determinant %.15g differs from 1" % determinant)
        self.determinant = determinant


class InvalidCurve(PreconditionError):
    """raised for empty, non cyclically reduced or out of range curve words"""

    def __init__(self, label, message):
        super().__init__("curve '%s': %s" % (label, message))
        self.label = label


class InvalidWindow(PreconditionError):
    """raised for a non-positive radius or a negative word length cap"""


class NonHyperbolicCurve(PreconditionError):
    """raised if a curve word evaluates to a non-hyperbolic element"""

    def __init__(self, curve, trace):
        super().__init__(
            "curve '%s' has trace %.12g and is not hyperbolic" % (curve.label, trace)
        )
        self.curve = curve
        self.trace = trace


class Unsaturated(ComputationError):
    """raised if raising the word length cap keeps adding lines"""

    def __init__(self, window, added):
        super().__init__(
            "pattern not saturated at cap %d: %d new lines at cap %d"
            % (window.wordLengthCap - 1, added, window.wordLengthCap)
        )
        self.window = window
        self.added = added


SurfaceGroupPresentation = namedtuple(
    "SurfaceGroupPresentation", ["genus", "generators", "relatorDefect"]
)


def generator_name(letter):
    """a1, b1, a2, ... for positive letters; an uppercase name for inverses"""
    index = abs(letter) - 1
    name = "%s%d" % ("ab"[index % 2], index // 2 + 1)
    return name if letter > 0 else name.upper()


def _side_pairing(genus, j, length):
    """disc model matrix taking side j + 2 of the 4g-gon to side j"""

    def rot(phi):
        return np.diag([np.exp(0.5j * phi), np.exp(-0.5j * phi)])

    half = length / 2.0
    shift = np.array([[math.cosh(half), math.sinh(half)], [math.sinh(half), math.cosh(half)]])
    step = math.pi / (2.0 * genus)
    return rot(j * step) @ shift @ rot(math.pi - (j + 2) * step)


CAYLEY = np.array([[1.0, -1.0j], [1.0, 1.0j]])


def _to_upper_half_plane(discMatrix, detTol):
    upper = (np.linalg.inv(CAYLEY) @ discMatrix @ CAYLEY).real
    determinant = float(np.linalg.det(upper))
    if abs(determinant - 1.0) > detTol:
        raise DeterminantDefect(determinant)
    return MobiusMap.from_matrix(upper)


def standard_generators(genus, tol=DEFAULTS.relatorDefect, detTol=DEFAULTS.detTol):
    """
    side pairings of the regular 4g-gon

    Parameters
    ----------
    genus : int
        2 <= genus <= MAX_GENUS.
    tol : float, optional
        accepted deviation of [a1,b1]...[ag,bg] from the identity.
    detTol : float, optional
        accepted deviation of a side pairing determinant from 1.

    Returns
    -------
    SurfaceGroupPresentation
        generators ordered a1, b1, ..., ag, bg.

    Raises
    ------
    PreconditionError
        for genus < 2.
    UnsupportedGenus
        for genus > MAX_GENUS.
    RelatorDefect
        if the relator check fails.
    DeterminantDefect
        if a side pairing is not unimodular.
    """
    if isinstance(genus, bool) or int(genus) != genus or genus < 2:
        raise PreconditionError("surface groups need genus >= 2, got %r" % genus)
    if genus > MAX_GENUS:
        raise UnsupportedGenus("genus %d is above the supported %d" % (genus, MAX_GENUS))

    # distance from the center to a side midpoint
    apothem = math.acosh(1.0 / math.tan(math.pi / (4.0 * genus)))
    generators = []
    for m in range(genus):
        a = _to_upper_half_plane(_side_pairing(genus, 4 * m, 2.0 * apothem), detTol)
        b = _to_upper_half_plane(_side_pairing(genus, 4 * m + 1, 2.0 * apothem), detTol)
        b = b.inverse()
        generators.extend([a, b])

    relator = MobiusMap.identity()
    for m in range(genus):
        a, b = generators[2 * m], generators[2 * m + 1]
        relator = relator @ a @ b @ a.inverse() @ b.inverse()
    defect = min(
        float(np.max(np.abs(relator.matrix - np.eye(2)))),
        float(np.max(np.abs(relator.matrix + np.eye(2)))),
    )
    if defect > tol:
        raise RelatorDefect(genus, defect)
    logger.debug("genus %d generators, relator defect %.3g", genus, defect)
    return SurfaceGroupPresentation(genus, tuple(generators), defect)


def generator(surface, letter):
    """the Möbius map of a signed generator index"""
    if letter == 0 or abs(letter) > len(surface.generators):
        raise PreconditionError(
            "generator index %d outside +-1..%d" % (letter, len(surface.generators))
        )
    element = surface.generators[abs(letter) - 1]
    return element if letter > 0 else element.inverse()


def evaluate_word(surface, word):
    """product of the generators of a word, left to right"""
    result = MobiusMap.identity()
    for letter in word:
        result = result @ generator(surface, letter)
    return result


def free_reduce(word):
    reduced = []
    for letter in word:
        if reduced and reduced[-1] == -letter:
            reduced.pop()
        else:
            reduced.append(letter)
    return tuple(reduced)


def inverse_word(word):
    return tuple(-letter for letter in reversed(word))


class CurveSpec(namedtuple("CurveSpec", ["word", "label"])):
    """a closed curve as a cyclically reduced word"""

    __slots__ = ()

    def __new__(cls, word, label=None):
        word = tuple(int(letter) for letter in word)
        if label is None:
            label = "".join(generator_name(letter) for letter in word)
        if not word:
            raise InvalidCurve(label, "empty word")
        if 0 in word:
            raise InvalidCurve(label, "generator index 0")
        if free_reduce(word) != word or (len(word) > 1 and word[0] == -word[-1]):
            raise InvalidCurve(label, "word %s is not cyclically reduced" % (word,))
        return super().__new__(cls, word, label)


class Window(namedtuple("Window", ["radius", "wordLengthCap"])):
    """hyperbolic radius about i and the conjugator word length cap"""

    __slots__ = ()

    def __new__(cls, radius, wordLengthCap):
        if not radius > 0:
            raise InvalidWindow("window radius must be positive, got %r" % radius)
        if isinstance(wordLengthCap, bool) or int(wordLengthCap) != wordLengthCap:
            raise InvalidWindow("word length cap must be an integer")
        if wordLengthCap < 0:
            raise InvalidWindow("word length cap must not be negative")
        return super().__new__(cls, float(radius), int(wordLengthCap))


PatternLine = namedtuple("PatternLine", ["geodesic", "orbitLabel", "conjugatorWord"])


class LinePattern(namedtuple("LinePattern", ["lines"])):
    """lines of a window, in order of discovery"""

    __slots__ = ()

    def geodesics(self):
        return [line.geodesic for line in self.lines]

    def labels(self):
        return ["%s:%d" % (line.orbitLabel, i) for i, line in enumerate(self.lines)]


def _letters(genus):
    letters = []
    for index in range(1, 2 * genus + 1):
        letters.extend([index, -index])
    return letters


def _word_layers(surface, cap):
    """
    reduced words by length, as (words, matrices) numpy batches

    Each layer extends the previous one letter at a time, parent major, so
    every layer is sorted lexicographically in the letter order of _letters.
    """
    letters = _letters(surface.genus)
    stack = np.array([generator(surface, letter).matrix for letter in letters])
    inverseSlot = np.array([letters.index(-letter) for letter in letters])

    words = np.zeros((1, 0), dtype=int)
    matrices = np.eye(2)[np.newaxis]
    lastSlot = np.array([-1])
    yield words, matrices
    for _ in range(cap):
        product = matrices[:, np.newaxis] @ stack[np.newaxis]
        allowed = np.ones((len(words), len(letters)), dtype=bool)
        hasLast = lastSlot >= 0
        allowed[np.flatnonzero(hasLast), inverseSlot[lastSlot[hasLast]]] = False
        parent, slot = np.nonzero(allowed)
        words = np.concatenate([words[parent], np.array(letters)[slot][:, np.newaxis]], axis=1)
        matrices = product[parent, slot]
        # keep entries bounded, only the projective class matters
        matrices = matrices / np.max(np.abs(matrices), axis=(1, 2))[:, np.newaxis, np.newaxis]
        lastSlot = slot
        yield words, matrices


def _endpoint_angles(matrices, endpoints):
    """disc angles of the images of two boundary points, shape (n, 2)"""
    angles = []
    for point in endpoints:
        p, q = point.projective()
        image = matrices @ np.array([p, q])
        theta = np.mod(-2.0 * np.arctan2(image[:, 1], image[:, 0]), TWO_PI)
        angles.append(theta)
    return np.stack(angles, axis=1)


def _center_distance(angles):
    """distance from i to the geodesics with the given endpoint angles"""
    gap = np.abs(angles[:, 0] - angles[:, 1]) % TWO_PI
    gap = np.minimum(gap, TWO_PI - gap)
    with np.errstate(divide="ignore"):
        return np.arccosh(1.0 / np.maximum(np.sin(gap / 2.0), 1e-300))


class _EndpointIndex:
    """lookup of unordered endpoint pairs within tol, by quantized disc angles"""

    def __init__(self, tol):
        self.tol = tol
        self.cells = {}

    def _key(self, pair):
        return tuple(int(math.floor(angle / self.tol)) for angle in pair)

    def _normal(self, pair):
        # angles just below 2 pi sit next to 0
        return tuple(sorted(a - TWO_PI if a > TWO_PI - self.tol else a for a in pair))

    def find(self, pair):
        pair = self._normal(pair)
        low, high = self._key(pair)
        for dlow in (-1, 0, 1):
            for dhigh in (-1, 0, 1):
                for other, value in self.cells.get((low + dlow, high + dhigh), ()):
                    if angle_gap(other[0], pair[0]) <= self.tol and (
                        angle_gap(other[1], pair[1]) <= self.tol
                    ):
                        return value
        return None

    def add(self, pair, value):
        pair = self._normal(pair)
        self.cells.setdefault(self._key(pair), []).append((pair, value))


def _check_curve(surface, curve):
    bound = len(surface.generators)
    for letter in curve.word:
        if abs(letter) > bound:
            raise InvalidCurve(curve.label, "generator %d outside +-1..%d" % (letter, bound))


def curve_axis(surface, curve, traceMargin=DEFAULTS.traceMargin):
    """
    axis and translation length of a curve word

    Raises
    ------
    NonHyperbolicCurve
    """
    _check_curve(surface, curve)
    element = evaluate_word(surface, curve.word)
    try:
        return axis_and_translation_length(element, traceMargin)
    except NotHyperbolic:
        raise NonHyperbolicCurve(curve, element.trace) from None


def _pattern_layers(surface, curves, window, config):
    """yield, per word length, the new lines found at that length"""
    axes = [curve_axis(surface, curve, config.traceMargin)[0] for curve in curves]
    index = _EndpointIndex(config.endpointTol)
    for words, matrices in _word_layers(surface, window.wordLengthCap):
        found = []
        for curve, axis in zip(curves, axes):
            angles = _endpoint_angles(matrices, axis)
            near = _center_distance(angles) <= window.radius
            for row in np.flatnonzero(near):
                pair = (float(angles[row, 0]), float(angles[row, 1]))
                if index.find(pair) is not None:
                    continue
                line = PatternLine(
                    Geodesic(
                        BoundaryPoint.from_disc_angle(pair[0]),
                        BoundaryPoint.from_disc_angle(pair[1]),
                    ),
                    curve.label,
                    tuple(int(letter) for letter in words[row]),
                )
                index.add(pair, line)
                found.append(line)
        yield found


def generate_pattern(surface, curves, window, config=DEFAULTS):
    """
    lines of the pattern of a curve system meeting the window

    Every conjugate w c w^-1 with |w| <= window.wordLengthCap contributes its
    axis w(axis c) if the axis comes within window.radius of i. Lines with
    endpoint pairs equal within config.endpointTol are kept once, with the
    first conjugator found (shortest, then lexicographic).

    Parameters
    ----------
    surface : SurfaceGroupPresentation
    curves : list of CurveSpec
    window : Window
    config : Tolerances, optional

    Returns
    -------
    LinePattern

    Raises
    ------
    NonHyperbolicCurve
    """
    lines = []
    for found in _pattern_layers(surface, curves, window, config):
        lines.extend(found)
    logger.info(
        "%d lines from %d curves (radius %g, cap %d)",
        len(lines),
        len(curves),
        window.radius,
        window.wordLengthCap,
    )
    return LinePattern(tuple(lines))


def saturated_pattern(surface, curves, window, config=DEFAULTS):
    """
    the pattern at the least cap >= window.wordLengthCap that cap + 1 leaves unchanged

    Returns
    -------
    pattern : LinePattern
    window : Window
        the window at the saturated cap.

    Raises
    ------
    Unsaturated
        if no cap up to window.wordLengthCap + config.saturationSteps saturates.
    """
    lastCap = window.wordLengthCap + config.saturationSteps
    lines = []
    added = 0
    for length, found in enumerate(
        _pattern_layers(surface, curves, Window(window.radius, lastCap), config)
    ):
        if length > window.wordLengthCap and not found:
            saturated = Window(window.radius, length - 1)
            logger.info("pattern saturated at cap %d with %d lines", length - 1, len(lines))
            return LinePattern(tuple(lines)), saturated
        lines.extend(found)
        added = len(found)
    raise Unsaturated(Window(window.radius, lastCap), added)


def cyclic_normal_form(word):
    """least rotation of the word or its inverse"""
    candidates = []
    for variant in (tuple(word), inverse_word(word)):
        for shift in range(len(variant)):
            candidates.append(variant[shift:] + variant[:shift])
    return min(candidates)


def duplicate_curves(curves):
    """
    pairs of curves whose words agree up to rotation and inversion

    Such curves give the same line pattern; a surface carrying both needs the
    two edges folded together before its waffle is built.

    Returns
    -------
    list of (label, label)
    """
    seen = {}
    pairs = []
    for curve in curves:
        form = cyclic_normal_form(curve.word)
        if form in seen:
            pairs.append((seen[form], curve.label))
        else:
            seen[form] = curve.label
    return pairs


PlanarLine = namedtuple("PlanarLine", ["normal", "offset", "label"])
PlanarLine.__doc__ = "the Euclidean line {x : normal . x = offset}, normal a unit vector"


def hexagonal_pattern(linesPerFamily, spacing=1.0, radius=None):
    """
    three families of parallel lines at pairwise 60 degrees

    The third family is shifted by a third of the spacing, so no three lines
    meet in a point.

    Parameters
    ----------
    linesPerFamily : int
    spacing : float, optional
    radius : float, optional
        Euclidean window radius. The default fits every crossing point with
        room to spare.

    Returns
    -------
    lines : list of PlanarLine
    radius : float
    """
    if linesPerFamily < 1 or not spacing > 0:
        raise PreconditionError("need at least one line per family and positive spacing")
    shifts = (0.0, 0.0, spacing / 3.0)
    lines = []
    for family, shift in enumerate(shifts):
        angle = math.pi / 2.0 + family * math.pi / 3.0
        normal = (math.cos(angle), math.sin(angle))
        for k in range(linesPerFamily):
            offset = (k - (linesPerFamily - 1) / 2.0) * spacing + shift
            lines.append(PlanarLine(normal, offset, "h%d:%d" % (family, k)))
    if radius is None:
        # crossing points lie within 2 / sqrt(3) times the largest offset
        largest = max(abs(line.offset) for line in lines)
        radius = 2.0 * (2.0 / math.sqrt(3.0) * largest + spacing)
    return lines, float(radius)
