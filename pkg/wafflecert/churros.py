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
Churros: a cyclic core with flaps attached along strands.

Every flap carries the translation length tau of its strand; the core's is
their mean. Clutching data records the ratios of the flap taus, which is all
that matters when two churros are glued compatibly, and the width of the
horostrip each flap is metrized by.
"""

from collections import namedtuple
import logging
import math

import numpy as np

from .config import DEFAULTS
from .errors import PreconditionError
from .hyperbolic import horostrip

logger = logging.getLogger(__name__)


class NonPositiveTau(PreconditionError):
    """raised for a flap whose translation length is not positive"""

    def __init__(self, flap, tau):
        super().__init__("flap %s has tau %r" % (flap, tau))
        self.flap = flap
        self.tau = tau


class ArityMismatch(PreconditionError):
    """raised if a flap correspondence is not a bijection"""


Flap = namedtuple("Flap", ["id", "strand", "tau"])
Churro = namedtuple("Churro", ["core", "flaps", "tauCore"])


def make_churro(core, flaps):
    """
    churro with the given flaps

    Parameters
    ----------
    core : str
        core label.
    flaps : iterable of Flap or (id, strand, tau) tuples

    Raises
    ------
    NonPositiveTau
    """
    flaps = tuple(Flap(*flap) for flap in flaps)
    if not flaps:
        raise PreconditionError("a churro needs at least one flap")
    for flap in flaps:
        if not flap.tau > 0 or math.isinf(flap.tau):
            raise NonPositiveTau(flap.id, flap.tau)
    tauCore = sum(flap.tau for flap in flaps) / len(flaps)
    return Churro(core, flaps, tauCore)


ClutchingData = namedtuple(
    "ClutchingData", ["flapIds", "taus", "ratios", "tauCore", "widths", "euclidean"]
)
ClutchingData.__doc__ = """
ratios[i, j] = taus[i] / taus[j]; widths[i] = |ln(tauCore / taus[i])|;
euclidean[i] is True when the flap tau equals the core tau.
"""


def clutching(churro, config=DEFAULTS):
    taus = np.array([flap.tau for flap in churro.flaps], dtype=float)
    ratios = taus[:, None] / taus[None, :]
    widths = np.abs(np.log(churro.tauCore) - np.log(taus))
    euclidean = tuple(
        bool(abs(churro.tauCore - tau) <= config.euclideanTol * churro.tauCore) for tau in taus
    )
    return ClutchingData(
        flapIds=tuple(flap.id for flap in churro.flaps),
        taus=taus,
        ratios=ratios,
        tauCore=churro.tauCore,
        widths=np.where(euclidean, 0.0, widths),
        euclidean=euclidean,
    )


def clutching_match(first, second, correspondence, config=DEFAULTS):
    """
    do two churros have the same clutching ratios under a flap correspondence

    Parameters
    ----------
    first, second : ClutchingData
    correspondence : dict
        flap id of first -> flap id of second.
    config : Tolerances, optional
        ratioRelTol is the relative tolerance.

    Returns
    -------
    (bool, witness)
        witness is the first pair of flap ids of `first` whose ratio differs.

    Raises
    ------
    ArityMismatch
    """
    if len(first.flapIds) != len(second.flapIds):
        raise ArityMismatch(
            "%d flaps cannot match %d flaps" % (len(first.flapIds), len(second.flapIds))
        )
    if set(correspondence) != set(first.flapIds) or set(correspondence.values()) != set(
        second.flapIds
    ):
        raise ArityMismatch("the correspondence is not a bijection of the flaps")
    position = {flap: k for k, flap in enumerate(second.flapIds)}
    for i, flapI in enumerate(first.flapIds):
        for j in range(i + 1, len(first.flapIds)):
            flapJ = first.flapIds[j]
            mine = first.ratios[i, j]
            theirs = second.ratios[position[correspondence[flapI]], position[correspondence[flapJ]]]
            if abs(mine - theirs) > config.ratioRelTol * max(abs(mine), abs(theirs)):
                logger.info("ratio of flaps %s, %s: %r against %r", flapI, flapJ, mine, theirs)
                return False, (flapI, flapJ)
    return True, None


FlapMetric = namedtuple("FlapMetric", ["flap", "strip", "coreHeight", "euclidean"])
FlapMetric.__doc__ = """
strip is the horostrip metrizing a flap, coreHeight the height of the side
glued to the core. Horocycles are shorter higher up, so the core sits on the
low side when its tau is the larger one. Euclidean flaps get the unit strip,
strip and coreHeight None.
"""


def flap_horostrip(data, flap):
    """the horostrip of width |ln(tauCore / tau)| metrizing a flap"""
    k = data.flapIds.index(flap)
    if data.euclidean[k]:
        return FlapMetric(flap, None, None, True)
    strip = horostrip(1.0, math.exp(float(data.widths[k])))
    coreHeight = strip.yLow if data.tauCore > data.taus[k] else strip.yHigh
    return FlapMetric(flap, strip, coreHeight, False)


AlignmentReport = namedtuple("AlignmentReport", ["aligned", "twists"])


def _rotation_matching(reference, fractions, tol):
    for candidate in fractions:
        delta = (reference[0] - candidate) % 1.0
        moved = sorted((f + delta) % 1.0 for f in fractions)
        gaps = [min(abs(a - b), 1.0 - abs(a - b)) for a, b in zip(moved, reference)]
        if max(gaps, default=0.0) <= tol:
            return delta
    return None


def core_vertex_alignment(churro, vertexFractions, tol=1e-9):
    """
    can the flaps be twisted so their strand vertices meet on the core

    Parameters
    ----------
    churro : Churro
    vertexFractions : dict
        flap id -> positions of its strand vertices as fractions of a period.
        A period of every flap covers the core once, so fractions carry over.

    Returns
    -------
    AlignmentReport
        twists maps each flap to the rotation aligning it with the first
        flap, or is None if no twist does.
    """
    flaps = [flap.id for flap in churro.flaps]
    reference = sorted(f % 1.0 for f in vertexFractions[flaps[0]])
    twists = {flaps[0]: 0.0}
    for flap in flaps[1:]:
        fractions = [f % 1.0 for f in vertexFractions[flap]]
        if len(fractions) != len(reference):
            return AlignmentReport(False, None)
        delta = _rotation_matching(reference, fractions, tol)
        if delta is None:
            return AlignmentReport(False, None)
        twists[flap] = delta
    return AlignmentReport(True, twists)


def clutching_to_json(data):
    return {
        "flaps": list(data.flapIds),
        "taus": [float(tau) for tau in data.taus],
        "tau_core": float(data.tauCore),
        "ratios": [[float(r) for r in row] for row in data.ratios],
        "widths": [float(w) for w in data.widths],
        "euclidean": list(data.euclidean),
    }
