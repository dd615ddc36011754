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
Running the stages of a certification on an input document.

The stages run in a fixed order, each feeding the next:

    check-filling  build every surface's window pattern and test filling
    cubulate       cube complexes of the windows
    strands        translation lengths of the flap strands
    clutching      clutching data of every churro
    balance        balance condition and sheet numbers
    group          augmentation of the quotient graph
    certify        clutching matches and the assembly conditions

A run stops at the requested stage, at the first obstruction or at the first
error; the report says which and carries the exit code of the command line.
"""

from collections import namedtuple
import json
import logging
import math
import time

import numpy as np

from .config import DEFAULTS, config_echo, load_config
from .errors import PreconditionError, ComputationError
from .hyperbolic import (
    epsilon_prime,
    horostrip,
    horostrip_leaf_length,
    path_length,
    quadrilateral_relation,
    visual_boundary_sample,
    visual_chain_metric,
    visual_params,
)
from .patterns import (
    curve_axis,
    duplicate_curves,
    generate_pattern,
    hexagonal_pattern,
    saturated_pattern,
    standard_generators,
)
from .chambers import arrangement, euclidean_arrangement, filling_check
from .cubulation import (
    automorphisms,
    cubulate,
    dimension,
    max_crossing_clique,
    squares,
    wall_system,
)
from .combinatorialize import combinatorialize, identity_matching, verify_isomorphism
from .strands import UnsupportedPeriod, pattern_carrier, strand, strand_to_json
from .churros import clutching, clutching_match, clutching_to_json, flap_horostrip, make_churro
from .groupings import (
    Certificate,
    augment_graph,
    certificate_to_json,
    cycle_balance,
    fraction_to_json,
    obstruction_to_json,
    solve_sheets,
)
from .inputspec import quotient_graph
from .figures import write_figures

logger = logging.getLogger(__name__)

STAGES = ("check-filling", "cubulate", "strands", "clutching", "balance", "group", "certify")

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_OBSTRUCTION = 2
EXIT_PRECONDITION = 3


class NotFilling(PreconditionError):
    """raised if a surface's curves do not fill its window"""

    def __init__(self, surface, chamber):
        super().__init__(
            "curves of surface '%s' do not fill the window: chamber %d reaches the boundary"
            % (surface, chamber)
        )
        self.surface = surface
        self.chamber = chamber


class DimensionMismatch(ComputationError):
    """raised if the largest cube and the largest crossing clique differ"""


Report = namedtuple(
    "Report", ["stage", "outcome", "exitCode", "results", "diagnostic", "config", "timing"]
)
Report.__doc__ = """
outcome is "certificate", "obstruction", "completed" (a stage before group
succeeded) or "failed"; results maps every stage that ran to its JSON-ready
result. timing is None unless requested.
"""

SurfaceWork = namedtuple(
    "SurfaceWork", ["presentation", "curves", "window", "pattern", "complex", "system", "model"]
)


class _Obstructed(Exception):
    """ends a run at an obstruction"""


class PipelineState:
    """everything the stages of one run share"""

    def __init__(self, spec, config, figuresDir=None):
        self.spec = spec
        self.config = config
        self.figuresDir = figuresDir
        self.graph, self.derived = quotient_graph(spec)
        self.surfaces = {}
        self.taus = {}
        self.clutching = {}
        self.groupResult = None


def _surface_curves(surface):
    curves = [surface.curves[edgeId] for edgeId in sorted(surface.curves)]
    curves += list(surface.extraCurves)
    # a canonical order keeps the wall order of equal curve systems equal
    return sorted(curves, key=lambda curve: (len(curve.word), curve.word, curve.label))


def stage_check_filling(state):
    spec, config = state.spec, state.config
    results = {}
    for surface in sorted(spec.surfaces, key=lambda s: s.id):
        curves = _surface_curves(surface)
        if not curves:
            logger.info("surface %s has no curves, skipping its window", surface.id)
            results[surface.id] = {"skipped": "no curves"}
            continue
        presentation = standard_generators(surface.genus, config.relatorDefect, config.detTol)
        duplicates = duplicate_curves(curves)
        for first, second in duplicates:
            logger.warning("surface %s: curves %s and %s coincide", surface.id, first, second)
        window = spec.window.window
        if spec.window.saturate:
            pattern, window = saturated_pattern(presentation, curves, window, config)
        else:
            pattern = generate_pattern(presentation, curves, window, config)
        complex_ = arrangement(pattern, window, config)
        filling = filling_check(complex_, window, spec.window.margin, config)
        if not filling.filling:
            raise NotFilling(surface.id, filling.witness.id)
        state.surfaces[surface.id] = SurfaceWork(
            presentation, curves, window, pattern, complex_, None, None
        )
        results[surface.id] = {
            "lines": len(pattern.lines),
            "chambers": len(complex_.chambers),
            "word_length_cap": window.wordLengthCap,
            "inner_radius": filling.innerRadius,
            "filling": True,
            "duplicate_curves": [list(pair) for pair in duplicates],
        }
    return results


def stage_cubulate(state):
    results = {}
    for surfaceId, work in sorted(state.surfaces.items()):
        system = wall_system(work.complex)
        model = cubulate(system, state.config)
        cubeDimension = dimension(model)
        result = {
            "walls": len(system.walls),
            "vertices": len(model.vertices),
            "edges": len(model.edges),
            "cubes": len(model.cubes),
            "dimension": cubeDimension,
            "margin_pairs": len(system.marginPairs),
            "margin_cubes": model.marginCubes,
        }
        if len(system.walls) <= 40:
            clique = max_crossing_clique(system)
            if clique != cubeDimension:
                raise DimensionMismatch(
                    "surface %s: dimension %d, crossing clique %d"
                    % (surfaceId, cubeDimension, clique)
                )
            result["max_crossing_clique"] = clique
        state.surfaces[surfaceId] = work._replace(system=system, model=model)
        if state.figuresDir is not None:
            result["figures"] = write_figures(state.figuresDir, surfaceId, work.complex, model)
        results[surfaceId] = result
    return results


def _axis_wall(pattern, curve):
    """the wall of the curve's own axis, else the nearest line of its orbit"""
    orbit = [i for i, line in enumerate(pattern.lines) if line.orbitLabel == curve.label]
    for i in orbit:
        if not pattern.lines[i].conjugatorWord:
            return i
    if not orbit:
        raise UnsupportedPeriod("no line of curve %s meets the window" % curve.label)
    return orbit[0]


def stage_strands(state):
    results = {}
    surfaces = {surface.id: surface for surface in state.spec.surfaces}
    for edge in sorted(state.spec.edges, key=lambda e: e.id):
        if edge.tau is not None:
            state.taus[edge.id] = (float(edge.tau), "supplied")
            results[edge.id] = {"tau": float(edge.tau), "mode": "supplied"}
            continue
        work = state.surfaces[edge.waffle]
        curve = surfaces[edge.waffle].curves[edge.id]
        _, length = curve_axis(work.presentation, curve, state.config.traceMargin)
        carrier = pattern_carrier(work.complex, _axis_wall(work.pattern, curve), length)
        model = strand(carrier, config=state.config)
        state.taus[edge.id] = (model.tau, "computed")
        result = strand_to_json(model)
        result["mode"] = "computed"
        results[edge.id] = result
    return results


def stage_clutching(state):
    results = {}
    for churro in sorted(state.spec.churros, key=lambda c: c.id):
        star = sorted(state.graph.star(churro.id), key=lambda e: e.id)
        if not star:
            logger.warning("churro %s has no flaps", churro.id)
            results[churro.id] = {"skipped": "no flaps"}
            continue
        flaps = [(edge.id, edge.id, state.taus[edge.id][0]) for edge in star]
        data = clutching(make_churro(churro.core, flaps), state.config)
        state.clutching[churro.id] = data
        result = clutching_to_json(data)
        result["modes"] = {edge.id: state.taus[edge.id][1] for edge in star}
        result["horostrips"] = {}
        for edge in star:
            metric = flap_horostrip(data, edge.id)
            result["horostrips"][edge.id] = (
                {"euclidean": True}
                if metric.euclidean
                else {
                    "width": horostrip_leaf_length(metric.strip),
                    "core_height": metric.coreHeight,
                    "y_low": metric.strip.yLow,
                    "y_high": metric.strip.yHigh,
                }
            )
        results[churro.id] = result
    return results


def stage_balance(state):
    balanced, witnesses = cycle_balance(state.graph)
    result = {
        "balanced": balanced,
        "unbalanced_cycles": [cycle.to_json() for cycle in witnesses],
        "derived_coweights": list(state.derived),
    }
    if not balanced:
        raise _Obstructed(result)
    result["sheets"] = solve_sheets(state.graph)
    return result


def stage_group(state):
    outcome = augment_graph(state.graph)
    if not isinstance(outcome, Certificate):
        raise _Obstructed(obstruction_to_json(outcome))
    state.groupResult = outcome
    return certificate_to_json(outcome)


def _same_curve_systems(state):
    """pairs of surfaces with equal genus and equal curve words"""
    keyed = {}
    for surfaceId, work in sorted(state.surfaces.items()):
        if work.model is None:
            continue
        key = (work.presentation.genus, tuple(curve.word for curve in work.curves))
        keyed.setdefault(key, []).append(surfaceId)
    return [group for group in keyed.values() if len(group) > 1]


def waffle_isometry_checks(state):
    """identity transport between windows of equal curve systems, verified"""
    checks = {}
    for group in _same_curve_systems(state):
        first = state.surfaces[group[0]].model
        for other in group[1:]:
            second = state.surfaces[other].model
            try:
                iso = combinatorialize(identity_matching(len(first.walls)), first, second)
                ok, _ = verify_isomorphism(iso, first, second)
            except PreconditionError as ex:
                logger.info("no isometry %s -> %s: %s", group[0], other, ex)
                ok = False
            checks["%s->%s" % (group[0], other)] = ok
    return checks


def assembly_conditions(certificate, isometryChecks, clutchingChecks):
    """the three conditions for assembling the pieces into one space"""
    return {
        "tree_structure": certificate is not None,
        "waffle_isometries": all(isometryChecks.values()),
        "clutching_ratios": all(check["matched"] for check in clutchingChecks.values()),
    }


def stage_certify(state):
    clutchingChecks = {}
    for churro in sorted(state.spec.churros, key=lambda c: c.id):
        if churro.match is None:
            continue
        matched, witness = clutching_match(
            state.clutching[churro.id],
            state.clutching[churro.match.churro],
            churro.match.flaps,
            state.config,
        )
        clutchingChecks[churro.id] = {
            "with": churro.match.churro,
            "matched": matched,
            "witness": None if witness is None else list(witness),
        }
    isometryChecks = waffle_isometry_checks(state)
    conditions = assembly_conditions(state.groupResult, isometryChecks, clutchingChecks)
    result = {
        "clutching_matches": clutchingChecks,
        "waffle_isometries": isometryChecks,
        "assembly": conditions,
    }
    if not all(conditions.values()):
        raise _Obstructed(result)
    return result


STAGE_DISPATCH = {
    "check-filling": stage_check_filling,
    "cubulate": stage_cubulate,
    "strands": stage_strands,
    "clutching": stage_clutching,
    "balance": stage_balance,
    "group": stage_group,
    "certify": stage_certify,
}

_WITNESS_ATTRIBUTES = (
    "problems",
    "witness",
    "edgeId",
    "surface",
    "chamber",
    "components",
    "cycle",
    "key",
)


def _diagnostic(stage, ex):
    diagnostic = {"stage": stage, "error": type(ex).__name__, "message": str(ex)}
    for name in _WITNESS_ATTRIBUTES:
        value = getattr(ex, name, None)
        if value is not None:
            diagnostic[name] = value.to_json() if hasattr(value, "to_json") else value
    return diagnostic


def run_pipeline(spec, stage="certify", config=None, figuresDir=None, timing=False):
    """
    run the stages up to and including `stage`

    Parameters
    ----------
    spec : InputSpec
    stage : str, optional
        one of STAGES. The default is "certify".
    config : Tolerances, optional
        the effective tolerances. The default applies the input's
        tolerances to DEFAULTS.
    figuresDir : path, optional
        write SVG figures of every window there.
    timing : bool, optional
        record the seconds spent per stage. Off by default so equal inputs
        give equal reports.

    Returns
    -------
    Report
    """
    if stage not in STAGE_DISPATCH:
        raise PreconditionError("unknown stage %r, expected one of %s" % (stage, STAGES))
    if config is None:
        config = load_config(overrides=spec.tolerances)
    results = {}
    spent = {} if timing else None
    outcome, exitCode, diagnostic = "completed", EXIT_OK, None
    current = None
    try:
        state = PipelineState(spec, config, figuresDir)
        for current in STAGES[: STAGES.index(stage) + 1]:
            logger.info("stage %s", current)
            start = time.perf_counter()
            results[current] = STAGE_DISPATCH[current](state)
            if timing:
                spent[current] = time.perf_counter() - start
        if stage in ("group", "certify"):
            outcome = "certificate"
    except _Obstructed as ex:
        results[current] = ex.args[0]
        outcome, exitCode = "obstruction", EXIT_OBSTRUCTION
        logger.info("obstruction at stage %s", current)
    except PreconditionError as ex:
        outcome, exitCode = "failed", EXIT_PRECONDITION
        diagnostic = _diagnostic(current, ex)
        logger.error("stage %s: %s", current, ex)
    except ComputationError as ex:
        outcome, exitCode = "failed", EXIT_INTERNAL
        diagnostic = _diagnostic(current, ex)
        logger.error("stage %s could not complete: %s", current, ex)
    return Report(stage, outcome, exitCode, results, diagnostic, config_echo(config), spent)


def _plain(value):
    """JSON fallback for numpy values and fractions"""
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (set, frozenset, tuple)):
        return sorted(value) if isinstance(value, (set, frozenset)) else list(value)
    try:
        return fraction_to_json(value)
    except (TypeError, ValueError):
        raise TypeError("cannot write %r to a report" % (value,)) from None


def report_to_json(report):
    document = {
        "stage": report.stage,
        "outcome": report.outcome,
        "exit_code": report.exitCode,
        "stages": report.results,
        "diagnostic": report.diagnostic,
        "config": report.config,
    }
    if report.timing is not None:
        document["timing"] = report.timing
    return json.dumps(document, indent=2, sort_keys=True, default=_plain) + "\n"


def oracle_quadrature(seed=0, samples=100, config=DEFAULTS):
    """
    leaf lengths of random horostrips: closed form against quadrature

    The quadrilateral cut from a strip by two vertical leaves w apart has
    horocyclic sides of lengths w / yLow and w / yHigh; the log of their
    ratio is the leaf length.
    """
    rng = np.random.default_rng(seed)
    closedError = 0.0
    quadratureError = 0.0
    for _ in range(samples):
        yLow = float(rng.uniform(0.1, 5.0))
        yHigh = yLow * math.exp(float(rng.uniform(0.01, 3.0)))
        offset = float(rng.uniform(-5.0, 5.0))
        w = float(rng.uniform(0.1, 3.0))
        leaf = horostrip_leaf_length(horostrip(yLow, yHigh))
        closedError = max(closedError, abs(quadrilateral_relation(w / yLow, w / yHigh) - leaf))
        measured = path_length(
            lambda t: (offset, yLow + t * (yHigh - yLow)),
            derivative=lambda t: (0.0, yHigh - yLow),
            tol=config.quadratureTol,
        )
        quadratureError = max(quadratureError, abs(measured - leaf))
    return {
        "samples": samples,
        "seed": seed,
        "closed_form_error": closedError,
        "quadrature_error": quadratureError,
        "passed": closedError <= 1e-9 and quadratureError <= 1e-5,
    }


def oracle_visual_metric(seed=0, sources=4, config=DEFAULTS):
    """
    chain infimum of the visual metric between its two q_eps bounds

    config.boundarySamples points equally spaced as seen from i; the chain
    infimum is computed from a few random rows and every pair in them is
    checked against (1 - 2 eps') q_eps <= d_eps <= q_eps.
    """
    params = visual_params(config=config)
    points = visual_boundary_sample(params, config.boundarySamples)
    rng = np.random.default_rng(seed)
    rows = sorted(int(k) for k in rng.choice(len(points), size=sources, replace=False))
    q, chain = visual_chain_metric(params, points, rows)
    q = q[rows]
    factor = 1.0 - 2.0 * epsilon_prime(params)
    others = np.ones_like(q, dtype=bool)
    others[np.arange(len(rows)), rows] = False
    measured, upper = chain[others], q[others]
    above = int(np.count_nonzero(measured > upper * (1.0 + config.ratioRelTol)))
    below = int(np.count_nonzero(measured < factor * upper * (1.0 - config.ratioRelTol)))
    return {
        "boundary_samples": len(points),
        "pairs": int(np.count_nonzero(others)),
        "seed": seed,
        "epsilon": params.epsilon,
        "delta": params.delta,
        "above_q": above,
        "below_lower_bound": below,
        "passed": above == below == 0,
    }


def oracle_clique(linesPerFamily=3, config=DEFAULTS):
    """cube dimension of a hexagonal window against the largest crossing clique"""
    lines, radius = hexagonal_pattern(linesPerFamily)
    system = wall_system(euclidean_arrangement(lines, radius, config))
    model = cubulate(system, config)
    cubeDimension = dimension(model)
    clique = max_crossing_clique(system)
    return {
        "lines_per_family": linesPerFamily,
        "vertices": len(model.vertices),
        "dimension": cubeDimension,
        "max_crossing_clique": clique,
        "passed": cubeDimension == clique == 3,
    }


def oracle_automorphisms(spec, config=None):
    """automorphisms fixing a square pointwise, for every window of an input"""
    config = config or load_config(overrides=spec.tolerances)
    state = PipelineState(spec, config)
    stage_check_filling(state)
    stage_cubulate(state)
    results = {}
    for surfaceId, work in sorted(state.surfaces.items()):
        found = squares(work.model)
        if not found:
            results[surfaceId] = {"squares": 0, "passed": False}
            continue
        fixing = automorphisms(work.model, fixSquare=found[0], config=config)
        results[surfaceId] = {
            "square": [found[0][0], list(found[0][1])],
            "automorphisms": len(fixing),
            "passed": len(fixing) == 1,
        }
    return {"surfaces": results, "passed": all(r["passed"] for r in results.values())}
