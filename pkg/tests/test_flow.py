import time
from fractions import Fraction

import pytest

from cofrontal.flow import (
    Chart,
    ChartedManifold,
    FlowError,
    LeafExitsAtlas,
    NoReturn,
    Transition,
    Transversal,
    TransversalTangency,
    flat_torus_atlas,
    klein_bottle_atlas,
    mapping_torus_atlas,
    moebius_atlas,
    numeric_return_map,
    trace_return,
)
from cofrontal.poly import parse_polynomial
from cofrontal.symmetry import GermDiffeo

MOEBIUS_SAMPLES = [[0.5], [-0.5], [0.25], [-0.25], [0.125]]


def polys(texts, n=2):
    return tuple(parse_polynomial(t, nvars=n) for t in texts)


@pytest.mark.parametrize("builder", [lambda: moebius_atlas(0), lambda: moebius_atlas(12),
                                     klein_bottle_atlas, flat_torus_atlas])
def test_atlases_validate(builder):
    manifold, _, _ = builder()
    assert manifold.validate() > 0


@pytest.mark.parametrize("bend", [0, 12])
def test_moebius_return_is_reflection(bend):
    manifold, transversal, ref = moebius_atlas(bend)
    res = numeric_return_map(manifold, transversal, MOEBIUS_SAMPLES, ref)
    assert res.max_deviation < 1e-5
    for s, img in zip(res.transversal_points, res.images):
        assert img == pytest.approx(-s, abs=1e-5)


def test_klein_bottle_return():
    manifold, transversal, ref = klein_bottle_atlas()
    samples = [[-0.4], [-0.2], [0.05], [0.3], [0.45]]
    res = numeric_return_map(manifold, transversal, samples, ref)
    assert res.max_deviation < 1e-5
    # back in x2 coordinates the map is x2 -> 1 - x2
    for s, img in zip(res.transversal_points, res.images):
        x2, y2 = s[0] + 0.5, img[0] + 0.5
        assert y2 == pytest.approx(1 - x2, abs=1e-5)


def test_flat_torus_identity():
    manifold, transversal, ref = flat_torus_atlas()
    res = numeric_return_map(manifold, transversal, [[-0.4], [0.1], [0.7]], ref)
    assert res.max_deviation < 1e-6


def test_halving_step_at_least_halves_deviation():
    manifold, transversal, ref = moebius_atlas(12)
    devs = [numeric_return_map(manifold, transversal, MOEBIUS_SAMPLES, ref,
                               step_size=h).max_deviation for h in (2e-2, 1e-2, 5e-3, 2.5e-3)]
    for coarse, fine in zip(devs, devs[1:]):
        assert fine <= coarse / 2
    assert devs[0] > 1e-8  # the benchmark really has truncation error


def test_mapping_torus_atlas_returns_inverse_symmetry():
    h = polys(["x1^2", "x2^2"])
    sigma = GermDiffeo.parse(["-x1", "x2"])
    box = [(Fraction(-1), Fraction(1))] * 2
    manifold, transversal, ref = mapping_torus_atlas(h, sigma, box, 2)
    assert manifold.validate() > 0
    res = numeric_return_map(manifold, transversal, [[0.5, 0.1], [-0.25, 0.3]], ref)
    assert res.max_deviation < 1e-9
    assert res.images[0] == pytest.approx([-0.5, 0.1])


def test_mapping_torus_quarter_turn_reference_is_inverse():
    h = polys(["x1^4 - 6*x1^2*x2^2 + x2^4", "4*x1^3*x2 - 4*x1*x2^3"])
    sigma = GermDiffeo.parse(["-x2", "x1"])
    manifold, transversal, ref = mapping_torus_atlas(h, sigma, [(-1, 1), (-1, 1)], 4)
    res = numeric_return_map(manifold, transversal, [[0.5, 0.25]], ref)
    # sigma^-1 (x1, x2) = (x2, -x1)
    assert res.images[0] == pytest.approx([0.25, -0.5], abs=1e-9)


def test_leaf_exits_atlas():
    field = polys(["1", "0"])
    chart = Chart(((-1.0, 1.0), (-1.0, 1.0)), field, polys(["x2"]))
    manifold = ChartedManifold([chart], [])
    with pytest.raises(LeafExitsAtlas):
        trace_return(manifold, Transversal(0, (0.0, 0.0), ((0.0, 1.0),)), [0.0], 10_000, 1e-2)


def test_no_return_within_steps():
    manifold, transversal, _ = flat_torus_atlas()
    with pytest.raises(NoReturn):
        trace_return(manifold, transversal, [0.0], 10, 1e-3)


def test_tangent_transversal():
    manifold, _, _ = flat_torus_atlas()
    with pytest.raises(TransversalTangency):
        trace_return(manifold, Transversal(0, (0.0, 0.0), ((1.0, 0.0),)), [0.1], 100, 1e-3)


def test_validate_detects_bad_transition():
    field = polys(["1", "0"])
    target = polys(["x2"])
    charts = [Chart(((-0.3, 0.6), (-2.0, 2.0)), field, target),
              Chart(((0.4, 0.9), (-2.0, 2.0)), field, target)]
    bad = [Transition(0, 1, polys(["x1", "2*x2"])), Transition(1, 0, polys(["x1", "x2"]))]
    with pytest.raises(FlowError):
        ChartedManifold(charts, bad).validate()


def test_runtime_budget():
    start = time.perf_counter()
    m, t, r = moebius_atlas(12)
    numeric_return_map(m, t, MOEBIUS_SAMPLES, r)
    numeric_return_map(m, t, MOEBIUS_SAMPLES, r, step_size=5e-4)
    k_manifold, k_transversal, k_ref = klein_bottle_atlas()
    numeric_return_map(k_manifold, k_transversal, [[0.3]], k_ref)
    assert time.perf_counter() - start < 10
