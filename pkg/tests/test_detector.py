import math
import warnings

import numpy as np
import pytest

from xyqcr.detector import (
    Quantity,
    QuenchResponse,
    TimeSearchConfig,
    TStar,
    boundary_overlap,
    detect_tstar,
    fit_boundary,
    map_qcr,
    max_response,
    multicritical_gamma,
    scaled_response,
)
from xyqcr.errors import FlatResponse, NegativeTemperature, ZeroDenominator

# DERIVED goldens: gamma = 0.8, 2048 nodes, t_max = 20, dt = 0.005 (scaled responses at T = 0.05, 0.1)
FIG2 = {
    (0.2, "E"): (0.9999996046740419, 0.9991396886945204),
    (0.2, "L"): (0.9999987541132566, 0.9966982045796899),
    (0.2, "I"): (0.9999988796754505, 0.9972829080192858),
    (0.5, "E"): (0.9999705449064185, 0.9934283668210385),
    (0.5, "L"): (1.000131493020093, 1.0232395725394436),
    (0.5, "I"): (0.9999063514524975, 0.9825832006595377),
    (0.8, "E"): (0.9895926177426717, 0.9032129388828511),
    (0.8, "L"): (0.9795333131313236, 0.8191268157547341),
    (0.8, "I"): (0.9843486814271808, 0.8626949802690186),
    (0.95, "E"): (0.8382467377502442, 0.6636177763738276),
    (0.95, "L"): (0.7643198177955869, 0.5215367661158424),
    (0.95, "I"): (0.8168425071625229, 0.6324827917482552),
}
FIG2_ZERO = {
    (0.2, "E"): 0.18146781434742473, (0.2, "L"): 0.06713763930575642, (0.2, "I"): 0.7217173785933084,
    (0.5, "E"): 0.08784547971110447, (0.5, "L"): 0.05206207542739773, (0.5, "I"): 0.5536544990159753,
    (0.8, "E"): 0.019919208332019895, (0.8, "L"): 0.10862703898756283, (0.8, "I"): 0.28020034325357757,
    (0.95, "E"): 0.0018046213356946712, (0.95, "L"): 0.05413610853663858, (0.95, "I"): 0.0876739090460138,
}
FIG3 = {
    (0.2, 0.3): (0.9999996934127613, 0.9992893783579527),
    (0.2, 2.0): (0.9999996715086216, 0.9992541662728711),
    (0.95, 0.3): (0.9950237472294589, 0.9748781699884012),
    (0.95, 2.0): (0.9920297422427439, 0.9616302970067571),
}


@pytest.fixture(scope="module")
def responses():
    cache = {}

    def get(h0, h1=1.0, gamma=0.8):
        key = (h0, h1, gamma)
        if key not in cache:
            cache[key] = QuenchResponse(h0, h1, gamma)
        return cache[key]

    return get


def test_quantity_parse():
    assert Quantity.parse("E") is Quantity.ABSORBED_ENERGY
    assert Quantity.parse("log_negativity") is Quantity.LOG_NEGATIVITY
    assert Quantity.parse(Quantity.MUTUAL_INFORMATION) is Quantity.MUTUAL_INFORMATION
    with pytest.raises(ValueError):
        Quantity.parse("X")


def test_time_search_config():
    assert TimeSearchConfig().times()[-1] == pytest.approx(20.0)
    with pytest.raises(ValueError):
        TimeSearchConfig(t_max=1.0, dt=2.0)


@pytest.mark.parametrize("q", list(Quantity))
def test_flat_response_without_quench(q):
    with pytest.raises(FlatResponse):
        max_response(q, 0.6, 0.6, 0.8, 0.0, grid=256)


def test_zero_denominator():
    with pytest.raises(ZeroDenominator):
        scaled_response("E", 0.6, 0.6, 0.8, 0.05, grid=256)
    assert detect_tstar("E", 0.6, 0.6, 0.8, grid=256).flag == "zero-denominator"


def test_negative_temperature():
    with pytest.raises(NegativeTemperature):
        max_response("E", 0.2, 1.0, 0.8, -0.1, grid=256)


@pytest.mark.parametrize("q", list(Quantity))
@pytest.mark.parametrize("h0", [0.2, 0.95, 1.3])
def test_scaled_response_is_one_at_zero(responses, q, h0):
    assert responses(h0).scaled_response(q, 0.0) == 1.0


def test_energy_absorbed_at_zero_temperature(responses):
    assert responses(0.2).max_response("E", 0.0) > 0


@pytest.mark.parametrize("key", sorted(FIG2))
def test_fig2_regression(responses, key):
    h0, q = key
    r = responses(h0)
    assert r.zero_temperature(q) == pytest.approx(FIG2_ZERO[key], rel=1e-9)
    got = (r.scaled_response(q, 0.05), r.scaled_response(q, 0.1))
    assert np.allclose(got, FIG2[key], rtol=0, atol=1e-9)


@pytest.mark.parametrize("key", sorted(FIG3))
def test_fig3_regression(responses, key):
    r = responses(*key)
    got = (r.scaled_response("E", 0.05), r.scaled_response("E", 0.1))
    assert np.allclose(got, FIG3[key], rtol=0, atol=1e-9)


def test_fall_is_faster_near_criticality(responses):
    assert responses(0.95).scaled_response("E", 0.1) < responses(0.2).scaled_response("E", 0.1)


def test_refinement_not_below_coarse(responses):
    r = responses(0.5)
    coarse = r.curve("I", 0.05).max()
    assert r.max_response("I", 0.05) >= coarse


def test_horizon_doubling():
    for q in Quantity:
        a = max_response(q, 0.5, 1.0, 0.8, 0.05)
        b = max_response(q, 0.5, 1.0, 0.8, 0.05, TimeSearchConfig(t_max=40.0))
        assert abs(a - b) < 1e-6


def test_horizon_warning():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        max_response("E", 0.95, 1.0, 0.8, 0.0, TimeSearchConfig(t_max=3.0, dt=0.01), grid=512)
    assert any("horizon" in str(w.message) for w in caught)


def test_large_temperature_responses_vanish():
    r = QuenchResponse(0.5, 1.0, 0.8, grid=512)
    for q in Quantity:
        try:
            assert r.max_response(q, 1e3) < 1e-3
        except FlatResponse:
            pass


def test_log_negativity_sudden_death_vs_energy_tail():
    r = QuenchResponse(0.5, 1.0, 0.8, grid=512)
    with pytest.raises(FlatResponse):
        r.max_response("L", 1.0)
    assert r.max_response("E", 1.0) > 1e-3


def test_tstar_ordering(responses):
    near = detect_tstar("E", 0.99, 1.0, 0.8, response=responses(0.99))
    far = detect_tstar("E", 0.8, 1.0, 0.8, response=responses(0.8))
    deep = detect_tstar("E", 0.2, 1.0, 0.8, response=responses(0.2))
    assert near.flag is None and far.flag is None
    assert near.value < far.value < deep.value


def test_tstar_deep_ordered_phase(responses):
    # DERIVED: eta = 1e-6 crosses inside the window, well above every point nearer h = 1
    t = detect_tstar("E", 0.2, 1.0, 0.8, response=responses(0.2))
    assert t.value == pytest.approx(0.053220081329345706, abs=1e-5)


@pytest.mark.parametrize("q", list(Quantity))
def test_tstar_threshold_monotone(responses, q):
    r = responses(0.8)
    a = detect_tstar(q, 0.8, 1.0, 0.8, eta=1e-6, response=r)
    b = detect_tstar(q, 0.8, 1.0, 0.8, eta=2e-6, response=r)
    assert b.value >= a.value - 1e-7


def test_tstar_saturates():
    t = detect_tstar("E", 0.5, 1.0, 0.5, t_hi=0.005, grid=512)
    assert t.saturated and t.value == 0.005


def test_tstar_resolution_invariance():
    a = detect_tstar("L", 0.9, 1.0, 0.8, grid=1024)
    b = detect_tstar("L", 0.9, 1.0, 0.8, cfg=TimeSearchConfig(dt=0.0025), grid=2048)
    assert abs(a.value - b.value) < 1e-5


def test_multicritical_gamma():
    assert multicritical_gamma(0.7) == pytest.approx(0.3)
    assert multicritical_gamma(1.3) == pytest.approx(0.3)
    assert multicritical_gamma(-0.7) == pytest.approx(0.3)


def test_fit_boundary_recovers_cone():
    h0 = np.linspace(0.5, 1.5, 11)
    ts = [TStar(0.05 * abs(h - 1) + 1e-3) if abs(h - 1) > 1e-9 else TStar(math.nan, "zero-denominator") for h in h0]
    fit = fit_boundary(h0, ts)
    assert fit["slope"] == pytest.approx(0.05)
    assert fit["intercept"] == pytest.approx(1e-3)
    assert fit["r_squared"] == pytest.approx(1.0)
    assert fit["fit_points"] == 10
    assert fit["flanks"]["below"]["fit_points"] == 5
    assert fit["flanks"]["above"]["slope"] == pytest.approx(0.05)


def test_fit_boundary_excludes_flags():
    h0 = [0.7, 0.8, 0.9, 1.1]
    ts = [TStar(0.1, "saturated"), TStar(0.02), TStar(0.01), TStar(0.01)]
    fit = fit_boundary(h0, ts)
    assert fit["fit_points"] == 3
    assert math.isnan(fit["flanks"]["below"]["slope"])


def test_map_qcr_small_grid():
    b = map_qcr("E", [0.8, 0.9, 1.0, 1.1, 1.2], nodes=512, cfg=TimeSearchConfig(t_max=10.0))
    flags = [t.flag for t in b.tstar]
    assert flags[2] == "zero-denominator"
    v = b.values()
    assert v[0] > v[1] and v[3] < v[4]
    assert b.fit_points == 4
    assert b.t_hi == 0.1


def test_boundary_overlap():
    a = map_qcr("E", [0.8, 0.9], nodes=256, cfg=TimeSearchConfig(t_max=5.0))
    assert boundary_overlap(a, a) == 1.0
