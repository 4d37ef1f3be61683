import dataclasses
import math

import numpy as np
import pytest
from oracles import gn_snr_numeric

from gsgmi.constellation import gen_qam
from gsgmi.gmi import NoiseSpec, gmi_gh
from gsgmi.linkbudget import (
    GnLink,
    ReachError,
    dbm_to_w,
    gn_effective_snr,
    optimal_launch_power,
    reach,
    reach_from_snr,
    reach_increase,
    required_snr,
)

LINK = GnLink()


def grid_argmax(link, spans=1, step=0.01):
    grid = np.arange(-15.0, 10.0, step)
    snr = [gn_effective_snr(link, p, spans) for p in grid]
    return grid[int(np.argmax(snr))], np.array(snr)


def test_link_validation():
    for field, bad in [("span_length", 0.0), ("attenuation", -0.2), ("gamma_nl", 0.0),
                       ("symbol_rate", math.nan), ("spans", 0), ("dispersion_beta2", 0.0)]:
        with pytest.raises(ValueError):
            GnLink(**{field: bad})


def test_derived_quantities():
    # hand values: alpha = 0.2 ln10 / 20 Np/km, L_eff ~ 21.17 km, span gain 16 dB
    assert LINK.alpha == pytest.approx(0.02302585092994046, rel=1e-12)
    assert LINK.l_eff == pytest.approx((1 - math.exp(-2 * LINK.alpha * 80)) / (2 * LINK.alpha))
    assert LINK.l_eff == pytest.approx(21.17, abs=0.01)
    assert 10 * math.log10(LINK.span_gain) == pytest.approx(16.0)
    h, c = 6.62607015e-34, 299792458.0
    p_ase = (10**1.6 - 1) * 10**0.45 * h * c / 1550e-9 * 45e9
    assert LINK.p_ase_span == pytest.approx(p_ase, rel=1e-12)


def test_linear_regime_and_span_scaling():
    p = dbm_to_w(-20.0)
    nli = LINK.eta * p**3
    assert nli < 1e-3 * LINK.p_ase_span
    assert gn_effective_snr(LINK, -20.0, 1) == pytest.approx(
        10 * math.log10(p / (LINK.p_ase_span + nli)), abs=1e-12
    )
    drop = gn_effective_snr(LINK, -20.0, 10) - gn_effective_snr(LINK, -20.0, 20)
    assert drop == pytest.approx(10 * math.log10(2), abs=0.01)
    with pytest.raises(ValueError):
        gn_effective_snr(LINK, 0.0, 0)


def test_optimal_power_matches_grid():
    p_grid, _ = grid_argmax(LINK)
    assert abs(optimal_launch_power(LINK) - p_grid) <= 0.01


def test_optimal_power_identities():
    p = dbm_to_w(optimal_launch_power(LINK))
    assert LINK.eta * p**3 == pytest.approx(LINK.p_ase_span / 2, rel=1e-9)
    # independent of the number of spans
    assert optimal_launch_power(dataclasses.replace(LINK, spans=30)) == optimal_launch_power(LINK)
    # eta x2 (via gamma x sqrt2) -> P_opt drops by 10 log10(2) / 3
    hot = dataclasses.replace(LINK, gamma_nl=LINK.gamma_nl * math.sqrt(2))
    assert hot.eta == pytest.approx(2 * LINK.eta, rel=1e-12)
    assert optimal_launch_power(LINK) - optimal_launch_power(hot) == pytest.approx(10 * math.log10(2) / 3, abs=1e-9)


def test_snr_unimodal_and_numeric_oracle():
    _, snr = grid_argmax(LINK, step=0.05)
    peak = int(np.argmax(snr))
    assert np.all(np.diff(snr[: peak + 1]) > 0)
    assert np.all(np.diff(snr[peak:]) < 0)
    for p_dbm in (-8.0, 0.0, 3.0):
        ref = gn_snr_numeric(dbm_to_w(p_dbm), 4, LINK.p_ase_span, LINK.eta)
        assert gn_effective_snr(LINK, p_dbm, 4) == pytest.approx(10 * math.log10(ref), abs=1e-12)


@pytest.mark.parametrize("ratio", [2, 3, 10])
def test_span_scaling_at_optimum(ratio):
    p = optimal_launch_power(LINK)
    d = gn_effective_snr(LINK, p, 5) - gn_effective_snr(LINK, p, 5 * ratio)
    assert d == pytest.approx(10 * math.log10(ratio), abs=1e-9)


def test_required_snr_inverse():
    c = gen_qam(16)
    s = required_snr(c, 0.8)
    assert abs(gmi_gh(c, NoiseSpec(s)) - 3.2) <= 1e-3
    with pytest.raises(ValueError):
        required_snr(c, 1.0)
    with pytest.raises(ReachError):
        required_snr(c, 0.8, hi=5.0)


def test_reach_from_snr_contract():
    r = reach_from_snr(LINK, 15.0)
    assert r.reach_km == r.max_spans * LINK.span_length
    assert r.max_spans == math.floor(r.spans_real)
    # the reached span count meets the threshold; one more does not
    p = r.optimal_launch_power_dbm
    assert gn_effective_snr(LINK, p, r.max_spans) >= 15.0
    assert gn_effective_snr(LINK, p, r.max_spans + 1) < 15.0
    # non-increasing in required SNR
    spans = [reach_from_snr(LINK, s).spans_real for s in np.linspace(5, 25, 21)]
    assert all(b <= a for a, b in zip(spans, spans[1:]))
    with pytest.raises(ReachError):
        reach_from_snr(LINK, 35.0)


def test_one_db_is_259_percent():
    a = reach_from_snr(LINK, 18.0)
    b = reach_from_snr(LINK, 17.0)
    inc = 100 * (b.spans_real - a.spans_real) / a.spans_real
    assert inc == pytest.approx(100 * (10**0.1 - 1), abs=1e-9)


def test_reach_identical_is_zero():
    c = gen_qam(16)
    assert reach_increase(c, c, LINK) == 0.0
    r = reach(LINK, c)
    assert r.required_snr_db == pytest.approx(required_snr(c, 0.8))
