"""KDTLI fringe signals, visibilities, and transmission weights."""

import math

import numpy as np
import pytest

from lasergrating.errors import CutoffError, InvalidInputError
from lasergrating.nearfield import (FringeSignal, KdtliConfig, kdtli_signal,
                                    mean_transmission, mean_transmission_closed,
                                    sinusoidal_visibility, velocity_average,
                                    visibility_minmax)
from lasergrating.params import GratingParameters

G = GratingParameters(phi0=math.pi, n0=1.0)
F = 0.42


def cfg(source="quantum", lt=3.25, f=F, grating=G, **kw):
    return KdtliConfig(grating, f, lt, source=source, **kw)


def test_no_grating_signal_is_flat():
    g0 = GratingParameters(phi0=0.0, n0=0.0)
    for f in (0.42, 0.9):
        sig = kdtli_signal(cfg(grating=g0, f=f, lt=1.7))
        assert np.max(np.abs(sig.values - f * f)) < 1e-14


def test_signal_real_and_periodic():
    sig = kdtli_signal(cfg())
    assert sig.values.dtype == float
    assert np.min(sig.values) >= 0.0
    assert sig.mean == pytest.approx(F * F, rel=1e-12)  # B_0(0) = 1


def test_conditional_signals_sum_to_unconditional():
    total = None
    for ell in range(18):
        sig = kdtli_signal(cfg(source=ell))
        total = sig.values if total is None else total + sig.values
    uncond = kdtli_signal(cfg()).values
    assert np.max(np.abs(total - uncond)) < 1e-8


def test_transmission_weights_64_24_8():
    w = [mean_transmission(G, ell, 1.0) for ell in range(3)]
    assert w[0] == pytest.approx(0.64, abs=0.01)
    assert w[1] == pytest.approx(0.24, abs=0.01)
    assert w[2] == pytest.approx(0.08, abs=0.01)
    assert 1.0 - sum(w) == pytest.approx(0.04, abs=0.015)


def test_mean_transmissions_sum_to_f_squared():
    total = sum(mean_transmission(G, ell, F) for ell in range(25))
    assert total == pytest.approx(F * F, abs=1e-10)


def test_mean_transmission_closed_form_matches_signal_average():
    for ell in range(5):
        closed = mean_transmission_closed(G, ell, F)
        sig = kdtli_signal(cfg(source=ell))
        assert closed == pytest.approx(float(np.mean(sig.values)), abs=1e-8)
        assert closed == pytest.approx(mean_transmission(G, ell, F), abs=1e-10)


def test_visibility_zero_without_grating():
    g0 = GratingParameters(phi0=0.0, n0=0.0)
    assert sinusoidal_visibility(cfg(grating=g0, lt=0.7)) == pytest.approx(0.0, abs=1e-14)


def test_visibility_period_doubling():
    """n0 = 0: V is 1-periodic in L/L_T; n0 = 1 only 2-periodic."""
    lts = np.linspace(0.005, 1.0, 50)
    g0 = GratingParameters(phi0=math.pi, n0=0.0)
    v0 = np.array([sinusoidal_visibility(cfg(grating=g0, lt=t)) for t in lts])
    v0s = np.array([sinusoidal_visibility(cfg(grating=g0, lt=t + 1)) for t in lts])
    assert np.max(np.abs(v0 - v0s)) < 1e-10
    v1 = np.array([sinusoidal_visibility(cfg(lt=t)) for t in lts])
    v1s = np.array([sinusoidal_visibility(cfg(lt=t + 1)) for t in lts])
    v2s = np.array([sinusoidal_visibility(cfg(lt=t + 2)) for t in lts])
    assert np.max(np.abs(v1 - v1s)) > 0.05
    assert np.max(np.abs(v1 - v2s)) < 1e-10


def test_conditional_visibility_can_reach_seventy_percent():
    lts = np.linspace(0.01, 2.0, 400)
    best = 0.0
    for ell in (0, 1, 2):
        vals = [abs(sinusoidal_visibility(cfg(source=ell, lt=t))) for t in lts]
        best = max(best, max(vals))
    assert best >= 0.68


def test_mirror_relation_classical_quantum():
    lts = np.linspace(0.02, 1.98, 99)
    for t in lts:
        vc = sinusoidal_visibility(cfg(source="classical", lt=t))
        vq = sinusoidal_visibility(cfg(source="quantum", lt=2.0 - t))
        assert vc == pytest.approx(vq, abs=1e-8)


def test_phase_flip_between_odd_and_even_integer():
    """Between an odd and the next even Talbot integer the l = 1 fringe is
    shifted by half a period against l = 0: the first harmonics have
    opposite sign."""
    for lt in (3.25, 3.5, 3.75):
        s0 = kdtli_signal(cfg(source=0, lt=lt)).components[1].real
        s1 = kdtli_signal(cfg(source=1, lt=lt)).components[1].real
        assert s0 * s1 < 0
    # panel (b) regime: no flip
    s0 = kdtli_signal(cfg(source=0, lt=4.25)).components[1].real
    s1 = kdtli_signal(cfg(source=1, lt=4.25)).components[1].real
    assert s0 * s1 > 0


def test_visibility_minmax_trivials():
    shifts = np.arange(512) / 512
    flat = FringeSignal(shifts, np.full(512, 0.3), {0: 0.3}, 0.3, 1.0)
    assert visibility_minmax(flat) == pytest.approx(0.0, abs=1e-14)
    vals = 0.5 + 0.2 * np.cos(2 * np.pi * shifts)
    pure = FringeSignal(shifts, vals, {0: 0.5, 1: 0.1}, 0.5, 1.0)
    assert visibility_minmax(pure) == pytest.approx(0.4, rel=1e-10)


def test_visibility_minmax_close_to_sine_visibility():
    config = cfg(lt=4.25)
    sig = kdtli_signal(config)
    vsin = sinusoidal_visibility(config)
    vmm = visibility_minmax(sig)
    # difference bounded by relative higher-harmonic content
    comps = sig.components
    higher = sum(2 * abs(comps[j]) for j in comps if j >= 2) / comps[0].real
    assert abs(vmm - abs(vsin)) <= higher + 1e-12


def test_harmonic_amplitudes():
    sig = kdtli_signal(cfg(lt=4.25))
    amps = sig.harmonic_amplitudes()
    assert amps[0] == pytest.approx(sig.mean)
    assert amps[1] == pytest.approx(2 * abs(sig.components[1]))


def test_velocity_average_washes_out_the_model_difference():
    """A broad velocity distribution hides the quantum/classical gap, which
    is why earlier experiments missed it."""
    def gap(spread):
        vis = {}
        for variant in ("quantum", "classical"):
            sig = velocity_average(cfg(source=variant, lt=3.25), spread)
            vis[variant] = 2 * sig.components[1].real / sig.components[0].real
        return abs(vis["quantum"] - vis["classical"])

    assert gap(0.0) > 0.25
    assert gap(0.2) < 0.05 * gap(0.0)


def test_velocity_average_zero_spread_is_identity():
    config = cfg(lt=3.25)
    sharp = kdtli_signal(config)
    same = velocity_average(config, 0.0)
    assert np.allclose(same.values, sharp.values)
    avg = velocity_average(config, 0.1)
    assert avg.values.shape == sharp.values.shape
    assert avg.label.endswith("dv/v=0.1")


def test_config_validation():
    with pytest.raises(InvalidInputError):
        KdtliConfig(G, 0.0, 1.0)
    with pytest.raises(InvalidInputError):
        KdtliConfig(G, 0.5, -1.0)
    with pytest.raises(InvalidInputError):
        KdtliConfig(None, 0.5, 1.0, source="quantum")
    with pytest.raises(InvalidInputError):
        kdtli_signal(cfg(source="bogus"))


def test_jmax_tail_guard():
    g = GratingParameters(phi0=8.0, n0=4.0)
    with pytest.raises(CutoffError):
        kdtli_signal(KdtliConfig(g, 0.42, 0.5, j_max=3))
