import io
import math

import numpy as np
import pytest

from oposqueeze import (DomainError, EmptyTraceError, ParseError, QuadraturePair, Trace,
                        ZeroSpanConfig, read_trace_csv, synth_locked_trace,
                        synth_scan_trace, write_trace_csv)
from oposqueeze.traces import locked_traces, scan_mean_db, shot_trace


def quiet(**kw):
    """Config whose per-sample fluctuation is ~1e-5 dB."""
    base = dict(resolution_bandwidth=30e3, video_bandwidth=1e-7, averages=1)
    base.update(kw)
    return ZeroSpanConfig(**base)


class TestConfig:
    def test_paper_sigma(self):
        # (10/ln10)/sqrt(50*20), evaluated with mpmath
        assert ZeroSpanConfig().sigma_db == pytest.approx(0.137335973805705375, rel=1e-13)
        assert ZeroSpanConfig().effective_samples == 50

    def test_sigma_vanishes_with_averaging(self):
        assert ZeroSpanConfig(averages=10**12).sigma_db < 1e-6

    @pytest.mark.parametrize("kw", [
        dict(video_bandwidth=40e3),
        dict(points=1),
        dict(averages=0),
        dict(seed=-1),
        dict(seed=2**64),
        dict(sweep_duration=0),
    ])
    def test_invalid(self, kw):
        with pytest.raises(DomainError):
            ZeroSpanConfig(**kw)

    def test_uniform_time_axis(self):
        t = ZeroSpanConfig(points=11, sweep_duration=1.0).times()
        assert np.allclose(np.diff(t), 0.1)


class TestLocked:
    def test_determinism(self):
        cfg = ZeroSpanConfig(seed=1234)
        a = synth_locked_trace(-7.2, cfg)
        b = synth_locked_trace(-7.2, cfg)
        assert np.array_equal(a.level, b.level)
        assert np.array_equal(a.time, b.time)

    def test_seed_matters(self):
        a = synth_locked_trace(-7.2, ZeroSpanConfig(seed=1))
        b = synth_locked_trace(-7.2, ZeroSpanConfig(seed=2))
        assert not np.array_equal(a.level, b.level)

    @pytest.mark.parametrize("seed", [0, 7, 2**63 + 5])
    def test_sample_mean(self, seed):
        cfg = ZeroSpanConfig(points=10**4, seed=seed)
        tr = synth_locked_trace(-7.2, cfg)
        assert abs(tr.level.mean() + 7.2) < 3 * cfg.sigma_db / math.sqrt(cfg.points)

    def test_sample_spread(self):
        cfg = ZeroSpanConfig(points=10**5, seed=3)
        tr = synth_locked_trace(-7.2, cfg)
        assert tr.level.std(ddof=1) == pytest.approx(cfg.sigma_db, rel=0.01)

    def test_constant_in_averaging_limit(self):
        tr = synth_locked_trace(-7.2, ZeroSpanConfig(averages=10**14))
        assert np.ptp(tr.level) < 1e-6

    def test_shot_label(self):
        assert shot_trace(ZeroSpanConfig()).label == "shot"

    def test_locked_set_uses_distinct_streams(self):
        traces = locked_traces(QuadraturePair.from_db(-7.2, 11.6), ZeroSpanConfig(seed=5))
        assert [t.label for t in traces] == ["shot", "squeezed", "anti_squeezed"]
        noise = [t.level - t.level.mean() for t in traces]
        assert not np.allclose(noise[0], noise[1])


class TestScan:
    def test_flat_for_degenerate_pair(self):
        pair = QuadraturePair(2.0, 2.0)
        tr = synth_scan_trace(pair, 0.05, quiet(points=501))
        assert np.allclose(tr.level, 10 * math.log10(2.0), atol=1e-3)

    def test_extrema_match_pair(self):
        pair = QuadraturePair.from_db(-7.2, 11.6)
        tr = synth_scan_trace(pair, 0.05, quiet(points=20001, sweep_duration=0.2))
        assert tr.level.min() == pytest.approx(-7.2, abs=0.01)
        assert tr.level.max() == pytest.approx(11.6, abs=0.01)

    def test_two_maxima_two_minima_per_phase_cycle(self):
        # a full 2 pi phase cycle lasts two scan periods
        pair = QuadraturePair.from_db(-7.2, 11.6)
        period = 1.0
        t = np.linspace(0, 2 * period, 4000, endpoint=False) + 0.1
        y = scan_mean_db(pair, t, period)
        d = np.sign(np.diff(y))
        turns = d[1:] - d[:-1]
        assert np.sum(turns < 0) == 2  # maxima
        assert np.sum(turns > 0) == 2  # minima

    def test_bad_period(self):
        with pytest.raises(DomainError):
            synth_scan_trace(QuadraturePair(1.0, 1.0), 0.0, ZeroSpanConfig())

    def test_deterministic(self):
        pair = QuadraturePair.from_db(-7.2, 11.6)
        cfg = ZeroSpanConfig(seed=99, averages=1)
        assert np.array_equal(synth_scan_trace(pair, 0.05, cfg).level,
                              synth_scan_trace(pair, 0.05, cfg).level)


class TestCsv:
    def test_round_trip(self, tmp_path):
        tr = synth_scan_trace(QuadraturePair.from_db(-7.2, 11.6), 0.05,
                              ZeroSpanConfig(seed=4, averages=1))
        path = tmp_path / "scan.csv"
        write_trace_csv(tr, path)
        back = read_trace_csv(path)
        assert back.label == "scan"
        assert np.allclose(back.level, tr.level, rtol=0, atol=1e-7)
        assert np.allclose(back.time, tr.time, rtol=1e-8)

    def test_format(self):
        tr = Trace("shot", [0.0, 0.5], [0.1, -0.2])
        buf = io.StringIO()
        write_trace_csv(tr, buf)
        assert buf.getvalue() == "time_s,level_db,label\n0,0.1,shot\n0.5,-0.2,shot\n"

    def test_empty_file(self):
        with pytest.raises(ParseError):
            read_trace_csv(io.StringIO(""))

    def test_header_only(self):
        with pytest.raises(EmptyTraceError):
            read_trace_csv(io.StringIO("time_s,level_db,label\n"))

    @pytest.mark.parametrize("body, line", [
        ("0,abc,shot\n", 2),
        ("0,1,shot\n1,2\n", 3),
        ("0,1,shot\n0,2,shot\n", 3),
        ("0,1,shot\n1,2,scan\n", 3),
        ("0,1,bogus\n", 2),
    ])
    def test_malformed_rows(self, body, line):
        with pytest.raises(ParseError) as info:
            read_trace_csv(io.StringIO("time_s,level_db,label\n" + body))
        assert info.value.line == line

    def test_bad_header(self):
        with pytest.raises(ParseError, match="line 1"):
            read_trace_csv(io.StringIO("t,v,l\n0,1,shot\n"))


def test_trace_validation():
    with pytest.raises(DomainError):
        Trace("noise", [0, 1], [0, 0])
    with pytest.raises(DomainError):
        Trace("shot", [0, 0], [0, 0])
    with pytest.raises(DomainError):
        Trace("shot", [0, 1, 2], [0, 0])
