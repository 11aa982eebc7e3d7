import numpy as np
import pytest

from hamdec.bench import (
    AGGREGATE_HEADER,
    RECORD_HEADER,
    BenchRecord,
    ChannelModel,
    aggregate,
    emit_aggregate_csv,
    emit_csv,
    inject_errors,
    make_trial,
    read_aggregate_csv,
    read_csv,
    run_grid,
)
from hamdec.engine import EngineConfig, encode_packet
from hamdec.packetizer import make_layout


@pytest.fixture
def packet():
    layout = make_layout(800, 2)
    msg = np.random.default_rng(0).integers(0, 2, 800, dtype=np.uint8)
    return encode_packet(msg, layout), layout


def test_inject_zero_flips(packet):
    enc, layout = packet
    out, flips = inject_errors(enc, layout, ChannelModel(0, 5))
    assert np.array_equal(out, enc) and flips == []


def test_inject_one_flip_per_segment(packet):
    enc, layout = packet
    out, flips = inject_errors(enc, layout, ChannelModel(1, 5))
    assert len(flips) == 2
    for i, p in enumerate(flips):
        a, b = layout.segment_range(i)
        assert a <= p < b
    assert np.flatnonzero(out != enc).tolist() == flips
    assert np.array_equal(enc[flips] ^ 1, out[flips])


def test_inject_is_deterministic(packet):
    enc, layout = packet
    assert inject_errors(enc, layout, ChannelModel(1, 99))[1] == inject_errors(enc, layout, ChannelModel(1, 99))[1]


def test_channel_guard():
    with pytest.raises(ValueError):
        ChannelModel(2)
    assert ChannelModel(3, stress=True).flips_per_segment == 3


def test_make_trial_reproducible():
    a = make_trial(400, 3, 4, 11)
    b = make_trial(400, 3, 4, 11)
    assert all(np.array_equal(x, y) for x, y in zip((a[0], a[2]), (b[0], b[2]))) and a[3] == b[3]
    assert make_trial(400, 3, 5, 11)[3] != a[3]


def test_single_cell_single_trial():
    recs = run_grid([400], [2], EngineConfig(), trials=1, seed=3)
    assert len(recs) == 1 and recs[0].backend == "sequential" and recs[0].decode_ms >= 0


def test_grid_with_pooled_and_aggregate():
    recs = run_grid([40, 80], [2, 3], EngineConfig("pooled", 2), trials=3, seed=3)
    assert len(recs) == 2 * 2 * 3 * 2
    cells = aggregate(recs)
    assert [(c.packet_bytes, c.tolerance) for c in cells] == [(40, 2), (40, 3), (80, 2), (80, 3)]
    for c in cells:
        assert c.speedup >= 0
        seq = sorted(r.decode_ms for r in recs if (r.packet_bytes, r.tolerance, r.backend) == (c.packet_bytes, c.tolerance, "sequential"))
        assert c.seq_median_ms == seq[1]


def test_grid_rejects_bad_args():
    with pytest.raises(ValueError):
        run_grid([], [2], EngineConfig())
    with pytest.raises(ValueError):
        run_grid([400], [2], EngineConfig(), trials=0)


def test_grid_is_reproducible_except_timings():
    strip = lambda rs: [(r.packet_bytes, r.tolerance, r.backend, r.workers, r.trial) for r in rs]
    a = run_grid([50], [2, 4], EngineConfig("pooled", 2), trials=2, seed=9)
    b = run_grid([50], [2, 4], EngineConfig("pooled", 2), trials=2, seed=9)
    assert strip(a) == strip(b)


def test_emit_csv_header_only(tmp_path):
    path = tmp_path / "r.csv"
    emit_csv([], path)
    assert path.read_bytes() == (",".join(RECORD_HEADER) + "\n").encode()


def test_emit_csv_round_trip(tmp_path):
    recs = [BenchRecord(400, 2, "sequential", 1, 0, 1.23456789), BenchRecord(400, 2, "pooled", 4, 0, 0.000123456789)]
    path = tmp_path / "r.csv"
    emit_csv(recs, path)
    text = path.read_bytes().decode("utf-8")
    assert text.count("\n") == 3 and "\r" not in text
    assert text.splitlines()[1] == "400,2,sequential,1,0,1.23457"
    back = read_csv(path)
    assert [(r.packet_bytes, r.tolerance, r.backend, r.workers, r.trial) for r in back] == [
        (r.packet_bytes, r.tolerance, r.backend, r.workers, r.trial) for r in recs
    ]
    assert back[1].decode_ms == pytest.approx(recs[1].decode_ms, rel=1e-5)


def test_aggregate_csv_round_trip(tmp_path):
    recs = run_grid([40], [2], EngineConfig("pooled", 2), trials=3, seed=1)
    cells = aggregate(recs)
    path = tmp_path / "agg.csv"
    emit_aggregate_csv(cells, path)
    assert path.read_text().splitlines()[0] == ",".join(AGGREGATE_HEADER)
    (back,) = read_aggregate_csv(path)
    assert (back.packet_bytes, back.tolerance) == (40, 2)
    assert back.speedup == pytest.approx(cells[0].speedup, rel=1e-4)


def test_emit_csv_io_error_names_path(tmp_path):
    bad = tmp_path / "missing" / "r.csv"
    with pytest.raises(OSError, match="missing"):
        emit_csv([], bad)
