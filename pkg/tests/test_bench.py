import pytest

from horofilter import HorofilterError
from horofilter.benchmarks import BENCH_CSV_HEADER, bench_to_csv, run_bench


@pytest.mark.slow
def test_doubling_channels_roughly_doubles_time():
    # identity mixer: one apply is Theta(|E| d), so d=32 over d=16 should
    # land near 2x; wide brackets absorb machine noise
    rows = run_bench(sizes=(16385,), channels=(16, 32), repeats=7, seed=0)
    ratio = rows[1].median_ns / rows[0].median_ns
    assert 1.5 <= ratio <= 3.0, ratio


class TestRunBench:
    def test_rows_and_csv_schema(self):
        rows = run_bench(sizes=(129, 257), channels=(2, 4), repeats=3, seed=0)
        assert len(rows) == 4
        text = bench_to_csv(rows)
        lines = text.splitlines()
        assert lines[0] == BENCH_CSV_HEADER
        assert len(lines) == 5
        for row in rows:
            assert row.edges == row.n - 1  # random trees
            assert row.median_ns > 0
            assert row.per_edge_per_channel_ns > 0

    def test_output_hash_stable_across_repeat_counts(self):
        one = run_bench(sizes=(129,), channels=(4,), repeats=1, seed=3)
        nine = run_bench(sizes=(129,), channels=(4,), repeats=9, seed=3)
        assert one[0].output_sha256 == nine[0].output_sha256

    def test_dense_mixing_mode(self):
        rows = run_bench(sizes=(65,), channels=(4,), repeats=2, mixing="dense", seed=1)
        assert rows[0].d == 4

    def test_sizes_must_increase(self):
        with pytest.raises(HorofilterError, match="increasing"):
            run_bench(sizes=(100, 50), channels=(2,), repeats=1)

    def test_bad_mixing_mode(self):
        with pytest.raises(HorofilterError, match="mixing"):
            run_bench(sizes=(65,), channels=(2,), repeats=1, mixing="sparse")
