from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from abar.density import (
    StreamCache,
    congruence_scan,
    density_report,
    density_reports,
    load_stream,
    primitive_candidates,
    save_stream,
    theorem_coverage,
)
from abar.partition_funcs import coeffs_abar, coeffs_abar_mod
from abar.series_core import PowerSeries, PrecisionError

from oracles import abar_reference

SMALL = (100, 1000, 10**4)


def test_literal_definition_against_reference():
    vals = abar_reference(5, 301)
    for M in (2, 3, 5, 7):
        rep = density_report(5, M, 0, [50, 300])
        for X, c, ratio in zip(rep.checkpoints, rep.counts, rep.ratios):
            expected = sum(1 for v in vals[: X + 1] if v % M == 0)
            assert c == expected
            assert ratio == Fraction(expected, X)


def test_mod_two_ratio_is_exactly_one():
    # phi(-q) = 1 (mod 2), so every coefficient after the first is even
    rep = density_report(3, 2, 0, SMALL)
    assert rep.counts == list(SMALL)
    assert rep.ratios == [1, 1, 1]


def test_ratio_grows_mod_four():
    rep = density_report(3, 4, 0, (10**3, 10**5))
    assert rep.ratios[1] > rep.ratios[0]


def test_tags():
    assert density_report(3, 2, 0, [10]).tag == "theorem-covered"
    assert density_report(9, 27, 0, [10]).theorem == "3-power"
    assert density_report(25, 5, 0, [10]).theorem == "p>=5"
    rep = density_report(5, 7, 0, [10])
    assert rep.tag == "exploratory" and rep.theorem is None
    with pytest.raises(ValueError):
        density_report(5, 7, 0, [10], mode="theorem")


@pytest.mark.parametrize(
    "t,M,expected",
    [(3, 2, "2-power"), (15, 8, "2-power"), (5, 9, "3-power"), (9, 3, "3-power"), (6, 2, None),
     (35, 7, "p>=5"), (35, 3, "3-power"), (12, 3, None), (5, 6, None), (3, 5, None), (49, 49, "p>=5")],
)
def test_theorem_coverage(t, M, expected):
    assert theorem_coverage(t, M) == expected


def test_validation():
    with pytest.raises(ValueError):
        density_report(3, 1)
    with pytest.raises(ValueError):
        density_report(3, 4, r=4)
    with pytest.raises(ValueError):
        density_report(3, 4, 0, [0])
    with pytest.raises(PrecisionError):
        density_report(3, 4, 0, [500], stream=coeffs_abar_mod(3, 4, 400))


def test_determinism():
    a = density_report(15, 9, 0, SMALL)
    b = density_report(15, 9, 0, SMALL)
    assert a.to_dict() == b.to_dict()
    assert a.residue_counts == b.residue_counts


@pytest.mark.parametrize("t,M", [(3, 4), (9, 9), (5, 25), (7, 2)])
def test_cross_backend(t, M):
    exact = coeffs_abar(t, 10**4 + 1)
    vals = [int(x) % M for x in exact.coeffs]
    rep = density_report(t, M, 0, SMALL)
    for X, row in zip(SMALL, rep.residue_counts):
        assert row == np.bincount(vals[: X + 1], minlength=M).tolist()


def test_shared_lcm_stream_matches_separate_runs():
    jobs = [(9, 2), (9, 4), (9, 3), (9, 9), (5, 2)]
    together = density_reports(jobs, checkpoints=SMALL)
    for (t, M), rep in zip(jobs, together):
        assert rep.to_dict() == density_report(t, M, 0, SMALL).to_dict()


def test_parallel_matches_serial():
    jobs = [(3, 2), (3, 9)]
    assert [r.to_dict() for r in density_reports(jobs, checkpoints=(100, 1000), workers=2)] == [
        r.to_dict() for r in density_reports(jobs, checkpoints=(100, 1000))
    ]


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 20), st.integers(2, 30), st.lists(st.integers(1, 2000), min_size=1, max_size=5))
def test_report_invariants(t, M, checkpoints):
    rep = density_report(t, M, 0, checkpoints)
    assert rep.counts == sorted(rep.counts)
    for X, row in zip(rep.checkpoints, rep.residue_counts):
        assert sum(row) == X + 1
    # abar_t(0) = 1 is never counted for r = 0, so the ratio cannot exceed 1
    assert all(0 <= r <= 1 for r in rep.ratios)


def test_stream_file_round_trip(tmp_path):
    for M in (2, 300, 70000, 2**40):
        s = coeffs_abar_mod(3, M, 500)
        path = tmp_path / f"s{M}.bin"
        save_stream(path, 3, s)
        t, back = load_stream(path)
        assert t == 3 and back == s
    raw = (tmp_path / "s300.bin").read_bytes()
    assert raw[:24] == (3).to_bytes(8, "little") + (300).to_bytes(8, "little") + (500).to_bytes(8, "little")
    assert len(raw) == 24 + 2 * 500


def test_truncated_stream_file(tmp_path):
    path = tmp_path / "s.bin"
    save_stream(path, 3, coeffs_abar_mod(3, 4, 100))
    path.write_bytes(path.read_bytes()[:-1])
    with pytest.raises(ValueError):
        load_stream(path)


def test_stream_cache(tmp_path):
    cache = StreamCache(tmp_path)
    a = density_report(3, 4, 0, [1000], cache=cache)
    assert (tmp_path / "abar_t3_M4_P1001.bin").exists()
    # smaller request is served from the same file
    b = density_report(3, 4, 0, [500], cache=cache)
    assert len(list(tmp_path.iterdir())) == 1
    assert b.counts == density_report(3, 4, 0, [500]).counts
    assert a.counts == density_report(3, 4, 0, [1000]).counts


def test_residue_stream_rejected_if_modulus_mismatch():
    with pytest.raises(ValueError):
        density_report(3, 4, 0, [10], stream=coeffs_abar_mod(3, 6, 100))
    with pytest.raises(ValueError):
        density_report(3, 4, 0, [10], stream=PowerSeries([1] * 20))


# ---------------------------------------------------------------- scans


def test_scan_shape_and_witnesses():
    X = 2000
    stream = coeffs_abar(3, X + 1)
    cands = congruence_scan(3, 2, 24, X)
    assert len(cands) == sum(range(1, 25))
    for c in cands:
        if c.verified:
            assert c.status == f"verified-up-to-{X}"
            assert all(stream[c.A * n + c.B] % 2 == 0 for n in range((X - c.B) // c.A + 1))
        else:
            assert c.status == f"refuted-at-{c.witness_n}"
            assert stream[c.witness_index] % 2 != 0
    # n = 0 is always a witness for B = 0 since abar(0) = 1
    assert all(not c.verified and c.witness_n == 0 for c in cands if c.B == 0)


def test_scan_refutation_is_monotone():
    small = {(c.A, c.B): c for c in congruence_scan(5, 5, 12, 1000)}
    large = {(c.A, c.B): c for c in congruence_scan(5, 5, 12, 5000)}
    for key, c in small.items():
        if not c.verified:
            assert not large[key].verified
            assert large[key].witness_n == c.witness_n


def test_primitive_candidates():
    cands = congruence_scan(3, 4, 12, 3000)
    prim = primitive_candidates(cands)
    verified = [c for c in cands if c.verified]
    assert set(prim) <= set(verified)
    for c in verified:
        assert any(c.A % p.A == 0 and c.B % p.A == p.B for p in prim)
