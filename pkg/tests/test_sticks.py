"""Samplers and event predicates, checked against hand-built vectors and the oracle."""

import warnings
from fractions import Fraction
from itertools import combinations
from math import ulp

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bstick.sticks import (
    ORACLE_MAX_N,
    EventKind,
    EventSpec,
    SamplerModel,
    all_k_subsets_polygon,
    event_indicator_batch,
    exists_k_polygon_windowed,
    max_spacing_exceeds,
    sample_spacings,
    sample_spacings_batch,
    subset_polygon_oracle,
)


class StubRng:
    """Feeds a fixed array through the Generator.random((count, dim)) call."""

    def __init__(self, values):
        self._values = np.asarray(values, dtype=float)

    def random(self, size):
        assert self._values.shape == tuple(size)
        return self._values


# ---------------------------------------------------------------- samplers


def test_uniform_breaks_known_draws():
    # one break at 0.3 splits the stick into 0.3 and 0.7
    out = sample_spacings_batch(2, SamplerModel.UNIFORM_BREAKS, StubRng([[0.3]]), 1)
    assert np.allclose(out, [[0.3, 0.7]])
    # unsorted draws are sorted before differencing
    out = sample_spacings_batch(3, SamplerModel.UNIFORM_BREAKS, StubRng([[0.9, 0.4]]), 1)
    assert np.allclose(out, [[0.4, 0.5, 0.1]])
    # n=1 consumes zero draws and returns the whole stick
    out = sample_spacings_batch(1, SamplerModel.UNIFORM_BREAKS, StubRng(np.empty((1, 0))), 1)
    assert np.allclose(out, [[1.0]])


def test_exponential_normalized_known_draws():
    # u = 1 - e^{-y} makes -log1p(-u) recover y; y = (1, 1, 2) normalizes to quarters
    y = np.array([[1.0, 1.0, 2.0]])
    u = 1.0 - np.exp(-y)
    out = sample_spacings_batch(3, SamplerModel.EXPONENTIAL_NORMALIZED, StubRng(u), 1)
    assert np.allclose(out, [[0.25, 0.25, 0.5]])


def test_draws_per_trial():
    assert SamplerModel.UNIFORM_BREAKS.draws_per_trial(6) == 5
    assert SamplerModel.EXPONENTIAL_NORMALIZED.draws_per_trial(6) == 6


@pytest.mark.parametrize("model", list(SamplerModel))
@pytest.mark.parametrize("n", [1, 2, 3, 8, 40, 10_000])
def test_spacings_are_simplex_points(model, n):
    rng = np.random.default_rng(2024)
    out = sample_spacings_batch(n, model, rng, 64 if n < 1000 else 4)
    assert out.shape[1] == n
    assert (out >= 0).all()
    err = np.abs(out.sum(axis=1) - 1.0).max()
    assert err <= 8 * ulp(1.0)


@pytest.mark.parametrize("model", list(SamplerModel))
def test_scalar_call_equals_batch_rows(model):
    """m single-trial calls on one stream replay exactly as one m-row batch."""
    n, m = 7, 25
    rng_a = np.random.Generator(np.random.Philox(key=np.array([5, 0], dtype=np.uint64)))
    rng_b = np.random.Generator(np.random.Philox(key=np.array([5, 0], dtype=np.uint64)))
    batch = sample_spacings_batch(n, model, rng_a, m)
    singles = np.stack([sample_spacings(n, model, rng_b) for _ in range(m)])
    np.testing.assert_array_equal(batch, singles)


def test_sampler_input_validation():
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError):
        sample_spacings_batch(0, SamplerModel.UNIFORM_BREAKS, rng, 1)
    with pytest.raises(ValueError):
        sample_spacings_batch(3, SamplerModel.UNIFORM_BREAKS, rng, -1)


# ------------------------------------------------------------- event specs


def test_event_spec_validation():
    assert EventSpec.all_k_subsets(4).label() == "all:k=4"
    assert EventSpec.exists_k(3).label() == "exists:k=3"
    assert EventSpec.max_spacing(Fraction(1, 2)).label() == "max-spacing:x=1/2"
    with pytest.raises(ValueError):
        EventSpec(EventKind.ALL_K_SUBSETS, k=2)
    with pytest.raises(ValueError):
        EventSpec(EventKind.ALL_K_SUBSETS, k=3, x=Fraction(1, 2))
    with pytest.raises(ValueError):
        EventSpec(EventKind.MAX_SPACING, x=Fraction(3, 2))
    with pytest.raises(ValueError):
        EventSpec(EventKind.MAX_SPACING, k=3, x=Fraction(1, 2))
    with pytest.raises(ValueError):
        EventSpec.all_k_subsets(6).validate_for(5)


# -------------------------------------------------------------- predicates


def test_predicates_on_hand_vectors():
    even = [0.2, 0.2, 0.2, 0.2, 0.2]
    assert all_k_subsets_polygon(even, 3)
    assert exists_k_polygon_windowed(even, 3)
    assert not max_spacing_exceeds(even, 0.5)

    assert not all_k_subsets_polygon([0.5, 0.2, 0.2, 0.1], 3)  # 0.5 > 0.1 + 0.2

    # 0.6 kills every triple containing it, but the small triple still works
    spiky = [0.6, 0.1, 0.1, 0.1, 0.1]
    assert not all_k_subsets_polygon(spiky, 3)
    assert exists_k_polygon_windowed(spiky, 3)
    assert max_spacing_exceeds(spiky, 0.5)

    # degenerate (max == sum of rest) counts as formed: non-strict inequality
    flat = [0.5, 0.25, 0.25]
    assert all_k_subsets_polygon(flat, 3)
    assert exists_k_polygon_windowed(flat, 3)
    assert not max_spacing_exceeds(flat, 0.5)

    # no triple at all: one piece above 1/2
    dead = [0.7, 0.1, 0.05, 0.15]
    assert not exists_k_polygon_windowed([0.7, 0.2, 0.1], 3)
    assert not all_k_subsets_polygon(dead, 4)


def test_predicate_input_validation():
    with pytest.raises(ValueError):
        all_k_subsets_polygon([0.5, 0.5], 3)
    with pytest.raises(ValueError):
        max_spacing_exceeds([0.5, 0.5], 0.0)
    with pytest.raises(ValueError):
        subset_polygon_oracle([1.0 / 16] * 16, 3)


def test_oracle_on_hand_vectors():
    chk = subset_polygon_oracle([0.6, 0.1, 0.1, 0.1, 0.1], 3)
    assert chk.all_subsets is False and chk.some_subset is True
    chk = subset_polygon_oracle([0.2] * 5, 3)
    assert chk.all_subsets is True and chk.some_subset is True
    chk = subset_polygon_oracle([0.7, 0.2, 0.1], 3)
    assert chk.all_subsets is False and chk.some_subset is False


def _random_spacings(rng, n, count):
    return sample_spacings_batch(n, SamplerModel.UNIFORM_BREAKS, rng, count)


def test_fast_predicates_match_oracle():
    """The reduced inequalities agree with brute-force enumeration everywhere."""
    rng = np.random.default_rng(91)
    for n in range(3, 11):
        rows = _random_spacings(rng, n, 150)
        for k in range(3, n + 1):
            for row in rows:
                chk = subset_polygon_oracle(row, k)
                assert all_k_subsets_polygon(row, k) == chk.all_subsets
                assert exists_k_polygon_windowed(row, k) == chk.some_subset


def test_windowed_exists_matches_oracle_for_k3_wide():
    rng = np.random.default_rng(17)
    for n in (11, 12):
        rows = _random_spacings(rng, n, 300)
        for row in rows:
            chk = subset_polygon_oracle(row, 3)
            assert exists_k_polygon_windowed(row, 3) == chk.some_subset


def test_windowed_exists_k4_and_up_logged_against_oracle():
    """For k >= 4 the windowed scan is not assumed equivalent to the existence
    event: the oracle is authoritative, and any disagreement is reported as a
    warning with the offending vector.  A window is itself a subset, so the
    windowed predicate can never claim a polygon the oracle rejects; only that
    impossible direction is a hard failure."""
    rng = np.random.default_rng(23)
    disagreements = []
    for n in range(4, 11):
        rows = _random_spacings(rng, n, 500)
        for k in range(4, n + 1):
            windowed = np.array([exists_k_polygon_windowed(r, k) for r in rows])
            oracle = np.array([subset_polygon_oracle(r, k).some_subset for r in rows])
            for i in np.nonzero(windowed != oracle)[0]:
                disagreements.append((k, n, bool(windowed[i]), rows[i]))
    for k, n, claimed, row in disagreements:
        warnings.warn(
            f"windowed existence disagrees with the subset oracle at k={k}, "
            f"n={n} (windowed={claimed}); spacings={row.tolist()}"
        )
        assert not claimed, "windowed scan claimed a polygon the oracle rejects"


def test_oracle_spec_vectors():
    # no triple works: 0.4 > 0.1 and 0.5 > 0.45 cover both candidate windows
    chk = subset_polygon_oracle([0.05, 0.05, 0.4, 0.5], 3)
    assert chk == (False, False)
    assert not exists_k_polygon_windowed([0.05, 0.05, 0.4, 0.5], 3)
    chk = subset_polygon_oracle([0.25, 0.25, 0.25, 0.25], 4)
    assert chk == (True, True)
    # the three near-equal pieces form a triangle even though 0.3 spoils "all"
    chk = subset_polygon_oracle([0.2, 0.25, 0.25, 0.3], 3)
    assert chk.some_subset is True


def test_max_spacing_boundary_is_strict():
    assert max_spacing_exceeds([0.5, 0.5], 0.3)
    assert not max_spacing_exceeds([0.25, 0.25, 0.25, 0.25], 0.25)
    assert not max_spacing_exceeds([0.3, 0.7], 0.7)


@given(st.integers(min_value=0, max_value=2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_event_monotone_in_k(seed):
    """If every k-subset forms a k-gon, every (k+1)-subset forms one too
    (dropping a non-max element of the larger set only shrinks the sum side).
    Existence is NOT monotone in k — e.g. [.11, .63, .17, .09] has a triangle
    but its only 4-subset is dominated by .63 — so only "all implies exists"
    is asserted for it."""
    rng = np.random.default_rng(seed)
    n = 3 + seed % 8
    row = _random_spacings(rng, n, 1)[0]
    for k in range(3, n):
        if all_k_subsets_polygon(row, k):
            assert all_k_subsets_polygon(row, k + 1)
    for k in range(3, n + 1):
        if all_k_subsets_polygon(row, k):
            assert exists_k_polygon_windowed(row, k)


@given(st.integers(min_value=0, max_value=2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_predicates_are_permutation_invariant(seed):
    rng = np.random.default_rng(seed)
    n = 4 + seed % 6
    row = _random_spacings(rng, n, 1)[0]
    shuffled = rng.permutation(row)
    for k in range(3, n + 1):
        assert all_k_subsets_polygon(row, k) == all_k_subsets_polygon(shuffled, k)
        assert exists_k_polygon_windowed(row, k) == exists_k_polygon_windowed(shuffled, k)


def test_event_indicator_batch_matches_scalar_predicates():
    rng = np.random.default_rng(3)
    rows = _random_spacings(rng, 7, 200)
    for event, scalar in (
        (EventSpec.all_k_subsets(4), lambda r: all_k_subsets_polygon(r, 4)),
        (EventSpec.exists_k(5), lambda r: exists_k_polygon_windowed(r, 5)),
        (EventSpec.max_spacing(Fraction(1, 3)), lambda r: max_spacing_exceeds(r, 1 / 3)),
    ):
        hits = event_indicator_batch(event, rows)
        expected = np.array([scalar(r) for r in rows])
        np.testing.assert_array_equal(hits, expected)


def test_event_indicator_batch_oracle_mode():
    rng = np.random.default_rng(4)
    rows = _random_spacings(rng, 6, 150)
    for event in (EventSpec.all_k_subsets(4), EventSpec.exists_k(4)):
        fast = event_indicator_batch(event, rows)
        slow = event_indicator_batch(event, rows, use_oracle=True)
        np.testing.assert_array_equal(fast, slow)
    with pytest.raises(ValueError):
        event_indicator_batch(
            EventSpec.all_k_subsets(3), np.full((2, 16), 1.0 / 16), use_oracle=True
        )


def test_all_k_subsets_reduction_is_the_hardest_subset():
    """The one inequality tested is exactly the worst case over all subsets."""
    rng = np.random.default_rng(12)
    for row in _random_spacings(rng, 8, 100):
        srt = np.sort(row)
        for k in range(3, 9):
            worst = np.concatenate([srt[: k - 1], srt[-1:]])
            direct = all(
                max(sub) <= sum(sub) - max(sub) for sub in combinations(row, k)
            )
            assert (worst[-1] <= worst[:-1].sum()) == direct
