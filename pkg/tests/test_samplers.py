import math

import numpy as np
import pytest

from numsym.errors import InputError
from numsym.measures import parse_measure, plancherel_spec, rsk_thoma_spec
from numsym.poset import build_chain, build_young_poset, parse_poset
from numsym.samplers import (
    compare_frequency_profiles,
    estimate_frequency,
    make_rng,
    replica_statistic,
    sample_kernel_walk,
    sample_plancherel,
    sample_rsk_thoma,
)
from numsym.schemas import IdealSpec

FIRST_ROW = IdealSpec.hook(1, 0)
FIRST_COLUMN = IdealSpec.hook(0, 1)


def test_rng_is_reproducible():
    assert make_rng(11).random(4).tolist() == make_rng(11).random(4).tolist()


def test_plancherel_first_step():
    for seed in range(20):
        assert sample_plancherel(1, seed).cells.tolist() == [[1, 1]]


def test_plancherel_second_step_is_fair():
    trials = 10_000
    second_in_first_row = sum(sample_plancherel(2, seed).cells[1, 0] == 1 for seed in range(trials))
    assert abs(second_in_first_row / trials - 0.5) <= 0.02


def test_growth_is_a_numbering():
    growth = sample_plancherel(12, seed=3)
    shapes = list(growth.diagrams())
    assert shapes[0] == ()
    assert shapes[-1] == growth.shape
    assert sum(growth.shape) == 12
    phi = growth.to_numbering()
    assert phi.length == 13
    assert phi.endpoint == phi.poset.full_mask


def test_rsk_single_letter_grows_one_row():
    growth = sample_rsk_thoma([1.0], 50, seed=1)
    assert growth.shape == (50,)


def test_rsk_two_letters_stay_within_two_rows():
    for seed in range(10):
        assert len(sample_rsk_thoma([0.5, 0.5], 200, seed).shape) <= 2


def test_rsk_growth_is_a_numbering():
    for seed in range(5):
        growth = sample_rsk_thoma([0.5, 0.3, 0.2], 60, seed)
        phi = growth.to_numbering()
        assert phi.length == 61
        assert phi.endpoint == phi.poset.full_mask
        assert len(growth.shape) <= 3


def test_rsk_first_row_holds_every_smallest_letter():
    alpha = [0.7, 0.3]
    for seed in range(5):
        letters = make_rng(seed).choice(2, size=500, p=np.asarray(alpha))
        growth = sample_rsk_thoma(alpha, 500, seed)
        assert growth.shape[0] >= int((letters == 0).sum())


def test_sampler_arguments_are_checked():
    with pytest.raises(InputError):
        sample_plancherel(0, seed=1)
    with pytest.raises(InputError):
        sample_rsk_thoma([0.6, 0.6], 10, seed=1)


def test_kernel_walk_follows_the_endpoint():
    window = build_young_poset([3, 2])
    spec = parse_measure("endpoint:5:0", window)
    for seed in range(5):
        added = sample_kernel_walk(spec, 5, seed)
        assert sorted(added) == [1, 2, 3, 4, 5]
    with pytest.raises(InputError):
        sample_kernel_walk(spec, 6, seed=0)


def test_full_ideal_has_frequency_one():
    report = estimate_frequency(plancherel_spec(), IdealSpec.full(), 50, 5, seed=7)
    assert report.estimate == 1.0
    assert report.stderr == 0.0


def test_two_letter_rsk_fills_two_rows():
    report = estimate_frequency(rsk_thoma_spec([0.7, 0.3]), IdealSpec.hook(2, 0), 300, 10, seed=7)
    assert report.estimate == 1.0


def test_single_letter_rsk_first_row():
    report = estimate_frequency(rsk_thoma_spec([1.0]), FIRST_ROW, 100, 10, seed=7)
    assert report.estimate == 1.0
    assert report.stderr == 0.0


def test_tied_alpha_is_flagged():
    report = estimate_frequency(rsk_thoma_spec([0.5, 0.5]), FIRST_ROW, 100, 5, seed=7)
    assert report.flags == ["tied-alpha"]


def test_incompatible_ideals_are_rejected():
    chain = parse_measure("endpoint:4:0", build_chain(5))
    with pytest.raises(InputError):
        estimate_frequency(chain, FIRST_ROW, 4, 3, seed=1)
    with pytest.raises(InputError):
        estimate_frequency(plancherel_spec(), IdealSpec.finite([1, 2]), 10, 3, seed=1)
    with pytest.raises(InputError):
        estimate_frequency(plancherel_spec(), FIRST_ROW, 10, 0, seed=1)


def test_set_ideal_on_kernel_walk():
    chain = parse_measure("endpoint:4:0", build_chain(5))
    report = estimate_frequency(chain, IdealSpec.finite([1, 2]), 4, 3, seed=1)
    assert report.estimate == 0.5


def test_frequencies_are_monotone_in_the_ideal():
    nested = [FIRST_ROW, IdealSpec.hook(2, 0), IdealSpec.hook(2, 1), IdealSpec.full()]
    for spec in (plancherel_spec(), rsk_thoma_spec([0.6, 0.3, 0.1])):
        for seed in range(5):
            values = [replica_statistic(spec, ideal, 200, seed) for ideal in nested]
            assert values == sorted(values)
        estimates = [estimate_frequency(spec, ideal, 200, 5, seed=3).estimate for ideal in nested]
        assert estimates == sorted(estimates)


def test_set_ideals_must_be_downward_closed():
    chain = parse_measure("endpoint:4:0", build_chain(5))
    with pytest.raises(InputError):
        estimate_frequency(chain, IdealSpec.finite([2]), 4, 3, seed=1)
    with pytest.raises(InputError):
        estimate_frequency(chain, IdealSpec.finite([9]), 4, 3, seed=1)


def test_estimates_are_deterministic():
    first = estimate_frequency(rsk_thoma_spec([0.6, 0.4]), FIRST_ROW, 200, 8, seed=21)
    again = estimate_frequency(rsk_thoma_spec([0.6, 0.4]), FIRST_ROW, 200, 8, seed=21)
    assert first.csv_row() == again.csv_row()


def test_worker_pool_matches_serial_run():
    spec = rsk_thoma_spec([0.8, 0.2])
    serial = estimate_frequency(spec, FIRST_ROW, 150, 6, seed=5, workers=1)
    pooled = estimate_frequency(spec, FIRST_ROW, 150, 6, seed=5, workers=2)
    assert serial.csv_row() == pooled.csv_row()


def test_compare_same_law_is_indistinguishable():
    ideals = [FIRST_ROW, FIRST_COLUMN]
    matrix, rows = compare_frequency_profiles([plancherel_spec(), plancherel_spec()], ideals,
                                              400, 20, seed=7)
    assert len(matrix) == 2 and len(matrix[0]) == 2
    assert matrix[0][0].seed != matrix[1][0].seed
    assert rows[0].verdict == "indistinguishable"


def test_compare_plancherel_against_rsk():
    _, rows = compare_frequency_profiles([plancherel_spec(), rsk_thoma_spec([0.7, 0.3])], [FIRST_ROW],
                                         400, 20, seed=7)
    assert rows[0].verdict == "distinguished"


def test_compare_rejects_mixed_families():
    chain = parse_measure("endpoint:4:0", build_chain(5))
    with pytest.raises(InputError):
        compare_frequency_profiles([plancherel_spec(), chain], [IdealSpec.full()], 4, 3, seed=1)
    with pytest.raises(InputError):
        compare_frequency_profiles([plancherel_spec()], [FIRST_ROW], 4, 3, seed=1)


@pytest.mark.slow
def test_plancherel_first_row_length():
    n = 2500
    seeds = range(20)
    close = sum(abs(sample_plancherel(n, seed).shape[0] - 2 * math.sqrt(n)) <= 0.3 * 2 * math.sqrt(n)
                for seed in seeds)
    assert close >= 0.9 * len(seeds)


@pytest.mark.slow
def test_plancherel_has_small_hook_frequencies():
    for ideal in (FIRST_ROW, FIRST_COLUMN):
        report = estimate_frequency(plancherel_spec(), ideal, 2500, 100, seed=7)
        assert report.estimate <= 0.10


@pytest.mark.slow
def test_rsk_first_row_frequency_matches_alpha():
    report = estimate_frequency(rsk_thoma_spec([0.7, 0.3]), FIRST_ROW, 5000, 100, seed=7)
    assert 0.65 <= report.estimate <= 0.75


@pytest.mark.slow
def test_compare_distinguishes_alphas():
    _, rows = compare_frequency_profiles([rsk_thoma_spec([0.7, 0.3]), rsk_thoma_spec([0.6, 0.4])],
                                         [FIRST_ROW], 5000, 100, seed=7)
    assert rows[0].distinguishable
    assert rows[0].separations[0] >= 3


def test_file_posets_do_not_share_samples():
    chain = parse_poset("el 0\nel 1\nel 2\ncov 0 1\ncov 1 2\n")
    pair = parse_poset("el 0\nel 1\nel 2\ncov 0 1\ncov 0 2\n")
    assert chain.label == pair.label
    on_chain = parse_measure("endpoint:2:0", chain)
    on_pair = parse_measure("endpoint:2:0", pair)
    assert on_chain.sample_key != on_pair.sample_key

    first = IdealSpec.finite([1])
    assert estimate_frequency(on_chain, first, 1, 40, seed=0).estimate == 1.0
    assert estimate_frequency(on_pair, first, 1, 40, seed=0).estimate < 1.0


def test_close_alphas_have_their_own_samples():
    rounded = rsk_thoma_spec([0.7, 0.3])
    nearby = rsk_thoma_spec([0.7000004, 0.2999996])
    assert rounded.label == nearby.label
    assert rounded.sample_key != nearby.sample_key
