import pytest

from weighted_brauer.errors import InvalidInputError
from weighted_brauer.sweep import CHECKS, check_weight_vector, sweep


def test_check_weight_vector():
    result = check_weight_vector((2, 4, 6))
    assert result["weights"] == [2, 4, 6]
    assert result["normalized"] == [1, 2, 3]
    assert result["well_formed"] is True
    assert result["E2_01"] == "0"
    assert result["picard_index"] == 6
    assert all(result[check] for check in CHECKS)
    assert result["failures"] == []


def test_check_weight_vector_not_well_formed():
    result = check_weight_vector((1, 2, 4))
    assert result["well_formed"] is False
    assert result["picard_lcm"] is True
    assert result["failures"] == []


def test_smallest_sweep():
    report = sweep(2, 1)
    assert report.checked == 1
    assert report.payload()["failures"] == []


def test_sweep_has_no_failures():
    report = sweep(2, 4)
    payload = report.payload()
    assert payload["checked"] == 20
    assert payload["failures"] == []
    assert payload["all_brauer_trivial"] and payload["all_d2_iso"] and payload["all_picard_lcm"]
    assert list(report.frame["weights"].map(tuple)) == sorted(report.frame["weights"].map(tuple))
    assert "E2_01" in report.summary_table()


def test_sweep_is_independent_of_jobs():
    assert sweep(2, 3, jobs=1).payload() == sweep(2, 3, jobs=2, chunksize=1).payload()


@pytest.mark.parametrize("dim, max_weight, jobs", [(1, 5, 1), (2, 0, 1), (2, 3, 0)])
def test_sweep_rejects_bad_arguments(dim, max_weight, jobs):
    with pytest.raises(InvalidInputError):
        sweep(dim, max_weight, jobs=jobs)
