import pytest
from measures.correlation import tau_x_hat
from rankings.ranking import Ranking, identity, reverse
from sampling.mallows import MallowsParams
from sampling.scenario import (
    MinoritySpec,
    ScenarioSpec,
    SizeRange,
    generate_instance,
    sample_judge,
    sample_rankings,
)


def _spec(**overrides) -> ScenarioSpec:
    fields = dict(n=8, num_judges=20, phi=0.05, size_range=SizeRange(2, 4), seed=3)
    fields.update(overrides)
    return ScenarioSpec(**fields)


def _contrarian_spec(alpha: float = 0.2, **overrides) -> ScenarioSpec:
    minority = MinoritySpec(alpha, "contrarians", 0.05, SizeRange(5, 7))
    return _spec(minority=minority, **overrides)


def test_size_range_parsing():
    assert SizeRange.parse("2:6") == SizeRange(2, 6)
    assert str(SizeRange(5, 7)) == "U(5,7)"
    for text in ("3", "a:b", "1:3", "5:4"):
        with pytest.raises(ValueError):
            SizeRange.parse(text)


def test_generation_is_deterministic():
    spec = _contrarian_spec()
    first, second = generate_instance(spec), generate_instance(spec)
    assert first == second
    assert generate_instance(_contrarian_spec(seed=4)) != first


def test_judges_do_not_depend_on_the_panel_size():
    small, large = _spec(num_judges=5), _spec(num_judges=20)
    assert generate_instance(small).judges == generate_instance(large).judges[:5]


def test_subset_sizes_follow_each_group():
    spec = _contrarian_spec()
    inst = generate_instance(spec)
    for k, judge in enumerate(inst.judges):
        sizes = spec.size_range if k < spec.majority_size else spec.minority.size_range
        assert sizes.low <= judge.num_ranked <= sizes.high
        assert sorted(p for p in judge.positions if p is not None) == list(
            range(1, judge.num_ranked + 1)
        )


@pytest.mark.parametrize(
    "alpha, judges, majority",
    [(0.2, 20, 16), (0.15, 20, 17), (0.05, 20, 19), (0.05, 25, 23), (0.1, 25, 22)],
)
def test_majority_size(alpha, judges, majority):
    minority = MinoritySpec(alpha, "spammers", 0.9, SizeRange(2, 4))
    assert _spec(num_judges=judges, minority=minority).majority_size == majority


def test_without_minority_everyone_is_majority():
    spec = _spec()
    assert spec.majority_size == 20
    assert spec.params_for(19)[2] == "majority"


def test_contrarians_draw_around_the_reversed_truth():
    spec = _contrarian_spec(alpha=0.4)
    params, sizes, kind = spec.params_for(spec.num_judges - 1)
    assert kind == "contrarians"
    assert params.reference == reverse(identity(8))
    assert sizes == SizeRange(5, 7)

    inst = generate_instance(spec)
    truth = spec.reference
    majority = [tau_x_hat(j, truth) for j in inst.judges[: spec.majority_size]]
    minority = [tau_x_hat(j, truth) for j in inst.judges[spec.majority_size :]]
    assert sum(majority) / len(majority) > 0.5
    assert sum(minority) / len(minority) < -0.5


def test_spammers_keep_the_truth_as_reference():
    minority = MinoritySpec(0.2, "spammers", 0.9, SizeRange(2, 4))
    params, _, kind = _spec(minority=minority).params_for(19)
    assert kind == "spammers"
    assert params.reference == identity(8) and params.phi == 0.9


@pytest.mark.parametrize(
    "kwargs",
    [
        {"proportion": 0.5, "kind": "spammers", "phi": 0.9},
        {"proportion": 0.0, "kind": "spammers", "phi": 0.9},
        {"proportion": 0.2, "kind": "spammers", "phi": 0.5},
        {"proportion": 0.2, "kind": "trolls", "phi": 0.5},
    ],
)
def test_minority_validation(kwargs):
    with pytest.raises(ValueError):
        MinoritySpec(size_range=SizeRange(2, 4), **kwargs)


def test_scenario_validation():
    with pytest.raises(ValueError, match="exceeds"):
        _spec(size_range=SizeRange(2, 9))
    with pytest.raises(ValueError, match="generator"):
        _spec(generator="rim")
    with pytest.raises(ValueError):
        _spec(phi=0.0)
    with pytest.raises(ValueError):
        _spec(n=1, size_range=SizeRange(2, 2))


def test_dict_round_trip():
    spec = _contrarian_spec(reference=Ranking((2, 1, 3, 4, 5, 6, 7, 8)))
    assert ScenarioSpec.from_dict(spec.to_dict()) == spec


def test_from_dict_accepts_short_forms():
    spec = ScenarioSpec.from_dict(
        {
            "n": 6,
            "num_judges": 4,
            "phi": 0.5,
            "size_range": "2:3",
            "minority": {"proportion": 0.25, "kind": "contrarians", "phi": 0.5, "size_range": [3, 4]},
        }
    )
    assert spec.generator == "rime2" and spec.seed == 0
    assert spec.minority.size_range == SizeRange(3, 4)
    with pytest.raises(ValueError, match="missing"):
        ScenarioSpec.from_dict({"n": 6, "phi": 0.5, "size_range": "2:3"})


def test_instance_metadata_records_provenance():
    spec = _spec(generator="rime1")
    inst = generate_instance(spec)
    assert inst.metadata["generator"] == "rime1"
    assert inst.metadata["seed"] == 3
    assert inst.metadata["scenario"]["n"] == 8
    assert sample_judge(spec, 2) == inst.judges[2]


def test_sample_rankings():
    params = MallowsParams(identity(5), 0.5)
    complete = sample_rankings(params, "rim", 10, seed=1)
    assert all(r.is_complete and r.is_strict for r in complete)
    assert complete == sample_rankings(params, "rim", 10, seed=1)

    partial = sample_rankings(params, "rime1", 10, seed=1, size_range=SizeRange(2, 3))
    assert all(2 <= r.num_ranked <= 3 for r in partial)
    assert all(r.is_complete for r in sample_rankings(params, "rime2", 5, seed=1))

    with pytest.raises(ValueError):
        sample_rankings(params, "plackett", 1, seed=1)
    with pytest.raises(ValueError):
        sample_rankings(params, "rim", 0, seed=1)
    with pytest.raises(ValueError, match="exceeds"):
        sample_rankings(params, "rime2", 1, seed=1, size_range=SizeRange(2, 6))
