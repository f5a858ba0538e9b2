import itertools
import json

import pytest

import pdrank


def noiseless_dense(truth):
    rows = []
    for i, j in itertools.combinations(range(len(truth)), 2):
        rows.append((i, j, 1 if truth[i] > truth[j] else -1, 2))
    return pdrank.ComparisonDataset.from_entries(len(truth), rows)


def test_noiseless_recovery():
    truth = [1.0, 4.0, 2.0, 5.0, 3.0]
    data = noiseless_dense(truth)
    result = pdrank.pd_rank(data)
    assert result.ranking == pdrank.scores_to_ranking(truth)
    assert pdrank.kendall_tau(result.ranking, [3, 1, 4, 2, 0]) == 1.0
    assert len(result.confidence) == len(data)
    assert all(w > 1.0 for w in result.confidence)
    assert abs(sum(result.scores)) < 1e-9


def test_dataset_construction_and_compression():
    raw = [(0, 1, 1), (1, 0, -1), (0, 1, -1), pdrank.Comparison(0, 2, 1, 3)]
    kept = pdrank.ComparisonDataset.from_entries(3, raw)
    assert len(kept) == 4
    merged = pdrank.ComparisonDataset.compressed(3, raw)
    assert merged.entries == [
        pdrank.Comparison(0, 1, -1, 1),
        pdrank.Comparison(0, 1, 1, 2),
        pdrank.Comparison(0, 2, 1, 3),
    ]
    assert merged.total_count == kept.total_count == 6
    assert pdrank.ComparisonDataset.compressed(3, list(reversed(raw))) == merged


def test_errors_map_to_python_exceptions():
    with pytest.raises(pdrank.DataError):
        pdrank.ComparisonDataset.from_entries(2, [(0, 1, 0)])
    with pytest.raises(ValueError):
        pdrank.ComparisonDataset.from_entries(2, [(0, 5, 1)])
    config = pdrank.PDRankConfig()
    config.epsilon = 0.0
    with pytest.raises(pdrank.ConfigError):
        pdrank.pd_rank(noiseless_dense([1.0, 2.0]), config)


def test_baselines_and_oracle_agree_on_clean_data():
    truth = [3.0, 1.0, 2.0, 4.0]
    data = noiseless_dense(truth)
    expected = pdrank.scores_to_ranking(truth)
    _, borda_ranking = pdrank.borda(data)
    assert borda_ranking == expected
    bt = pdrank.bt_fit(data)
    assert bt["ranking"] == expected
    assert bt["regularized"]
    best, cost = pdrank.brute_force_01(data)
    assert best == expected and cost == 0
    assert pdrank.zero_one_cost(list(reversed(expected)), data) == data.total_count


def test_synthetic_generators_are_seeded():
    a = pdrank.generate_toggle(8, 0.1, 3.0, 7)
    b = pdrank.generate_toggle(8, 0.1, 3.0, 7)
    assert a[0] == b[0] and a[1] == b[1] and a[2] == b[2]
    assert a[0].total_count == 3 * 28
    data, truth, _ = pdrank.generate_bt(6, 1.0, 5.0, 2.0, 3)
    assert len(truth) == 6 and data.total_count == 30
    assert all(1.0 <= s <= 5.0 for s in truth)


def test_confidence_report_flags_noisy_labels():
    data, truth, flipped = pdrank.generate_toggle(16, 0.1, 30.0, 11)
    assert flipped > 0
    result = pdrank.pd_rank(data)
    report = pdrank.confidence_report(result, data, truth)
    assert report["has_truth"]
    rows = report["rows"]
    assert len(rows) == len(data)
    noisy = [r["omega"] < 1.0 for r in rows if not r["correct"]]
    clean = [r["omega"] > 1.0 for r in rows if r["correct"]]
    assert sum(noisy) >= 0.9 * len(noisy)
    assert sum(clean) >= 0.9 * len(clean)
    assert pdrank.label_accuracy(result.scores, data, truth) > 0.85


def test_read_csv(tmp_path):
    path = tmp_path / "votes.csv"
    path.write_text("item_i,item_j,label\napple,pear,1\npear,plum,1\nplum,apple,-1\n")
    labeled = pdrank.read_comparisons_csv(path)
    assert labeled.items == ["apple", "pear", "plum"]
    result = pdrank.pd_rank(labeled.data)
    assert [labeled.items[k] for k in result.ranking] == ["apple", "pear", "plum"]
    bad = tmp_path / "bad.csv"
    bad.write_text("item_i,item_j,label\na,b,0\n")
    with pytest.raises(pdrank.DataError):
        pdrank.read_comparisons_csv(bad)


def test_run_experiment_round_trips_spec():
    spec = {
        "generator": {"num_items": 6, "standard_trials": 2.0},
        "trials": 3,
        "seed": 5,
        "methods": ["pdrank", "borda"],
    }
    result = pdrank.run_experiment(spec)
    assert result["spec_hash"] == pdrank.spec_hash(spec)
    assert len(result["records"]) == 6
    assert {r["method"] for r in result["records"]} == {"pdrank", "borda"}
    assert json.loads(json.dumps(result)) == result
    with pytest.raises(pdrank.ConfigError):
        pdrank.run_experiment({"methods": ["svm"]})
