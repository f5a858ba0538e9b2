#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "pdrank/errors.hpp"
#include "pdrank/experiment.hpp"

using namespace pdrank;

namespace {

ExperimentSpec small_spec() {
    ExperimentSpec spec;
    spec.generator.num_items = 8;
    spec.generator.standard_trials = 2.0;
    spec.trials = 4;
    spec.seed = 11;
    spec.axis = SweepAxis::Delta;
    spec.grid = {0.0, 0.2};
    return spec;
}

// Everything except wall time, which is measured.
void expect_same_records(const std::vector<TrialRecord>& a, const std::vector<TrialRecord>& b) {
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        EXPECT_EQ(a[k].grid_value, b[k].grid_value);
        EXPECT_EQ(a[k].method, b[k].method);
        EXPECT_EQ(a[k].trial, b[k].trial);
        EXPECT_EQ(a[k].seed, b[k].seed);
        EXPECT_EQ(a[k].kendall_tau, b[k].kendall_tau);
        EXPECT_EQ(a[k].label_accuracy, b[k].label_accuracy);
        EXPECT_EQ(a[k].outer_iters, b[k].outer_iters);
        EXPECT_EQ(a[k].inner_iters, b[k].inner_iters);
        EXPECT_EQ(a[k].flags, b[k].flags);
    }
}

}  // namespace

TEST(Experiment, RecordsCoverEveryGridTrialAndMethod) {
    const auto spec = small_spec();
    const auto result = run_experiment(spec);
    ASSERT_EQ(result.records.size(), 2u * 4u * 3u);
    ASSERT_EQ(result.aggregates.size(), 2u * 3u);
    for (const auto& r : result.records) {
        EXPECT_EQ(r.seed, spec.seed + static_cast<std::uint64_t>(r.trial));
        EXPECT_GE(r.kendall_tau, -1.0);
        EXPECT_LE(r.kendall_tau, 1.0);
        EXPECT_GE(r.label_accuracy, 0.0);
        EXPECT_LE(r.label_accuracy, 1.0);
        EXPECT_GE(r.wall_time_s, 0.0);
        EXPECT_FALSE(r.failed()) << r.flags;
    }
    // noiseless grid point: every method orders the observed pairs as the truth does
    const auto& clean = result.aggregate(0.0, Method::PDRank);
    EXPECT_EQ(clean.completed, 4);
    EXPECT_EQ(clean.failures, 0);
    EXPECT_GT(clean.kendall_tau.mean, 0.9);
    EXPECT_THROW((void)result.aggregate(0.5, Method::PDRank), ConfigError);
}

TEST(Experiment, DeterministicForFixedSeed) {
    auto spec = small_spec();
    spec.trials = 1;
    const auto a = run_experiment(spec);
    const auto b = run_experiment(spec);
    expect_same_records(a.records, b.records);
    EXPECT_EQ(a.spec_hash, b.spec_hash);
}

TEST(Experiment, AggregatesIndependentOfThreadCount) {
    auto spec = small_spec();
    spec.trials = 6;
    const auto serial = run_experiment(spec);
    spec.threads = 4;
    const auto parallel = run_experiment(spec);
    expect_same_records(serial.records, parallel.records);
    for (std::size_t k = 0; k < serial.aggregates.size(); ++k) {
        EXPECT_EQ(serial.aggregates[k].kendall_tau.mean, parallel.aggregates[k].kendall_tau.mean);
        EXPECT_EQ(serial.aggregates[k].kendall_tau.stddev, parallel.aggregates[k].kendall_tau.stddev);
        EXPECT_EQ(serial.aggregates[k].label_accuracy.mean, parallel.aggregates[k].label_accuracy.mean);
    }
    EXPECT_EQ(serial.spec_hash, parallel.spec_hash);
}

TEST(Experiment, TrialDataUsesBasePlusTrialSeed) {
    const auto spec = small_spec();
    const auto a = generate_trial_data(spec, 0.2, spec.seed + 3);
    const auto b = generate_trial_data(spec, 0.2, spec.seed + 3);
    EXPECT_EQ(a.data, b.data);
    EXPECT_NE(generate_trial_data(spec, 0.2, spec.seed + 4).data, a.data);
}

TEST(Experiment, SweepAxesChangeTheGenerator) {
    auto spec = small_spec();
    spec.axis = SweepAxis::NumItems;
    EXPECT_EQ(generate_trial_data(spec, 5.0, 1).data.num_items(), 5u);
    spec.axis = SweepAxis::StandardTrials;
    EXPECT_EQ(generate_trial_data(spec, 3.0, 1).data.total_multiplicity(), 3u * 28u);
    spec.axis = SweepAxis::Delta;
    EXPECT_EQ(generate_trial_data(spec, 0.0, 1).flipped, 0u);
}

TEST(Experiment, ValidatesSpec) {
    auto spec = small_spec();
    spec.trials = 0;
    EXPECT_THROW((void)run_experiment(spec), ConfigError);
    spec = small_spec();
    spec.grid.clear();
    EXPECT_THROW((void)run_experiment(spec), ConfigError);
    spec = small_spec();
    spec.methods.clear();
    EXPECT_THROW((void)run_experiment(spec), ConfigError);
    spec = small_spec();
    spec.threads = 0;
    EXPECT_THROW((void)run_experiment(spec), ConfigError);
}

TEST(Experiment, TrialFailuresAreRecordedNotThrown) {
    auto spec = small_spec();
    spec.trials = 1;
    spec.methods = {Method::PDRank};
    spec.pdrank.inner.step_scale = 100.0;  // rejected by the solver for every trial
    const auto result = run_experiment(spec);
    for (const auto& r : result.records) {
        EXPECT_TRUE(r.failed()) << r.flags;
        EXPECT_EQ(r.flags.rfind("error:", 0), 0u) << r.flags;
        EXPECT_NE(r.flags.find("step_scale"), std::string::npos) << r.flags;
    }
    EXPECT_EQ(result.aggregate(0.2, Method::PDRank).failures, 1);
}

TEST(ResultCsv, RoundTripsExactly) {
    const auto result = run_experiment(small_spec());
    std::ostringstream out;
    write_result_csv(out, result);
    std::istringstream in(out.str());
    const auto back = read_result_csv(in);
    expect_same_records(result.records, back);
    for (std::size_t k = 0; k < back.size(); ++k) {
        EXPECT_EQ(result.records[k].wall_time_s, back[k].wall_time_s);
    }
    std::istringstream bad("grid_value,method,trial,seed,kendall_tau,label_accuracy,wall_time_s,"
                           "outer_iters,inner_iters,flags\n0,pdrank,x,1,1,1,0,1,1,\n");
    EXPECT_THROW((void)read_result_csv(bad), DataError);
    std::istringstream headerless("0,pdrank,0,1,1,1,0,1,1,\n");
    EXPECT_THROW((void)read_result_csv(headerless), DataError);
}

TEST(SpecJson, RoundTripAndHash) {
    auto spec = small_spec();
    spec.generator.model = GeneratorModel::BradleyTerry;
    spec.generator.num_comparisons = 77;
    spec.methods = {Method::BT, Method::PDRank};
    spec.pdrank.inner.eps_in = 1e-4;
    const auto j = spec_to_json(spec);
    const auto back = spec_from_json(j);
    EXPECT_EQ(spec_to_json(back), j);
    EXPECT_EQ(spec_hash(back), spec_hash(spec));
    EXPECT_EQ(spec_hash(spec).size(), 16u);
    auto changed = spec;
    changed.seed += 1;
    EXPECT_NE(spec_hash(changed), spec_hash(spec));

    const auto defaults = spec_from_json(nlohmann::json::object());
    EXPECT_EQ(spec_to_json(defaults), spec_to_json(ExperimentSpec{}));
    EXPECT_THROW((void)spec_from_json(nlohmann::json{{"methods", {"svm"}}}), ConfigError);
    EXPECT_THROW((void)spec_from_json(nlohmann::json{{"trials", "many"}}), ConfigError);
    EXPECT_THROW((void)parse_sweep_axis("gamma"), ConfigError);
}

TEST(Emit, WritesCsvAndJsonWithSpecAndConfidence) {
    auto spec = small_spec();
    spec.trials = 2;
    spec.keep_confidence = true;
    const auto result = run_experiment(spec);
    ASSERT_EQ(result.confidence.size(), 2u * 2u);

    const auto dir = std::filesystem::temp_directory_path() / "pdrank_emit_test";
    std::filesystem::create_directories(dir);
    const auto prefix = dir / "run";
    emit(result, prefix, OutputFormat::Both);

    std::ifstream csv(dir / "run.csv");
    ASSERT_TRUE(csv.good());
    expect_same_records(result.records, read_result_csv(csv));

    std::ifstream js(dir / "run.json");
    const auto doc = nlohmann::json::parse(js);
    EXPECT_EQ(doc["schema_version"], kResultSchemaVersion);
    EXPECT_EQ(doc["spec_hash"], result.spec_hash);
    EXPECT_EQ(spec_hash(spec_from_json(doc["spec"])), result.spec_hash);
    EXPECT_EQ(doc["records"].size(), result.records.size());
    EXPECT_EQ(doc["confidence"].size(), 4u);
    EXPECT_TRUE(doc["confidence"][0]["report"]["has_truth"].get<bool>());

    EXPECT_THROW(emit(result, "/nonexistent/dir/run", OutputFormat::Csv), DataError);
    try {
        emit(result, "/nonexistent/dir/run", OutputFormat::Json);
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/run.json"), std::string::npos);
    }
    std::filesystem::remove_all(dir);
}
