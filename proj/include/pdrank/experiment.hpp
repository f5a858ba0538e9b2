#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pdrank/baselines.hpp"
#include "pdrank/report.hpp"
#include "pdrank/reweight.hpp"
#include "pdrank/synthetic.hpp"

namespace pdrank {

inline constexpr int kResultSchemaVersion = 1;

enum class GeneratorModel { Toggle, BradleyTerry };
enum class Method { PDRank, Borda, BT };
enum class SweepAxis { None, StandardTrials, Delta, NumItems, EpsIn };

[[nodiscard]] std::string to_string(GeneratorModel model);
[[nodiscard]] std::string to_string(Method method);
[[nodiscard]] std::string to_string(SweepAxis axis);
/// Parsers throw ConfigError on unknown names.
[[nodiscard]] GeneratorModel parse_generator_model(const std::string& name);
[[nodiscard]] Method parse_method(const std::string& name);
[[nodiscard]] SweepAxis parse_sweep_axis(const std::string& name);

struct GeneratorSpec {
    GeneratorModel model = GeneratorModel::Toggle;
    std::size_t num_items = 16;
    double delta = 0.1;
    double score_low = 1.0;
    double score_high = 5.0;
    double standard_trials = 1.0;
    std::optional<std::size_t> num_comparisons;
};

struct ExperimentSpec {
    GeneratorSpec generator;
    std::vector<Method> methods{Method::PDRank, Method::Borda, Method::BT};
    int trials = 1;
    std::uint64_t seed = 0;
    SweepAxis axis = SweepAxis::None;
    std::vector<double> grid{0.0};
    PDRankConfig pdrank;
    BTOptions bt;
    int threads = 1;
    /// Attach the PD-Rank confidence report of every trial to the result.
    bool keep_confidence = false;

    void validate() const;
};

struct TrialRecord {
    double grid_value = 0.0;
    Method method = Method::PDRank;
    int trial = 0;
    std::uint64_t seed = 0;
    double kendall_tau = 0.0;
    double label_accuracy = 0.0;
    double wall_time_s = 0.0;
    int outer_iters = 0;
    long long inner_iters = 0;
    /// Semicolon-separated markers, e.g. "regularized" or "error:...".
    std::string flags;

    [[nodiscard]] bool failed() const { return flags.starts_with("error") || flags.find(";error") != std::string::npos; }
};

struct MetricSummary {
    double mean = 0.0;
    double stddev = 0.0;
};

struct Aggregate {
    double grid_value = 0.0;
    Method method = Method::PDRank;
    int completed = 0;
    int failures = 0;
    MetricSummary kendall_tau;
    MetricSummary label_accuracy;
    MetricSummary wall_time_s;
};

struct TrialConfidence {
    double grid_value = 0.0;
    int trial = 0;
    std::size_t num_items = 0;
    ConfidenceReport report;
};

struct ExperimentResult {
    ExperimentSpec spec;
    std::string spec_hash;
    std::vector<TrialRecord> records;  ///< ordered by (grid index, trial, method)
    std::vector<Aggregate> aggregates;  ///< ordered by (grid index, method)
    std::vector<TrialConfidence> confidence;

    [[nodiscard]] const Aggregate& aggregate(double grid_value, Method method) const;
};

/// Data generation for one (grid point, trial); seed = spec.seed + trial.
[[nodiscard]] SyntheticData generate_trial_data(const ExperimentSpec& spec, double grid_value,
                                                std::uint64_t seed);

/// Runs every (grid point, trial, method). Trial failures are recorded as
/// flags, never thrown. Aggregates are independent of thread scheduling.
[[nodiscard]] ExperimentResult run_experiment(const ExperimentSpec& spec);

[[nodiscard]] nlohmann::json spec_to_json(const ExperimentSpec& spec);
/// Missing keys keep their defaults; unknown enum names raise ConfigError.
[[nodiscard]] ExperimentSpec spec_from_json(const nlohmann::json& j);
/// FNV-1a 64 of the canonical JSON dump without "threads", as 16 hex digits.
[[nodiscard]] std::string spec_hash(const ExperimentSpec& spec);

/// Long format: grid_value,method,trial,seed,kendall_tau,label_accuracy,
/// wall_time_s,outer_iters,inner_iters,flags
void write_result_csv(std::ostream& out, const ExperimentResult& result);
[[nodiscard]] std::vector<TrialRecord> read_result_csv(std::istream& in);
[[nodiscard]] nlohmann::json result_to_json(const ExperimentResult& result);

enum class OutputFormat { Csv, Json, Both };

/// Writes <prefix>.csv and/or <prefix>.json. I/O failures raise DataError
/// naming the path.
void emit(const ExperimentResult& result, const std::filesystem::path& prefix,
          OutputFormat format = OutputFormat::Both);

}  // namespace pdrank
