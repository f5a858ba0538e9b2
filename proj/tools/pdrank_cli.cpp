#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pdrank/baselines.hpp"
#include "pdrank/csv_io.hpp"
#include "pdrank/errors.hpp"
#include "pdrank/experiment.hpp"
#include "pdrank/report.hpp"
#include "pdrank/reweight.hpp"
#include "pdrank/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kDivergence = 3 };

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw pdrank::DataError("cannot open " + path.string() + " for writing");
    }
    return out;
}

void add_pdrank_options(CLI::App& cmd, pdrank::PDRankConfig& cfg) {
    cmd.add_option("--epsilon", cfg.epsilon, "weight smoothing epsilon")->capture_default_str();
    cmd.add_option("--gamma", cfg.gamma, "ridge weight")->capture_default_str();
    cmd.add_option("--max-outer", cfg.max_outer_iters, "outer iteration cap")->capture_default_str();
    cmd.add_option("--stab-tol", cfg.stab_tol, "weight stabilisation tolerance")->capture_default_str();
    cmd.add_option("--band-lo", cfg.band_lo, "lower edge of the weight band around 1")->capture_default_str();
    cmd.add_option("--band-hi", cfg.band_hi, "upper edge of the weight band around 1")->capture_default_str();
    cmd.add_option("--eps-in", cfg.inner.eps_in, "inner relative cost-change threshold")->capture_default_str();
    cmd.add_option("--lambda", cfg.inner.lambda, "PDHG relaxation in (0, 2)")->capture_default_str();
    cmd.add_option("--max-inner", cfg.inner.max_iters, "PDHG iteration cap")->capture_default_str();
}

struct RankArgs {
    fs::path input;
    std::string method = "pdrank";
    std::optional<fs::path> output;
    std::string format = "csv";
    pdrank::PDRankConfig pdrank;
};

int run_rank(const RankArgs& args) {
    const auto data = pdrank::read_comparisons_csv(args.input);
    if (data.data.empty()) {
        throw pdrank::DataError(args.input.string() + ": no comparisons");
    }
    const auto method = pdrank::parse_method(args.method);

    std::vector<double> scores;
    pdrank::Ranking ranking;
    std::optional<pdrank::ConfidenceReport> confidence;
    json info{{"method", args.method}, {"num_items", data.items.size()}, {"entries", data.data.size()}};
    switch (method) {
        case pdrank::Method::PDRank: {
            args.pdrank.validate();
            auto r = pdrank::pd_rank(data.data, args.pdrank);
            confidence = pdrank::confidence_report(r, data.data);
            info["outer_iters"] = r.outer_iters;
            info["inner_iters"] = r.inner_iters;
            info["outer_converged"] = r.outer_converged;
            info["wall_time_s"] = r.wall_time_s;
            scores = std::move(r.scores);
            ranking = std::move(r.ranking);
            break;
        }
        case pdrank::Method::Borda: {
            auto r = pdrank::borda(data.data);
            scores = std::move(r.scores);
            ranking = std::move(r.ranking);
            break;
        }
        case pdrank::Method::BT: {
            auto r = pdrank::bt_fit(data.data);
            info["iterations"] = r.iterations;
            info["converged"] = r.converged;
            info["regularized"] = r.regularized;
            scores = std::move(r.strengths);
            ranking = std::move(r.ranking);
            break;
        }
    }

    const auto to_json = [&] {
        json j = info;
        j["ranking"] = json::array();
        for (std::size_t r = 0; r < ranking.size(); ++r) {
            j["ranking"].push_back(
                {{"item", data.items.name(ranking[r])}, {"score", scores[ranking[r]]}, {"rank", r + 1}});
        }
        if (confidence) {
            j["confidence"] = pdrank::confidence_to_json(*confidence, data.items);
        }
        return j;
    };

    const bool csv = args.format == "csv" || args.format == "both";
    const bool as_json = args.format == "json" || args.format == "both";
    if (!args.output) {
        if (as_json) {
            std::cout << to_json().dump(2) << '\n';
        } else {
            pdrank::write_scores_csv(std::cout, scores, ranking, data.items);
        }
        return kOk;
    }

    const auto prefix = args.output->string();
    if (csv) {
        auto out = open_output(prefix + ".scores.csv");
        pdrank::write_scores_csv(out, scores, ranking, data.items);
        if (confidence) {
            auto conf = open_output(prefix + ".confidence.csv");
            pdrank::write_confidence_csv(conf, *confidence, data.items);
        }
    }
    if (as_json) {
        auto out = open_output(prefix + ".json");
        out << to_json().dump(2) << '\n';
    }
    return kOk;
}

struct SimulateArgs {
    std::string model = "toggle";
    std::size_t num_items = 16;
    double delta = 0.1;
    double standard_trials = 1.0;
    std::optional<std::size_t> comparisons;
    double score_low = 1.0;
    double score_high = 5.0;
    std::uint64_t seed = 0;
    fs::path output;
};

int run_simulate(const SimulateArgs& args) {
    const auto model = pdrank::parse_generator_model(args.model);
    pdrank::SyntheticData sim;
    json config{{"model", args.model},
                {"num_items", args.num_items},
                {"standard_trials", args.standard_trials},
                {"seed", args.seed}};
    if (args.comparisons) {
        config["num_comparisons"] = *args.comparisons;
    }
    if (model == pdrank::GeneratorModel::Toggle) {
        pdrank::ToggleNoiseConfig cfg;
        cfg.num_items = args.num_items;
        cfg.delta = args.delta;
        cfg.standard_trials = args.standard_trials;
        cfg.num_comparisons = args.comparisons;
        cfg.seed = args.seed;
        sim = pdrank::generate_toggle(cfg);
        config["delta"] = args.delta;
    } else {
        pdrank::BTGenConfig cfg;
        cfg.num_items = args.num_items;
        cfg.score_low = args.score_low;
        cfg.score_high = args.score_high;
        cfg.standard_trials = args.standard_trials;
        cfg.num_comparisons = args.comparisons;
        cfg.seed = args.seed;
        sim = pdrank::generate_bt(cfg);
        config["score_low"] = args.score_low;
        config["score_high"] = args.score_high;
    }

    const auto items = pdrank::ItemIndex::numbered(args.num_items);
    pdrank::write_comparisons_csv(args.output, sim.data, items);

    json truth{{"schema_version", 1},
               {"config", config},
               {"true_scores", sim.truth.true_scores},
               {"true_ranking", std::vector<std::size_t>(sim.truth.true_ranking.order().begin(),
                                                         sim.truth.true_ranking.order().end())},
               {"observations", sim.observations.size()},
               {"flipped", sim.flipped}};
    auto sidecar = args.output;
    sidecar.replace_extension(".truth.json");
    auto out = open_output(sidecar);
    out << truth.dump(2) << '\n';
    return kOk;
}

struct BenchArgs {
    fs::path spec;
    std::uint64_t seed = 0;
    fs::path output;
    std::string format = "both";
    std::optional<int> threads;
    bool confidence = false;
};

int run_bench(const BenchArgs& args) {
    std::ifstream in(args.spec);
    if (!in) {
        throw pdrank::DataError("cannot open spec file " + args.spec.string());
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw pdrank::ConfigError(args.spec.string() + ": " + e.what());
    }
    auto spec = pdrank::spec_from_json(j);
    spec.seed = args.seed;
    if (args.threads) {
        spec.threads = *args.threads;
    }
    spec.keep_confidence = spec.keep_confidence || args.confidence;
    spec.validate();

    const auto result = pdrank::run_experiment(spec);
    const auto format = args.format == "csv"    ? pdrank::OutputFormat::Csv
                        : args.format == "json" ? pdrank::OutputFormat::Json
                                                : pdrank::OutputFormat::Both;
    pdrank::emit(result, args.output, format);
    for (const auto& a : result.aggregates) {
        std::printf("%-8g %-7s tau %.4f +- %.4f  acc %.4f  time %.4fs  failures %d\n", a.grid_value,
                    pdrank::to_string(a.method).c_str(), a.kendall_tau.mean, a.kendall_tau.stddev,
                    a.label_accuracy.mean, a.wall_time_s.mean, a.failures);
    }
    return kOk;
}

struct OracleArgs {
    fs::path input;
    pdrank::PDRankConfig pdrank;
};

int run_oracle(const OracleArgs& args) {
    const auto data = pdrank::read_comparisons_csv(args.input);
    if (data.data.empty()) {
        throw pdrank::DataError(args.input.string() + ": no comparisons");
    }
    if (data.items.size() > pdrank::kBruteForceMaxItems) {
        throw pdrank::ConfigError("oracle enumerates all orderings and supports at most " +
                                  std::to_string(pdrank::kBruteForceMaxItems) + " items, got " +
                                  std::to_string(data.items.size()));
    }
    args.pdrank.validate();
    const auto best = pdrank::brute_force_01(data.data);
    const auto names = [&data](const pdrank::Ranking& r) {
        std::vector<std::string> out;
        for (const auto item : r.order()) {
            out.push_back(data.items.name(item));
        }
        return out;
    };
    json j{{"optimum", {{"ranking", names(best.ranking)}, {"cost", best.cost}}}};
    const auto add = [&](const std::string& name, const pdrank::Ranking& r) {
        const auto cost = pdrank::zero_one_cost(r, data.data);
        j["methods"][name] = {{"ranking", names(r)}, {"cost", cost}, {"excess", cost - best.cost}};
    };
    add("pdrank", pdrank::pd_rank(data.data, args.pdrank).ranking);
    add("borda", pdrank::borda(data.data).ranking);
    add("bt", pdrank::bt_fit(data.data).ranking);
    std::cout << j.dump(2) << '\n';
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PD-Rank: ranking from noisy pairwise comparisons"};
    app.set_config("--config", "", "key = value config file; every flag has a config equivalent");
    app.require_subcommand(1);

    RankArgs rank;
    auto* rank_cmd = app.add_subcommand("rank", "rank the items of one comparison CSV");
    rank_cmd->add_option("-i,--input", rank.input, "CSV with header item_i,item_j,label[,count]")
        ->required()
        ->check(CLI::ExistingFile);
    rank_cmd->add_option("-m,--method", rank.method, "pdrank, borda or bt")
        ->check(CLI::IsMember({"pdrank", "borda", "bt"}))
        ->capture_default_str();
    rank_cmd->add_option("-o,--output", rank.output,
                         "output prefix (<prefix>.scores.csv, <prefix>.confidence.csv, <prefix>.json); "
                         "stdout when omitted");
    rank_cmd->add_option("--format", rank.format, "csv, json or both")
        ->check(CLI::IsMember({"csv", "json", "both"}))
        ->capture_default_str();
    add_pdrank_options(*rank_cmd, rank.pdrank);

    SimulateArgs sim;
    auto* sim_cmd = app.add_subcommand("simulate", "write a synthetic comparison CSV and its ground truth");
    sim_cmd->add_option("--model", sim.model, "toggle or bt")
        ->check(CLI::IsMember({"toggle", "bt"}))
        ->capture_default_str();
    sim_cmd->add_option("--items", sim.num_items, "number of items")->capture_default_str();
    sim_cmd->add_option("--delta", sim.delta, "toggle flip probability")->capture_default_str();
    sim_cmd->add_option("--standard-trials", sim.standard_trials,
                        "comparisons as a multiple of m(m-1)/2")
        ->capture_default_str();
    sim_cmd->add_option("--comparisons", sim.comparisons, "absolute number of comparisons");
    sim_cmd->add_option("--score-low", sim.score_low, "Bradley-Terry lower score")->capture_default_str();
    sim_cmd->add_option("--score-high", sim.score_high, "Bradley-Terry upper score")->capture_default_str();
    sim_cmd->add_option("--seed", sim.seed, "random seed")->capture_default_str();
    sim_cmd->add_option("-o,--output", sim.output, "CSV path; <stem>.truth.json is written beside it")
        ->required();

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "run a Monte Carlo experiment spec (JSON)");
    bench_cmd->add_option("-s,--spec", bench.spec, "experiment spec JSON")
        ->required()
        ->check(CLI::ExistingFile);
    bench_cmd->add_option("--seed", bench.seed, "base seed; trial k uses seed + k")->required();
    bench_cmd->add_option("-o,--output", bench.output, "output prefix for <prefix>.csv/.json")->required();
    bench_cmd->add_option("--format", bench.format, "csv, json or both")
        ->check(CLI::IsMember({"csv", "json", "both"}))
        ->capture_default_str();
    bench_cmd->add_option("--threads", bench.threads, "worker threads (overrides the experiment file)")
        ->check(CLI::PositiveNumber);
    bench_cmd->add_flag("--confidence", bench.confidence, "include per-trial confidence reports in the JSON");

    OracleArgs oracle;
    auto* oracle_cmd =
        app.add_subcommand("oracle", "compare each method with the exact 0-1 loss minimiser (m <= 8)");
    oracle_cmd->add_option("-i,--input", oracle.input, "comparison CSV")->required()->check(CLI::ExistingFile);
    add_pdrank_options(*oracle_cmd, oracle.pdrank);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*rank_cmd) {
            return run_rank(rank);
        }
        if (*sim_cmd) {
            return run_simulate(sim);
        }
        if (*bench_cmd) {
            return run_bench(bench);
        }
        return run_oracle(oracle);
    } catch (const pdrank::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const pdrank::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kData;
    } catch (const pdrank::DivergenceError& e) {
        std::cerr << "solver diverged: " << e.what() << '\n';
        return kDivergence;
    } catch (const pdrank::ConvergenceError& e) {
        std::cerr << "solver did not converge: " << e.what() << '\n';
        return kDivergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kData;
    }
}
