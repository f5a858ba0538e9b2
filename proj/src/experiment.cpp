#include "pdrank/experiment.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <array>
#include <cstdio>
#include <thread>

#include "pdrank/csv_io.hpp"
#include "pdrank/errors.hpp"
#include "pdrank/metrics.hpp"

namespace pdrank {

namespace {

template <typename Enum, std::size_t N>
Enum lookup(const std::array<std::pair<const char*, Enum>, N>& table, const std::string& name,
            const char* what) {
    for (const auto& [key, value] : table) {
        if (name == key) {
            return value;
        }
    }
    throw ConfigError(std::string("unknown ") + what + " '" + name + "'");
}

template <typename Enum, std::size_t N>
std::string name_of(const std::array<std::pair<const char*, Enum>, N>& table, Enum value) {
    for (const auto& [key, v] : table) {
        if (v == value) {
            return key;
        }
    }
    return "unknown";
}

constexpr std::array<std::pair<const char*, GeneratorModel>, 2> kModels{{
    {"toggle", GeneratorModel::Toggle},
    {"bt", GeneratorModel::BradleyTerry},
}};
constexpr std::array<std::pair<const char*, Method>, 3> kMethods{{
    {"pdrank", Method::PDRank},
    {"borda", Method::Borda},
    {"bt", Method::BT},
}};
constexpr std::array<std::pair<const char*, SweepAxis>, 5> kAxes{{
    {"none", SweepAxis::None},
    {"standard_trials", SweepAxis::StandardTrials},
    {"delta", SweepAxis::Delta},
    {"m", SweepAxis::NumItems},
    {"eps_in", SweepAxis::EpsIn},
}};

std::string format_double(double value) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return ec == std::errc{} ? std::string(buf.data(), ptr) : std::string("nan");
}

double parse_double(const std::string& text) {
    if (text == "nan" || text == "-nan") {
        return std::nan("");
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw DataError("not a number: '" + text + "'");
    }
    return value;
}

template <typename Int>
Int parse_int(const std::string& text) {
    Int value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw DataError("not an integer: '" + text + "'");
    }
    return value;
}

std::string sanitize_flag(std::string text) {
    for (auto& c : text) {
        if (c == ',' || c == '\n' || c == '\r' || c == '"') {
            c = ' ';
        }
    }
    return text;
}

MetricSummary summarize(const std::vector<double>& values) {
    MetricSummary s;
    if (values.empty()) {
        s.mean = std::nan("");
        s.stddev = std::nan("");
        return s;
    }
    double sum = 0.0;
    for (const auto v : values) {
        sum += v;
    }
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double sq = 0.0;
        for (const auto v : values) {
            sq += (v - s.mean) * (v - s.mean);
        }
        s.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
    }
    return s;
}

struct TrialOutput {
    std::vector<TrialRecord> records;  // one per method
    std::optional<ConfidenceReport> confidence;
    std::size_t num_items = 0;
};

TrialOutput run_trial(const ExperimentSpec& spec, double grid_value, int trial) {
    using Clock = std::chrono::steady_clock;
    const std::uint64_t seed = spec.seed + static_cast<std::uint64_t>(trial);
    TrialOutput out;

    std::optional<SyntheticData> generated;
    std::string generation_error;
    try {
        generated = generate_trial_data(spec, grid_value, seed);
    } catch (const std::exception& e) {
        generation_error = sanitize_flag(std::string("error:generate:") + e.what());
    }

    for (const auto method : spec.methods) {
        TrialRecord rec;
        rec.grid_value = grid_value;
        rec.method = method;
        rec.trial = trial;
        rec.seed = seed;
        if (!generated) {
            rec.kendall_tau = rec.label_accuracy = std::nan("");
            rec.flags = generation_error;
            out.records.push_back(rec);
            continue;
        }
        const auto& data = *generated;
        try {
            std::vector<double> scores;
            Ranking ranking;
            std::vector<std::string> flags;
            switch (method) {
                case Method::PDRank: {
                    auto cfg = spec.pdrank;
                    if (spec.axis == SweepAxis::EpsIn) {
                        cfg.inner.eps_in = grid_value;
                    }
                    cfg.inner.record_trace = false;
                    auto result = pd_rank(data.data, cfg);
                    rec.wall_time_s = result.wall_time_s;
                    rec.outer_iters = result.outer_iters;
                    rec.inner_iters = result.inner_iters;
                    if (!result.outer_converged) {
                        flags.emplace_back("max_outer");
                    }
                    if (spec.keep_confidence) {
                        out.num_items = data.data.num_items();
                        out.confidence = confidence_report(result, data.data,
                                                           std::span<const double>(data.truth.true_scores));
                    }
                    scores = std::move(result.scores);
                    ranking = std::move(result.ranking);
                    break;
                }
                case Method::Borda: {
                    const auto start = Clock::now();
                    auto result = borda(data.data);
                    rec.wall_time_s = std::chrono::duration<double>(Clock::now() - start).count();
                    scores = std::move(result.scores);
                    ranking = std::move(result.ranking);
                    break;
                }
                case Method::BT: {
                    const auto start = Clock::now();
                    auto result = bt_fit(data.data, spec.bt);
                    rec.wall_time_s = std::chrono::duration<double>(Clock::now() - start).count();
                    rec.inner_iters = result.iterations;
                    if (result.regularized) {
                        flags.emplace_back("regularized");
                    }
                    if (!result.converged) {
                        flags.emplace_back("max_iters");
                    }
                    scores = std::move(result.strengths);
                    ranking = std::move(result.ranking);
                    break;
                }
            }
            rec.kendall_tau = kendall_tau(data.truth.true_ranking, ranking);
            rec.label_accuracy = label_accuracy(scores, data.data, data.truth.true_scores);
            for (std::size_t k = 0; k < flags.size(); ++k) {
                rec.flags += (k ? ";" : "") + flags[k];
            }
        } catch (const DivergenceError& e) {
            rec.kendall_tau = rec.label_accuracy = std::nan("");
            rec.flags = sanitize_flag(std::string("error:divergence:") + e.what());
        } catch (const std::exception& e) {
            rec.kendall_tau = rec.label_accuracy = std::nan("");
            rec.flags = sanitize_flag(std::string("error:") + e.what());
        }
        out.records.push_back(rec);
    }
    return out;
}

}  // namespace

std::string to_string(GeneratorModel model) { return name_of(kModels, model); }
std::string to_string(Method method) { return name_of(kMethods, method); }
std::string to_string(SweepAxis axis) { return name_of(kAxes, axis); }
GeneratorModel parse_generator_model(const std::string& name) { return lookup(kModels, name, "generator model"); }
Method parse_method(const std::string& name) { return lookup(kMethods, name, "method"); }
SweepAxis parse_sweep_axis(const std::string& name) { return lookup(kAxes, name, "sweep axis"); }

void ExperimentSpec::validate() const {
    if (trials < 1) {
        throw ConfigError("experiment needs at least one trial");
    }
    if (grid.empty()) {
        throw ConfigError("experiment sweep grid is empty");
    }
    if (methods.empty()) {
        throw ConfigError("experiment lists no methods");
    }
    if (threads < 1) {
        throw ConfigError("threads must be >= 1");
    }
    pdrank.validate();
}

const Aggregate& ExperimentResult::aggregate(double grid_value, Method method) const {
    for (const auto& a : aggregates) {
        if (a.grid_value == grid_value && a.method == method) {
            return a;
        }
    }
    throw ConfigError("no aggregate for grid value " + format_double(grid_value) + " and method " +
                      to_string(method));
}

SyntheticData generate_trial_data(const ExperimentSpec& spec, double grid_value, std::uint64_t seed) {
    auto gen = spec.generator;
    switch (spec.axis) {
        case SweepAxis::StandardTrials:
            gen.standard_trials = grid_value;
            gen.num_comparisons.reset();
            break;
        case SweepAxis::Delta:
            gen.delta = grid_value;
            break;
        case SweepAxis::NumItems:
            gen.num_items = static_cast<std::size_t>(std::llround(grid_value));
            break;
        case SweepAxis::None:
        case SweepAxis::EpsIn:
            break;
    }
    if (gen.model == GeneratorModel::Toggle) {
        ToggleNoiseConfig cfg;
        cfg.num_items = gen.num_items;
        cfg.delta = gen.delta;
        cfg.standard_trials = gen.standard_trials;
        cfg.num_comparisons = gen.num_comparisons;
        cfg.seed = seed;
        return generate_toggle(cfg);
    }
    BTGenConfig cfg;
    cfg.num_items = gen.num_items;
    cfg.score_low = gen.score_low;
    cfg.score_high = gen.score_high;
    cfg.standard_trials = gen.standard_trials;
    cfg.num_comparisons = gen.num_comparisons;
    cfg.seed = seed;
    return generate_bt(cfg);
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    const auto n_grid = spec.grid.size();
    const auto n_trials = static_cast<std::size_t>(spec.trials);
    const auto n_tasks = n_grid * n_trials;

    std::vector<TrialOutput> outputs(n_tasks);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (auto task = next.fetch_add(1); task < n_tasks; task = next.fetch_add(1)) {
            const auto g = task / n_trials;
            const auto t = task % n_trials;
            outputs[task] = run_trial(spec, spec.grid[g], static_cast<int>(t));
        }
    };
    const auto n_threads = std::min<std::size_t>(static_cast<std::size_t>(spec.threads), n_tasks);
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t k = 0; k < n_threads; ++k) {
            pool.emplace_back(worker);
        }
        for (auto& th : pool) {
            th.join();
        }
    }

    ExperimentResult result;
    result.spec = spec;
    result.spec_hash = spec_hash(spec);
    for (std::size_t task = 0; task < n_tasks; ++task) {
        for (auto& rec : outputs[task].records) {
            result.records.push_back(std::move(rec));
        }
        if (outputs[task].confidence) {
            result.confidence.push_back({spec.grid[task / n_trials], static_cast<int>(task % n_trials),
                                         outputs[task].num_items, std::move(*outputs[task].confidence)});
        }
    }

    for (std::size_t g = 0; g < n_grid; ++g) {
        for (const auto method : spec.methods) {
            Aggregate agg;
            agg.grid_value = spec.grid[g];
            agg.method = method;
            std::vector<double> taus;
            std::vector<double> accs;
            std::vector<double> times;
            // records are already in trial order, so the sums are order-stable
            for (const auto& rec : result.records) {
                if (rec.grid_value != spec.grid[g] || rec.method != method) {
                    continue;
                }
                if (rec.failed()) {
                    ++agg.failures;
                    continue;
                }
                ++agg.completed;
                taus.push_back(rec.kendall_tau);
                accs.push_back(rec.label_accuracy);
                times.push_back(rec.wall_time_s);
            }
            agg.kendall_tau = summarize(taus);
            agg.label_accuracy = summarize(accs);
            agg.wall_time_s = summarize(times);
            result.aggregates.push_back(agg);
        }
    }
    return result;
}

nlohmann::json spec_to_json(const ExperimentSpec& spec) {
    using nlohmann::json;
    json methods = json::array();
    for (const auto m : spec.methods) {
        methods.push_back(to_string(m));
    }
    const auto& g = spec.generator;
    const auto& p = spec.pdrank;
    return json{
        {"generator",
         {{"model", to_string(g.model)},
          {"num_items", g.num_items},
          {"delta", g.delta},
          {"score_low", g.score_low},
          {"score_high", g.score_high},
          {"standard_trials", g.standard_trials},
          {"num_comparisons", g.num_comparisons ? json(*g.num_comparisons) : json(nullptr)}}},
        {"methods", methods},
        {"trials", spec.trials},
        {"seed", spec.seed},
        {"sweep", {{"axis", to_string(spec.axis)}, {"values", spec.grid}}},
        {"pdrank",
         {{"epsilon", p.epsilon},
          {"gamma", p.gamma},
          {"max_outer_iters", p.max_outer_iters},
          {"stab_tol", p.stab_tol},
          {"band_lo", p.band_lo},
          {"band_hi", p.band_hi},
          {"warm_start", p.warm_start},
          {"eps_in", p.inner.eps_in},
          {"lambda", p.inner.lambda},
          {"max_inner_iters", p.inner.max_iters},
          {"step_scale", p.inner.step_scale},
          {"norm_inflation", p.inner.norm_inflation}}},
        {"bt", {{"tol", spec.bt.tol}, {"max_iters", spec.bt.max_iters}, {"pseudo_count", spec.bt.pseudo_count}}},
        {"threads", spec.threads},
        {"keep_confidence", spec.keep_confidence},
    };
}

ExperimentSpec spec_from_json(const nlohmann::json& j) {
    ExperimentSpec spec;
    try {
        if (j.contains("generator")) {
            const auto& g = j.at("generator");
            auto& out = spec.generator;
            out.model = parse_generator_model(g.value("model", to_string(out.model)));
            out.num_items = g.value("num_items", out.num_items);
            out.delta = g.value("delta", out.delta);
            out.score_low = g.value("score_low", out.score_low);
            out.score_high = g.value("score_high", out.score_high);
            out.standard_trials = g.value("standard_trials", out.standard_trials);
            if (g.contains("num_comparisons") && !g.at("num_comparisons").is_null()) {
                out.num_comparisons = g.at("num_comparisons").get<std::size_t>();
            }
        }
        if (j.contains("methods")) {
            spec.methods.clear();
            for (const auto& m : j.at("methods")) {
                spec.methods.push_back(parse_method(m.get<std::string>()));
            }
        }
        spec.trials = j.value("trials", spec.trials);
        spec.seed = j.value("seed", spec.seed);
        if (j.contains("sweep")) {
            const auto& s = j.at("sweep");
            spec.axis = parse_sweep_axis(s.value("axis", std::string("none")));
            spec.grid = s.value("values", std::vector<double>{0.0});
        }
        if (j.contains("pdrank")) {
            const auto& p = j.at("pdrank");
            auto& out = spec.pdrank;
            out.epsilon = p.value("epsilon", out.epsilon);
            out.gamma = p.value("gamma", out.gamma);
            out.max_outer_iters = p.value("max_outer_iters", out.max_outer_iters);
            out.stab_tol = p.value("stab_tol", out.stab_tol);
            out.band_lo = p.value("band_lo", out.band_lo);
            out.band_hi = p.value("band_hi", out.band_hi);
            out.warm_start = p.value("warm_start", out.warm_start);
            out.inner.eps_in = p.value("eps_in", out.inner.eps_in);
            out.inner.lambda = p.value("lambda", out.inner.lambda);
            out.inner.max_iters = p.value("max_inner_iters", out.inner.max_iters);
            out.inner.step_scale = p.value("step_scale", out.inner.step_scale);
            out.inner.norm_inflation = p.value("norm_inflation", out.inner.norm_inflation);
        }
        if (j.contains("bt")) {
            const auto& b = j.at("bt");
            spec.bt.tol = b.value("tol", spec.bt.tol);
            spec.bt.max_iters = b.value("max_iters", spec.bt.max_iters);
            spec.bt.pseudo_count = b.value("pseudo_count", spec.bt.pseudo_count);
        }
        spec.threads = j.value("threads", spec.threads);
        spec.keep_confidence = j.value("keep_confidence", spec.keep_confidence);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("experiment spec: ") + e.what());
    }
    return spec;
}

std::string spec_hash(const ExperimentSpec& spec) {
    // thread count does not affect results, so it does not enter the hash
    auto j = spec_to_json(spec);
    j.erase("threads");
    const auto text = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::array<char, 17> buf{};
    std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(h));
    return buf.data();
}

void write_result_csv(std::ostream& out, const ExperimentResult& result) {
    out << "grid_value,method,trial,seed,kendall_tau,label_accuracy,wall_time_s,outer_iters,"
           "inner_iters,flags\n";
    for (const auto& r : result.records) {
        out << format_double(r.grid_value) << ',' << to_string(r.method) << ',' << r.trial << ','
            << r.seed << ',' << format_double(r.kendall_tau) << ','
            << format_double(r.label_accuracy) << ',' << format_double(r.wall_time_s) << ','
            << r.outer_iters << ',' << r.inner_iters << ',' << sanitize_flag(r.flags) << '\n';
    }
}

std::vector<TrialRecord> read_result_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || !line.starts_with("grid_value,method,trial,seed")) {
        throw DataError("result CSV: missing header");
    }
    std::vector<TrialRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto f = split_csv_line(line);
        if (f.size() != 10) {
            throw DataError("result CSV line " + std::to_string(line_no) + ": expected 10 fields");
        }
        try {
            TrialRecord r;
            r.grid_value = parse_double(f[0]);
            r.method = parse_method(f[1]);
            r.trial = parse_int<int>(f[2]);
            r.seed = parse_int<std::uint64_t>(f[3]);
            r.kendall_tau = parse_double(f[4]);
            r.label_accuracy = parse_double(f[5]);
            r.wall_time_s = parse_double(f[6]);
            r.outer_iters = parse_int<int>(f[7]);
            r.inner_iters = parse_int<long long>(f[8]);
            r.flags = f[9];
            records.push_back(std::move(r));
        } catch (const std::exception& e) {
            throw DataError("result CSV line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return records;
}

nlohmann::json result_to_json(const ExperimentResult& result) {
    using nlohmann::json;
    const auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    json records = json::array();
    for (const auto& r : result.records) {
        records.push_back({{"grid_value", r.grid_value},
                           {"method", to_string(r.method)},
                           {"trial", r.trial},
                           {"seed", r.seed},
                           {"kendall_tau", num(r.kendall_tau)},
                           {"label_accuracy", num(r.label_accuracy)},
                           {"wall_time_s", num(r.wall_time_s)},
                           {"outer_iters", r.outer_iters},
                           {"inner_iters", r.inner_iters},
                           {"flags", r.flags}});
    }
    json aggregates = json::array();
    for (const auto& a : result.aggregates) {
        const auto summary = [&](const MetricSummary& s) {
            return json{{"mean", num(s.mean)}, {"std", num(s.stddev)}};
        };
        aggregates.push_back({{"grid_value", a.grid_value},
                              {"method", to_string(a.method)},
                              {"completed", a.completed},
                              {"failures", a.failures},
                              {"kendall_tau", summary(a.kendall_tau)},
                              {"label_accuracy", summary(a.label_accuracy)},
                              {"wall_time_s", summary(a.wall_time_s)}});
    }
    json out{{"schema_version", kResultSchemaVersion},
             {"spec", spec_to_json(result.spec)},
             {"spec_hash", result.spec_hash},
             {"seeds", {{"base", result.spec.seed}, {"per_trial", "base + trial"}}},
             {"records", records},
             {"aggregates", aggregates}};
    if (!result.confidence.empty()) {
        json conf = json::array();
        for (const auto& c : result.confidence) {
            const auto items = ItemIndex::numbered(c.num_items);
            conf.push_back({{"grid_value", c.grid_value},
                            {"trial", c.trial},
                            {"report", confidence_to_json(c.report, items)}});
        }
        out["confidence"] = std::move(conf);
    }
    return out;
}

void emit(const ExperimentResult& result, const std::filesystem::path& prefix, OutputFormat format) {
    const auto write = [](const std::filesystem::path& path, const auto& body) {
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            throw DataError("cannot open '" + path.string() + "' for writing");
        }
        body(out);
        out.flush();
        if (!out) {
            throw DataError("write failed for '" + path.string() + "'");
        }
    };
    if (format != OutputFormat::Json) {
        auto path = prefix;
        path += ".csv";
        write(path, [&](std::ostream& out) { write_result_csv(out, result); });
    }
    if (format != OutputFormat::Csv) {
        auto path = prefix;
        path += ".json";
        write(path, [&](std::ostream& out) { out << result_to_json(result).dump(2) << '\n'; });
    }
}

}  // namespace pdrank
