#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <json.hpp>

#include "pdrank/baselines.hpp"
#include "pdrank/csv_io.hpp"
#include "pdrank/dataset.hpp"
#include "pdrank/errors.hpp"
#include "pdrank/experiment.hpp"
#include "pdrank/metrics.hpp"
#include "pdrank/reweight.hpp"
#include "pdrank/report.hpp"
#include "pdrank/synthetic.hpp"

namespace py = pybind11;
using namespace pdrank;

namespace {

// (i, j, label) or (i, j, label, count) sequences, or Comparison objects
std::vector<Comparison> comparisons_from(const py::iterable& rows) {
    std::vector<Comparison> out;
    for (const auto& row : rows) {
        if (py::isinstance<Comparison>(row)) {
            out.push_back(row.cast<Comparison>());
            continue;
        }
        const auto seq = row.cast<py::sequence>();
        if (seq.size() != 3 && seq.size() != 4) {
            throw DataError("comparison " + std::to_string(out.size()) +
                            ": expected (i, j, label) or (i, j, label, count)");
        }
        Comparison c;
        c.i = seq[0].cast<std::size_t>();
        c.j = seq[1].cast<std::size_t>();
        c.label = seq[2].cast<int>();
        c.multiplicity = seq.size() == 4 ? seq[3].cast<std::uint64_t>() : 1;
        out.push_back(c);
    }
    return out;
}

std::vector<std::size_t> order_of(const Ranking& r) {
    return {r.order().begin(), r.order().end()};
}

py::object json_to_py(const nlohmann::json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

nlohmann::json py_to_json(const py::object& obj) {
    return nlohmann::json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

}  // namespace

PYBIND11_MODULE(_pdrank, m) {
    m.doc() = "Ranking from noisy pairwise comparisons";

    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_ArithmeticError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

    py::class_<Comparison>(m, "Comparison")
        .def(py::init([](std::size_t i, std::size_t j, int label, std::uint64_t count) {
                 return Comparison{i, j, label, count};
             }),
             py::arg("i"), py::arg("j"), py::arg("label"), py::arg("count") = 1)
        .def_readonly("i", &Comparison::i)
        .def_readonly("j", &Comparison::j)
        .def_readonly("label", &Comparison::label)
        .def_readonly("count", &Comparison::multiplicity)
        .def("__eq__", [](const Comparison& a, const Comparison& b) { return a == b; })
        .def("__repr__", [](const Comparison& c) {
            return "Comparison(" + std::to_string(c.i) + ", " + std::to_string(c.j) + ", " +
                   std::to_string(c.label) + ", " + std::to_string(c.multiplicity) + ")";
        });

    py::class_<ComparisonDataset>(m, "ComparisonDataset")
        .def_static(
            "from_entries",
            [](std::size_t num_items, const py::iterable& rows) {
                return ComparisonDataset::from_entries(num_items, comparisons_from(rows));
            },
            py::arg("num_items"), py::arg("entries"), "Entries kept as given, duplicates included.")
        .def_static(
            "compressed",
            [](std::size_t num_items, const py::iterable& rows) {
                const auto entries = comparisons_from(rows);
                return compress(num_items, std::span<const Comparison>(entries));
            },
            py::arg("num_items"), py::arg("entries"),
            "Merges coherent judgments of each pair into one counted entry.")
        .def_property_readonly("num_items", &ComparisonDataset::num_items)
        .def_property_readonly("total_count", &ComparisonDataset::total_multiplicity)
        .def_property_readonly(
            "entries",
            [](const ComparisonDataset& d) { return std::vector<Comparison>(d.entries().begin(), d.entries().end()); })
        .def("__len__", &ComparisonDataset::size)
        .def("__eq__", [](const ComparisonDataset& a, const ComparisonDataset& b) { return a == b; });

    py::class_<LabeledDataset>(m, "LabeledDataset")
        .def_property_readonly("items", [](const LabeledDataset& d) { return d.items.names(); })
        .def_readonly("data", &LabeledDataset::data);

    m.def(
        "read_comparisons_csv",
        [](const std::filesystem::path& path) { return read_comparisons_csv(path); }, py::arg("path"),
        "Reads item_i,item_j,label[,count] CSV; item names are interned in order of appearance.");

    py::class_<PdhgOptions>(m, "PdhgOptions")
        .def(py::init<>())
        .def_readwrite("relaxation", &PdhgOptions::lambda)
        .def_readwrite("eps_in", &PdhgOptions::eps_in)
        .def_readwrite("max_iters", &PdhgOptions::max_iters)
        .def_readwrite("step_scale", &PdhgOptions::step_scale)
        .def_readwrite("norm_inflation", &PdhgOptions::norm_inflation);

    py::class_<PDRankConfig>(m, "PDRankConfig")
        .def(py::init<>())
        .def_readwrite("epsilon", &PDRankConfig::epsilon)
        .def_readwrite("gamma", &PDRankConfig::gamma)
        .def_readwrite("max_outer_iters", &PDRankConfig::max_outer_iters)
        .def_readwrite("stab_tol", &PDRankConfig::stab_tol)
        .def_readwrite("band_lo", &PDRankConfig::band_lo)
        .def_readwrite("band_hi", &PDRankConfig::band_hi)
        .def_readwrite("inner", &PDRankConfig::inner)
        .def_readwrite("keep_weight_history", &PDRankConfig::keep_weight_history)
        .def_readwrite("warm_start", &PDRankConfig::warm_start);

    py::class_<PDRankResult>(m, "PDRankResult")
        .def_readonly("scores", &PDRankResult::scores)
        .def_property_readonly("ranking", [](const PDRankResult& r) { return order_of(r.ranking); })
        .def_readonly("confidence", &PDRankResult::confidence)
        .def_readonly("outer_iters", &PDRankResult::outer_iters)
        .def_readonly("inner_iters", &PDRankResult::inner_iters)
        .def_readonly("wall_time_s", &PDRankResult::wall_time_s)
        .def_readonly("outer_converged", &PDRankResult::outer_converged)
        .def_readonly("weight_history", &PDRankResult::weight_history)
        .def_readonly("surrogate_costs", &PDRankResult::surrogate_costs);

    m.def(
        "pd_rank", [](const ComparisonDataset& d, const PDRankConfig& cfg) { return pd_rank(d, cfg); },
        py::arg("dataset"), py::arg("config") = PDRankConfig{}, py::call_guard<py::gil_scoped_release>());

    m.def(
        "confidence_report",
        [](const PDRankResult& result, const ComparisonDataset& d, std::optional<std::vector<double>> truth,
           std::optional<std::vector<std::string>> items) {
            std::optional<std::span<const double>> truth_span;
            if (truth) {
                truth_span = std::span<const double>(*truth);
            }
            const auto report = confidence_report(result, d, truth_span);
            const auto index = items ? ItemIndex(*items) : ItemIndex::numbered(d.num_items());
            return json_to_py(confidence_to_json(report, index));
        },
        py::arg("result"), py::arg("dataset"), py::arg("true_scores") = py::none(), py::arg("items") = py::none(),
        "Per-entry final weights as the documented JSON object.");

    m.def(
        "borda",
        [](const ComparisonDataset& d) {
            const auto r = borda(d);
            return py::make_tuple(r.scores, order_of(r.ranking));
        },
        py::arg("dataset"), "Returns (scores, ranking).");

    m.def(
        "bt_fit",
        [](const ComparisonDataset& d, double pseudo_count) {
            BTOptions options;
            options.pseudo_count = pseudo_count;
            const auto r = bt_fit(d, options);
            py::dict out;
            out["strengths"] = r.strengths;
            out["ranking"] = order_of(r.ranking);
            out["iterations"] = r.iterations;
            out["converged"] = r.converged;
            out["regularized"] = r.regularized;
            return out;
        },
        py::arg("dataset"), py::arg("pseudo_count") = BTOptions{}.pseudo_count);

    m.def(
        "brute_force_01",
        [](const ComparisonDataset& d) {
            const auto r = brute_force_01(d);
            return py::make_tuple(order_of(r.ranking), r.cost);
        },
        py::arg("dataset"), "Returns (ranking, cost) of the exact 0-1 loss minimiser; at most 8 items.");

    m.def(
        "zero_one_cost",
        [](const std::vector<std::size_t>& ranking, const ComparisonDataset& d) {
            return zero_one_cost(Ranking(ranking), d);
        },
        py::arg("ranking"), py::arg("dataset"));

    m.def(
        "kendall_tau",
        [](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
            return kendall_tau(Ranking(a), Ranking(b));
        },
        py::arg("a"), py::arg("b"), "Rankings are permutations listing items best first.");

    m.def(
        "label_accuracy",
        [](const std::vector<double>& scores, const ComparisonDataset& d, const std::vector<double>& truth) {
            return label_accuracy(scores, d, truth);
        },
        py::arg("scores"), py::arg("dataset"), py::arg("true_scores"));

    m.def(
        "scores_to_ranking", [](const std::vector<double>& scores) { return order_of(scores_to_ranking(scores)); },
        py::arg("scores"));

    m.def(
        "generate_toggle",
        [](std::size_t num_items, double delta, double standard_trials, std::uint64_t seed) {
            ToggleNoiseConfig cfg;
            cfg.num_items = num_items;
            cfg.delta = delta;
            cfg.standard_trials = standard_trials;
            cfg.seed = seed;
            auto s = generate_toggle(cfg);
            return py::make_tuple(std::move(s.data), std::move(s.truth.true_scores), s.flipped);
        },
        py::arg("num_items"), py::arg("delta"), py::arg("standard_trials"), py::arg("seed"),
        "Toggle-noise data; returns (dataset, true_scores, flipped).");

    m.def(
        "generate_bt",
        [](std::size_t num_items, double score_low, double score_high, double standard_trials, std::uint64_t seed) {
            BTGenConfig cfg;
            cfg.num_items = num_items;
            cfg.score_low = score_low;
            cfg.score_high = score_high;
            cfg.standard_trials = standard_trials;
            cfg.seed = seed;
            auto s = generate_bt(cfg);
            return py::make_tuple(std::move(s.data), std::move(s.truth.true_scores), s.flipped);
        },
        py::arg("num_items"), py::arg("score_low"), py::arg("score_high"), py::arg("standard_trials"),
        py::arg("seed"), "Bradley-Terry data; returns (dataset, true_scores, flipped).");

    m.def(
        "run_experiment",
        [](const py::dict& spec) {
            const auto parsed = spec_from_json(py_to_json(spec));
            ExperimentResult result;
            {
                py::gil_scoped_release release;
                result = run_experiment(parsed);
            }
            return json_to_py(result_to_json(result));
        },
        py::arg("spec"), "Runs an experiment spec given as a dict; returns the result JSON as a dict.");

    m.def(
        "spec_hash", [](const py::dict& spec) { return spec_hash(spec_from_json(py_to_json(spec))); },
        py::arg("spec"));
}
