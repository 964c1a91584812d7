#ifndef FFP_EXPERIMENT_HPP
#define FFP_EXPERIMENT_HPP

// Experiment drivers: batch classification, fingerprint-size sweeps, multi-seed
// runs and FFP-vs-baseline disagreement extraction.

#include <cstdint>
#include <future>
#include <iomanip>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "dataset.hpp"
#include "error.hpp"
#include "format.hpp"
#include "library.hpp"
#include "metrics.hpp"
#include "synthetic.hpp"

namespace ffp {

struct ScoredPrediction {
    std::string id;
    ClassificationResult result;
};

inline std::vector<ScoredPrediction> classify_all(const LabeledDataset& ds, const FingerprintLibrary& lib) {
    std::vector<ScoredPrediction> out;
    out.reserve(ds.size());
    for (const auto& inst : ds.instances()) {
        out.push_back({inst.id, classify(inst.vector, lib)});
    }
    return out;
}

inline std::vector<Prediction> labels_of(std::span<const ScoredPrediction> scored) {
    std::vector<Prediction> out;
    out.reserve(scored.size());
    for (const auto& s : scored) {
        out.push_back({s.id, s.result.predicted});
    }
    return out;
}

/// Build on `train`, classify `test`, evaluate against `test` labels.
inline EvaluationReport train_and_evaluate(const LabeledDataset& train, const LabeledDataset& test,
                                           std::size_t k, double slope, NormRule norm) {
    auto lib = build_library(train, k, slope, norm);
    auto predictions = labels_of(classify_all(test, lib));
    return evaluate(predictions, test);
}

struct SweepRow {
    std::size_t k = 0;
    double macro_f1 = 0.0;
};

struct SweepTable {
    std::vector<SweepRow> rows; // in the order the k values were given
    std::size_t best_k = 0;

    double best_macro_f1() const {
        for (const auto& r : rows) {
            if (r.k == best_k) {
                return r.macro_f1;
            }
        }
        return 0.0;
    }

    nlohmann::json to_json() const {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : rows) {
            arr.push_back({{"k", r.k}, {"macro_f1", r.macro_f1}});
        }
        return {{"rows", std::move(arr)}, {"best_k", best_k}, {"best_macro_f1", best_macro_f1()}};
    }

    /// (K, F1) table with F1 in percent, best k marked with '*'.
    std::string render_text() const {
        std::ostringstream out;
        out << std::setw(8) << "K" << std::setw(10) << "F1" << '\n';
        for (const auto& r : rows) {
            out << std::setw(8) << r.k << std::setw(10) << format_fixed(100.0 * r.macro_f1, 2)
                << (r.k == best_k ? " *" : "") << '\n';
        }
        return out.str();
    }
};

/// Best k maximizes macro-F1; ties go to the smallest k.
inline std::size_t pick_best_k(std::span<const SweepRow> rows) {
    const SweepRow* best = nullptr;
    for (const auto& r : rows) {
        if (!best || r.macro_f1 > best->macro_f1 || (r.macro_f1 == best->macro_f1 && r.k < best->k)) {
            best = &r;
        }
    }
    return best ? best->k : 0;
}

/// One library per k on `train`, scored by macro-F1 on `validation`. The k values
/// run concurrently; rows keep the input order.
inline SweepTable sweep_k(const LabeledDataset& train, const LabeledDataset& validation,
                          std::span<const std::size_t> k_values, double slope,
                          NormRule norm = NormRule::fingerprint_size()) {
    if (k_values.empty()) {
        throw Error(ErrorKind::config, "k sweep needs at least one k value");
    }
    for (auto k : k_values) {
        if (k < 1) {
            throw Error(ErrorKind::config, "k values must be >= 1");
        }
    }
    std::vector<std::future<double>> jobs;
    jobs.reserve(k_values.size());
    for (auto k : k_values) {
        jobs.push_back(std::async(std::launch::async, [&train, &validation, k, slope, norm] {
            return train_and_evaluate(train, validation, k, slope, norm).macro_f1;
        }));
    }
    SweepTable table;
    for (std::size_t i = 0; i < k_values.size(); ++i) {
        table.rows.push_back({k_values[i], jobs[i].get()});
    }
    table.best_k = pick_best_k(table.rows);
    return table;
}

struct SeedSummary {
    std::vector<std::pair<std::uint64_t, double>> per_seed;
    double mean = 0.0;

    double variance() const {
        if (per_seed.empty()) {
            return 0.0;
        }
        double acc = 0.0;
        for (const auto& [seed, score] : per_seed) {
            acc += (score - mean) * (score - mean);
        }
        return acc / static_cast<double>(per_seed.size());
    }
};

/// Runs `experiment(seed) -> macro-F1` for every seed and averages the scores.
template <typename Experiment>
SeedSummary run_seeds(std::span<const std::uint64_t> seeds, Experiment&& experiment) {
    if (seeds.empty()) {
        throw Error(ErrorKind::config, "at least one seed is required");
    }
    SeedSummary summary;
    for (auto seed : seeds) {
        summary.per_seed.emplace_back(seed, static_cast<double>(experiment(seed)));
    }
    for (const auto& [seed, score] : summary.per_seed) {
        summary.mean += score;
    }
    summary.mean /= static_cast<double>(summary.per_seed.size());
    return summary;
}

/// Seed offset between the train and test draws of a synthetic run.
inline constexpr std::uint64_t test_seed_offset = 1'000'003;

/// Synthetic train/test pair per seed: train uses `seed`, test uses `seed + test_seed_offset`.
inline SeedSummary run_seeds(const SyntheticSpec& train_spec, const SyntheticSpec& test_spec,
                             std::span<const std::uint64_t> seeds, std::size_t k, double slope,
                             NormRule norm = NormRule::fingerprint_size()) {
    return run_seeds(seeds, [&](std::uint64_t seed) {
        auto train = train_spec;
        auto test = test_spec;
        train.seed = seed;
        test.seed = seed + test_seed_offset;
        test.id_prefix = train.id_prefix + "t";
        return train_and_evaluate(generate_synthetic(train), generate_synthetic(test), k, slope, norm).macro_f1;
    });
}

struct Disagreement {
    std::string id;
    std::string gold_label;
    std::string ffp_label;
    std::string baseline_label;
    std::vector<ClassScore> ffp_scores;
};

struct DisagreementSet {
    std::vector<Disagreement> items;

    bool empty() const noexcept { return items.empty(); }
    std::size_t size() const noexcept { return items.size(); }

    nlohmann::json to_json() const {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& d : items) {
            nlohmann::json order = nlohmann::json::array();
            for (const auto& s : d.ffp_scores) {
                order.push_back({s.label, s.score});
            }
            arr.push_back({{"id", d.id},
                           {"gold", d.gold_label},
                           {"ffp", d.ffp_label},
                           {"baseline", d.baseline_label},
                           {"ffp_scores", std::move(order)}});
        }
        return {{"count", items.size()}, {"items", std::move(arr)}};
    }

    std::string render_text() const {
        std::ostringstream out;
        out << items.size() << " disagreement(s)\n";
        for (const auto& d : items) {
            out << d.id << "  gold=" << d.gold_label << "  ffp=" << d.ffp_label
                << "  baseline=" << d.baseline_label << "  |";
            for (const auto& s : d.ffp_scores) {
                out << ' ' << s.label << '=' << format_fixed(s.score, 2);
            }
            out << '\n';
        }
        return out.str();
    }
};

/// Instances of `ds` (in dataset order) where the two classifiers disagree. Both
/// prediction sets must cover exactly the dataset ids.
inline DisagreementSet diff_baseline(std::span<const ScoredPrediction> ffp,
                                     std::span<const Prediction> baseline, const LabeledDataset& ds) {
    auto index = [&](auto span, const char* what) {
        std::unordered_map<std::string, std::size_t> by_id;
        for (std::size_t i = 0; i < span.size(); ++i) {
            const auto& id = span[i].id;
            if (!ds.has_id(id)) {
                throw Error(ErrorKind::config, std::string(what) + " prediction for unknown id '" + id + "'");
            }
            if (!by_id.emplace(id, i).second) {
                throw Error(ErrorKind::config, std::string("duplicate ") + what + " prediction for id '" + id + "'");
            }
        }
        if (by_id.size() != ds.size()) {
            throw Error(ErrorKind::config, std::string(what) + " predictions do not cover the dataset");
        }
        return by_id;
    };
    auto ffp_index = index(ffp, "FFP");
    auto base_index = index(baseline, "baseline");

    DisagreementSet set;
    for (const auto& inst : ds.instances()) {
        const auto& f = ffp[ffp_index.at(inst.id)];
        const auto& b = baseline[base_index.at(inst.id)];
        if (f.result.predicted != b.label) {
            set.items.push_back({inst.id, inst.label, f.result.predicted, b.label, f.result.scores});
        }
    }
    return set;
}

} // namespace ffp

#endif
