// ffp: command-line front end for building fuzzy fingerprint libraries,
// classifying, evaluating, sweeping k, explaining and diffing against a baseline.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "CLI11.hpp"

#include <ffp/ffp.hpp>

namespace {

using ffp::Error;
using ffp::ErrorKind;

std::vector<std::string> parse_list(const std::string& text) {
    std::vector<std::string> out;
    if (ffp::trim(text).empty()) {
        return out;
    }
    for (auto part : ffp::split(text, ',')) {
        out.emplace_back(ffp::trim(part));
    }
    return out;
}

std::vector<std::size_t> parse_k_list(const std::string& text) {
    std::vector<std::size_t> out;
    for (const auto& item : parse_list(text)) {
        auto k = ffp::parse_size(item);
        if (!k || *k == 0) {
            throw Error(ErrorKind::config, "invalid k value '" + item + "'");
        }
        out.push_back(*k);
    }
    if (out.empty()) {
        throw Error(ErrorKind::config, "empty k list");
    }
    return out;
}

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& item : parse_list(text)) {
        auto v = ffp::parse_double(item);
        if (!v) {
            throw Error(ErrorKind::config, "invalid number '" + item + "'");
        }
        out.push_back(*v);
    }
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::io, "cannot write '" + path + "'");
    }
    out << text;
    if (!out) {
        throw Error(ErrorKind::io, "failed writing '" + path + "'");
    }
}

void write_json(const std::string& path, const nlohmann::json& doc) { write_text(path, doc.dump(2) + "\n"); }

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) {
        std::cerr << "warning: " << w << '\n';
    }
}

struct Options {
    std::string train, validation, dataset, library, predictions, baseline, baseline_train, ffp_predictions;
    std::string out, scores_out, plot_out, conversations, vocab_in, vocab_out;
    std::string classes, k_list = "1,5,10,25,50,100,150,200,300,400,600,700", norm = "k";
    std::string class_label, instance_id, weights, means = "one-hot";
    std::size_t k = 0, dim = 0, total = 0, shared = 0, majority = 0;
    double a = ffp::default_slope, noise = 0.0, level = 1.0, height = 1.0;
    std::uint64_t seed = 0, means_seed = 0;
    bool dense = false;
};

int cmd_build(const Options& o) {
    auto train = ffp::read_dataset(o.train);
    if (o.k >= train.dim()) {
        std::cerr << "warning: k=" << o.k << " >= dim=" << train.dim() << "; fingerprints keep all "
                  << train.dim() << " features\n";
    }
    auto lib = ffp::build_library(train, o.k, o.a, ffp::NormRule::parse(o.norm), parse_list(o.classes));
    ffp::save_library(lib, o.out);
    std::cout << "built " << lib.size() << " fingerprints (dim=" << lib.dim() << ", k=" << lib.k()
              << ", a=" << ffp::format_shortest(lib.slope()) << ", N=" << ffp::format_shortest(lib.norm())
              << ") -> " << o.out << '\n';
    return 0;
}

int cmd_classify(const Options& o) {
    auto lib = ffp::load_library(o.library);
    auto ds = ffp::read_dataset(o.dataset);
    auto scored = ffp::classify_all(ds, lib);
    ffp::write_predictions(ffp::labels_of(scored), o.out);
    if (!o.scores_out.empty()) {
        std::ostringstream out;
        out << "id,predicted,tied";
        for (const auto& label : lib.class_order()) {
            out << ',' << label;
        }
        out << '\n';
        for (const auto& s : scored) {
            out << s.id << ',' << s.result.predicted << ',' << (s.result.tied ? 1 : 0);
            for (const auto& c : s.result.scores) {
                out << ',' << ffp::format_shortest(c.score);
            }
            out << '\n';
        }
        write_text(o.scores_out, out.str());
    }
    std::size_t warned = 0;
    for (const auto& s : scored) {
        warned += s.result.warnings.empty() ? 0 : 1;
    }
    if (warned) {
        std::cerr << "warning: " << warned << " instance(s) had all-zero vectors\n";
    }
    std::cout << "classified " << scored.size() << " instance(s) -> " << o.out << '\n';
    return 0;
}

int cmd_eval(const Options& o) {
    auto predictions = ffp::read_predictions(o.predictions);
    auto gold = ffp::read_dataset(o.dataset);
    auto report = ffp::evaluate(predictions, gold);
    if (!o.out.empty()) {
        write_json(o.out, report.to_json());
    }
    std::cout << report.render_text();
    return 0;
}

int cmd_sweep(const Options& o) {
    auto train = ffp::read_dataset(o.train);
    auto validation = ffp::read_dataset(o.validation);
    auto ks = parse_k_list(o.k_list);
    auto table = ffp::sweep_k(train, validation, ks, o.a, ffp::NormRule::parse(o.norm));
    if (!o.out.empty()) {
        write_json(o.out, table.to_json());
    }
    if (!o.plot_out.empty()) {
        ffp::emit_plot_data(table, o.plot_out);
    }
    std::cout << table.render_text() << "best k = " << table.best_k << '\n';
    return 0;
}

int cmd_diff(const Options& o) {
    auto lib = ffp::load_library(o.library);
    auto ds = ffp::read_dataset(o.dataset);
    auto scored = ffp::classify_all(ds, lib);
    if (!o.ffp_predictions.empty()) {
        auto given = ffp::read_predictions(o.ffp_predictions);
        std::unordered_map<std::string, std::string> labels;
        for (const auto& p : given) {
            labels[p.id] = p.label;
        }
        if (labels.size() != given.size()) {
            throw Error(ErrorKind::config, "duplicate ids in FFP predictions");
        }
        for (auto& s : scored) {
            auto it = labels.find(s.id);
            if (it == labels.end()) {
                throw Error(ErrorKind::config, "FFP predictions miss id '" + s.id + "'");
            }
            s.result.predicted = it->second;
        }
        if (given.size() != scored.size()) {
            throw Error(ErrorKind::config, "FFP predictions do not cover the dataset");
        }
    }
    std::vector<ffp::Prediction> baseline;
    if (!o.baseline.empty()) {
        baseline = ffp::read_predictions(o.baseline);
    } else {
        baseline = ffp::NearestCentroid::fit(ffp::read_dataset(o.baseline_train)).predict_all(ds);
    }
    auto set = ffp::diff_baseline(scored, baseline, ds);
    if (!o.out.empty()) {
        write_json(o.out, set.to_json());
    }
    std::cout << set.render_text();
    return 0;
}

int cmd_explain(const Options& o) {
    auto lib = ffp::load_library(o.library);
    nlohmann::json doc = nlohmann::json::object();

    if (o.shared > 0) {
        auto report = ffp::shared_features(lib, o.shared);
        std::cout << report.render_text();
        doc["shared"] = report.to_json();
    } else if (!o.instance_id.empty()) {
        if (o.dataset.empty()) {
            throw Error(ErrorKind::config, "--id needs --dataset");
        }
        auto ds = ffp::read_dataset(o.dataset);
        const ffp::Instance* inst = nullptr;
        for (const auto& i : ds.instances()) {
            if (i.id == o.instance_id) {
                inst = &i;
            }
        }
        if (!inst) {
            throw Error(ErrorKind::config, "no instance '" + o.instance_id + "' in " + o.dataset);
        }
        if (inst->vector.dim() != lib.dim()) {
            throw Error(ErrorKind::dimension, "instance dim does not match library dim");
        }
        auto fp = ffp::fingerprint_instance(inst->vector, lib.k(), lib.slope(), inst->id);
        auto result = ffp::classify(inst->vector, lib);
        std::cout << ffp::render_case(inst->id, fp, result);
        nlohmann::json inters = nlohmann::json::array();
        for (const auto& cls : lib.fingerprints()) {
            if (!o.class_label.empty() && cls.label() != o.class_label) {
                continue;
            }
            auto report = ffp::intersect(fp, cls, lib.norm());
            std::cout << report.render_text();
            inters.push_back(report.to_json());
            if (!o.plot_out.empty() && cls.label() == o.class_label) {
                ffp::emit_plot_data(report, o.plot_out);
            }
        }
        if (!o.plot_out.empty() && o.class_label.empty()) {
            ffp::emit_plot_data(fp, o.plot_out);
        }
        doc["instance"] = inst->id;
        doc["label"] = inst->label;
        doc["predicted"] = result.predicted;
        doc["tied"] = result.tied;
        doc["intersections"] = std::move(inters);
    } else {
        nlohmann::json fps = nlohmann::json::array();
        for (const auto& fp : lib.fingerprints()) {
            if (!o.class_label.empty() && fp.label() != o.class_label) {
                continue;
            }
            if (o.dense) {
                std::cout << "# " << fp.label() << '\n' << ffp::render_fingerprint(fp, ffp::FingerprintStyle::dense);
            } else {
                std::cout << fp.label() << ": " << ffp::render_fingerprint(fp) << '\n';
            }
            nlohmann::json entries = nlohmann::json::array();
            for (const auto& e : fp.ranked()) {
                entries.push_back({e.feature, e.membership});
            }
            fps.push_back({{"label", fp.label()}, {"entries", std::move(entries)}});
        }
        if (!o.plot_out.empty()) {
            if (o.class_label.empty()) {
                throw Error(ErrorKind::config, "--plot-out for a fingerprint needs --class");
            }
            ffp::emit_plot_data(lib.at(o.class_label), o.plot_out);
        }
        doc["fingerprints"] = std::move(fps);
    }
    if (!o.out.empty()) {
        write_json(o.out, doc);
    }
    return 0;
}

int cmd_generate(const Options& o) {
    auto labels = parse_list(o.classes);
    auto weights = parse_number_list(o.weights);
    if (labels.empty()) {
        if (weights.empty()) {
            throw Error(ErrorKind::config, "generate needs --classes or --weights");
        }
        labels = ffp::default_labels(weights.size());
    }
    if (weights.empty()) {
        weights.assign(labels.size(), 1.0);
    }
    if (weights.size() != labels.size()) {
        throw Error(ErrorKind::config, "--weights must give one weight per class");
    }
    ffp::SyntheticSpec spec;
    spec.labels = labels;
    spec.dim = o.dim;
    spec.noise = o.noise;
    spec.seed = o.seed;
    spec.counts = ffp::allocate_counts(o.total, weights);
    if (o.means == "one-hot") {
        spec.means = ffp::one_hot_block_means(labels.size(), o.dim, o.height);
    } else if (o.means == "diffuse") {
        spec.means = ffp::diffuse_majority_means(labels.size(), o.dim, o.majority, o.level, o.height);
    } else if (o.means == "random") {
        spec.means = ffp::random_means(labels.size(), o.dim, o.means_seed);
    } else {
        throw Error(ErrorKind::config, "unknown --means '" + o.means + "'");
    }
    auto ds = ffp::generate_synthetic(spec);
    ffp::write_dataset(ds, o.out);
    std::cout << "generated " << ds.size() << " instance(s):";
    auto counts = ds.class_counts();
    for (std::size_t c = 0; c < labels.size(); ++c) {
        std::cout << ' ' << labels[c] << '=' << counts[c];
    }
    std::cout << " -> " << o.out << '\n';
    return 0;
}

int cmd_vectorize(const Options& o) {
    auto docs = ffp::documents_from(ffp::read_conversations(o.conversations));
    std::optional<ffp::Vocabulary> vocab;
    if (!o.vocab_in.empty()) {
        std::ifstream in(o.vocab_in);
        if (!in) {
            throw Error(ErrorKind::io, "cannot open vocabulary '" + o.vocab_in + "'");
        }
        std::vector<std::string> tokens;
        for (std::string line; std::getline(in, line);) {
            if (!ffp::trim(line).empty()) {
                tokens.emplace_back(ffp::trim(line));
            }
        }
        vocab = ffp::Vocabulary(tokens);
    }
    auto corpus = ffp::vectorize_text(docs, std::move(vocab));
    print_warnings(corpus.warnings);
    ffp::write_dataset(corpus.dataset, o.out);
    if (!o.vocab_out.empty()) {
        std::ostringstream out;
        for (const auto& t : corpus.vocabulary.tokens()) {
            out << t << '\n';
        }
        write_text(o.vocab_out, out.str());
    }
    std::cout << "vectorized " << corpus.dataset.size() << " document(s), vocabulary " << corpus.vocabulary.size()
              << " -> " << o.out << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fuzzy fingerprint classification toolkit"};
    app.require_subcommand(1);
    Options o;

    auto* build = app.add_subcommand("build", "Build a fingerprint library from a training dataset");
    build->add_option("--train", o.train, "Training dataset")->required();
    build->add_option("--k", o.k, "Fingerprint size")->required()->check(CLI::PositiveNumber);
    build->add_option("--a", o.a, "Membership slope in [0,1]")->check(CLI::Range(0.0, 1.0));
    build->add_option("--norm", o.norm, "Normalization: 'k' or a positive number");
    build->add_option("--classes", o.classes, "Class order override (comma-separated)");
    build->add_option("--out", o.out, "Library file")->required();

    auto* classify = app.add_subcommand("classify", "Classify a dataset with a library");
    classify->add_option("--library", o.library, "Library file")->required();
    classify->add_option("--dataset", o.dataset, "Dataset to classify")->required();
    classify->add_option("--out", o.out, "Predictions file")->required();
    classify->add_option("--scores-out", o.scores_out, "Per-instance similarity scores (CSV)");

    auto* eval = app.add_subcommand("eval", "Evaluate predictions against a labeled dataset");
    eval->add_option("--predictions", o.predictions, "Predictions file")->required();
    eval->add_option("--dataset", o.dataset, "Gold dataset")->required();
    eval->add_option("--out", o.out, "Report (JSON)");

    auto* sweep = app.add_subcommand("sweep", "Macro-F1 on a validation set for a list of k values");
    sweep->add_option("--train", o.train, "Training dataset")->required();
    sweep->add_option("--validation", o.validation, "Validation dataset")->required();
    sweep->add_option("--k", o.k_list, "Comma-separated k values");
    sweep->add_option("--a", o.a, "Membership slope in [0,1]")->check(CLI::Range(0.0, 1.0));
    sweep->add_option("--norm", o.norm, "Normalization: 'k' or a positive number");
    sweep->add_option("--out", o.out, "Sweep table (JSON)");
    sweep->add_option("--plot-out", o.plot_out, "Plot data: 'k F1' per line");

    auto* diff = app.add_subcommand("diff", "Instances where FFP and a baseline disagree");
    diff->add_option("--library", o.library, "Library file")->required();
    diff->add_option("--dataset", o.dataset, "Dataset")->required();
    auto* base = diff->add_option("--baseline", o.baseline, "Baseline predictions file");
    auto* base_train = diff->add_option("--baseline-train", o.baseline_train,
                                        "Train the nearest-centroid baseline on this dataset");
    base->excludes(base_train);
    diff->add_option("--ffp", o.ffp_predictions, "FFP predictions file (default: classify with the library)");
    diff->add_option("--out", o.out, "Disagreement report (JSON)");

    auto* explain = app.add_subcommand("explain", "Render fingerprints, intersections and shared features");
    explain->add_option("--library", o.library, "Library file")->required();
    explain->add_option("--class", o.class_label, "Restrict to one class");
    explain->add_option("--dataset", o.dataset, "Dataset holding the instance to explain");
    explain->add_option("--id", o.instance_id, "Instance id to explain");
    explain->add_option("--shared", o.shared, "List features shared by at least this many classes");
    explain->add_flag("--dense", o.dense, "Dense 'index membership' rendering");
    explain->add_option("--plot-out", o.plot_out, "Plot data file");
    explain->add_option("--out", o.out, "Machine-readable output (JSON)");

    auto* generate = app.add_subcommand("generate", "Generate a synthetic labeled dataset");
    generate->add_option("--out", o.out, "Dataset file")->required();
    generate->add_option("--dim", o.dim, "Vector dimension")->required()->check(CLI::PositiveNumber);
    generate->add_option("--total", o.total, "Number of instances")->required()->check(CLI::PositiveNumber);
    generate->add_option("--classes", o.classes, "Class labels (comma-separated)");
    generate->add_option("--weights", o.weights, "Class proportions (comma-separated)");
    generate->add_option("--means", o.means, "one-hot | diffuse | random");
    generate->add_option("--majority", o.majority, "Majority class index for --means diffuse");
    generate->add_option("--level", o.level, "Flat level added to the majority mean");
    generate->add_option("--height", o.height, "Block height");
    generate->add_option("--noise", o.noise, "Uniform noise half-width")->check(CLI::NonNegativeNumber);
    generate->add_option("--seed", o.seed, "Random seed for sampling");
    generate->add_option("--means-seed", o.means_seed, "Random seed for --means random (keep equal across splits)");

    auto* vectorize = app.add_subcommand("vectorize", "Bag-of-words dataset from a conversation file");
    vectorize->add_option("--conversations", o.conversations, "Conversation file (JSON lines)")->required();
    vectorize->add_option("--vocab-in", o.vocab_in, "Fixed vocabulary, one token per line");
    vectorize->add_option("--vocab-out", o.vocab_out, "Write the vocabulary used");
    vectorize->add_option("--out", o.out, "Dataset file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : ffp::exit_code(ErrorKind::config);
    }

    try {
        if (*build) return cmd_build(o);
        if (*classify) return cmd_classify(o);
        if (*eval) return cmd_eval(o);
        if (*sweep) return cmd_sweep(o);
        if (*diff) {
            if (o.baseline.empty() && o.baseline_train.empty()) {
                throw Error(ErrorKind::config, "diff needs --baseline or --baseline-train");
            }
            return cmd_diff(o);
        }
        if (*explain) return cmd_explain(o);
        if (*generate) return cmd_generate(o);
        if (*vectorize) return cmd_vectorize(o);
    } catch (const Error& e) {
        std::cerr << "ffp: " << ffp::to_string(e.kind()) << ": " << e.what() << '\n';
        return ffp::exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "ffp: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
