#ifndef FFP_METRICS_HPP
#define FFP_METRICS_HPP

// Per-class and macro metrics. A class with no true and no predicted instances
// scores F1 = 0, and macro-F1 averages over every declared class.

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "dataset.hpp"
#include "error.hpp"
#include "format.hpp"

namespace ffp {

struct Prediction {
    std::string id;
    std::string label;

    friend bool operator==(const Prediction&, const Prediction&) = default;
};

/// `<id>,<label>` per line.
inline std::vector<Prediction> read_predictions(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::io, "cannot open predictions '" + path + "'");
    }
    std::vector<Prediction> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto view = trim(line);
        if (view.empty() || view.front() == '#') {
            continue;
        }
        auto fields = split(view, ',');
        if (fields.size() != 2 || trim(fields[0]).empty() || trim(fields[1]).empty()) {
            throw Error(ErrorKind::parse, path + ":" + std::to_string(line_no) + ": expected '<id>,<label>'");
        }
        out.push_back({std::string(trim(fields[0])), std::string(trim(fields[1]))});
    }
    return out;
}

inline void write_predictions(std::span<const Prediction> predictions, std::ostream& out) {
    for (const auto& p : predictions) {
        out << p.id << ',' << p.label << '\n';
    }
}

inline void write_predictions(std::span<const Prediction> predictions, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::io, "cannot write predictions '" + path + "'");
    }
    write_predictions(predictions, out);
}

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;
};

struct EvaluationReport {
    std::vector<std::string> classes;
    std::vector<ClassMetrics> per_class;
    std::vector<std::vector<std::size_t>> confusion; // [gold][predicted]
    double macro_f1 = 0.0;

    std::size_t total() const {
        std::size_t n = 0;
        for (const auto& row : confusion) {
            for (auto c : row) {
                n += c;
            }
        }
        return n;
    }

    double accuracy() const {
        const auto n = total();
        if (n == 0) {
            return 0.0;
        }
        std::size_t correct = 0;
        for (std::size_t c = 0; c < confusion.size(); ++c) {
            correct += confusion[c][c];
        }
        return static_cast<double>(correct) / static_cast<double>(n);
    }

    const ClassMetrics& of(const std::string& label) const {
        for (std::size_t c = 0; c < classes.size(); ++c) {
            if (classes[c] == label) {
                return per_class[c];
            }
        }
        throw Error(ErrorKind::config, "no metrics for class '" + label + "'");
    }

    nlohmann::json to_json() const {
        nlohmann::json per = nlohmann::json::array();
        for (std::size_t c = 0; c < classes.size(); ++c) {
            per.push_back({{"label", classes[c]},
                           {"precision", per_class[c].precision},
                           {"recall", per_class[c].recall},
                           {"f1", per_class[c].f1},
                           {"support", per_class[c].support}});
        }
        return {{"classes", classes},
                {"per_class", std::move(per)},
                {"macro_f1", macro_f1},
                {"accuracy", accuracy()},
                {"confusion", confusion}};
    }

    /// Per-class table in percent, one column per class.
    std::string render_text() const {
        std::ostringstream out;
        out << std::left << std::setw(12) << "metric";
        for (const auto& c : classes) {
            out << std::right << std::setw(10) << c;
        }
        out << '\n';
        auto row = [&](const char* name, auto get) {
            out << std::left << std::setw(12) << name;
            for (const auto& m : per_class) {
                out << std::right << std::setw(10) << format_fixed(100.0 * get(m), 2);
            }
            out << '\n';
        };
        row("precision", [](const ClassMetrics& m) { return m.precision; });
        row("recall", [](const ClassMetrics& m) { return m.recall; });
        row("F1", [](const ClassMetrics& m) { return m.f1; });
        out << std::left << std::setw(12) << "support";
        for (const auto& m : per_class) {
            out << std::right << std::setw(10) << m.support;
        }
        out << "\n\nmacro-F1 " << format_fixed(macro_f1, 3) << "  accuracy " << format_fixed(accuracy(), 3)
            << "  n=" << total() << '\n';
        return out.str();
    }
};

/// Builds the report from a confusion matrix indexed [gold][predicted].
inline EvaluationReport report_from_confusion(std::vector<std::string> classes,
                                              std::vector<std::vector<std::size_t>> confusion) {
    EvaluationReport report;
    const std::size_t n = classes.size();
    report.classes = std::move(classes);
    report.per_class.resize(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t row = 0;
        std::size_t col = 0;
        for (std::size_t o = 0; o < n; ++o) {
            row += confusion[c][o];
            col += confusion[o][c];
        }
        auto& m = report.per_class[c];
        const auto tp = static_cast<double>(confusion[c][c]);
        m.support = row;
        m.precision = col ? tp / static_cast<double>(col) : 0.0;
        m.recall = row ? tp / static_cast<double>(row) : 0.0;
        m.f1 = (m.precision + m.recall) > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
        report.macro_f1 += m.f1;
    }
    if (n > 0) {
        report.macro_f1 /= static_cast<double>(n);
    }
    report.confusion = std::move(confusion);
    return report;
}

/// Predictions must cover the ids of `gold` exactly once each.
inline EvaluationReport evaluate(std::span<const Prediction> predictions, const LabeledDataset& gold) {
    std::unordered_map<std::string, const Prediction*> by_id;
    for (const auto& p : predictions) {
        if (!gold.has_id(p.id)) {
            throw Error(ErrorKind::config, "prediction for unknown id '" + p.id + "'");
        }
        if (!by_id.emplace(p.id, &p).second) {
            throw Error(ErrorKind::config, "duplicate prediction for id '" + p.id + "'");
        }
        if (!gold.has_class(p.label)) {
            throw Error(ErrorKind::config, "prediction for '" + p.id + "' has unknown label '" + p.label + "'");
        }
    }
    const std::size_t n = gold.classes().size();
    std::vector<std::vector<std::size_t>> confusion(n, std::vector<std::size_t>(n, 0));
    for (const auto& inst : gold.instances()) {
        auto it = by_id.find(inst.id);
        if (it == by_id.end()) {
            throw Error(ErrorKind::config, "missing prediction for id '" + inst.id + "'");
        }
        ++confusion[gold.class_index(inst.label)][gold.class_index(it->second->label)];
    }
    return report_from_confusion(gold.classes(), std::move(confusion));
}

} // namespace ffp

#endif
