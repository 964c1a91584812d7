#ifndef FFP_EXPLAIN_HPP
#define FFP_EXPLAIN_HPP

// Human-readable views of fingerprints and decisions.
//
// Display text rounds memberships and scores to two decimals; plot data and the
// JSON outputs keep full precision.

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "error.hpp"
#include "experiment.hpp"
#include "fingerprint.hpp"
#include "format.hpp"
#include "library.hpp"

namespace ffp {

enum class FingerprintStyle { ranked, dense };

/// Ranked: `{(8,1),(679,0.89),...}` best rank first. Dense: one `index membership`
/// line per feature, 0 for features outside the fingerprint.
inline std::string render_fingerprint(const ClassFingerprint& fp, FingerprintStyle style = FingerprintStyle::ranked) {
    std::ostringstream out;
    if (style == FingerprintStyle::ranked) {
        out << '{';
        bool first = true;
        for (const auto& e : fp.ranked()) {
            out << (first ? "" : ",") << '(' << e.feature << ',' << format_rounded(e.membership, 2) << ')';
            first = false;
        }
        out << '}';
        return out.str();
    }
    auto entries = fp.entries();
    std::size_t next = 0;
    for (std::size_t i = 0; i < fp.dim(); ++i) {
        double m = 0.0;
        if (next < entries.size() && entries[next].feature == i) {
            m = entries[next++].membership;
        }
        out << i << ' ' << format_shortest(m) << '\n';
    }
    return out.str();
}

/// Inverse of the ranked rendering: (feature, membership) pairs in printed order.
inline std::vector<Entry> parse_ranked(std::string_view text) {
    text = trim(text);
    if (text.size() < 2 || text.front() != '{' || text.back() != '}') {
        throw Error(ErrorKind::parse, "ranked fingerprint must be enclosed in braces");
    }
    text = text.substr(1, text.size() - 2);
    std::vector<Entry> out;
    while (!trim(text).empty()) {
        text = trim(text);
        if (text.front() == ',') {
            text.remove_prefix(1);
            continue;
        }
        auto close = text.find(')');
        if (text.front() != '(' || close == std::string_view::npos) {
            throw Error(ErrorKind::parse, "malformed (feature,membership) pair");
        }
        auto pair = split(text.substr(1, close - 1), ',');
        auto feature = pair.size() == 2 ? parse_size(trim(pair[0])) : std::nullopt;
        auto membership = pair.size() == 2 ? parse_double(trim(pair[1])) : std::nullopt;
        if (!feature || !membership) {
            throw Error(ErrorKind::parse, "malformed (feature,membership) pair");
        }
        out.push_back({*feature, *membership});
        text.remove_prefix(close + 1);
    }
    return out;
}

struct SharedCell {
    std::size_t feature = 0;
    double instance_membership = 0.0;
    double class_membership = 0.0;
    double min = 0.0;
};

struct IntersectionReport {
    std::string instance_id;
    std::string class_label;
    std::vector<SharedCell> shared; // ascending feature index
    double norm = 1.0;
    double score_contribution = 0.0;

    nlohmann::json to_json() const {
        nlohmann::json cells = nlohmann::json::array();
        for (const auto& c : shared) {
            cells.push_back({{"feature", c.feature},
                             {"instance", c.instance_membership},
                             {"class", c.class_membership},
                             {"min", c.min}});
        }
        return {{"instance", instance_id}, {"class", class_label}, {"norm", norm},
                {"score", score_contribution}, {"shared", std::move(cells)}};
    }

    std::string render_text() const {
        std::ostringstream out;
        out << instance_id << " vs " << class_label << ": " << shared.size() << " shared feature(s), score "
            << format_rounded(score_contribution, 2) << '\n';
        for (const auto& c : shared) {
            out << "  " << c.feature << "  min(" << format_rounded(c.instance_membership, 2) << ", "
                << format_rounded(c.class_membership, 2) << ") = " << format_rounded(c.min, 2) << '\n';
        }
        return out.str();
    }
};

/// Features present in both fingerprints with their memberships and minimum.
inline IntersectionReport intersect(const ClassFingerprint& instance, const ClassFingerprint& cls, double norm) {
    IntersectionReport report;
    report.instance_id = instance.label();
    report.class_label = cls.label();
    report.norm = norm;
    // similarity() validates dim and norm and is the reference value for the sum
    report.score_contribution = similarity(instance, cls, norm);
    auto a = instance.entries();
    auto b = cls.entries();
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].feature < b[j].feature) {
            ++i;
        } else if (b[j].feature < a[i].feature) {
            ++j;
        } else {
            report.shared.push_back({a[i].feature, a[i].membership, b[j].membership,
                                     std::min(a[i].membership, b[j].membership)});
            ++i;
            ++j;
        }
    }
    return report;
}

struct SharedFeature {
    std::size_t feature = 0;
    std::vector<std::string> classes; // library class order
};

struct SharedFeatureReport {
    std::vector<SharedFeature> features; // most classes first, then ascending feature

    nlohmann::json to_json() const {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& f : features) {
            arr.push_back({{"feature", f.feature}, {"classes", f.classes}});
        }
        return arr;
    }

    std::string render_text() const {
        std::ostringstream out;
        for (const auto& f : features) {
            out << f.feature << " in " << f.classes.size() << " fingerprints:";
            for (const auto& c : f.classes) {
                out << ' ' << c;
            }
            out << '\n';
        }
        return out.str();
    }
};

/// Features that appear in at least `min_classes` fingerprints of the library.
inline SharedFeatureReport shared_features(const FingerprintLibrary& lib, std::size_t min_classes) {
    if (min_classes < 2) {
        throw Error(ErrorKind::config, "shared features need min_classes >= 2");
    }
    std::map<std::size_t, std::vector<std::string>> owners;
    for (const auto& fp : lib.fingerprints()) {
        for (const auto& e : fp.entries()) {
            owners[e.feature].push_back(fp.label());
        }
    }
    SharedFeatureReport report;
    for (auto& [feature, classes] : owners) {
        if (classes.size() >= min_classes) {
            report.features.push_back({feature, std::move(classes)});
        }
    }
    std::stable_sort(report.features.begin(), report.features.end(),
                     [](const SharedFeature& lhs, const SharedFeature& rhs) {
                         return lhs.classes.size() > rhs.classes.size();
                     });
    return report;
}

/// One line of class similarities, e.g. `Neu=0.31 Ang=0.38* ...`; the predicted class is starred.
inline std::string render_scores(const ClassificationResult& result) {
    std::ostringstream out;
    bool first = true;
    for (const auto& s : result.scores) {
        out << (first ? "" : " ") << s.label << '=' << format_rounded(s.score, 2)
            << (s.label == result.predicted ? "*" : "");
        first = false;
    }
    if (result.tied) {
        out << " (tie)";
    }
    return out.str();
}

/// Case-study block: instance fingerprint, its class similarities and the decision.
inline std::string render_case(const std::string& id, const ClassFingerprint& instance_fp,
                               const ClassificationResult& result) {
    std::ostringstream out;
    out << "Instance: " << id << '\n';
    out << "FFP: " << render_fingerprint(instance_fp) << '\n';
    out << "Similarity: " << render_scores(result) << '\n';
    out << "Predicted: " << result.predicted << '\n';
    for (const auto& w : result.warnings) {
        out << "Warning: " << w << '\n';
    }
    return out.str();
}

// Plot data: two numeric columns `x y` per line.

inline std::string plot_data(const ClassFingerprint& fp) { return render_fingerprint(fp, FingerprintStyle::dense); }

inline std::string plot_data(const IntersectionReport& report) {
    std::ostringstream out;
    for (const auto& c : report.shared) {
        out << c.feature << ' ' << format_shortest(c.min) << '\n';
    }
    return out.str();
}

/// K against macro-F1 in percent with two decimals, as in the usual sweep figure.
inline std::string plot_data(const SweepTable& table) {
    std::ostringstream out;
    for (const auto& r : table.rows) {
        out << r.k << ' ' << format_fixed(100.0 * r.macro_f1, 2) << '\n';
    }
    return out.str();
}

template <typename Plottable>
void emit_plot_data(const Plottable& object, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::io, "cannot write plot data '" + path + "'");
    }
    out << plot_data(object);
    if (!out) {
        throw Error(ErrorKind::io, "failed writing plot data '" + path + "'");
    }
}

} // namespace ffp

#endif
